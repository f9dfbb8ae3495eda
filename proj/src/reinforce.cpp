#include "dilemma/reinforce.hpp"

#include "dilemma/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace dilemma {

void LearnerConfig::validate() const {
    if (!(learning_rate > 0.0))
        throw std::invalid_argument("LearnerConfig.learning_rate must be > 0");
    if (updates < 1) throw std::invalid_argument("LearnerConfig.updates must be >= 1");
    if (batch < 1) throw std::invalid_argument("LearnerConfig.batch must be >= 1");
    if (snapshot_interval < 1)
        throw std::invalid_argument("LearnerConfig.snapshot_interval must be >= 1");
    if (!(baseline_decay >= 0.0 && baseline_decay < 1.0))
        throw std::invalid_argument("LearnerConfig.baseline_decay must lie in [0,1)");
}

double cooperation_level(const GameSpec& spec, const PolicyProfile& profile) {
    profile.validate(spec);
    double mass = profile.theta.col(kColC).mean();
    if (spec.has_punisher()) mass += profile.theta.col(kColX).mean();
    return mass;
}

namespace {

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
    Eigen::MatrixXd out(logits.rows(), logits.cols());
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        const double m = logits.row(i).maxCoeff();
        Eigen::ArrayXd e = (logits.row(i).array() - m).exp();
        out.row(i) = (e / e.sum()).matrix();
    }
    return out;
}

}  // namespace

LearningRecord train_population(const GameSpec& spec, const LearnerConfig& cfg) {
    spec.validate();
    cfg.validate();
    const int n = spec.n;
    const int a = spec.action_count();

    Eigen::MatrixXd logits = Eigen::MatrixXd::Zero(n, a);
    if (cfg.start) {
        if (cfg.start->rows() != n || cfg.start->cols() != a)
            throw std::invalid_argument("LearnerConfig.start shape does not match spec");
        // Start profile realized through logits; zero probabilities clamp.
        logits = cfg.start->array().max(1e-12).log().matrix();
    }

    auto rng = make_rng(cfg.seed);
    // Conversion draws come from a separate derived stream so a CDNP_HOMO run
    // with lambda 0 is bitwise identical to the CDNP run of the same seed.
    auto conversion_rng = make_rng(derive_stream(cfg.seed, 0x686f6d6fULL));
    double baseline = 0.0;
    const bool homophily = spec.variant == Variant::CDNP_HOMO;

    LearningRecord record;
    record.trajectory.beta = cfg.learning_rate;
    record.trajectory.spec_hash = spec.hash();
    record.cooperation.reserve(cfg.updates);
    record.mean_reward.reserve(cfg.updates);

    Eigen::MatrixXd policy = softmax_rows(logits);
    record.trajectory.snapshots.push_back(policy);
    record.trajectory.steps.push_back(0);

    std::vector<int> actions(n);
    for (long update = 1; update <= cfg.updates; ++update) {
        policy = softmax_rows(logits);
        Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, a);
        double batch_reward = 0.0;
        for (int e = 0; e < cfg.batch; ++e) {
            Eigen::VectorXi counts = Eigen::VectorXi::Zero(a);
            for (int i = 0; i < n; ++i) {
                const double u = u01(rng);
                double acc = 0.0;
                int pick = a - 1;
                for (int s = 0; s < a; ++s) {
                    acc += policy(i, s);
                    if (u < acc) {
                        pick = s;
                        break;
                    }
                }
                actions[i] = pick;
                counts[pick] += 1;
            }
            OutcomeCounts oc;
            oc.counts = counts;
            const Eigen::VectorXd r = strategy_rewards(spec, oc);
            double step_reward = 0.0;
            for (int i = 0; i < n; ++i) {
                const double ri = r[actions[i]];
                step_reward += ri;
                const double adv =
                    cfg.baseline == LearnerConfig::Baseline::RunningMean ? ri - baseline : ri;
                grad.row(i) -= adv * policy.row(i);
                grad(i, actions[i]) += adv;
            }
            step_reward /= n;
            batch_reward += step_reward;
            if (cfg.baseline == LearnerConfig::Baseline::RunningMean)
                baseline = cfg.baseline_decay * baseline +
                           (1.0 - cfg.baseline_decay) * step_reward;
        }
        logits += cfg.learning_rate / cfg.batch * grad;

        if (homophily) {
            policy = softmax_rows(logits);
            const double majority = policy.col(kColX).sum() - policy.col(kColC).sum();
            if (majority != 0.0) {
                for (int i = 0; i < n; ++i) {
                    const double own = policy(i, kColX) - policy(i, kColC);
                    const bool minority_side = (majority > 0.0 && own < 0.0) ||
                                               (majority < 0.0 && own > 0.0);
                    if (minority_side && u01(conversion_rng) < spec.lambda)
                        std::swap(logits(i, kColC), logits(i, kColX));
                }
            }
        }

        policy = softmax_rows(logits);
        PolicyProfile snapshot;
        snapshot.theta = policy;
        record.cooperation.push_back(cooperation_level(spec, snapshot));
        record.mean_reward.push_back(batch_reward / cfg.batch);
        if (update % cfg.snapshot_interval == 0 || update == cfg.updates) {
            record.trajectory.snapshots.push_back(policy);
            record.trajectory.steps.push_back(update);
        }
    }
    return record;
}

}  // namespace dilemma
