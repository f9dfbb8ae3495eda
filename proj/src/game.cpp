#include "dilemma/game.hpp"

#include "dilemma/rng.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace dilemma {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::CDN: return "CDN";
        case Variant::CDNPA: return "CDNPA";
        case Variant::CDNP: return "CDNP";
        case Variant::CDNP_HOMO: return "CDNP_HOMO";
    }
    return "?";
}

Variant variant_from_name(const std::string& name) {
    if (name == "CDN") return Variant::CDN;
    if (name == "CDNPA") return Variant::CDNPA;
    if (name == "CDNP") return Variant::CDNP;
    if (name == "CDNP_HOMO") return Variant::CDNP_HOMO;
    throw std::invalid_argument("unknown game variant: " + name);
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Contribute: return "C";
        case Strategy::Defect: return "D";
        case Strategy::Abstain: return "N";
        case Strategy::Punish: return "P";
        case Strategy::PunishAll: return "PA";
    }
    return "?";
}

Strategy GameSpec::strategy_at(int index) const {
    switch (index) {
        case kColC: return Strategy::Contribute;
        case kColD: return Strategy::Defect;
        case kColN: return Strategy::Abstain;
        case kColX:
            if (variant == Variant::CDNPA) return Strategy::PunishAll;
            if (variant == Variant::CDNP || variant == Variant::CDNP_HOMO)
                return Strategy::Punish;
            break;
    }
    throw std::invalid_argument("strategy index out of range for variant");
}

std::vector<Strategy> GameSpec::strategies() const {
    std::vector<Strategy> out;
    for (int a = 0; a < action_count(); ++a) out.push_back(strategy_at(a));
    return out;
}

void GameSpec::validate() const {
    if (n < 2) throw std::invalid_argument("GameSpec.n must be >= 2");
    if (b < 0.0) throw std::invalid_argument("GameSpec.b must be >= 0");
    if (c < 0.0) throw std::invalid_argument("GameSpec.c must be >= 0");
    if (sigma < 0.0) throw std::invalid_argument("GameSpec.sigma must be >= 0");
    if (p < 0.0) throw std::invalid_argument("GameSpec.p must be >= 0");
    if (k < 0.0) throw std::invalid_argument("GameSpec.k must be >= 0");
    if (alpha < 0.0) throw std::invalid_argument("GameSpec.alpha must be >= 0");
    if (lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("GameSpec.lambda must lie in [0,1]");
    if (!(std::isfinite(b) && std::isfinite(c) && std::isfinite(sigma) &&
          std::isfinite(p) && std::isfinite(k) && std::isfinite(alpha) &&
          std::isfinite(lambda)))
        throw std::invalid_argument("GameSpec parameters must be finite");
}

std::uint64_t GameSpec::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ULL;
    };
    auto mixd = [&](double d) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(d));
        std::memcpy(&bits, &d, sizeof(bits));
        mix(bits);
    };
    mix(static_cast<std::uint64_t>(variant));
    mix(static_cast<std::uint64_t>(n));
    mixd(b); mixd(c); mixd(sigma); mixd(p); mixd(k); mixd(alpha); mixd(lambda);
    return h;
}

PolicyProfile PolicyProfile::uniform(const GameSpec& spec) {
    const int a = spec.action_count();
    PolicyProfile out;
    out.theta = Eigen::MatrixXd::Constant(spec.n, a, 1.0 / a);
    return out;
}

PolicyProfile PolicyProfile::symmetric(const GameSpec& spec, const Eigen::VectorXd& row) {
    if (row.size() != spec.action_count())
        throw std::invalid_argument("symmetric row length does not match variant");
    PolicyProfile out;
    out.theta = row.transpose().replicate(spec.n, 1);
    out.validate(spec);
    return out;
}

PolicyProfile PolicyProfile::from_rows(const GameSpec& spec, Eigen::MatrixXd rows) {
    if (rows.rows() != spec.n || rows.cols() != spec.action_count())
        throw std::invalid_argument("policy matrix shape does not match spec");
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        const double s = rows.row(i).sum();
        if (s <= 0.0 || (rows.row(i).array() < 0.0).any())
            throw std::invalid_argument("policy rows must be nonnegative with positive mass");
        rows.row(i) /= s;
    }
    PolicyProfile out;
    out.theta = std::move(rows);
    return out;
}

bool PolicyProfile::is_symmetric(double tol) const {
    for (Eigen::Index i = 1; i < theta.rows(); ++i)
        if (((theta.row(i) - theta.row(0)).array().abs() > tol).any()) return false;
    return true;
}

void PolicyProfile::validate(const GameSpec& spec) const {
    if (theta.rows() != spec.n || theta.cols() != spec.action_count())
        throw std::invalid_argument("policy matrix shape does not match spec");
    for (Eigen::Index i = 0; i < theta.rows(); ++i) {
        if ((theta.row(i).array() < 0.0).any())
            throw std::invalid_argument("policy row has a negative entry");
        if (std::abs(theta.row(i).sum() - 1.0) > kRowSumTolerance)
            throw std::invalid_argument("policy row does not sum to 1 within 1e-12");
    }
}

void OutcomeCounts::validate(const GameSpec& spec) const {
    if (counts.size() != spec.action_count())
        throw std::invalid_argument("counts length does not match variant strategy set");
    if ((counts.array() < 0).any())
        throw std::invalid_argument("counts must be nonnegative");
    if (counts.sum() != spec.n)
        throw std::invalid_argument("counts must sum to n");
}

namespace {

// Shared reward core. Masses are either integer counts (total = n) or
// proportions (total = 1). The public-good share divides by the participant
// mass; punishment terms divide by the total mass.
Eigen::VectorXd reward_core(const GameSpec& spec, double mC, double mD, double mN,
                            double mX, double total) {
    const double participants = total - mN;
    const double contributors = mC + mX;
    const double share = participants > 0.0 ? spec.b * contributors / participants : 0.0;

    Eigen::VectorXd r(spec.action_count());
    switch (spec.variant) {
        case Variant::CDN:
            r[kColC] = share - spec.c;
            r[kColD] = share;
            r[kColN] = spec.sigma;
            break;
        case Variant::CDNPA:
            r[kColC] = share - spec.c - spec.alpha * spec.p * mX / total;
            r[kColD] = share - spec.p * mX / total;
            r[kColN] = spec.sigma;
            r[kColX] = share - spec.c - spec.k * mD / total -
                       spec.alpha * spec.k * mC / total;
            break;
        case Variant::CDNP:
        case Variant::CDNP_HOMO:
            r[kColC] = share - spec.c;
            r[kColD] = share - spec.p * mX / total;
            r[kColN] = spec.sigma;
            r[kColX] = share - spec.c - spec.k * mD / total;
            break;
    }
    return r;
}

}  // namespace

Eigen::VectorXd strategy_rewards(const GameSpec& spec, const OutcomeCounts& counts) {
    counts.validate(spec);
    const bool four = spec.has_punisher();
    return reward_core(spec, counts.counts[kColC], counts.counts[kColD],
                       counts.counts[kColN], four ? counts.counts[kColX] : 0.0,
                       static_cast<double>(spec.n));
}

Eigen::VectorXd strategy_rewards_mean_field(const GameSpec& spec,
                                            const Eigen::VectorXd& proportions) {
    if (proportions.size() != spec.action_count())
        throw std::invalid_argument("proportions length does not match variant");
    if ((proportions.array() < 0.0).any() ||
        std::abs(proportions.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("proportions must be a distribution");
    const bool four = spec.has_punisher();
    return reward_core(spec, proportions[kColC], proportions[kColD],
                       proportions[kColN], four ? proportions[kColX] : 0.0, 1.0);
}

SampledOutcome sample_outcome(const GameSpec& spec, const PolicyProfile& profile,
                              std::mt19937_64& rng) {
    profile.validate(spec);
    const int a = spec.action_count();
    SampledOutcome out;
    out.counts.counts = Eigen::VectorXi::Zero(a);
    out.strategy_of_agent.resize(spec.n);
    for (int i = 0; i < spec.n; ++i) {
        const double u = u01(rng);
        double acc = 0.0;
        int pick = a - 1;
        for (int s = 0; s < a; ++s) {
            acc += profile.theta(i, s);
            if (u < acc) {
                pick = s;
                break;
            }
        }
        out.strategy_of_agent[i] = pick;
        out.counts.counts[pick] += 1;
    }
    return out;
}

SampledOutcome sample_outcome(const GameSpec& spec, const PolicyProfile& profile,
                              std::uint64_t seed) {
    auto rng = make_rng(seed);
    return sample_outcome(spec, profile, rng);
}

double exact_value(const GameSpec& spec, const PolicyProfile& profile, int agent) {
    if (profile.theta.rows() != spec.n || profile.theta.cols() != spec.action_count())
        throw std::invalid_argument("policy matrix shape does not match spec");
    if (agent < 0 || agent >= spec.n) throw std::invalid_argument("agent index out of range");
    const int a = spec.action_count();
    const double joint = std::pow(static_cast<double>(a), spec.n);
    if (joint > static_cast<double>(1 << 24))
        throw std::invalid_argument("exact_value: instance too large to enumerate");

    // Odometer over joint strategies with incrementally maintained counts and
    // probability products.
    std::vector<int> action(spec.n, 0);
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(a);
    counts[0] = spec.n;
    std::vector<double> prefix(spec.n + 1, 1.0);
    for (int i = 0; i < spec.n; ++i) prefix[i + 1] = prefix[i] * profile.theta(i, 0);

    const bool four = spec.has_punisher();
    double value = 0.0;
    while (true) {
        const double prob = prefix[spec.n];
        if (prob != 0.0) {
            const Eigen::VectorXd r =
                reward_core(spec, counts[kColC], counts[kColD], counts[kColN],
                            four ? counts[kColX] : 0.0, static_cast<double>(spec.n));
            value += prob * r[action[agent]];
        }
        int i = spec.n - 1;
        while (i >= 0 && action[i] == a - 1) {
            counts[action[i]] -= 1;
            action[i] = 0;
            counts[0] += 1;
            --i;
        }
        if (i < 0) break;
        counts[action[i]] -= 1;
        action[i] += 1;
        counts[action[i]] += 1;
        for (int j = i; j < spec.n; ++j) prefix[j + 1] = prefix[j] * profile.theta(j, action[j]);
    }
    return value;
}

}  // namespace dilemma
