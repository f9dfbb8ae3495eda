#include "dilemma/dynamics.hpp"

#include "dilemma/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace dilemma {

namespace {

// Shared threshold computation so the fixed-size hot path and the public
// projection produce bitwise-identical results.
double simplex_threshold(const double* sorted_desc, int d) {
    double cumulative = 0.0;
    double tau = 0.0;
    for (int j = 0; j < d; ++j) {
        cumulative += sorted_desc[j];
        const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
        if (sorted_desc[j] - candidate > 0.0) tau = candidate;
    }
    return tau;
}

void project_small(double* v, int d) {
    double sorted[4];
    std::copy(v, v + d, sorted);
    std::sort(sorted, sorted + d, std::greater<>());
    const double tau = simplex_threshold(sorted, d);
    for (int j = 0; j < d; ++j) v[j] = std::max(v[j] - tau, 0.0);
}

double contributing_mass(const GameSpec& spec, const double* row) {
    return row[kColC] + (spec.has_punisher() ? row[kColX] : 0.0);
}

double idle_mass(const GameSpec& spec, const double* row) {
    return row[kColD] + row[kColN];
}

// Strict-restoration probe at a converged cooperative-mass point: move eps
// of punisher mass onto C and require the punisher-vs-C rate gap to pull it
// back. CDN has no second-order strategy, so the mass rule stands alone.
bool restores_punishers(const SymmetricEvaluator& eval, const double* row, int d,
                        double probe_eps) {
    const GameSpec& spec = eval.spec();
    if (!spec.has_punisher()) return true;
    Eigen::VectorXd probed(d);
    for (int j = 0; j < d; ++j) probed[j] = row[j];
    const double eps = std::min(probe_eps, probed[kColX]);
    probed[kColX] -= eps;
    probed[kColC] += eps;
    const Eigen::VectorXd g = eval.rates(probed);
    return g[kColX] - g[kColC] > 1e-12;
}

BasinLabel classify_symmetric(const GameSpec& spec, const Eigen::VectorXd& start_row,
                              const FlowParams& params) {
    const SymmetricEvaluator eval(spec);
    const int d = spec.action_count();
    double row[4] = {0, 0, 0, 0};
    for (int j = 0; j < d; ++j) row[j] = start_row[j];

    Eigen::VectorXd row_vec(d);
    double anchor[4] = {0, 0, 0, 0};
    long anchor_step = -1;
    long anchor_interval = 1024;
    bool cycling = false;

    BasinLabel label;
    double step_norm = 0.0;
    long step = 0;
    for (; step < params.max_steps; ++step) {
        for (int j = 0; j < d; ++j) row_vec[j] = row[j];
        const Eigen::VectorXd g = eval.rates(row_vec);
        double next[4];
        for (int j = 0; j < d; ++j) next[j] = row[j] + params.beta * g[j];
        project_small(next, d);
        double sq = 0.0;
        for (int j = 0; j < d; ++j) {
            const double dd = next[j] - row[j];
            sq += dd * dd;
            row[j] = next[j];
        }
        step_norm = std::sqrt(sq);
        if (step_norm < params.tol) {
            ++step;
            break;
        }
        if (params.cycle_shortcut && contributing_mass(spec, row) <= params.mass_threshold &&
            step_norm > 10.0 * params.recurrence_radius) {
            if (anchor_step >= 0 && step - anchor_step >= 64) {
                double dist_sq = 0.0;
                for (int j = 0; j < d; ++j) {
                    const double dd = row[j] - anchor[j];
                    dist_sq += dd * dd;
                }
                if (dist_sq < params.recurrence_radius * params.recurrence_radius) {
                    cycling = true;
                    ++step;
                    break;
                }
            }
            if (anchor_step < 0 || step - anchor_step >= anchor_interval) {
                for (int j = 0; j < d; ++j) anchor[j] = row[j];
                anchor_step = step;
                anchor_interval = std::min(anchor_interval * 2, params.max_steps);
            }
        }
    }

    label.steps_used = step;
    label.final_step_norm = step_norm;
    label.final_point = Eigen::VectorXd(d);
    for (int j = 0; j < d; ++j) label.final_point[j] = row[j];
    const bool converged = step_norm < params.tol;
    label.budget_exhausted = !converged && !cycling;

    if (converged) {
        if (contributing_mass(spec, row) > params.mass_threshold) {
            if (restores_punishers(eval, row, d, params.probe_eps)) {
                label.outcome = BasinLabel::Outcome::Cooperative;
            } else {
                label.outcome = BasinLabel::Outcome::NonCooperative;
                label.probe_failed = true;
            }
        } else if (idle_mass(spec, row) > params.mass_threshold) {
            label.outcome = BasinLabel::Outcome::NonCooperative;
        } else {
            label.outcome = BasinLabel::Outcome::Undecided;
        }
    } else {
        // Cycling, or out of budget: non-cooperative when the orbit lives in
        // the oscillatory (low contributing mass) region.
        label.outcome = contributing_mass(spec, row) <= params.mass_threshold
                            ? BasinLabel::Outcome::NonCooperative
                            : BasinLabel::Outcome::Undecided;
    }
    return label;
}

BasinLabel classify_general(const GameSpec& spec, const PolicyProfile& start,
                            const FlowParams& params) {
    PolicyProfile current = start;
    BasinLabel label;
    double step_norm = 0.0;
    long step = 0;
    for (; step < params.max_steps; ++step) {
        PolicyProfile next = flow_step(spec, current, params.beta);
        step_norm = (next.theta - current.theta).norm();
        current = std::move(next);
        if (step_norm < params.tol) {
            ++step;
            break;
        }
    }
    const int d = spec.action_count();
    Eigen::VectorXd mean = current.theta.colwise().mean();
    label.steps_used = step;
    label.final_step_norm = step_norm;
    label.final_point = mean;
    const bool converged = step_norm < params.tol;
    label.budget_exhausted = !converged;

    const double contrib = contributing_mass(spec, mean.data());
    if (converged) {
        if (contrib > params.mass_threshold) {
            // Mean-field probe mirrors the symmetric classifier.
            const SymmetricEvaluator eval(spec);
            if (restores_punishers(eval, mean.data(), d, params.probe_eps)) {
                label.outcome = BasinLabel::Outcome::Cooperative;
            } else {
                label.outcome = BasinLabel::Outcome::NonCooperative;
                label.probe_failed = true;
            }
        } else if (idle_mass(spec, mean.data()) > params.mass_threshold) {
            label.outcome = BasinLabel::Outcome::NonCooperative;
        } else {
            label.outcome = BasinLabel::Outcome::Undecided;
        }
    } else {
        label.outcome = contrib <= params.mass_threshold
                            ? BasinLabel::Outcome::NonCooperative
                            : BasinLabel::Outcome::Undecided;
    }
    return label;
}

Eigen::VectorXd dirichlet_row(int d, std::mt19937_64& rng) {
    Eigen::VectorXd row(d);
    double sum = 0.0;
    for (int j = 0; j < d; ++j) {
        double u = u01(rng);
        while (u <= 0.0) u = u01(rng);
        row[j] = -std::log(u);
        sum += row[j];
    }
    row /= sum;
    return row;
}

}  // namespace

const char* basin_outcome_name(BasinLabel::Outcome o) {
    switch (o) {
        case BasinLabel::Outcome::Cooperative: return "cooperative";
        case BasinLabel::Outcome::NonCooperative: return "non_cooperative";
        case BasinLabel::Outcome::Undecided: return "undecided";
    }
    return "?";
}

Eigen::VectorXd Trajectory::population_point(std::size_t index) const {
    return snapshots.at(index).colwise().mean();
}

PolicyProfile flow_step(const GameSpec& spec, const PolicyProfile& profile, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("flow_step: beta must be positive");
    profile.validate(spec);
    PolicyProfile next = profile;
    for (int i = 0; i < spec.n; ++i) {
        const Eigen::VectorXd g = closed_form_gradient(spec, profile, i);
        next.theta.row(i) =
            project_to_simplex(profile.theta.row(i).transpose() + beta * g).transpose();
    }
    return next;
}

Trajectory integrate_flow(const GameSpec& spec, const PolicyProfile& start, double beta,
                          long steps, long thin) {
    if (steps < 1) throw std::invalid_argument("integrate_flow: steps must be >= 1");
    if (thin < 1) throw std::invalid_argument("integrate_flow: thin must be >= 1");
    start.validate(spec);
    Trajectory traj;
    traj.beta = beta;
    traj.spec_hash = spec.hash();
    traj.snapshots.push_back(start.theta);
    traj.steps.push_back(0);
    PolicyProfile current = start;
    for (long s = 1; s <= steps; ++s) {
        current = flow_step(spec, current, beta);
        if (s % thin == 0 || s == steps) {
            traj.snapshots.push_back(current.theta);
            traj.steps.push_back(s);
        }
    }
    return traj;
}

BasinLabel classify_basin(const GameSpec& spec, const PolicyProfile& start,
                          const FlowParams& params) {
    if (!(params.tol > 0.0)) throw std::invalid_argument("classify_basin: tol must be positive");
    if (!(params.beta > 0.0)) throw std::invalid_argument("classify_basin: beta must be positive");
    start.validate(spec);
    if (start.is_symmetric())
        return classify_symmetric(spec, start.theta.row(0).transpose(), params);
    return classify_general(spec, start, params);
}

VolumeReport cooperative_volume(const GameSpec& spec, long samples, std::uint64_t seed,
                                const FlowParams& params, int jobs) {
    if (samples < 1) throw std::invalid_argument("cooperative_volume: samples must be >= 1");
    spec.validate();
    const int d = spec.action_count();
    std::vector<std::uint8_t> outcome(samples);

    const int workers = std::max(1, jobs);
    std::atomic<long> cursor{0};
    auto work = [&]() {
        while (true) {
            const long idx = cursor.fetch_add(1);
            if (idx >= samples) break;
            auto rng = make_rng(derive_stream(seed, static_cast<std::uint64_t>(idx)));
            const Eigen::VectorXd row = dirichlet_row(d, rng);
            const BasinLabel label = classify_symmetric(spec, row, params);
            outcome[idx] = static_cast<std::uint8_t>(label.outcome);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    VolumeReport report;
    report.samples = samples;
    report.seed = seed;
    report.params = params;
    for (long i = 0; i < samples; ++i) {
        switch (static_cast<BasinLabel::Outcome>(outcome[i])) {
            case BasinLabel::Outcome::Cooperative: ++report.cooperative; break;
            case BasinLabel::Outcome::NonCooperative: ++report.non_cooperative; break;
            case BasinLabel::Outcome::Undecided: ++report.undecided; break;
        }
    }
    report.fraction = static_cast<double>(report.cooperative) / samples;
    report.std_error =
        std::sqrt(report.fraction * (1.0 - report.fraction) / static_cast<double>(samples));
    return report;
}

std::vector<TornadoRow> sensitivity_sweep(const GameSpec& spec, double delta,
                                          long samples, std::uint64_t seed,
                                          const FlowParams& params, int jobs) {
    if (!(delta >= 0.0 && delta < 1.0))
        throw std::invalid_argument("sensitivity_sweep: delta must lie in [0,1)");
    spec.validate();

    std::vector<std::pair<std::string, double GameSpec::*>> swept = {
        {"b", &GameSpec::b}, {"c", &GameSpec::c}, {"sigma", &GameSpec::sigma}};
    if (spec.has_punisher()) {
        swept.emplace_back("p", &GameSpec::p);
        swept.emplace_back("k", &GameSpec::k);
    }
    if (spec.variant == Variant::CDNPA) swept.emplace_back("alpha", &GameSpec::alpha);
    if (spec.variant == Variant::CDNP_HOMO) swept.emplace_back("lambda", &GameSpec::lambda);

    std::vector<TornadoRow> rows;
    for (const auto& [name, member] : swept) {
        TornadoRow row;
        row.parameter = name;
        GameSpec low = spec;
        GameSpec high = spec;
        low.*member = (spec.*member) * (1.0 - delta);
        high.*member = (spec.*member) * (1.0 + delta);
        if (name == "lambda") high.*member = std::min(high.*member, 1.0);
        row.low_value = low.*member;
        row.high_value = high.*member;
        row.low = cooperative_volume(low, samples, seed, params, jobs);
        row.high = cooperative_volume(high, samples, seed, params, jobs);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::optional<CycleReport> detect_limit_cycle(const Trajectory& traj, double eps,
                                              long transient) {
    if (traj.snapshots.empty()) return std::nullopt;
    if (traj.steps.back() <= transient) return std::nullopt;

    std::vector<Eigen::VectorXd> pts;
    std::vector<long> steps;
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        if (traj.steps[i] >= transient) {
            pts.push_back(traj.population_point(i));
            steps.push_back(traj.steps[i]);
        }
    }
    const std::size_t L = pts.size();
    if (L < 3) return std::nullopt;

    const std::size_t anchor_stride = std::max<std::size_t>(1, L / 16);
    for (std::size_t a = 0; a < L / 2; a += anchor_stride) {
        double excursion = 0.0;
        for (std::size_t s = a + 1; s < L; ++s) {
            const double dist = (pts[s] - pts[a]).norm();
            if (dist < eps) {
                if (excursion <= eps) continue;  // has not left yet: fixed point
                CycleReport report;
                report.anchor_step = steps[a];
                report.period_steps = steps[s] - steps[a];
                report.return_distance = dist;
                report.max_excursion = excursion;
                report.anchor_point = pts[a];
                // Count later returns spaced at least half a period apart.
                report.revolutions = 1;
                long last_return = steps[s];
                for (std::size_t t = s + 1; t < L; ++t) {
                    if (steps[t] - last_return < report.period_steps / 2) continue;
                    if ((pts[t] - pts[a]).norm() < eps) {
                        ++report.revolutions;
                        last_return = steps[t];
                    }
                }
                return report;
            }
            excursion = std::max(excursion, dist);
        }
    }
    return std::nullopt;
}

std::vector<FieldPoint> field_raster(const GameSpec& spec, int resolution) {
    if (resolution < 2) throw std::invalid_argument("field_raster: resolution must be >= 2");
    spec.validate();
    const SymmetricEvaluator eval(spec);
    const int d = spec.action_count();
    const int segments = resolution - 1;

    std::vector<FieldPoint> out;
    std::vector<int> comp(d, 0);
    // Enumerate integer compositions of `segments` into d parts.
    auto emit = [&](const std::vector<int>& parts) {
        Eigen::VectorXd bary(d);
        for (int j = 0; j < d; ++j)
            bary[j] = static_cast<double>(parts[j]) / static_cast<double>(segments);
        FieldPoint fp;
        fp.bary = bary;
        fp.rates = eval.rates(bary);
        out.push_back(std::move(fp));
    };
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == d - 1) {
            comp[pos] = remaining;
            emit(comp);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            comp[pos] = v;
            rec(pos + 1, remaining - v);
        }
    };
    rec(0, segments);
    return out;
}

}  // namespace dilemma
