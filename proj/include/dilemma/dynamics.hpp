#pragma once

#include "dilemma/analytics.hpp"
#include "dilemma/game.hpp"
#include "dilemma/simplex.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dilemma {

struct FlowParams {
    double beta = 1e-3;        // step size
    long max_steps = 200000;   // classification budget
    double tol = 1e-8;         // post-projection step-norm convergence
    double mass_threshold = 0.9;
    double probe_eps = 1e-3;   // stability probe perturbation (see below)
    // Early exit for orbits that revisit an anchor point while still moving;
    // label-equivalent to exhausting the budget inside the oscillatory region.
    bool cycle_shortcut = true;
    double recurrence_radius = 1e-6;
};

struct Trajectory {
    std::vector<Eigen::MatrixXd> snapshots;  // policy matrices, n x |A|
    std::vector<long> steps;                 // strictly increasing
    double beta = 0.0;
    std::uint64_t spec_hash = 0;

    // Population point (mean policy row) of a snapshot.
    Eigen::VectorXd population_point(std::size_t index) const;
};

// One projected step: every agent's row moves along its closed-form
// gradient (or CDNP_HOMO rates) and is projected back onto the simplex.
PolicyProfile flow_step(const GameSpec& spec, const PolicyProfile& profile, double beta);

// Fixed-step integration; snapshots kept every `thin` steps plus the final
// point. Deterministic.
Trajectory integrate_flow(const GameSpec& spec, const PolicyProfile& start, double beta,
                          long steps, long thin = 1);

struct BasinLabel {
    enum class Outcome { Cooperative, NonCooperative, Undecided };
    Outcome outcome = Outcome::Undecided;
    Eigen::VectorXd final_point;  // mean policy row at termination
    long steps_used = 0;
    double final_step_norm = 0.0;
    bool budget_exhausted = false;
    bool probe_failed = false;  // converged cooperative-mass but not restoring
};

const char* basin_outcome_name(BasinLabel::Outcome o);

// Classify where the projected flow settles. Cooperative requires the
// contributing mass (C plus P/PA) to exceed the mass threshold at a
// converged point *and* the converged point to strictly restore punishers
// against a small second-order defection probe (eps mass moved from the
// punishing strategy to C must yield a positive P-vs-C rate gap). Without
// the probe, neutral C/P mixtures frozen by the projection would count as
// cooperative, which the variant's dynamics do not sustain.
BasinLabel classify_basin(const GameSpec& spec, const PolicyProfile& start,
                          const FlowParams& params);

struct VolumeReport {
    double fraction = 0.0;   // cooperative fraction
    double std_error = 0.0;  // binomial standard error
    long samples = 0;
    long cooperative = 0;
    long non_cooperative = 0;
    long undecided = 0;
    std::uint64_t seed = 0;
    FlowParams params;
};

// Monte Carlo cooperative volume over uniformly sampled symmetric starting
// rows (Dirichlet(1,...,1) via exponential spacings). Parallel over samples;
// per-sample RNG streams derive from (seed, sample index), so results do not
// depend on scheduling.
VolumeReport cooperative_volume(const GameSpec& spec, long samples, std::uint64_t seed,
                                const FlowParams& params, int jobs = 1);

struct TornadoRow {
    std::string parameter;
    double low_value = 0.0;
    double high_value = 0.0;
    VolumeReport low;
    VolumeReport high;
};

// One-at-a-time +/- delta perturbation of each applicable game parameter.
std::vector<TornadoRow> sensitivity_sweep(const GameSpec& spec, double delta,
                                          long samples, std::uint64_t seed,
                                          const FlowParams& params, int jobs = 1);

struct CycleReport {
    long anchor_step = 0;
    long period_steps = 0;
    double return_distance = 0.0;
    double max_excursion = 0.0;
    int revolutions = 0;  // consecutive period-multiple returns within eps
    Eigen::VectorXd anchor_point;
};

// Recurrence detection on a trajectory after discarding `transient` steps.
// Reports a cycle when a later population point returns within eps of an
// anchor while intermediate points exceed eps (fixed points excluded).
std::optional<CycleReport> detect_limit_cycle(const Trajectory& traj, double eps,
                                              long transient);

struct FieldPoint {
    Eigen::VectorXd bary;   // symmetric population point, length |A|
    Eigen::VectorXd rates;  // gradient / rates at that point
};

// Rates evaluated on a uniform barycentric grid of the variant's simplex;
// resolution r yields r(r+1)/2 points on a 3-simplex.
std::vector<FieldPoint> field_raster(const GameSpec& spec, int resolution);

}  // namespace dilemma
