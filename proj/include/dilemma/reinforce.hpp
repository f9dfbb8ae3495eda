#pragma once

#include "dilemma/dynamics.hpp"
#include "dilemma/game.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace dilemma {

// Independent softmax policy-gradient learners on the one-step game.
struct LearnerConfig {
    double learning_rate = 0.2;
    long updates = 12000;          // policy updates
    int batch = 16;                // episodes per update
    enum class Baseline { None, RunningMean } baseline = Baseline::RunningMean;
    double baseline_decay = 0.98;  // for the running mean
    std::uint64_t seed = 1;
    long snapshot_interval = 10;   // updates between stored population snapshots
    // Optional common starting profile; defaults to uniform policies.
    std::optional<Eigen::MatrixXd> start;

    void validate() const;
};

struct LearningRecord {
    Trajectory trajectory;               // thinned population snapshots
    std::vector<double> cooperation;     // per update, contributing mass
    std::vector<double> mean_reward;     // per update, batch-mean realized reward
};

// Mean over agents of the probability mass on contributing strategies.
double cooperation_level(const GameSpec& spec, const PolicyProfile& profile);

// REINFORCE with softmax policies; for CDNP_HOMO, after every update each
// agent whose own C-vs-P preference sits on the population's minority side
// swaps its C and P logits with probability lambda.
LearningRecord train_population(const GameSpec& spec, const LearnerConfig& cfg);

}  // namespace dilemma
