#pragma once

#include "dilemma/game.hpp"

#include <Eigen/Dense>

#include <map>
#include <vector>

namespace dilemma {

// Payoff curves witnessing a dilemma: payoff of one focal agent choosing A
// versus B as a function of how many of the other agents choose A, with the
// remaining free agents on B and any fixed context held constant.
struct SchellingCurveSet {
    Strategy focal_a = Strategy::Contribute;
    Strategy focal_b = Strategy::Defect;
    std::map<Strategy, int> fixed;      // context strategies held at fixed counts
    std::vector<int> others_on_a;       // x axis: 0 .. n-1-fixed_total
    Eigen::VectorXd payoff_a;           // focal plays A
    Eigen::VectorXd payoff_b;           // focal plays B
};

SchellingCurveSet schelling_curves(const GameSpec& spec, Strategy focal_a,
                                   Strategy focal_b,
                                   const std::map<Strategy, int>& fixed = {});

}  // namespace dilemma
