#pragma once

#include <Eigen/Dense>

namespace dilemma {

// Euclidean projection onto the canonical probability simplex, by the exact
// sort-and-threshold method. Non-finite inputs throw std::invalid_argument.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& weights);

}  // namespace dilemma
