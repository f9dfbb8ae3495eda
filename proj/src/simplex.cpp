#include "dilemma/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dilemma {

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& weights) {
    const Eigen::Index d = weights.size();
    if (d == 0) throw std::invalid_argument("project_to_simplex: empty vector");
    if (!weights.allFinite())
        throw std::invalid_argument("project_to_simplex: non-finite input");

    std::vector<double> u(weights.data(), weights.data() + d);
    std::sort(u.begin(), u.end(), std::greater<>());

    double cumulative = 0.0;
    double tau = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
        cumulative += u[j];
        const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
        if (u[j] - candidate > 0.0) tau = candidate;
    }
    return (weights.array() - tau).max(0.0);
}

}  // namespace dilemma
