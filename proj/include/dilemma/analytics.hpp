#pragma once

#include "dilemma/game.hpp"

#include <Eigen/Dense>

#include <span>

namespace dilemma {

// E[1/(n - K)] where K counts nonparticipants among the agents outside
// `excluded`. Computed exactly by a dynamic program over the
// Poisson-binomial distribution of K (the 2^m enumeration is the test
// oracle). The result does not depend on the excluded agents' entries.
double participation_expectation(const Eigen::VectorXd& theta_n,
                                 std::span<const int> excluded);

// Exact value gradient of agent `i` w.r.t. its own action probabilities.
// For CDNP_HOMO the returned vector holds the policy *rates*: the value
// gradient plus the homophily conversion term on the C and P components
// (sign(0) taken as 0).
Eigen::VectorXd closed_form_gradient(const GameSpec& spec, const PolicyProfile& profile,
                                     int agent);

// (P rate) - (C rate) for CDNP / CDNP_HOMO; the second-order free-riding
// pressure. Throws for other variants.
double second_order_gap(const GameSpec& spec, const PolicyProfile& profile, int agent);

// Fast evaluator for symmetric profiles (all agents share one row), used by
// the population-space flow, rasters and volume sweeps. Binomial tables are
// precomputed per spec.
class SymmetricEvaluator {
public:
    explicit SymmetricEvaluator(const GameSpec& spec);

    const GameSpec& spec() const { return spec_; }
    // Gradient (or rates for CDNP_HOMO) of one agent when every agent plays `row`.
    Eigen::VectorXd rates(const Eigen::VectorXd& row) const;
    // E[1/(n - K)] with K ~ Binomial(m, theta_n), m = n-1 or n-2.
    double expectation_excluding_one(double theta_n) const;
    double expectation_excluding_two(double theta_n) const;

private:
    double binomial_expectation(double theta_n, const std::vector<double>& coeff,
                                int m) const;
    GameSpec spec_;
    std::vector<double> coeff_m1_;  // C(n-1, j)
    std::vector<double> coeff_m2_;  // C(n-2, j)
};

// Stateless two-population bi-level model: first-order cooperation
// probabilities theta1 and second-order (punishing) probabilities theta2.
struct BilevelParams {
    int n = 10;
    double b = 3.0;
    double c = 1.0;
    double p = 2.0;
    double k = 0.35;
    double beta = 0.01;          // inner learning rate
    Eigen::VectorXd theta1;      // per-agent P(first-order cooperate)
    Eigen::VectorXd theta2;      // per-agent P(second-order cooperate)

    void validate() const;
};

// Closed form of d V_i^{pi'} / d theta_{i,2} after one inner gradient step on
// every agent's first-order policy.
double bilevel_incentive_gradient(const BilevelParams& bp, int agent);

// Stateless homophily loss of agent `i` under updated first-order policies.
// theta2[i] must lie strictly inside (0,1); boundary values throw
// std::domain_error.
double stateless_homophily_loss(const Eigen::VectorXd& theta1_updated,
                                const Eigen::VectorXd& theta2, int agent);

}  // namespace dilemma
