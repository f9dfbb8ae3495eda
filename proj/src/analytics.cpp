#include "dilemma/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dilemma {

namespace {

bool is_excluded(int idx, std::span<const int> excluded) {
    return std::find(excluded.begin(), excluded.end(), idx) != excluded.end();
}

// Distribution of the nonparticipant count over the given Bernoulli
// probabilities, by convolution.
std::vector<double> count_distribution(const Eigen::VectorXd& theta_n,
                                       std::span<const int> excluded) {
    std::vector<double> dist{1.0};
    for (Eigen::Index j = 0; j < theta_n.size(); ++j) {
        if (is_excluded(static_cast<int>(j), excluded)) continue;
        const double t = theta_n[j];
        std::vector<double> next(dist.size() + 1, 0.0);
        for (std::size_t m = 0; m < dist.size(); ++m) {
            next[m] += dist[m] * (1.0 - t);
            next[m + 1] += dist[m] * t;
        }
        dist = std::move(next);
    }
    return dist;
}

double expectation_from_distribution(const std::vector<double>& dist, int n) {
    double e = 0.0;
    for (std::size_t m = 0; m < dist.size(); ++m)
        e += dist[m] / static_cast<double>(n - static_cast<int>(m));
    return e;
}

double signum(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

double participation_expectation(const Eigen::VectorXd& theta_n,
                                 std::span<const int> excluded) {
    if (excluded.size() != 1 && excluded.size() != 2)
        throw std::invalid_argument("participation_expectation: excluded set must have size 1 or 2");
    const int n = static_cast<int>(theta_n.size());
    for (int e : excluded)
        if (e < 0 || e >= n) throw std::invalid_argument("excluded index out of range");
    if (excluded.size() == 2 && excluded[0] == excluded[1])
        throw std::invalid_argument("excluded indices must be distinct");
    if ((theta_n.array() < 0.0).any() || (theta_n.array() > 1.0).any())
        throw std::invalid_argument("nonparticipation probabilities must lie in [0,1]");
    return expectation_from_distribution(count_distribution(theta_n, excluded), n);
}

Eigen::VectorXd closed_form_gradient(const GameSpec& spec, const PolicyProfile& profile,
                                     int agent) {
    profile.validate(spec);
    if (agent < 0 || agent >= spec.n) throw std::invalid_argument("agent index out of range");

    const int n = spec.n;
    const Eigen::VectorXd theta_n = profile.theta.col(kColN);
    const int exc1[] = {agent};
    const double e_i = expectation_from_distribution(count_distribution(theta_n, exc1), n);

    // Per-j pairwise expectations E_{-ij}.
    Eigen::VectorXd e_ij = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
        if (j == agent) continue;
        const int exc2[] = {agent, j};
        e_ij[j] = expectation_from_distribution(count_distribution(theta_n, exc2), n);
    }

    double weighted_contrib = 0.0;  // sum_j theta_{j,contrib} * E_{-ij}
    double sum_c = 0.0, sum_d = 0.0, sum_x = 0.0;
    const bool four = spec.has_punisher();
    for (int j = 0; j < n; ++j) {
        if (j == agent) continue;
        const double tc = profile.theta(j, kColC);
        const double tx = four ? profile.theta(j, kColX) : 0.0;
        weighted_contrib += (tc + (spec.variant == Variant::CDN ? 0.0 : tx)) * e_ij[j];
        sum_c += tc;
        sum_d += profile.theta(j, kColD);
        sum_x += tx;
    }

    Eigen::VectorXd g(spec.action_count());
    const double base = spec.b * (weighted_contrib + e_i) - spec.c;
    switch (spec.variant) {
        case Variant::CDN:
            g[kColC] = base;
            g[kColD] = spec.b * weighted_contrib;
            g[kColN] = spec.sigma;
            break;
        case Variant::CDNPA:
            g[kColC] = base - spec.alpha * spec.p * sum_x / n;
            g[kColD] = spec.b * weighted_contrib - spec.p * sum_x / n;
            g[kColN] = spec.sigma;
            g[kColX] = base - spec.alpha * spec.k * sum_c / n - spec.k * sum_d / n;
            break;
        case Variant::CDNP:
        case Variant::CDNP_HOMO:
            g[kColC] = base;
            g[kColD] = spec.b * weighted_contrib - spec.p * sum_x / n;
            g[kColN] = spec.sigma;
            g[kColX] = base - spec.k * sum_d / n;
            if (spec.variant == Variant::CDNP_HOMO) {
                const double s = signum(sum_x - sum_c);
                const double conv = spec.lambda * s *
                                    std::min(profile.theta(agent, kColC),
                                             profile.theta(agent, kColX));
                g[kColC] -= conv;
                g[kColX] += conv;
            }
            break;
    }
    return g;
}

double second_order_gap(const GameSpec& spec, const PolicyProfile& profile, int agent) {
    if (spec.variant != Variant::CDNP && spec.variant != Variant::CDNP_HOMO)
        throw std::invalid_argument("second_order_gap requires a CDNP or CDNP_HOMO spec");
    profile.validate(spec);
    if (agent < 0 || agent >= spec.n) throw std::invalid_argument("agent index out of range");

    double sum_d = 0.0, sum_c = 0.0, sum_x = 0.0;
    for (int j = 0; j < spec.n; ++j) {
        if (j == agent) continue;
        sum_d += profile.theta(j, kColD);
        sum_c += profile.theta(j, kColC);
        sum_x += profile.theta(j, kColX);
    }
    double gap = -spec.k * sum_d / spec.n;
    if (spec.variant == Variant::CDNP_HOMO) {
        gap += 2.0 * spec.lambda * signum(sum_x - sum_c) *
               std::min(profile.theta(agent, kColC), profile.theta(agent, kColX));
    }
    return gap;
}

SymmetricEvaluator::SymmetricEvaluator(const GameSpec& spec) : spec_(spec) {
    spec_.validate();
    auto binomials = [](int m) {
        std::vector<double> out(m + 1);
        out[0] = 1.0;
        for (int j = 1; j <= m; ++j) out[j] = out[j - 1] * (m - j + 1) / j;
        return out;
    };
    coeff_m1_ = binomials(spec_.n - 1);
    coeff_m2_ = binomials(spec_.n - 2);
}

double SymmetricEvaluator::binomial_expectation(double theta_n,
                                                const std::vector<double>& coeff,
                                                int m) const {
    // E[1/(n - K)], K ~ Binomial(m, theta_n).
    if (theta_n <= 0.0) return 1.0 / spec_.n;
    if (theta_n >= 1.0) return 1.0 / (spec_.n - m);
    thread_local std::vector<double> pow_t, pow_1mt;
    pow_t.resize(m + 1);
    pow_1mt.resize(m + 1);
    pow_t[0] = pow_1mt[0] = 1.0;
    for (int j = 1; j <= m; ++j) {
        pow_t[j] = pow_t[j - 1] * theta_n;
        pow_1mt[j] = pow_1mt[j - 1] * (1.0 - theta_n);
    }
    double e = 0.0;
    for (int j = 0; j <= m; ++j)
        e += coeff[j] * pow_t[j] * pow_1mt[m - j] / (spec_.n - j);
    return e;
}

double SymmetricEvaluator::expectation_excluding_one(double theta_n) const {
    return binomial_expectation(theta_n, coeff_m1_, spec_.n - 1);
}

double SymmetricEvaluator::expectation_excluding_two(double theta_n) const {
    return binomial_expectation(theta_n, coeff_m2_, spec_.n - 2);
}

Eigen::VectorXd SymmetricEvaluator::rates(const Eigen::VectorXd& row) const {
    if (row.size() != spec_.action_count())
        throw std::invalid_argument("row length does not match variant");
    const int n = spec_.n;
    const double tn = row[kColN];
    const double e_i = expectation_excluding_one(tn);
    const double e_ij = expectation_excluding_two(tn);

    const double tc = row[kColC];
    const double td = row[kColD];
    const bool four = spec_.has_punisher();
    const double tx = four ? row[kColX] : 0.0;
    const double contrib = spec_.variant == Variant::CDN ? tc : tc + tx;
    const double weighted_contrib = (n - 1) * contrib * e_ij;
    const double base = spec_.b * (weighted_contrib + e_i) - spec_.c;

    Eigen::VectorXd g(spec_.action_count());
    switch (spec_.variant) {
        case Variant::CDN:
            g[kColC] = base;
            g[kColD] = spec_.b * weighted_contrib;
            g[kColN] = spec_.sigma;
            break;
        case Variant::CDNPA:
            g[kColC] = base - spec_.alpha * spec_.p * (n - 1) * tx / n;
            g[kColD] = spec_.b * weighted_contrib - spec_.p * (n - 1) * tx / n;
            g[kColN] = spec_.sigma;
            g[kColX] = base - spec_.alpha * spec_.k * (n - 1) * tc / n -
                       spec_.k * (n - 1) * td / n;
            break;
        case Variant::CDNP:
        case Variant::CDNP_HOMO:
            g[kColC] = base;
            g[kColD] = spec_.b * weighted_contrib - spec_.p * (n - 1) * tx / n;
            g[kColN] = spec_.sigma;
            g[kColX] = base - spec_.k * (n - 1) * td / n;
            if (spec_.variant == Variant::CDNP_HOMO) {
                const double s = signum((n - 1) * (tx - tc));
                const double conv = spec_.lambda * s * std::min(tc, tx);
                g[kColC] -= conv;
                g[kColX] += conv;
            }
            break;
    }
    return g;
}

void BilevelParams::validate() const {
    if (n < 2) throw std::invalid_argument("BilevelParams.n must be >= 2");
    if (beta < 0.0) throw std::invalid_argument("BilevelParams.beta must be >= 0");
    if (theta1.size() != n || theta2.size() != n)
        throw std::invalid_argument("BilevelParams theta vectors must have length n");
    if ((theta1.array() < 0.0).any() || (theta1.array() > 1.0).any() ||
        (theta2.array() < 0.0).any() || (theta2.array() > 1.0).any())
        throw std::invalid_argument("BilevelParams probabilities must lie in [0,1]");
}

double bilevel_incentive_gradient(const BilevelParams& bp, int agent) {
    bp.validate();
    if (agent < 0 || agent >= bp.n) throw std::invalid_argument("agent index out of range");
    const double n = bp.n;
    double exploit = 0.0;
    for (int j = 0; j < bp.n; ++j)
        if (j != agent) exploit += 1.0 - bp.theta1[j];
    const double sum2 = bp.theta2.sum();
    const double bracket = (n - 1.0) * (bp.b * (bp.p + bp.k) / n - bp.k * bp.c) +
                           bp.p * bp.k / n * ((n - 2.0) * sum2 + n * bp.theta2[agent]);
    return -bp.k / n * exploit + bp.beta / n * bracket;
}

double stateless_homophily_loss(const Eigen::VectorXd& theta1_updated,
                                const Eigen::VectorXd& theta2, int agent) {
    const int n = static_cast<int>(theta1_updated.size());
    if (theta2.size() != n)
        throw std::invalid_argument("theta vectors must have equal length");
    if (agent < 0 || agent >= n) throw std::invalid_argument("agent index out of range");
    const double t2i = theta2[agent];
    if (t2i <= 0.0 || t2i >= 1.0)
        throw std::domain_error("theta2 of the focal agent must lie strictly in (0,1)");

    const double log_t = std::log(t2i);
    const double log_1mt = std::log1p(-t2i);
    double loss = 0.0;
    for (int j = 0; j < n; ++j) {
        if (j == agent) continue;
        const double inner = theta2[j] * log_t + (1.0 - theta2[j]) * log_1mt;
        const double pair = theta1_updated[agent] * theta1_updated[j] +
                            (1.0 - theta1_updated[agent]) * (1.0 - theta1_updated[j]);
        for (int k = 0; k < n; ++k) {
            if (k == agent || k == j) continue;
            loss -= (1.0 - theta1_updated[k]) * pair * inner;
        }
    }
    return loss;
}

}  // namespace dilemma
