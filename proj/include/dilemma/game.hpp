#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace dilemma {

// Game family: C/D/N volunteering game, optionally extended with a punishing
// strategy. CDNPA punishes defectors and non-punishing contributors, CDNP
// punishes defectors only, CDNP_HOMO is CDNP plus the homophily conversion
// term in the policy dynamics (rewards identical to CDNP).
enum class Variant { CDN, CDNPA, CDNP, CDNP_HOMO };

enum class Strategy { Contribute, Defect, Abstain, Punish, PunishAll };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);
const char* strategy_name(Strategy s);

struct GameSpec {
    Variant variant = Variant::CDN;
    int n = 10;         // agents
    double b = 3.0;     // public-good multiplier
    double c = 1.0;     // contribution cost
    double sigma = 1.0; // nonparticipant payoff
    double p = 2.0;     // punishment inflicted on defectors
    double k = 0.35;    // cost paid by the punisher
    double alpha = 1.0; // scale of second-order punishment (CDNPA)
    double lambda = 0.0; // degree of homophily in [0,1] (CDNP_HOMO)

    int action_count() const { return variant == Variant::CDN ? 3 : 4; }
    bool has_punisher() const { return variant != Variant::CDN; }
    // Strategy behind column index: 0=C, 1=D, 2=N, 3=P or PA.
    Strategy strategy_at(int index) const;
    std::vector<Strategy> strategies() const;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    std::uint64_t hash() const;
};

// Column layout shared by everything operating on policies/counts.
inline constexpr int kColC = 0;
inline constexpr int kColD = 1;
inline constexpr int kColN = 2;
inline constexpr int kColX = 3;  // P or PA depending on variant

// Per-agent mixed strategies; row i is agent i's distribution over the
// variant's action set.
struct PolicyProfile {
    Eigen::MatrixXd theta;  // n x |A|

    int agents() const { return static_cast<int>(theta.rows()); }
    int actions() const { return static_cast<int>(theta.cols()); }

    static PolicyProfile uniform(const GameSpec& spec);
    static PolicyProfile symmetric(const GameSpec& spec, const Eigen::VectorXd& row);
    // Rows are renormalized here and nowhere else; later violations throw.
    static PolicyProfile from_rows(const GameSpec& spec, Eigen::MatrixXd rows);

    bool is_symmetric(double tol = 0.0) const;
    void validate(const GameSpec& spec) const;
};

inline constexpr double kRowSumTolerance = 1e-12;

struct OutcomeCounts {
    Eigen::VectorXi counts;  // per strategy column

    int total() const { return counts.sum(); }
    void validate(const GameSpec& spec) const;
};

// Rewards received by an agent of each present strategy under the realized
// counts. Share of the good is b * contributors / participants; with zero
// participants the share term is 0. Punishment terms scale with counts / n.
Eigen::VectorXd strategy_rewards(const GameSpec& spec, const OutcomeCounts& counts);

// Mean-field twin over strategy proportions (summing to 1); shares the same
// core formula so sampled and analytic paths cannot drift apart.
Eigen::VectorXd strategy_rewards_mean_field(const GameSpec& spec,
                                            const Eigen::VectorXd& proportions);

struct SampledOutcome {
    OutcomeCounts counts;
    std::vector<int> strategy_of_agent;  // column index per agent
};

SampledOutcome sample_outcome(const GameSpec& spec, const PolicyProfile& profile,
                              std::mt19937_64& rng);
SampledOutcome sample_outcome(const GameSpec& spec, const PolicyProfile& profile,
                              std::uint64_t seed);

// Exact one-step expected reward of `agent` under the product policy, by full
// enumeration of joint strategies. The agent's own row may lie off the
// simplex: the expectation is the multilinear extension, which is what the
// finite-difference checks differentiate. Enumeration is guarded by
// |A|^n <= 2^24; larger instances throw std::invalid_argument.
double exact_value(const GameSpec& spec, const PolicyProfile& profile, int agent);

}  // namespace dilemma
