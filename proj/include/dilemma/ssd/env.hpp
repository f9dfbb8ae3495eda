#pragma once

#include "dilemma/ssd/map.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace dilemma::ssd {

enum class SsdGame { Cleanup, Harvest };

const char* game_name(SsdGame g);
SsdGame game_from_name(const std::string& name);

enum class EnvAction : int { Up = 0, Down = 1, Left = 2, Right = 3, Stay = 4, Clean = 5 };
inline constexpr int kEnvActionCount = 6;

enum class IncentiveKind : int { Negative = 0, Zero = 1, Positive = 2 };
inline constexpr int kIncentiveKindCount = 3;

struct EnvConfig {
    SsdGame game = SsdGame::Cleanup;
    int rows = 10;
    int cols = 10;
    int n_agents = 3;
    int view_size = 7;  // odd window side
    int max_steps = 50;

    // Cleanup
    double apple_respawn_prob = 0.3;
    double depletion_threshold = 0.4;
    double restoration_threshold = 0.0;
    double waste_spawn_prob = 0.5;

    // Harvest: spawn probability by apple count within L1 distance 2
    std::array<double, 4> harvest_spawn_prob = {0.0, 0.05, 0.08, 0.1};

    double eta_e = 1.0;            // incentive effect factor
    double eta_c = 0.1;            // incentive cost factor
    double incentive_magnitude = 1.0;

    std::string map_path;

    static EnvConfig cleanup_defaults(int n_agents);
    static EnvConfig harvest_defaults(int n_agents);
    void validate() const;
};

struct IncentiveRecord {
    int giver = 0;
    int receiver = 0;
    IncentiveKind kind = IncentiveKind::Zero;
    double delivered = 0.0;  // eta_e * signed magnitude
    double cost = 0.0;       // eta_c * |magnitude|
};

struct RewardBreakdown {
    Eigen::VectorXd env_reward;          // r_i from the environment
    Eigen::VectorXd incentive_received;  // sum_j eta_e * r_{j->i}
    Eigen::VectorXd incentive_cost;      // eta_c * sum_j |r_{i->j}|
    std::vector<IncentiveRecord> records;
};

struct Observation {
    int view = 0;
    // Row-major view-size^2 windows centered on the agent; out-of-map cells
    // read as wall.
    std::vector<std::uint8_t> cell;         // 0 empty, 1 wall, 2 apple, 3 waste
    std::vector<std::uint8_t> other_agent;  // 1 where another agent stands
};

struct StepResult {
    RewardBreakdown rewards;
    bool done = false;
};

// Deterministic, seedable gridworld. All stochastic draws come from the
// instance RNG in a fixed order, so (seed, action log) replays bit-exactly.
// Step order: movement (agent-index priority), apple consumption, cleaning
// beams, incentive transfers, apple spawning, waste spawning.
class SsdEnv {
public:
    SsdEnv(EnvConfig cfg, MapLayout map);
    explicit SsdEnv(EnvConfig cfg);  // loads cfg.map_path

    void reset(std::uint64_t seed);
    StepResult step(const std::vector<EnvAction>& env_actions,
                    const Eigen::MatrixXi& incentive_kinds);  // n x n, diagonal ignored
    Observation observe(int agent) const;

    const EnvConfig& config() const { return cfg_; }
    const MapLayout& map() const { return map_; }
    int step_count() const { return step_; }
    bool done() const { return step_ >= cfg_.max_steps; }
    const std::vector<Coord>& agent_positions() const { return agents_; }
    bool has_apple(int row, int col) const { return apple_[index(row, col)] != 0; }
    bool has_waste(int row, int col) const { return waste_[index(row, col)] != 0; }
    int apple_count() const;
    int waste_count() const;
    double waste_density() const;
    const Eigen::VectorXd& apples_eaten() const { return apples_eaten_; }
    const Eigen::VectorXd& waste_cleaned() const { return waste_cleaned_; }

    // Apples within L1 distance 2 of a cell (the Harvest neighbor count).
    int apple_neighbors(int row, int col) const;

    static const char* action_name(EnvAction a);
    static const char* kind_name(IncentiveKind k);

private:
    int index(int row, int col) const { return row * map_.cols + col; }
    bool blocked(int row, int col) const;
    void spawn_apples();
    void spawn_waste();

    EnvConfig cfg_;
    MapLayout map_;
    std::vector<std::uint8_t> apple_;
    std::vector<std::uint8_t> waste_;
    std::vector<int> agent_at_;  // -1 when free
    std::vector<Coord> agents_;
    Eigen::VectorXd apples_eaten_;
    Eigen::VectorXd waste_cleaned_;
    int step_ = 0;
    std::mt19937_64 rng_;
};

}  // namespace dilemma::ssd
