#include "dilemma/ssd/env.hpp"

#include "dilemma/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dilemma::ssd {

const char* game_name(SsdGame g) {
    return g == SsdGame::Cleanup ? "cleanup" : "harvest";
}

SsdGame game_from_name(const std::string& name) {
    if (name == "cleanup") return SsdGame::Cleanup;
    if (name == "harvest") return SsdGame::Harvest;
    throw std::invalid_argument("unknown ssd game: " + name);
}

const char* SsdEnv::action_name(EnvAction a) {
    switch (a) {
        case EnvAction::Up: return "up";
        case EnvAction::Down: return "down";
        case EnvAction::Left: return "left";
        case EnvAction::Right: return "right";
        case EnvAction::Stay: return "stay";
        case EnvAction::Clean: return "clean";
    }
    return "?";
}

const char* SsdEnv::kind_name(IncentiveKind k) {
    switch (k) {
        case IncentiveKind::Negative: return "negative";
        case IncentiveKind::Zero: return "zero";
        case IncentiveKind::Positive: return "positive";
    }
    return "?";
}

EnvConfig EnvConfig::cleanup_defaults(int n_agents) {
    EnvConfig cfg;
    cfg.game = SsdGame::Cleanup;
    cfg.n_agents = n_agents;
    if (n_agents <= 3) {
        cfg.rows = 10;
        cfg.cols = 10;
        cfg.view_size = 7;
        cfg.max_steps = 50;
        cfg.apple_respawn_prob = 0.3;
        cfg.depletion_threshold = 0.4;
        cfg.restoration_threshold = 0.0;
        cfg.waste_spawn_prob = 0.5;
        cfg.map_path = default_map_path("cleanup_10x10.txt");
    } else if (n_agents <= 5) {
        cfg.rows = 18;
        cfg.cols = 25;
        cfg.view_size = 15;
        cfg.max_steps = 100;
        cfg.apple_respawn_prob = 0.05;
        cfg.depletion_threshold = 0.99;
        cfg.restoration_threshold = 0.0;
        cfg.waste_spawn_prob = 0.05;
        cfg.map_path = default_map_path("cleanup_25x18.txt");
    } else {
        cfg.rows = 18;
        cfg.cols = 48;
        cfg.view_size = 15;
        cfg.max_steps = 100;
        cfg.apple_respawn_prob = 0.05;
        cfg.depletion_threshold = 0.99;
        cfg.restoration_threshold = 0.0;
        cfg.waste_spawn_prob = 0.05;
        cfg.map_path = default_map_path("cleanup_48x18.txt");
    }
    return cfg;
}

EnvConfig EnvConfig::harvest_defaults(int n_agents) {
    EnvConfig cfg;
    cfg.game = SsdGame::Harvest;
    cfg.n_agents = n_agents;
    cfg.rows = 18;
    cfg.cols = 25;
    cfg.view_size = 15;
    cfg.max_steps = 100;
    cfg.map_path = default_map_path("harvest_25x18.txt");
    return cfg;
}

void EnvConfig::validate() const {
    if (n_agents < 1) throw std::invalid_argument("EnvConfig.n_agents must be >= 1");
    if (rows < 3 || cols < 3) throw std::invalid_argument("EnvConfig map size too small");
    if (view_size < 1 || view_size % 2 == 0)
        throw std::invalid_argument("EnvConfig.view_size must be a positive odd number");
    if (max_steps < 1) throw std::invalid_argument("EnvConfig.max_steps must be >= 1");
    auto prob = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument(std::string("EnvConfig.") + name +
                                        " must lie in [0,1]");
    };
    prob(apple_respawn_prob, "apple_respawn_prob");
    prob(depletion_threshold, "depletion_threshold");
    prob(restoration_threshold, "restoration_threshold");
    prob(waste_spawn_prob, "waste_spawn_prob");
    for (double v : harvest_spawn_prob) prob(v, "harvest_spawn_prob");
    if (restoration_threshold > depletion_threshold)
        throw std::invalid_argument(
            "EnvConfig.restoration_threshold must not exceed depletion_threshold");
    if (eta_e < 0.0 || eta_c < 0.0 || incentive_magnitude < 0.0)
        throw std::invalid_argument("EnvConfig incentive factors must be nonnegative");
}

SsdEnv::SsdEnv(EnvConfig cfg, MapLayout map) : cfg_(std::move(cfg)), map_(std::move(map)) {
    cfg_.validate();
    if (map_.rows != cfg_.rows || map_.cols != cfg_.cols)
        throw std::invalid_argument("map layout size does not match EnvConfig");
    if (static_cast<int>(map_.spawn_points.size()) < cfg_.n_agents)
        throw std::invalid_argument("map has fewer spawn points than agents");
    reset(0);
}

SsdEnv::SsdEnv(EnvConfig cfg) : SsdEnv(cfg, MapLayout::load(cfg.map_path)) {}

void SsdEnv::reset(std::uint64_t seed) {
    rng_ = make_rng(seed);
    step_ = 0;
    apple_.assign(map_.rows * map_.cols, 0);
    waste_.assign(map_.rows * map_.cols, 0);
    agent_at_.assign(map_.rows * map_.cols, -1);
    agents_.clear();
    apples_eaten_ = Eigen::VectorXd::Zero(cfg_.n_agents);
    waste_cleaned_ = Eigen::VectorXd::Zero(cfg_.n_agents);

    if (cfg_.game == SsdGame::Cleanup) {
        // Waste fill: the smallest count strictly above the depletion
        // threshold, placed on a seeded shuffle of the waste field.
        const int sites = static_cast<int>(map_.waste_sites.size());
        if (sites > 0) {
            int fill = static_cast<int>(std::floor(cfg_.depletion_threshold * sites)) + 1;
            fill = std::min(fill, sites);
            std::vector<int> order(sites);
            for (int i = 0; i < sites; ++i) order[i] = i;
            for (int i = sites - 1; i > 0; --i) {
                const int j = static_cast<int>(uniform_index(rng_, i + 1));
                std::swap(order[i], order[j]);
            }
            for (int i = 0; i < fill; ++i) {
                const Coord& c = map_.waste_sites[order[i]];
                waste_[index(c.row, c.col)] = 1;
            }
        }
    } else {
        for (std::size_t s = 0; s < map_.apple_sites.size(); ++s) {
            if (map_.apple_initial[s]) {
                const Coord& c = map_.apple_sites[s];
                apple_[index(c.row, c.col)] = 1;
            }
        }
    }

    // Agents take a seeded shuffle of the spawn points.
    std::vector<int> order(map_.spawn_points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
        const int j = static_cast<int>(uniform_index(rng_, i + 1));
        std::swap(order[i], order[j]);
    }
    for (int a = 0; a < cfg_.n_agents; ++a) {
        const Coord& c = map_.spawn_points[order[a]];
        agents_.push_back(c);
        agent_at_[index(c.row, c.col)] = a;
    }
}

bool SsdEnv::blocked(int row, int col) const {
    if (!map_.in_bounds(row, col)) return true;
    if (map_.wall(row, col)) return true;
    if (agent_at_[index(row, col)] >= 0) return true;
    return false;
}

int SsdEnv::apple_count() const {
    int n = 0;
    for (auto v : apple_) n += v;
    return n;
}

int SsdEnv::waste_count() const {
    int n = 0;
    for (auto v : waste_) n += v;
    return n;
}

double SsdEnv::waste_density() const {
    if (map_.waste_sites.empty()) return 0.0;
    return static_cast<double>(waste_count()) /
           static_cast<double>(map_.waste_sites.size());
}

int SsdEnv::apple_neighbors(int row, int col) const {
    int count = 0;
    for (int dr = -2; dr <= 2; ++dr) {
        for (int dc = -2 + std::abs(dr); dc <= 2 - std::abs(dr); ++dc) {
            if (dr == 0 && dc == 0) continue;
            const int r = row + dr, c = col + dc;
            if (map_.in_bounds(r, c) && apple_[index(r, c)]) ++count;
        }
    }
    return count;
}

void SsdEnv::spawn_apples() {
    if (cfg_.game == SsdGame::Cleanup) {
        double factor = 0.0;
        const double density = waste_density();
        if (density < cfg_.depletion_threshold) {
            const double span = cfg_.depletion_threshold - cfg_.restoration_threshold;
            factor = span > 0.0
                         ? std::clamp((cfg_.depletion_threshold - density) / span, 0.0, 1.0)
                         : 1.0;
        }
        const double prob = factor * cfg_.apple_respawn_prob;
        if (prob <= 0.0) return;
        for (const Coord& c : map_.apple_sites) {
            const int i = index(c.row, c.col);
            if (apple_[i] || agent_at_[i] >= 0) continue;
            if (u01(rng_) < prob) apple_[i] = 1;
        }
    } else {
        // Spawn decisions all read the pre-spawn apple pattern.
        std::vector<int> spawned;
        for (const Coord& c : map_.apple_sites) {
            const int i = index(c.row, c.col);
            if (apple_[i] || agent_at_[i] >= 0) continue;
            const int neighbors = std::min(apple_neighbors(c.row, c.col), 3);
            const double prob = cfg_.harvest_spawn_prob[neighbors];
            if (prob <= 0.0) continue;
            if (u01(rng_) < prob) spawned.push_back(i);
        }
        for (int i : spawned) apple_[i] = 1;
    }
}

void SsdEnv::spawn_waste() {
    if (cfg_.game != SsdGame::Cleanup || cfg_.waste_spawn_prob <= 0.0) return;
    std::vector<int> empty;
    for (const Coord& c : map_.waste_sites) {
        const int i = index(c.row, c.col);
        if (!waste_[i] && agent_at_[i] < 0) empty.push_back(i);
    }
    if (empty.empty()) return;
    if (u01(rng_) < cfg_.waste_spawn_prob) {
        const int pick = static_cast<int>(uniform_index(rng_, empty.size()));
        waste_[empty[pick]] = 1;
    }
}

StepResult SsdEnv::step(const std::vector<EnvAction>& env_actions,
                        const Eigen::MatrixXi& incentive_kinds) {
    if (done()) throw std::logic_error("step called on a finished episode");
    if (static_cast<int>(env_actions.size()) != cfg_.n_agents)
        throw std::invalid_argument("env action vector length does not match agents");
    if (incentive_kinds.rows() != cfg_.n_agents || incentive_kinds.cols() != cfg_.n_agents)
        throw std::invalid_argument("incentive matrix must be n x n");
    for (int i = 0; i < cfg_.n_agents; ++i)
        for (int j = 0; j < cfg_.n_agents; ++j)
            if (i != j && (incentive_kinds(i, j) < 0 ||
                           incentive_kinds(i, j) >= kIncentiveKindCount))
                throw std::invalid_argument("incentive kind out of range");

    StepResult result;
    result.rewards.env_reward = Eigen::VectorXd::Zero(cfg_.n_agents);
    result.rewards.incentive_received = Eigen::VectorXd::Zero(cfg_.n_agents);
    result.rewards.incentive_cost = Eigen::VectorXd::Zero(cfg_.n_agents);

    // Movement, fixed agent-index priority; losers stay.
    for (int a = 0; a < cfg_.n_agents; ++a) {
        int dr = 0, dc = 0;
        switch (env_actions[a]) {
            case EnvAction::Up: dr = -1; break;
            case EnvAction::Down: dr = 1; break;
            case EnvAction::Left: dc = -1; break;
            case EnvAction::Right: dc = 1; break;
            case EnvAction::Stay:
            case EnvAction::Clean: break;
        }
        if (dr == 0 && dc == 0) continue;
        const Coord from = agents_[a];
        const int r = from.row + dr, c = from.col + dc;
        if (blocked(r, c)) continue;
        agent_at_[index(from.row, from.col)] = -1;
        agents_[a] = {r, c};
        agent_at_[index(r, c)] = a;
    }

    // Apple consumption.
    for (int a = 0; a < cfg_.n_agents; ++a) {
        const int i = index(agents_[a].row, agents_[a].col);
        if (apple_[i]) {
            apple_[i] = 0;
            result.rewards.env_reward[a] += 1.0;
            apples_eaten_[a] += 1.0;
        }
    }

    // Cleaning beams: the agent's cell plus up to four cells upward, stopping
    // at walls.
    if (cfg_.game == SsdGame::Cleanup) {
        for (int a = 0; a < cfg_.n_agents; ++a) {
            if (env_actions[a] != EnvAction::Clean) continue;
            int r = agents_[a].row;
            const int c = agents_[a].col;
            for (int len = 0; len < 5; ++len) {
                if (!map_.in_bounds(r, c) || map_.wall(r, c)) break;
                const int i = index(r, c);
                if (waste_[i]) {
                    waste_[i] = 0;
                    waste_cleaned_[a] += 1.0;
                }
                --r;
            }
        }
    }

    // Incentive transfers.
    const double magnitude = cfg_.incentive_magnitude;
    for (int i = 0; i < cfg_.n_agents; ++i) {
        for (int j = 0; j < cfg_.n_agents; ++j) {
            if (i == j) continue;
            const auto kind = static_cast<IncentiveKind>(incentive_kinds(i, j));
            IncentiveRecord record;
            record.giver = i;
            record.receiver = j;
            record.kind = kind;
            if (kind != IncentiveKind::Zero) {
                const double signed_magnitude =
                    kind == IncentiveKind::Positive ? magnitude : -magnitude;
                record.delivered = cfg_.eta_e * signed_magnitude;
                record.cost = cfg_.eta_c * magnitude;
                result.rewards.incentive_received[j] += record.delivered;
                result.rewards.incentive_cost[i] += record.cost;
            }
            result.rewards.records.push_back(record);
        }
    }

    spawn_apples();
    spawn_waste();

    ++step_;
    result.done = done();
    return result;
}

Observation SsdEnv::observe(int agent) const {
    if (agent < 0 || agent >= cfg_.n_agents)
        throw std::invalid_argument("agent index out of range");
    const int v = cfg_.view_size;
    const int half = v / 2;
    Observation obs;
    obs.view = v;
    obs.cell.assign(v * v, 0);
    obs.other_agent.assign(v * v, 0);
    const Coord center = agents_[agent];
    for (int dr = -half; dr <= half; ++dr) {
        for (int dc = -half; dc <= half; ++dc) {
            const int r = center.row + dr, c = center.col + dc;
            const int o = (dr + half) * v + (dc + half);
            if (!map_.in_bounds(r, c) || map_.wall(r, c)) {
                obs.cell[o] = 1;
                continue;
            }
            const int i = index(r, c);
            if (apple_[i])
                obs.cell[o] = 2;
            else if (waste_[i])
                obs.cell[o] = 3;
            if (agent_at_[i] >= 0 && agent_at_[i] != agent) obs.other_agent[o] = 1;
        }
    }
    return obs;
}

}  // namespace dilemma::ssd
