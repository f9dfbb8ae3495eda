#include "dilemma/ssd/env.hpp"

#include "doctest.h"

#include <cmath>

using namespace dilemma::ssd;

namespace {

std::string fixture(const std::string& name) {
    return std::string(DILEMMA_TESTS_DATA_DIR) + "/" + name;
}

EnvConfig mini_config(int agents = 2) {
    EnvConfig cfg;
    cfg.game = SsdGame::Cleanup;
    cfg.rows = 6;
    cfg.cols = 8;
    cfg.n_agents = agents;
    cfg.view_size = 5;
    cfg.max_steps = 40;
    cfg.map_path = fixture("mini_cleanup.txt");
    return cfg;
}

std::vector<EnvAction> all_stay(int n) {
    return std::vector<EnvAction>(n, EnvAction::Stay);
}

Eigen::MatrixXi no_incentives(int n) { return Eigen::MatrixXi::Constant(n, n, 1); }

}  // namespace

TEST_CASE("cleanup defaults conform to the per-population table") {
    const EnvConfig c3 = EnvConfig::cleanup_defaults(3);
    CHECK(c3.rows == 10);
    CHECK(c3.cols == 10);
    CHECK(c3.view_size == 7);
    CHECK(c3.max_steps == 50);
    CHECK(c3.apple_respawn_prob == 0.3);
    CHECK(c3.depletion_threshold == 0.4);
    CHECK(c3.restoration_threshold == 0.0);
    CHECK(c3.waste_spawn_prob == 0.5);

    const EnvConfig c5 = EnvConfig::cleanup_defaults(5);
    CHECK(c5.cols == 25);
    CHECK(c5.rows == 18);
    CHECK(c5.view_size == 15);
    CHECK(c5.max_steps == 100);
    CHECK(c5.apple_respawn_prob == 0.05);
    CHECK(c5.depletion_threshold == 0.99);
    CHECK(c5.waste_spawn_prob == 0.05);

    const EnvConfig c10 = EnvConfig::cleanup_defaults(10);
    CHECK(c10.cols == 48);
    CHECK(c10.rows == 18);
    CHECK(c10.view_size == 15);
    CHECK(c10.max_steps == 100);
    CHECK(c10.apple_respawn_prob == 0.05);
    CHECK(c10.depletion_threshold == 0.99);
    CHECK(c10.waste_spawn_prob == 0.05);

    // all three shipped maps load and validate against their configs
    for (int n : {3, 5, 10}) {
        const EnvConfig cfg = EnvConfig::cleanup_defaults(n);
        CHECK_NOTHROW(SsdEnv{cfg});
    }
}

TEST_CASE("reset: determinism and waste just beyond the threshold") {
    const EnvConfig cfg = EnvConfig::cleanup_defaults(3);
    SsdEnv a(cfg), b(cfg);
    a.reset(99);
    b.reset(99);
    CHECK(a.agent_positions() == b.agent_positions());
    CHECK(a.waste_count() == b.waste_count());
    for (int r = 0; r < cfg.rows; ++r)
        for (int c = 0; c < cfg.cols; ++c) CHECK(a.has_waste(r, c) == b.has_waste(r, c));

    const int sites = static_cast<int>(a.map().waste_sites.size());
    CHECK(a.waste_density() > cfg.depletion_threshold);
    // smallest count strictly above: one fewer would not exceed the threshold
    CHECK((a.waste_count() - 1.0) / sites <= cfg.depletion_threshold);
    CHECK(a.apple_count() == 0);

    SsdEnv c(cfg);
    c.reset(100);
    bool differs = c.agent_positions() != a.agent_positions();
    for (int r = 0; r < cfg.rows && !differs; ++r)
        for (int col = 0; col < cfg.cols && !differs; ++col)
            differs = a.has_waste(r, col) != c.has_waste(r, col);
    CHECK(differs);
}

TEST_CASE("harvest reset: apples on initial sites, no waste anywhere") {
    const EnvConfig cfg = EnvConfig::harvest_defaults(5);
    SsdEnv env(cfg);
    env.reset(7);
    CHECK(env.waste_count() == 0);
    CHECK(env.apple_count() ==
          static_cast<int>(std::count(env.map().apple_initial.begin(),
                                      env.map().apple_initial.end(), true)));
}

TEST_CASE("idle step changes nothing but the counter when spawning is impossible") {
    EnvConfig cfg = mini_config();
    cfg.apple_respawn_prob = 0.0;
    cfg.waste_spawn_prob = 0.0;
    SsdEnv env(cfg);
    env.reset(3);
    const auto before_agents = env.agent_positions();
    const int before_apples = env.apple_count();
    const int before_waste = env.waste_count();
    const auto result = env.step(all_stay(2), no_incentives(2));
    CHECK(env.step_count() == 1);
    CHECK(env.agent_positions() == before_agents);
    CHECK(env.apple_count() == before_apples);
    CHECK(env.waste_count() == before_waste);
    CHECK(result.rewards.env_reward.sum() == 0.0);
    CHECK_FALSE(result.done);
}

TEST_CASE("movement: walls block, collisions resolve by index priority") {
    EnvConfig cfg = mini_config();
    cfg.apple_respawn_prob = 0.0;
    cfg.waste_spawn_prob = 0.0;
    SsdEnv env(cfg);
    env.reset(1);
    // Spawns are the two 'S' cells at (2,3) and (3,3) in some seeded order.
    auto pos = env.agent_positions();
    const int upper = pos[0].row == 2 ? 0 : 1;
    const int lower = 1 - upper;

    // Both try to move into the same free cell (3,4)->? upper moves down?
    // Instead: lower moves up into upper's cell while upper stays: blocked.
    std::vector<EnvAction> acts(2, EnvAction::Stay);
    acts[lower] = EnvAction::Up;
    env.step(acts, no_incentives(2));
    CHECK(env.agent_positions()[lower] == pos[lower]);

    // Upper vacates; in the same tick the lower agent may enter only if its
    // index is higher (processed after the move-out).
    acts[upper] = EnvAction::Right;
    acts[lower] = EnvAction::Up;
    env.step(acts, no_incentives(2));
    const auto now = env.agent_positions();
    CHECK(now[upper].col == pos[upper].col + 1);
    if (lower > upper) {
        CHECK(now[lower] == pos[upper]);  // took the vacated cell
    } else {
        CHECK(now[lower] == pos[lower]);  // processed first, still blocked
    }
}

TEST_CASE("cleaning reopens apple growth and apples are eaten on entry") {
    EnvConfig cfg = mini_config(1);
    cfg.apple_respawn_prob = 1.0;
    cfg.waste_spawn_prob = 0.0;
    cfg.depletion_threshold = 0.9;    // reset fills all 4 waste cells
    cfg.restoration_threshold = 0.5;  // full growth once half the waste is gone
    SsdEnv env(cfg);
    env.reset(12);
    REQUIRE(env.waste_count() == 4);
    CHECK(env.apple_count() == 0);  // growth suppressed above the threshold

    // walk onto the waste column (waste is walkable) and fire the beam
    auto acts = all_stay(1);
    acts[0] = EnvAction::Left;
    while (env.agent_positions()[0].col > 1) env.step(acts, no_incentives(1));
    const int before = env.waste_count();
    acts[0] = EnvAction::Clean;
    env.step(acts, no_incentives(1));
    CHECK(env.waste_count() < before);
    CHECK(env.waste_cleaned()[0] > 0.0);
    CHECK(env.waste_density() < cfg.depletion_threshold);

    // growth factor is now 1, so every empty apple cell spawned this tick
    CHECK(env.apple_count() == 4);

    // walk right to the apple column; entering the cell consumes the apple
    acts[0] = EnvAction::Right;
    double eaten = 0.0;
    for (int t = 0; t < 5 && !env.done(); ++t) {
        const auto r = env.step(acts, no_incentives(1));
        eaten += r.rewards.env_reward[0];
    }
    CHECK(eaten == 1.0);  // exactly one apple on the walked row
    CHECK(env.apples_eaten()[0] == 1.0);
}

TEST_CASE("incentive transfer example and conservation") {
    EnvConfig cfg = mini_config();
    cfg.eta_e = 1.0;
    cfg.eta_c = 0.1;
    cfg.incentive_magnitude = 1.0;
    cfg.apple_respawn_prob = 0.0;
    cfg.waste_spawn_prob = 0.0;
    SsdEnv env(cfg);
    env.reset(5);
    Eigen::MatrixXi inc = no_incentives(2);
    inc(0, 1) = static_cast<int>(IncentiveKind::Positive);
    const auto result = env.step(all_stay(2), inc);
    CHECK(result.rewards.incentive_received[1] == 1.0);
    CHECK(result.rewards.incentive_cost[0] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(result.rewards.incentive_received[0] == 0.0);
    CHECK(result.rewards.incentive_cost[1] == 0.0);

    // conservation over records
    double delivered = 0.0, signed_sent = 0.0, cost = 0.0, magnitude_total = 0.0;
    for (const auto& rec : result.rewards.records) {
        delivered += rec.delivered;
        cost += rec.cost;
        if (rec.kind == IncentiveKind::Positive) {
            signed_sent += cfg.incentive_magnitude;
            magnitude_total += cfg.incentive_magnitude;
        }
        if (rec.kind == IncentiveKind::Negative) {
            signed_sent -= cfg.incentive_magnitude;
            magnitude_total += cfg.incentive_magnitude;
        }
        if (rec.kind == IncentiveKind::Zero) {
            CHECK(rec.delivered == 0.0);
            CHECK(rec.cost == 0.0);
        }
    }
    CHECK(delivered == doctest::Approx(cfg.eta_e * signed_sent).epsilon(1e-15));
    CHECK(cost == doctest::Approx(cfg.eta_c * magnitude_total).epsilon(1e-15));
}

TEST_CASE("observations: center, padding and cross-agent consistency") {
    const EnvConfig cfg = EnvConfig::cleanup_defaults(3);
    SsdEnv env(cfg);
    env.reset(21);
    const auto obs = env.observe(0);
    REQUIRE(obs.view == 7);
    REQUIRE(obs.cell.size() == 49);

    // out-of-map padding: an agent near the wall sees wall codes there
    // (spawns are interior here, so check a synthetic walk to the corner)
    EnvConfig mini = mini_config(1);
    mini.apple_respawn_prob = 0.0;
    mini.waste_spawn_prob = 0.0;
    SsdEnv small(mini);
    small.reset(2);
    auto acts = all_stay(1);
    acts[0] = EnvAction::Up;
    small.step(acts, no_incentives(1));
    const auto top = small.observe(0);
    // top row of the window points above the map: all wall
    for (int c = 0; c < top.view; ++c) CHECK(top.cell[c] == 1);

    // cross-agent consistency: overlapping windows describe one shared grid
    const auto o0 = env.observe(0);
    const auto o1 = env.observe(1);
    const auto p0 = env.agent_positions()[0];
    const auto p1 = env.agent_positions()[1];
    const int half = cfg.view_size / 2;
    for (int dr = -half; dr <= half; ++dr) {
        for (int dc = -half; dc <= half; ++dc) {
            const int r = p0.row + dr, c = p0.col + dc;
            const int dr1 = r - p1.row, dc1 = c - p1.col;
            if (std::abs(dr1) > half || std::abs(dc1) > half) continue;
            const int i0 = (dr + half) * cfg.view_size + (dc + half);
            const int i1 = (dr1 + half) * cfg.view_size + (dc1 + half);
            CHECK(o0.cell[i0] == o1.cell[i1]);
        }
    }
}

TEST_CASE("episode replay from seed and action log is bit-exact") {
    const EnvConfig cfg = EnvConfig::cleanup_defaults(3);
    SsdEnv env(cfg);
    env.reset(77);
    auto rng = std::mt19937_64{12345};
    std::vector<std::vector<EnvAction>> action_log;
    std::vector<Eigen::MatrixXi> incentive_log;
    std::vector<double> reward_log;
    while (!env.done()) {
        std::vector<EnvAction> acts(cfg.n_agents);
        for (int a = 0; a < cfg.n_agents; ++a)
            acts[a] = static_cast<EnvAction>(rng() % kEnvActionCount);
        Eigen::MatrixXi inc(cfg.n_agents, cfg.n_agents);
        for (int i = 0; i < cfg.n_agents; ++i)
            for (int j = 0; j < cfg.n_agents; ++j)
                inc(i, j) = static_cast<int>(rng() % kIncentiveKindCount);
        action_log.push_back(acts);
        incentive_log.push_back(inc);
        const auto result = env.step(acts, inc);
        reward_log.push_back(result.rewards.env_reward.sum() +
                             result.rewards.incentive_received.sum() -
                             result.rewards.incentive_cost.sum());
    }
    const auto final_positions = env.agent_positions();
    const int final_apples = env.apple_count();
    const int final_waste = env.waste_count();

    SsdEnv replay(cfg);
    replay.reset(77);
    for (std::size_t t = 0; t < action_log.size(); ++t) {
        const auto result = replay.step(action_log[t], incentive_log[t]);
        const double summary = result.rewards.env_reward.sum() +
                               result.rewards.incentive_received.sum() -
                               result.rewards.incentive_cost.sum();
        CHECK(summary == reward_log[t]);
    }
    CHECK(replay.agent_positions() == final_positions);
    CHECK(replay.apple_count() == final_apples);
    CHECK(replay.waste_count() == final_waste);
}

TEST_CASE("apple accounting: spawns and consumption only") {
    const EnvConfig cfg = EnvConfig::harvest_defaults(5);
    SsdEnv env(cfg);
    env.reset(9);
    auto rng = std::mt19937_64{5};
    int apples = env.apple_count();
    double eaten_total = 0.0;
    while (!env.done()) {
        std::vector<EnvAction> acts(cfg.n_agents);
        for (int a = 0; a < cfg.n_agents; ++a)
            acts[a] = static_cast<EnvAction>(rng() % 5);  // no clean in harvest walk
        const auto result = env.step(acts, no_incentives(cfg.n_agents));
        const double eaten = result.rewards.env_reward.sum();
        eaten_total += eaten;
        const int now = env.apple_count();
        // apples decrease only by consumption; any other change is a spawn
        CHECK(now >= apples - static_cast<int>(eaten));
        apples = now;
    }
    CHECK(env.apples_eaten().sum() == eaten_total);
}

TEST_CASE("harvest spawn probabilities follow the neighbor table (smoke)") {
    EnvConfig cfg;
    cfg.game = SsdGame::Harvest;
    cfg.rows = 21;
    cfg.cols = 44;
    cfg.n_agents = 1;
    cfg.view_size = 5;
    cfg.max_steps = 25;
    cfg.map_path = fixture("audit_harvest.txt");
    SsdEnv env(cfg);

    std::array<long, 4> eligible{0, 0, 0, 0};
    std::array<long, 4> spawned{0, 0, 0, 0};
    for (int episode = 0; episode < 800; ++episode) {
        env.reset(1000 + episode);
        while (!env.done()) {
            // pre-step eligibility snapshot
            std::vector<std::pair<int, int>> sites;  // linear index, bucket
            for (const auto& c : env.map().apple_sites) {
                if (env.has_apple(c.row, c.col)) continue;
                const int bucket = std::min(env.apple_neighbors(c.row, c.col), 3);
                sites.emplace_back(c.row * cfg.cols + c.col, bucket);
            }
            env.step(all_stay(1), no_incentives(1));
            for (const auto& [idx, bucket] : sites) {
                ++eligible[bucket];
                if (env.has_apple(idx / cfg.cols, idx % cfg.cols)) ++spawned[bucket];
            }
        }
    }
    CHECK(spawned[0] == 0);
    for (int bucket : {1, 2, 3}) {
        REQUIRE(eligible[bucket] > 20000);
        const double freq =
            static_cast<double>(spawned[bucket]) / static_cast<double>(eligible[bucket]);
        CHECK(std::abs(freq - cfg.harvest_spawn_prob[bucket]) < 0.01);
    }
}

TEST_CASE("config validation rejects bad settings") {
    EnvConfig cfg = mini_config();
    cfg.view_size = 6;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = mini_config();
    cfg.depletion_threshold = 1.2;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = mini_config();
    cfg.n_agents = 50;  // more agents than spawn points
    CHECK_THROWS_AS(SsdEnv{cfg}, std::invalid_argument);
}
