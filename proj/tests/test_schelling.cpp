#include "dilemma/schelling.hpp"

#include "doctest.h"

using namespace dilemma;

namespace {
GameSpec defaults(Variant v) {
    GameSpec s;
    s.variant = v;
    s.n = 10;
    s.b = 3.0;
    s.c = 1.0;
    s.sigma = 1.0;
    s.p = 2.0;
    s.k = 0.35;
    s.alpha = 1.0;
    return s;
}
}  // namespace

TEST_CASE("CDN focal C versus D at m = 5") {
    const auto curves =
        schelling_curves(defaults(Variant::CDN), Strategy::Contribute, Strategy::Defect);
    REQUIRE(curves.others_on_a.size() == 10);
    CHECK(curves.payoff_a[5] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(curves.payoff_b[5] == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("full cooperation pays b - c") {
    for (Variant v : {Variant::CDN, Variant::CDNP, Variant::CDNPA}) {
        const GameSpec s = defaults(v);
        const auto curves = schelling_curves(s, Strategy::Contribute, Strategy::Defect);
        CHECK(curves.payoff_a[curves.others_on_a.size() - 1] ==
              doctest::Approx(s.b - s.c).epsilon(1e-15));
    }
}

TEST_CASE("uniform second-order gap with fixed defectors") {
    const GameSpec s = defaults(Variant::CDNP);
    const auto curves = schelling_curves(s, Strategy::Punish, Strategy::Contribute,
                                         {{Strategy::Defect, 3}});
    REQUIRE(curves.others_on_a.size() == 7);  // n - 1 - 3 free others
    for (std::size_t m = 0; m < curves.others_on_a.size(); ++m) {
        CHECK(curves.payoff_b[m] - curves.payoff_a[m] ==
              doctest::Approx(s.k * 3.0 / s.n).epsilon(1e-12));
    }
}

TEST_CASE("first-order dilemma witness: D strictly above C") {
    const GameSpec s = defaults(Variant::CDN);
    const auto curves = schelling_curves(s, Strategy::Contribute, Strategy::Defect);
    for (std::size_t m = 0; m < curves.others_on_a.size(); ++m) {
        // everyone participates, so the defection gap is c - b/n
        CHECK(curves.payoff_b[m] - curves.payoff_a[m] ==
              doctest::Approx(s.c - s.b / s.n).epsilon(1e-12));
        CHECK(curves.payoff_b[m] > curves.payoff_a[m]);
    }
}

TEST_CASE("inconsistent focal or fixed inputs are rejected") {
    const GameSpec s = defaults(Variant::CDN);
    CHECK_THROWS_AS(schelling_curves(s, Strategy::Punish, Strategy::Defect),
                    std::invalid_argument);
    CHECK_THROWS_AS(schelling_curves(s, Strategy::Contribute, Strategy::Contribute),
                    std::invalid_argument);
    CHECK_THROWS_AS(schelling_curves(s, Strategy::Contribute, Strategy::Defect,
                                     {{Strategy::Abstain, 10}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(schelling_curves(s, Strategy::Contribute, Strategy::Defect,
                                     {{Strategy::Defect, 2}}),
                    std::invalid_argument);
}
