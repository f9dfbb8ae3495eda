#include "dilemma/geometry.hpp"
#include "dilemma/rng.hpp"

#include "doctest.h"

#include <cmath>

using namespace dilemma;

namespace {
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt6 = std::sqrt(6.0);

Eigen::Vector4d random_bary4(std::mt19937_64& rng) {
    Eigen::Vector4d v;
    double sum = 0.0;
    for (int j = 0; j < 4; ++j) {
        v[j] = -std::log(u01(rng) + 1e-15);
        sum += v[j];
    }
    return v / sum;
}
}  // namespace

TEST_CASE("quaternary vertices map exactly to the documented coordinates") {
    const Eigen::Vector3d p = quaternary_to_cartesian(Eigen::Vector4d(0, 0, 0, 1));
    CHECK(p == Eigen::Vector3d(0, 0, 1));
    const Eigen::Vector3d n = quaternary_to_cartesian(Eigen::Vector4d(0, 0, 1, 0));
    CHECK(n[0] == doctest::Approx(kSqrt2 / 2).epsilon(1e-15));
    CHECK(n[1] == 0.0);
    CHECK(n[2] == 0.0);
    const Eigen::Vector3d c = quaternary_to_cartesian(Eigen::Vector4d(1, 0, 0, 0));
    CHECK(c[0] == doctest::Approx(-kSqrt2 / 4).epsilon(1e-15));
    CHECK(c[1] == doctest::Approx(kSqrt6 / 4).epsilon(1e-15));
    const Eigen::Vector3d d = quaternary_to_cartesian(Eigen::Vector4d(0, 1, 0, 0));
    CHECK(d[0] == doctest::Approx(-kSqrt2 / 4).epsilon(1e-15));
    CHECK(d[1] == doctest::Approx(-kSqrt6 / 4).epsilon(1e-15));
}

TEST_CASE("quaternary centroid maps to the vertex average") {
    const Eigen::Vector3d c =
        quaternary_to_cartesian(Eigen::Vector4d(0.25, 0.25, 0.25, 0.25));
    CHECK(std::abs(c[0]) < 1e-15);
    CHECK(std::abs(c[1]) < 1e-15);
    CHECK(c[2] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("cartesian to quaternary fixed cases") {
    const Eigen::Vector4d apex = cartesian_to_quaternary(Eigen::Vector3d(0, 0, 1));
    CHECK((apex - Eigen::Vector4d(0, 0, 0, 1)).lpNorm<Eigen::Infinity>() < 1e-15);
    const Eigen::Vector4d c =
        cartesian_to_quaternary(Eigen::Vector3d(-kSqrt2 / 4, kSqrt6 / 4, 0));
    CHECK((c - Eigen::Vector4d(1, 0, 0, 0)).lpNorm<Eigen::Infinity>() < 1e-15);
}

TEST_CASE("points outside the tetrahedron are rejected") {
    CHECK_THROWS_AS(cartesian_to_quaternary(Eigen::Vector3d(0, 0, 1.5)),
                    std::domain_error);
    CHECK_THROWS_AS(cartesian_to_quaternary(Eigen::Vector3d(1.0, 1.0, 0.2)),
                    std::domain_error);
}

TEST_CASE("round trip is the identity to 1e-12 on 1000 random points") {
    auto rng = make_rng(42);
    for (int t = 0; t < 1000; ++t) {
        const Eigen::Vector4d b = random_bary4(rng);
        const Eigen::Vector4d back = cartesian_to_quaternary(quaternary_to_cartesian(b));
        CHECK((b - back).lpNorm<Eigen::Infinity>() < 1e-12);
    }
}

TEST_CASE("quaternary transform is affine on convex combinations") {
    auto rng = make_rng(7);
    for (int t = 0; t < 200; ++t) {
        const Eigen::Vector4d a = random_bary4(rng);
        const Eigen::Vector4d b = random_bary4(rng);
        const double w = u01(rng);
        const Eigen::Vector4d mix = w * a + (1.0 - w) * b;
        const Eigen::Vector3d lhs = quaternary_to_cartesian(mix);
        const Eigen::Vector3d rhs =
            w * quaternary_to_cartesian(a) + (1.0 - w) * quaternary_to_cartesian(b);
        CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-12);
    }
}

TEST_CASE("ternary embedding: vertices, centroid, midpoints") {
    const auto verts = ternary_vertices();
    CHECK((ternary_to_planar(Eigen::Vector3d(1, 0, 0)).transpose() - verts.row(0))
              .lpNorm<Eigen::Infinity>() < 1e-15);
    const Eigen::Vector2d centroid = ternary_to_planar(
        Eigen::Vector3d(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0));
    CHECK((centroid.transpose() - verts.colwise().mean()).lpNorm<Eigen::Infinity>() <
          1e-15);
    const Eigen::Vector2d mid = ternary_to_planar(Eigen::Vector3d(0.5, 0.5, 0.0));
    CHECK((mid.transpose() - 0.5 * (verts.row(0) + verts.row(1)))
              .lpNorm<Eigen::Infinity>() < 1e-15);
    // Equilateral side lengths
    const double ab = (verts.row(0) - verts.row(1)).norm();
    const double bc = (verts.row(1) - verts.row(2)).norm();
    const double ca = (verts.row(2) - verts.row(0)).norm();
    CHECK(ab == doctest::Approx(bc).epsilon(1e-14));
    CHECK(bc == doctest::Approx(ca).epsilon(1e-14));
}

TEST_CASE("invalid barycentric points are rejected") {
    CHECK_THROWS_AS(quaternary_to_cartesian(Eigen::Vector4d(0.5, 0.5, 0.5, -0.5)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ternary_to_planar(Eigen::Vector3d(0.5, 0.4, 0.2)),
                    std::invalid_argument);
}
