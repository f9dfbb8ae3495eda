#include "dilemma/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace dilemma {

namespace {
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt6 = std::sqrt(6.0);
constexpr double kBaryTol = 1e-12;
constexpr double kDomainTol = 1e-9;
}  // namespace

void validate_barycentric(const Eigen::Ref<const Eigen::VectorXd>& bary) {
    if (!bary.allFinite() || (bary.array() < -kBaryTol).any())
        throw std::invalid_argument("barycentric point has a negative or non-finite entry");
    if (std::abs(bary.sum() - 1.0) > kBaryTol)
        throw std::invalid_argument("barycentric point does not sum to 1 within 1e-12");
}

Eigen::Vector3d quaternary_to_cartesian(const Eigen::Vector4d& bary) {
    validate_barycentric(bary);
    const double pc = bary[0], pd = bary[1], pp = bary[3];
    Eigen::Vector3d out;
    out[0] = kSqrt2 / 4.0 * (2.0 - 3.0 * pd - 3.0 * pc - 2.0 * pp);
    // The y component is fixed by the vertex list (C maps to +sqrt(6)/4).
    out[1] = kSqrt6 / 4.0 * (pc - pd);
    out[2] = pp;
    return out;
}

Eigen::Vector4d cartesian_to_quaternary(const Eigen::Vector3d& point) {
    if (!point.allFinite())
        throw std::invalid_argument("cartesian point must be finite");
    const double x = point[0], y = point[1], z = point[2];
    // Signed distances to the faces opposite D, C; inside the tetrahedron all
    // four barycentric coordinates are nonnegative.
    Eigen::Vector4d bary;
    bary[1] = (1.0 - kSqrt2 * x - kSqrt6 * y - z) / 3.0;  // p_D
    bary[0] = (1.0 - kSqrt2 * x + kSqrt6 * y - z) / 3.0;  // p_C
    bary[3] = z;                                          // p_P
    bary[2] = 1.0 - bary[0] - bary[1] - bary[3];          // p_N
    if ((bary.array() < -kDomainTol).any())
        throw std::domain_error("cartesian point lies outside the tetrahedron");
    return bary.array().max(0.0);
}

Eigen::Matrix<double, 3, 2> ternary_vertices() {
    Eigen::Matrix<double, 3, 2> v;
    v << -kSqrt2 / 4.0, kSqrt6 / 4.0,   // C
        -kSqrt2 / 4.0, -kSqrt6 / 4.0,   // D
        kSqrt2 / 2.0, 0.0;              // N
    return v;
}

Eigen::Vector2d ternary_to_planar(const Eigen::Vector3d& bary) {
    validate_barycentric(bary);
    return ternary_vertices().transpose() * bary;
}

}  // namespace dilemma
