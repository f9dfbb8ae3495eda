#pragma once

#include <Eigen/Dense>

namespace dilemma {

// Coordinate transforms between barycentric population points and the
// Cartesian frames used for trajectory/field export.
//
// Quaternary (regular tetrahedron) vertex layout:
//   P = (0, 0, 1)
//   N = (sqrt(2)/2, 0, 0)
//   C = (-sqrt(2)/4,  sqrt(6)/4, 0)
//   D = (-sqrt(2)/4, -sqrt(6)/4, 0)
// Ternary plots reuse the base face of the same tetrahedron (z dropped), so
// the C -> D -> N population cycle winds counterclockwise in the plane.

// Barycentric input order is (p_C, p_D, p_N, p_P); entries must be
// nonnegative and sum to 1 within 1e-12.
Eigen::Vector3d quaternary_to_cartesian(const Eigen::Vector4d& bary);

// Inverse transform via signed point-to-face distances; throws
// std::domain_error for points outside the tetrahedron.
Eigen::Vector4d cartesian_to_quaternary(const Eigen::Vector3d& point);

// Planar embedding of (p_C, p_D, p_N) on the equilateral base triangle.
Eigen::Vector2d ternary_to_planar(const Eigen::Vector3d& bary);

// Documented vertex positions of the ternary embedding, rows C, D, N.
Eigen::Matrix<double, 3, 2> ternary_vertices();

void validate_barycentric(const Eigen::Ref<const Eigen::VectorXd>& bary);

}  // namespace dilemma
