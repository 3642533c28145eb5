#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cpmeig/band.hpp"
#include "cpmeig/types.hpp"

namespace cpmeig {

/// Weights below this magnitude are treated as structural zeros: they may
/// reference nodes outside the band and are dropped at assembly.  Sits
/// between the 1e-14 matrix drop tolerance and the 1e-12 on-node snap.
inline constexpr double kSupportTol = 1e-13;

/// Barycentric Lagrange interpolation weights on equispaced nodes.  Returns
/// the vector w with sum(w) == 1 such that sum_j w_j f(nodes_j) reproduces
/// the degree-p interpolant at target.  A target within 1e-12 of a node
/// yields the exact unit vector.
Eigen::VectorXd barycentric_weights_1d(const Eigen::VectorXd& nodes, double target);

/// Interpolation footprint of a target point together with tensor-product
/// weights (one entry per footprint node, including zero-weight members).
struct WeightedFootprint {
    std::vector<MultiIndex> nodes;
    std::vector<double> weights;
};

WeightedFootprint extension_weights(const Vec3& target, const Grid& grid, int p);

} // namespace cpmeig
