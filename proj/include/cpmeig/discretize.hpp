#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "cpmeig/band.hpp"
#include "cpmeig/interp.hpp"
#include "cpmeig/sparse.hpp"

namespace cpmeig {

/// Boundary treatment for open surfaces.
enum class BcKind {
    none,                     ///< closed surfaces only
    neumann_homogeneous,      ///< mirror values at ghost points
    dirichlet_homogeneous,    ///< negated mirror values at ghost points
    naive_firstorder_neumann, ///< plain extension at ghost points
    naive_firstorder_dirichlet ///< zero rows at ghost points
};

struct BcSpec {
    BcKind kind = BcKind::none;
};

const char* bc_name(BcKind kind);
BcKind bc_from_name(const std::string& name);

/// Extension row for an arbitrary target point: footprint columns with
/// tensor-product barycentric weights, resolved against the band.  Throws
/// InternalError when a non-negligible weight refers to a node outside the
/// band (the closure guarantees this never happens for band/rim targets).
std::vector<std::pair<int, double>> extension_row(const Band& band, const Vec3& target, int p);

/// Extension matrix.  Rows 0..m-1 are the closest-point extension rows of
/// the band nodes; rows m.. serve the rim stencil points.  Ghost rows follow
/// the boundary treatment:
///   neumann_homogeneous  -> row targets the mirror point,
///   dirichlet_homogeneous -> negated mirror row,
///   naive_firstorder_neumann -> plain cp row,
///   naive_firstorder_dirichlet -> zero row.
SparseOperator build_extension_matrix(const Band& band, int p, const BcSpec& bc);

/// Centered finite-difference Laplacian of order q over the band rows.
/// Columns 0..m-1 address band nodes, columns m.. the rim stencil points,
/// so every row carries its complete stencil.
SparseOperator build_fd_laplacian(const Band& band, int q);

/// M~ = Delta_h * E, the plain embedded discretization.
SparseOperator assemble_unstabilized(const SparseOperator& delta_h, const SparseOperator& E);

/// M = diag(Delta_h) + (Delta_h - diag(Delta_h)) * E: the center value stays
/// un-extended, which realizes the split operator with eps = dx.
SparseOperator assemble_stabilized(const SparseOperator& delta_h, const SparseOperator& E);

Eigen::VectorXd apply_operator(const SparseOperator& op, const Eigen::VectorXd& u);

/// Affine correction for non-homogeneous Dirichlet data: 2*g(cp(x)) at ghost
/// band nodes, zero elsewhere.  Not part of the eigenproblem operators.
Eigen::VectorXd dirichlet_boundary_offset(const Band& band,
                                          const std::function<double(const Vec3&)>& boundary_value);

} // namespace cpmeig
