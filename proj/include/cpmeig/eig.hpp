#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cpmeig/band.hpp"
#include "cpmeig/sparse.hpp"

namespace cpmeig {

/// Eigenpairs of -op (so Laplace-Beltrami eigenvalues come out nonnegative),
/// sorted by real part ascending, with explicit residuals
/// |(-op) v - lambda v| / |v| per pair.
struct SpectralResult {
    Eigen::VectorXcd eigenvalues;
    Eigen::MatrixXcd eigenvectors; ///< columns, normalized
    std::string method;            ///< "dense" or "arnoldi"
    double shift = 0.0;
    Eigen::VectorXd residuals;
};

/// Full eigendecomposition of -op via Hessenberg reduction and QR iteration.
/// Guarded by a size cap; the residual bound is the contract, not the
/// factorization route.
SpectralResult dense_spectrum(const SparseOperator& op, int max_dense = 4000);

struct ArnoldiOptions {
    double tol = 1e-8;
    int max_restarts = 300;
    int krylov_dim = 0; ///< 0: max(2k + 10, 24)
};

/// Shift-invert Arnoldi for the k eigenvalues of -op nearest the shift.
/// Deterministic all-ones start vector, explicit residual checks, locked
/// deflation between restarts.  A singular factorization retries once with
/// the shift perturbed by 1e-8.
SpectralResult arnoldi_near_shift(const SparseOperator& op, int k, double shift,
                                  const ArnoldiOptions& options = {});

/// Partition of a spectrum into physical and spurious parts.
struct FilterReport {
    std::vector<int> kept;
    std::vector<int> discarded_near_cutoff; ///< within the window of 2*dim/dx^2
    std::vector<int> discarded_complex;     ///< relative imaginary part above tol
};

/// Drops eigenvalues near the regularization cutoff 2*dim/dx^2 (within
/// cutoff_window; pass a negative value for the default half-cutoff window)
/// and pairs with |Im| > imag_tol * max(1, |Re|).
FilterReport filter_spurious(const SpectralResult& result, double dx, int dim,
                             double imag_tol = 1e-6, double cutoff_window = -1.0);

/// 2-norm condition number via power iteration on op^T op and inverse power
/// iteration through a sparse LU.  Returns +infinity for singular operators.
double condition_number_2norm(const SparseOperator& op);

/// Evaluates a band vector at on-surface points through the interpolation
/// scheme.  Throws DomainError if a footprint leaves the band.
Eigen::VectorXcd sample_eigenfunction(const Band& band, int p, const std::vector<Vec3>& points,
                                      const Eigen::VectorXcd& band_vector);

/// True when every nonzero-weight footprint node of the point is a band
/// member, i.e. sample_eigenfunction can evaluate there.
bool footprint_in_band(const Band& band, int p, const Vec3& point);

/// Kept eigenvalues' real parts, ascending.
std::vector<double> kept_real_eigenvalues(const SpectralResult& result,
                                          const FilterReport& report);

} // namespace cpmeig
