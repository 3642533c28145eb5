#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cpmeig/errors.hpp"

namespace cpmeig {

/// Sparse real matrix used for the extension matrix, the grid Laplacian and
/// the assembled surface operators.  Thin value wrapper over a row-major
/// Eigen sparse matrix so assembly stays deterministic and the storage
/// format is pinned in one place.
class SparseOperator {
public:
    using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor>;
    using Triplet = Eigen::Triplet<double>;

    SparseOperator() = default;
    SparseOperator(Eigen::Index rows, Eigen::Index cols) : mat_(rows, cols) {}
    explicit SparseOperator(Storage m) : mat_(std::move(m)) { mat_.makeCompressed(); }

    // Builds from triplets, summing duplicates and dropping entries with
    // magnitude below drop_tol.
    static SparseOperator from_triplets(Eigen::Index rows, Eigen::Index cols,
                                        const std::vector<Triplet>& entries,
                                        double drop_tol = 1e-14);

    static SparseOperator identity(Eigen::Index n);

    Eigen::Index rows() const { return mat_.rows(); }
    Eigen::Index cols() const { return mat_.cols(); }
    Eigen::Index nonzeros() const { return mat_.nonZeros(); }

    const Storage& matrix() const { return mat_; }

    double coeff(Eigen::Index i, Eigen::Index j) const { return mat_.coeff(i, j); }

    /// Matrix-vector product; throws on dimension mismatch.
    Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
    Eigen::VectorXcd apply(const Eigen::VectorXcd& u) const;
    Eigen::VectorXd apply_transpose(const Eigen::VectorXd& u) const;

    /// Sparse product this * rhs with the assembly drop tolerance.
    SparseOperator multiply(const SparseOperator& rhs, double drop_tol = 1e-14) const;

    SparseOperator add(const SparseOperator& rhs, double drop_tol = 1e-14) const;
    SparseOperator scaled(double s) const;

    /// Diagonal of the leading square block, as a vector of length rows().
    Eigen::VectorXd square_diagonal() const;
    /// Copy with the leading square block's diagonal zeroed.
    SparseOperator without_square_diagonal() const;
    /// Diagonal matrix (rows x rows) built from the leading square diagonal.
    SparseOperator square_diagonal_matrix() const;

    Eigen::VectorXd row_sums() const;

    /// Leading min(rows, cols) square block from the top-left corner.
    SparseOperator square_block() const;

    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(mat_); }

    double max_abs_difference(const SparseOperator& other) const;

private:
    Storage mat_;
};

/// Matrix Market coordinate format, "real general" flavor.
void write_matrix_market(const SparseOperator& op, const std::string& path);
SparseOperator read_matrix_market(const std::string& path);

} // namespace cpmeig
