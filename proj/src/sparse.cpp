#include "cpmeig/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cpmeig {

SparseOperator SparseOperator::from_triplets(Eigen::Index rows, Eigen::Index cols,
                                             const std::vector<Triplet>& entries,
                                             double drop_tol) {
    Storage m(rows, cols);
    m.setFromTriplets(entries.begin(), entries.end());
    m.prune([drop_tol](Eigen::Index, Eigen::Index, double v) {
        return std::abs(v) >= drop_tol;
    });
    m.makeCompressed();
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::identity(Eigen::Index n) {
    Storage m(n, n);
    m.setIdentity();
    return SparseOperator(std::move(m));
}

Eigen::VectorXd SparseOperator::apply(const Eigen::VectorXd& u) const {
    if (u.size() != mat_.cols())
        throw DomainError("apply: vector length " + std::to_string(u.size()) +
                          " does not match operator columns " + std::to_string(mat_.cols()));
    return mat_ * u;
}

Eigen::VectorXcd SparseOperator::apply(const Eigen::VectorXcd& u) const {
    if (u.size() != mat_.cols())
        throw DomainError("apply: vector length mismatch");
    return mat_ * u;
}

Eigen::VectorXd SparseOperator::apply_transpose(const Eigen::VectorXd& u) const {
    if (u.size() != mat_.rows())
        throw DomainError("apply_transpose: vector length mismatch");
    return mat_.transpose() * u;
}

SparseOperator SparseOperator::multiply(const SparseOperator& rhs, double drop_tol) const {
    if (mat_.cols() != rhs.mat_.rows())
        throw DomainError("multiply: inner dimensions disagree");
    Storage prod = mat_ * rhs.mat_;
    prod.prune([drop_tol](Eigen::Index, Eigen::Index, double v) {
        return std::abs(v) >= drop_tol;
    });
    prod.makeCompressed();
    return SparseOperator(std::move(prod));
}

SparseOperator SparseOperator::add(const SparseOperator& rhs, double drop_tol) const {
    if (mat_.rows() != rhs.mat_.rows() || mat_.cols() != rhs.mat_.cols())
        throw DomainError("add: dimensions disagree");
    Storage sum = mat_ + rhs.mat_;
    sum.prune([drop_tol](Eigen::Index, Eigen::Index, double v) {
        return std::abs(v) >= drop_tol;
    });
    sum.makeCompressed();
    return SparseOperator(std::move(sum));
}

SparseOperator SparseOperator::scaled(double s) const {
    Storage m = mat_ * s;
    return SparseOperator(std::move(m));
}

Eigen::VectorXd SparseOperator::square_diagonal() const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(mat_.rows());
    for (Eigen::Index i = 0; i < mat_.rows(); ++i) {
        if (i < mat_.cols()) d(i) = mat_.coeff(i, i);
    }
    return d;
}

SparseOperator SparseOperator::without_square_diagonal() const {
    Storage m = mat_;
    for (Eigen::Index i = 0; i < m.rows() && i < m.cols(); ++i) {
        if (m.coeff(i, i) != 0.0) m.coeffRef(i, i) = 0.0;
    }
    m.prune([](Eigen::Index, Eigen::Index, double v) { return v != 0.0; });
    m.makeCompressed();
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::square_diagonal_matrix() const {
    Eigen::VectorXd d = square_diagonal();
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(d.size()));
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d(i) != 0.0) trips.emplace_back(i, i, d(i));
    }
    return from_triplets(mat_.rows(), mat_.rows(), trips, 0.0);
}

Eigen::VectorXd SparseOperator::row_sums() const {
    return mat_ * Eigen::VectorXd::Ones(mat_.cols());
}

SparseOperator SparseOperator::square_block() const {
    Eigen::Index k = std::min(mat_.rows(), mat_.cols());
    Storage blk = mat_.topRows(k).leftCols(k);
    blk.makeCompressed();
    return SparseOperator(std::move(blk));
}

double SparseOperator::max_abs_difference(const SparseOperator& other) const {
    if (rows() != other.rows() || cols() != other.cols())
        throw DomainError("max_abs_difference: dimensions disagree");
    Storage diff = mat_ - other.mat_;
    double worst = 0.0;
    for (Eigen::Index r = 0; r < diff.outerSize(); ++r) {
        for (Storage::InnerIterator it(diff, r); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    return worst;
}

void write_matrix_market(const SparseOperator& op, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << op.rows() << " " << op.cols() << " " << op.nonzeros() << "\n";
    char buf[64];
    const auto& m = op.matrix();
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        for (SparseOperator::Storage::InnerIterator it(m, r); it; ++it) {
            std::snprintf(buf, sizeof(buf), "%.17g", it.value());
            out << (it.row() + 1) << " " << (it.col() + 1) << " " << buf << "\n";
        }
    }
}

SparseOperator read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
        throw ConfigError(path + ": missing MatrixMarket banner");
    if (line.find("coordinate") == std::string::npos || line.find("real") == std::string::npos)
        throw ConfigError(path + ": only coordinate real matrices are supported");
    do {
        if (!std::getline(in, line)) throw ConfigError(path + ": truncated header");
    } while (!line.empty() && line[0] == '%');
    std::istringstream hdr(line);
    Eigen::Index rows = 0, cols = 0, nnz = 0;
    if (!(hdr >> rows >> cols >> nnz)) throw ConfigError(path + ": bad size line");
    std::vector<SparseOperator::Triplet> trips;
    trips.reserve(static_cast<std::size_t>(nnz));
    for (Eigen::Index k = 0; k < nnz; ++k) {
        Eigen::Index i = 0, j = 0;
        double v = 0.0;
        if (!(in >> i >> j >> v)) throw ConfigError(path + ": truncated entries");
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw ConfigError(path + ": entry index out of range");
        trips.emplace_back(i - 1, j - 1, v);
    }
    return SparseOperator::from_triplets(rows, cols, trips, 0.0);
}

} // namespace cpmeig
