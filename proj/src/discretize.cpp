#include "cpmeig/discretize.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace cpmeig {

const char* bc_name(BcKind kind) {
    switch (kind) {
        case BcKind::none: return "none";
        case BcKind::neumann_homogeneous: return "neumann";
        case BcKind::dirichlet_homogeneous: return "dirichlet";
        case BcKind::naive_firstorder_neumann: return "neumann_naive";
        case BcKind::naive_firstorder_dirichlet: return "dirichlet_naive";
    }
    return "?";
}

BcKind bc_from_name(const std::string& name) {
    if (name == "none") return BcKind::none;
    if (name == "neumann") return BcKind::neumann_homogeneous;
    if (name == "dirichlet") return BcKind::dirichlet_homogeneous;
    if (name == "neumann_naive") return BcKind::naive_firstorder_neumann;
    if (name == "dirichlet_naive") return BcKind::naive_firstorder_dirichlet;
    throw ConfigError("unknown boundary condition '" + name +
                      "' (valid: none neumann dirichlet neumann_naive dirichlet_naive)");
}

namespace {

int worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("CPM_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v < 1024) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n) on the worker pool.  Each index owns its output
// slot, so the result is identical for any thread count.  The first worker
// exception is rethrown on the calling thread.
template <typename Fn>
void parallel_rows(int n, Fn&& fn) {
    int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                    if (failed.load(std::memory_order_relaxed)) return;
                    fn(i);
                }
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// Extension target and sign for one node under the given boundary treatment.
// sign 0 encodes a structurally zero row.
void resolve_target(const NodeGeo& g, const BcSpec& bc, Vec3& target, double& sign) {
    if (!g.ghost) {
        target = g.cp.point;
        sign = 1.0;
        return;
    }
    switch (bc.kind) {
        case BcKind::neumann_homogeneous:
            target = g.cpbar.point;
            sign = 1.0;
            return;
        case BcKind::dirichlet_homogeneous:
            target = g.cpbar.point;
            sign = -1.0;
            return;
        case BcKind::naive_firstorder_neumann:
            target = g.cp.point;
            sign = 1.0;
            return;
        case BcKind::naive_firstorder_dirichlet:
            sign = 0.0;
            return;
        case BcKind::none:
            throw ConfigError("ghost node present with bc=none; open surfaces need a "
                              "boundary condition");
    }
}

} // namespace

std::vector<std::pair<int, double>> extension_row(const Band& band, const Vec3& target, int p) {
    WeightedFootprint wf = extension_weights(target, band.grid, p);
    std::vector<std::pair<int, double>> row;
    row.reserve(wf.nodes.size());
    for (std::size_t i = 0; i < wf.nodes.size(); ++i) {
        int idx = band.index_of(wf.nodes[i]);
        if (idx < 0) {
            if (std::abs(wf.weights[i]) <= kSupportTol) continue;
            throw InternalError("extension_row: footprint node outside the band");
        }
        row.emplace_back(idx, wf.weights[i]);
    }
    return row;
}

SparseOperator build_extension_matrix(const Band& band, int p, const BcSpec& bc) {
    const int m = band.size();
    const int v = band.rim_size();
    if (!band.surface_open && bc.kind != BcKind::none)
        throw ConfigError("closed surfaces take bc=none");
    if (bc.kind == BcKind::none) {
        auto any_ghost = [](const std::vector<NodeGeo>& geo) {
            for (const auto& g : geo) {
                if (g.ghost) return true;
            }
            return false;
        };
        if (any_ghost(band.geo) || any_ghost(band.rim_geo))
            throw ConfigError("ghost node present with bc=none; open surfaces need a "
                              "boundary condition");
    }

    std::vector<std::vector<std::pair<int, double>>> rows(m + v);
    auto fill = [&](int r) {
        const NodeGeo& g = r < m ? band.geo[r] : band.rim_geo[r - m];
        Vec3 target = Vec3::Zero();
        double sign = 0.0;
        resolve_target(g, bc, target, sign);
        if (sign != 0.0) {
            rows[r] = extension_row(band, target, p);
            if (sign != 1.0) {
                for (auto& e : rows[r]) e.second *= sign;
            }
        }
    };
    parallel_rows(m + v, fill);

    std::vector<SparseOperator::Triplet> trips;
    for (int r = 0; r < m + v; ++r) {
        for (const auto& [c, w] : rows[r]) trips.emplace_back(r, c, w);
    }
    return SparseOperator::from_triplets(m + v, m, trips);
}

SparseOperator build_fd_laplacian(const Band& band, int q) {
    if (q != 2 && q != 4) throw ConfigError("finite-difference order q must be 2 or 4");
    const int m = band.size();
    const int v = band.rim_size();
    const int dim = band.grid.dim;
    const double inv_dx2 = 1.0 / (band.grid.dx * band.grid.dx);

    // Per-axis centered weights at offsets 0, +-1 (and +-2 for q=4).
    double w0 = 0.0, w1 = 0.0, w2 = 0.0;
    if (q == 2) {
        w0 = -2.0;
        w1 = 1.0;
    } else {
        w0 = -30.0 / 12.0;
        w1 = 16.0 / 12.0;
        w2 = -1.0 / 12.0;
    }

    auto column_of = [&](const MultiIndex& mi) {
        int idx = band.index_of(mi);
        if (idx >= 0) return idx;
        int rim = band.rim_index_of(mi);
        if (rim < 0) throw InternalError("build_fd_laplacian: stencil neighbor unresolved");
        return m + rim;
    };

    std::vector<SparseOperator::Triplet> trips;
    trips.reserve(static_cast<std::size_t>(m) * (1 + dim * q));
    for (int i = 0; i < m; ++i) {
        const MultiIndex& x = band.nodes[i];
        trips.emplace_back(i, i, dim * w0 * inv_dx2);
        for (int a = 0; a < dim; ++a) {
            for (int r = 1; r <= q / 2; ++r) {
                double w = (r == 1 ? w1 : w2) * inv_dx2;
                MultiIndex plus = x, minus = x;
                plus[a] += r;
                minus[a] -= r;
                trips.emplace_back(i, column_of(plus), w);
                trips.emplace_back(i, column_of(minus), w);
            }
        }
    }
    return SparseOperator::from_triplets(m, m + v, trips);
}

SparseOperator assemble_unstabilized(const SparseOperator& delta_h, const SparseOperator& E) {
    return delta_h.multiply(E);
}

SparseOperator assemble_stabilized(const SparseOperator& delta_h, const SparseOperator& E) {
    SparseOperator diag = delta_h.square_diagonal_matrix();
    SparseOperator off = delta_h.without_square_diagonal();
    return diag.add(off.multiply(E));
}

Eigen::VectorXd apply_operator(const SparseOperator& op, const Eigen::VectorXd& u) {
    return op.apply(u);
}

Eigen::VectorXd dirichlet_boundary_offset(
    const Band& band, const std::function<double(const Vec3&)>& boundary_value) {
    Eigen::VectorXd offset = Eigen::VectorXd::Zero(band.size());
    for (int i = 0; i < band.size(); ++i) {
        if (band.geo[i].ghost) offset(i) = 2.0 * boundary_value(band.geo[i].cp.point);
    }
    return offset;
}

} // namespace cpmeig
