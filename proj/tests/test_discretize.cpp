#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cpmeig/discretize.hpp"
#include "cpmeig/geometry.hpp"

using namespace cpmeig;

namespace {

constexpr double kPi = std::numbers::pi;

Grid make_grid(double dx, int dim, const Vec3& origin = Vec3::Zero()) {
    Grid g;
    g.dx = dx;
    g.dim = dim;
    g.origin = origin;
    return g;
}

Band cosine_band(double dx, int p = 3, int q = 2) {
    static auto cosine = make_cosine_curve();
    StencilSpec spec;
    spec.p = p;
    spec.q = q;
    return build_band(*cosine, make_grid(dx, 2), spec);
}

} // namespace

TEST_CASE("barycentric weights on equispaced nodes") {
    Eigen::VectorXd nodes(2);
    nodes << 0, 1;
    Eigen::VectorXd w = barycentric_weights_1d(nodes, 0.5);
    CHECK(w(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(w(1) == doctest::Approx(0.5).epsilon(1e-14));

    Eigen::VectorXd nodes4(4);
    nodes4 << 0, 1, 2, 3;
    w = barycentric_weights_1d(nodes4, 2.0); // exact node hit
    CHECK(w(0) == 0.0);
    CHECK(w(1) == 0.0);
    CHECK(w(2) == 1.0);
    CHECK(w(3) == 0.0);

    // Midpoint weights, frozen from the 4x4 Vandermonde solve below.
    w = barycentric_weights_1d(nodes4, 1.5);
    CHECK(w(0) == doctest::Approx(-1.0 / 16).epsilon(1e-13));
    CHECK(w(1) == doctest::Approx(9.0 / 16).epsilon(1e-13));
    CHECK(w(2) == doctest::Approx(9.0 / 16).epsilon(1e-13));
    CHECK(w(3) == doctest::Approx(-1.0 / 16).epsilon(1e-13));

    // Independent oracle: weights must equal the Vandermonde solution
    // V^T w = [1, t, t^2, t^3] at any target.
    for (double target : {0.3, 1.5, 2.9}) {
        Eigen::VectorXd bw = barycentric_weights_1d(nodes4, target);
        Eigen::MatrixXd vt(4, 4);
        Eigen::VectorXd rhs(4);
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) vt(r, c) = std::pow(nodes4(c), r);
            rhs(r) = std::pow(target, r);
        }
        Eigen::VectorXd solved = vt.fullPivLu().solve(rhs);
        CHECK((bw - solved).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("extension rows sum to one and hit unit rows on nodes") {
    Band band = cosine_band(0.125);
    const int m = band.size();

    // A band node as its own target yields the unit row.
    Vec3 node_point = band.grid.node_point(band.nodes[m / 2]);
    auto row = extension_row(band, node_point, 3);
    double sum = 0.0;
    int nonzero = 0;
    for (const auto& [idx, w] : row) {
        sum += w;
        if (std::abs(w) > 1e-13) {
            ++nonzero;
            CHECK(idx == band.index_of(band.nodes[m / 2]));
            CHECK(w == doctest::Approx(1.0));
        }
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(nonzero == 1);

    // Bilinear cell-center row: four entries of 1/4.
    auto segment = make_segment(Vec3(-4, 0, 0), Vec3(4, 0, 0));
    StencilSpec spec;
    spec.p = 1;
    spec.q = 2;
    Grid grid = make_grid(1.0, 2, Vec3(0, -0.5, 0));
    Band flat = build_band(*segment, grid, spec);
    auto center_row = extension_row(flat, Vec3(0.5, 0.0, 0), 1);
    REQUIRE(center_row.size() == 4);
    for (const auto& [idx, w] : center_row) CHECK(w == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("extension matrix partition of unity per boundary treatment") {
    Band band = cosine_band(0.125);
    const int m = band.size();
    REQUIRE(band.ghost_count() > 0);

    for (BcKind kind : {BcKind::neumann_homogeneous, BcKind::dirichlet_homogeneous,
                        BcKind::naive_firstorder_neumann, BcKind::naive_firstorder_dirichlet}) {
        CAPTURE(bc_name(kind));
        SparseOperator E = build_extension_matrix(band, 3, BcSpec{kind});
        CHECK(E.rows() == m + band.rim_size());
        CHECK(E.cols() == m);
        Eigen::VectorXd sums = E.row_sums();
        for (int i = 0; i < m; ++i) {
            double expected = 1.0;
            if (band.geo[i].ghost) {
                if (kind == BcKind::dirichlet_homogeneous) expected = -1.0;
                if (kind == BcKind::naive_firstorder_dirichlet) expected = 0.0;
            }
            CHECK(sums(i) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("extension matrix rejects inconsistent boundary configs") {
    Band band = cosine_band(0.25);
    CHECK_THROWS_AS(build_extension_matrix(band, 3, BcSpec{BcKind::none}), ConfigError);

    auto circle = make_circle(1.0);
    StencilSpec spec;
    Band closed = build_band(*circle, make_grid(0.2, 2), spec);
    CHECK_THROWS_AS(build_extension_matrix(closed, 3, BcSpec{BcKind::dirichlet_homogeneous}),
                    ConfigError);
    SparseOperator E = build_extension_matrix(closed, 3, BcSpec{BcKind::none});
    Eigen::VectorXd sums = E.row_sums();
    for (Eigen::Index i = 0; i < sums.size(); ++i)
        CHECK(sums(i) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fd laplacian stencils") {
    // Interior row of the 2-D five-point stencil: center -4, neighbors +1.
    auto circle = make_circle(1.0);
    StencilSpec spec;
    Grid grid = make_grid(1.0 / 8, 2);
    Band band = build_band(*circle, grid, spec);
    SparseOperator dh = build_fd_laplacian(band, 2);
    CHECK(dh.rows() == band.size());
    CHECK(dh.cols() == band.size() + band.rim_size());
    const double inv_dx2 = 64.0;
    for (int i = 0; i < band.size(); ++i) {
        CHECK(dh.coeff(i, i) == doctest::Approx(-4.0 * inv_dx2));
    }
    Eigen::VectorXd sums = dh.row_sums();
    for (int i = 0; i < band.size(); ++i) CHECK(sums(i) == doctest::Approx(0.0).epsilon(1e-9));

    // Second difference along x is exact on quadratics: f(x) = x^2 -> 2
    // (the y-direction contributes nothing for a function of x alone).
    auto segment = make_segment(Vec3(-6, 0, 0), Vec3(6, 0, 0));
    StencilSpec spec1;
    spec1.p = 1;
    spec1.q = 2;
    Grid g1 = make_grid(1.0, 2);
    Band line = build_band(*segment, g1, spec1);
    SparseOperator lap1 = build_fd_laplacian(line, 2);
    Eigen::VectorXd f(line.size() + line.rim_size());
    auto fill = [&](const MultiIndex& mi, int slot) {
        double x = g1.node_point(mi).x();
        f(slot) = x * x;
    };
    for (int i = 0; i < line.size(); ++i) fill(line.nodes[i], i);
    for (int r = 0; r < line.rim_size(); ++r) fill(line.rim_nodes[r], line.size() + r);
    Eigen::VectorXd lap_f = lap1.apply(f);
    for (int i = 0; i < line.size(); ++i) {
        if (std::abs(g1.node_point(line.nodes[i]).x()) < 5.0)
            CHECK(lap_f(i) == doctest::Approx(2.0).epsilon(1e-11));
    }

    // Fourth-order stencil is exact on quartics: f(x) = x^4 -> 12 x^2.
    StencilSpec spec4;
    spec4.p = 5;
    spec4.q = 4;
    Band line4 = build_band(*segment, g1, spec4);
    SparseOperator lap4 = build_fd_laplacian(line4, 4);
    Eigen::VectorXd f4(line4.size() + line4.rim_size());
    auto fill4 = [&](const MultiIndex& mi, int slot) {
        double x = g1.node_point(mi).x();
        f4(slot) = x * x * x * x;
    };
    for (int i = 0; i < line4.size(); ++i) fill4(line4.nodes[i], i);
    for (int r = 0; r < line4.rim_size(); ++r) fill4(line4.rim_nodes[r], line4.size() + r);
    Eigen::VectorXd lap_f4 = lap4.apply(f4);
    for (int i = 0; i < line4.size(); ++i) {
        double x = g1.node_point(line4.nodes[i]).x();
        if (std::abs(x) < 4.0) CHECK(lap_f4(i) == doctest::Approx(12.0 * x * x).epsilon(1e-10));
    }

    CHECK_THROWS_AS(build_fd_laplacian(band, 3), ConfigError);
}

TEST_CASE("assembly identities") {
    Band band = cosine_band(0.125);
    const int m = band.size();
    BcSpec bc{BcKind::dirichlet_homogeneous};
    SparseOperator E = build_extension_matrix(band, 3, bc);
    SparseOperator dh = build_fd_laplacian(band, 2);
    SparseOperator M = assemble_stabilized(dh, E);
    SparseOperator Mt = assemble_unstabilized(dh, E);
    CHECK(M.rows() == m);
    CHECK(M.cols() == m);
    CHECK(Mt.rows() == m);
    CHECK(Mt.cols() == m);

    // The center value enters raw: M minus the extended off-center part is
    // exactly the diagonal of the FD operator.
    const double dx = band.grid.dx;
    SparseOperator off_part = dh.without_square_diagonal().multiply(E);
    SparseOperator center_part = M.add(off_part.scaled(-1.0));
    CHECK(center_part.max_abs_difference(dh.square_diagonal_matrix()) < 1e-9);
    for (int i = 0; i < m; ++i)
        CHECK(center_part.coeff(i, i) == doctest::Approx(-4.0 / (dx * dx)).epsilon(1e-12));

    // Stabilization identity M - M~ = diag(dh) (I - E) on the band block.
    SparseOperator lhs = M.add(Mt.scaled(-1.0));
    SparseOperator identity = SparseOperator::identity(m);
    SparseOperator i_minus_e = identity.add(E.square_block().scaled(-1.0));
    SparseOperator rhs = dh.square_diagonal_matrix().multiply(i_minus_e);
    CHECK(lhs.max_abs_difference(rhs) < 1e-9); // absolute, entries are O(1/dx^2)

    // E = identity makes both assemblies collapse to the Laplacian itself.
    SparseOperator eye_ext = SparseOperator::identity(m + band.rim_size());
    SparseOperator trimmed(Eigen::SparseMatrix<double, Eigen::RowMajor>(
        eye_ext.matrix().leftCols(m)));
    CHECK(assemble_unstabilized(dh, trimmed).max_abs_difference(
              assemble_stabilized(dh, trimmed)) < 1e-12);
}

TEST_CASE("constant annihilation on closed surfaces") {
    auto egg = make_egg_curve();
    StencilSpec spec;
    Grid grid = make_grid(0.1, 2);
    Band band = build_band(*egg, grid, spec);
    SparseOperator E = build_extension_matrix(band, 3, BcSpec{BcKind::none});
    SparseOperator dh = build_fd_laplacian(band, 2);
    SparseOperator M = assemble_stabilized(dh, E);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(band.size());
    double norm = apply_operator(M, ones).cwiseAbs().maxCoeff();
    CHECK(norm < 1e-10 / (grid.dx * grid.dx));
}

TEST_CASE("interpolation exactness to degree p") {
    Band band = cosine_band(0.125);
    for (int p : {1, 2, 3}) {
        CAPTURE(p);
        // Sample a polynomial of total degree p on band nodes, extend to
        // arbitrary targets, compare against the exact value.
        auto poly = [p](const Vec3& x) {
            double acc = 0.0;
            for (int a = 0; a <= p; ++a) {
                for (int b = 0; a + b <= p; ++b) {
                    acc += 0.3 * std::pow(x.x(), a) * std::pow(0.7 * x.y(), b);
                }
            }
            return acc;
        };
        Eigen::VectorXd samples(band.size());
        for (int i = 0; i < band.size(); ++i)
            samples(i) = poly(band.grid.node_point(band.nodes[i]));
        int checked = 0;
        for (int i = 0; i < band.size(); i += 7) {
            Vec3 target = band.geo[i].cp.point;
            auto row = extension_row(band, target, p);
            double acc = 0.0;
            for (const auto& [idx, w] : row) acc += w * samples(idx);
            CHECK(acc == doctest::Approx(poly(target)).epsilon(1e-10));
            ++checked;
        }
        CHECK(checked > 10);
    }
}

TEST_CASE("stabilized operator approximates the surface laplacian on a circle") {
    // -M applied to samples of cos(n theta) should converge to the analytic
    // image at rate q, observed through on-surface interpolation.
    auto circle = make_circle(1.0);
    StencilSpec spec;
    for (int n : {1, 2}) {
        CAPTURE(n);
        std::vector<double> errs, dxs;
        for (double dx : {0.1, 0.05, 0.025}) {
            Grid grid = make_grid(dx, 2);
            Band band = build_band(*circle, grid, spec);
            SparseOperator E = build_extension_matrix(band, 3, BcSpec{BcKind::none});
            SparseOperator dh = build_fd_laplacian(band, 2);
            SparseOperator M = assemble_stabilized(dh, E);
            Eigen::VectorXd u(band.size());
            for (int i = 0; i < band.size(); ++i) {
                Vec3 x = band.grid.node_point(band.nodes[i]);
                u(i) = std::cos(n * std::atan2(x.y(), x.x()));
            }
            Eigen::VectorXd img = -apply_operator(M, u);
            // Interpolate the image back onto the circle.
            double worst = 0.0;
            for (int s = 0; s < 64; ++s) {
                double th = 2 * kPi * s / 64;
                auto row = extension_row(band, Vec3(std::cos(th), std::sin(th), 0), 3);
                double acc = 0.0;
                for (const auto& [idx, w] : row) acc += w * img(idx);
                worst = std::max(worst, std::abs(acc - n * n * std::cos(n * th)));
            }
            errs.push_back(worst);
            dxs.push_back(dx);
        }
        // Second-order decay.
        double slope = std::log(errs[0] / errs[2]) / std::log(dxs[0] / dxs[2]);
        CHECK(slope > 1.6);
        CHECK(slope < 2.6);
    }
}

TEST_CASE("apply_operator basics") {
    SparseOperator eye = SparseOperator::identity(4);
    Eigen::VectorXd v(4);
    v << 1, -2, 3, 0.5;
    CHECK((apply_operator(eye, v) - v).norm() == 0.0);
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
    CHECK(apply_operator(eye, zero).norm() == 0.0);
    Eigen::VectorXd bad(3);
    bad.setZero();
    CHECK_THROWS_AS(apply_operator(eye, bad), DomainError);
}

TEST_CASE("dirichlet boundary offset vector") {
    Band band = cosine_band(0.125);
    auto g = [](const Vec3& p) { return p.x() + 2.0; };
    Eigen::VectorXd offset = dirichlet_boundary_offset(band, g);
    for (int i = 0; i < band.size(); ++i) {
        if (band.geo[i].ghost) {
            CHECK(offset(i) ==
                  doctest::Approx(2.0 * (band.geo[i].cp.point.x() + 2.0)).epsilon(1e-13));
        } else {
            CHECK(offset(i) == 0.0);
        }
    }
}

TEST_CASE("assembly is identical for any worker count") {
    Band band = cosine_band(0.125);
    BcSpec bc{BcKind::dirichlet_homogeneous};
    setenv("CPM_THREADS", "1", 1);
    SparseOperator serial_E = build_extension_matrix(band, 3, bc);
    SparseOperator serial_M = assemble_stabilized(build_fd_laplacian(band, 2), serial_E);
    setenv("CPM_THREADS", "7", 1);
    SparseOperator parallel_E = build_extension_matrix(band, 3, bc);
    SparseOperator parallel_M = assemble_stabilized(build_fd_laplacian(band, 2), parallel_E);
    unsetenv("CPM_THREADS");
    CHECK(serial_E.max_abs_difference(parallel_E) == 0.0);
    CHECK(serial_M.max_abs_difference(parallel_M) == 0.0);
}
