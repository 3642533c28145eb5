#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cpmeig/discretize.hpp"
#include "cpmeig/eig.hpp"
#include "cpmeig/geometry.hpp"
#include "cpmeig/trimesh.hpp"

using namespace cpmeig;

namespace {

constexpr double kPi = std::numbers::pi;

SparseOperator diag_op(const std::vector<double>& d) {
    std::vector<SparseOperator::Triplet> trips;
    for (std::size_t i = 0; i < d.size(); ++i) trips.emplace_back(i, i, d[i]);
    return SparseOperator::from_triplets(d.size(), d.size(), trips);
}

struct Assembled {
    Band band;
    SparseOperator E, dh, M;
};

Assembled assemble_surface(const Surface& surface, double dx, int p, int q, BcKind bc) {
    Grid grid;
    grid.dx = dx;
    grid.dim = surface.dim();
    StencilSpec spec;
    spec.p = p;
    spec.q = q;
    Assembled out;
    out.band = build_band(surface, grid, spec);
    out.E = build_extension_matrix(out.band, p, BcSpec{bc});
    out.dh = build_fd_laplacian(out.band, q);
    out.M = assemble_stabilized(out.dh, out.E);
    return out;
}

} // namespace

TEST_CASE("dense spectrum on small diagonal operators") {
    SparseOperator op = diag_op({-1.0, -4.0});
    SpectralResult res = dense_spectrum(op);
    REQUIRE(res.eigenvalues.size() == 2);
    CHECK(res.eigenvalues(0).real() == doctest::Approx(1.0));
    CHECK(res.eigenvalues(1).real() == doctest::Approx(4.0));
    CHECK(res.residuals.maxCoeff() < 1e-12);
    CHECK(res.method == "dense");
}

TEST_CASE("dense spectrum matches the periodic Laplacian closed form") {
    // 1-D periodic second difference: eigenvalues (2 - 2cos(2 pi k/n))/dx^2.
    const int n = 24;
    const double dx = 0.1;
    std::vector<SparseOperator::Triplet> trips;
    for (int i = 0; i < n; ++i) {
        trips.emplace_back(i, i, -2.0 / (dx * dx));
        trips.emplace_back(i, (i + 1) % n, 1.0 / (dx * dx));
        trips.emplace_back(i, (i + n - 1) % n, 1.0 / (dx * dx));
    }
    SparseOperator op = SparseOperator::from_triplets(n, n, trips);
    SpectralResult res = dense_spectrum(op);
    std::vector<double> expected;
    for (int k = 0; k < n; ++k) {
        expected.push_back((2.0 - 2.0 * std::cos(2.0 * kPi * k / n)) / (dx * dx));
    }
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i < n; ++i) {
        CHECK(res.eigenvalues(i).real() == doctest::Approx(expected[i]).epsilon(1e-10));
        CHECK(std::abs(res.eigenvalues(i).imag()) < 1e-9);
    }
}

TEST_CASE("dense spectrum size cap") {
    SparseOperator op = SparseOperator::identity(10);
    CHECK_THROWS_AS(dense_spectrum(op, 5), ConfigError);
}

TEST_CASE("semicircle spectrum captures the interval eigenvalues") {
    auto semi = make_semicircle(1.0);
    Assembled a = assemble_surface(*semi, 1.0 / 32, 3, 2, BcKind::dirichlet_homogeneous);
    SpectralResult res = dense_spectrum(a.M);
    // Residual contract on every reported pair.
    CHECK(res.residuals.maxCoeff() < 1e-8);
    FilterReport filter = filter_spurious(res, 1.0 / 32, 2);
    std::vector<double> kept = kept_real_eigenvalues(res, filter);
    std::erase_if(kept, [](double v) { return v < 0.05; });
    REQUIRE(kept.size() >= 5);
    const double expected[] = {1, 4, 9, 16, 25};
    for (int i = 0; i < 5; ++i) {
        CHECK(std::abs(kept[i] - expected[i]) / expected[i] < 0.02);
    }
}

TEST_CASE("unstabilized operator has a polluted null space") {
    auto semi = make_semicircle(1.0);
    Assembled a = assemble_surface(*semi, 1.0 / 32, 3, 2, BcKind::dirichlet_homogeneous);
    SparseOperator mt = assemble_unstabilized(a.dh, a.E);
    SpectralResult res = dense_spectrum(mt);
    int near_zero = 0;
    for (Eigen::Index i = 0; i < res.eigenvalues.size(); ++i) {
        if (std::abs(res.eigenvalues(i)) < 0.1) ++near_zero;
    }
    CHECK(near_zero >= 10);
}

TEST_CASE("null multiplicity contrast between M and the unstabilized product") {
    auto egg = make_egg_curve();
    Assembled a = assemble_surface(*egg, 0.1, 3, 2, BcKind::none);
    SpectralResult stab = dense_spectrum(a.M);
    int stab_null = 0;
    for (Eigen::Index i = 0; i < stab.eigenvalues.size(); ++i) {
        if (std::abs(stab.eigenvalues(i)) < 0.05) ++stab_null;
    }
    CHECK(stab_null == 1);

    SparseOperator mt = assemble_unstabilized(a.dh, a.E);
    SpectralResult unstab = dense_spectrum(mt);
    int unstab_null = 0;
    for (Eigen::Index i = 0; i < unstab.eigenvalues.size(); ++i) {
        if (std::abs(unstab.eigenvalues(i)) < 0.05) ++unstab_null;
    }
    CHECK(unstab_null > 5);
}

TEST_CASE("arnoldi on diagonal matrices") {
    std::vector<double> d(100);
    for (int i = 0; i < 100; ++i) d[i] = -(i + 1); // -op has eigenvalues 1..100
    SparseOperator op = diag_op(d);

    SpectralResult res = arnoldi_near_shift(op, 3, 0.0);
    REQUIRE(res.eigenvalues.size() == 3);
    CHECK(res.eigenvalues(0).real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.eigenvalues(1).real() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(res.eigenvalues(2).real() == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(res.residuals.maxCoeff() < 1e-8);
    CHECK(res.method == "arnoldi");

    // Nearest the interior shift, reported sorted ascending.
    res = arnoldi_near_shift(op, 3, 50.2);
    REQUIRE(res.eigenvalues.size() == 3);
    CHECK(res.eigenvalues(0).real() == doctest::Approx(49.0));
    CHECK(res.eigenvalues(1).real() == doctest::Approx(50.0));
    CHECK(res.eigenvalues(2).real() == doctest::Approx(51.0));

    CHECK_THROWS_AS(arnoldi_near_shift(op, 60, 0.0), ConfigError);
    CHECK_THROWS_AS(arnoldi_near_shift(op, 0, 0.0), ConfigError);
}

TEST_CASE("arnoldi resolves circle multiplets at shift zero") {
    auto circle = make_circle(1.0);
    Assembled a = assemble_surface(*circle, 1.0 / 32, 3, 2, BcKind::none);
    SpectralResult res = arnoldi_near_shift(a.M, 9, 0.0);
    REQUIRE(res.eigenvalues.size() == 9);
    const double expected[] = {0, 1, 1, 4, 4, 9, 9, 16, 16};
    for (int i = 0; i < 9; ++i) {
        CHECK(std::abs(res.eigenvalues(i).real() - expected[i]) < 0.05 + 0.02 * expected[i]);
        CHECK(std::abs(res.eigenvalues(i).imag()) < 1e-6);
    }
    CHECK(res.residuals.maxCoeff() < 1e-8);
}

TEST_CASE("dense and arnoldi agree on the smallest kept eigenvalues") {
    auto cosine = make_cosine_curve();
    Assembled a = assemble_surface(*cosine, 0.05, 3, 2, BcKind::dirichlet_homogeneous);
    SpectralResult dense = dense_spectrum(a.M);
    SpectralResult arn = arnoldi_near_shift(a.M, 10, 0.0);
    FilterReport filter = filter_spurious(dense, 0.05, 2);
    std::vector<double> kept = kept_real_eigenvalues(dense, filter);
    REQUIRE(kept.size() >= 10);
    for (int i = 0; i < 10; ++i) {
        CHECK(std::abs(arn.eigenvalues(i).real() - kept[i]) <=
              1e-6 * std::max(1.0, std::abs(kept[i])));
    }
}

TEST_CASE("filter spurious") {
    SpectralResult res;
    res.eigenvalues.resize(4);
    res.eigenvalues << std::complex<double>(0.5, 0), std::complex<double>(3, 0.5),
        std::complex<double>(250, 0), std::complex<double>(9, 1e-9);
    res.residuals = Eigen::VectorXd::Zero(4);
    res.eigenvectors = Eigen::MatrixXcd::Zero(1, 4);

    FilterReport report = filter_spurious(res, 1.0 / 8, 2); // cutoff 256
    CHECK(report.kept == std::vector<int>{0, 3});
    CHECK(report.discarded_near_cutoff == std::vector<int>{2});
    CHECK(report.discarded_complex == std::vector<int>{1});
    CHECK(report.kept.size() + report.discarded_near_cutoff.size() +
              report.discarded_complex.size() ==
          static_cast<std::size_t>(res.eigenvalues.size()));
}

TEST_CASE("circle full spectrum: spurious cluster and clean low modes") {
    auto circle = make_circle(1.0);
    Assembled a = assemble_surface(*circle, 1.0 / 8, 3, 2, BcKind::none);
    SpectralResult res = dense_spectrum(a.M);
    FilterReport filter = filter_spurious(res, 1.0 / 8, 2);
    CHECK(!filter.discarded_near_cutoff.empty());
    // Everything kept below 100 is real to the stated tolerance.
    for (int idx : filter.kept) {
        auto lam = res.eigenvalues(idx);
        if (lam.real() < 100) {
            CHECK(std::abs(lam.imag()) <= 1e-6 * std::max(1.0, std::abs(lam.real())));
        }
    }
}

TEST_CASE("condition number") {
    CHECK(condition_number_2norm(SparseOperator::identity(12)) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(condition_number_2norm(diag_op({1.0, 10.0})) == doctest::Approx(10.0).epsilon(1e-3));

    // Singular operator reports the infinity sentinel.
    SparseOperator singular = diag_op({1.0, 0.0});
    CHECK(std::isinf(condition_number_2norm(singular)));

    // Frozen regression value for the open-curve operator.
    auto cosine = make_cosine_curve();
    Assembled a = assemble_surface(*cosine, 0.25, 3, 2, BcKind::dirichlet_homogeneous);
    double kappa = condition_number_2norm(a.M);
    CHECK(kappa > 560);
    CHECK(kappa < 690);
}

TEST_CASE("sample eigenfunction") {
    auto circle = make_circle(1.0);
    Assembled a = assemble_surface(*circle, 1.0 / 16, 3, 2, BcKind::none);
    SpectralResult res = arnoldi_near_shift(a.M, 3, 0.0);

    // The zero mode is constant on the surface.
    Eigen::VectorXcd mode0 = res.eigenvectors.col(0);
    std::vector<Vec3> pts;
    for (int s = 0; s < 32; ++s) {
        pts.emplace_back(std::cos(2 * kPi * s / 32), std::sin(2 * kPi * s / 32), 0);
    }
    Eigen::VectorXcd values = sample_eigenfunction(a.band, 3, pts, mode0);
    std::complex<double> mean = values.mean();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        CHECK(std::abs(values(i) - mean) < 1e-6 * std::abs(mean));
    }

    // Sampling at a band node whose closest point is itself returns the
    // entry (grid-aligned circle point (1, 0) with the origin-centered grid).
    int idx = a.band.index_of({16, 0, 0});
    REQUIRE(idx >= 0);
    Eigen::VectorXcd entry =
        sample_eigenfunction(a.band, 3, {Vec3(1.0, 0.0, 0.0)}, mode0);
    CHECK(std::abs(entry(0) - mode0(idx)) < 1e-12);

    // Mode n=1 fits cos(theta + beta) on the circle.
    Eigen::VectorXcd mode1 = res.eigenvectors.col(1);
    Eigen::VectorXcd v = sample_eigenfunction(a.band, 3, pts, mode1);
    Eigen::MatrixXcd design(32, 2);
    for (int s = 0; s < 32; ++s) {
        double th = 2 * kPi * s / 32;
        design(s, 0) = std::cos(th);
        design(s, 1) = std::sin(th);
    }
    Eigen::Vector2cd ab = (design.adjoint() * design).ldlt().solve(design.adjoint() * v);
    double rel = (design * ab - v).norm() / v.norm();
    CHECK(rel < 5e-3); // O(dx^2) at dx = 1/16

    // Points whose footprint leaves the band are rejected.
    CHECK_THROWS_AS(sample_eigenfunction(a.band, 3, {Vec3(3.0, 3.0, 0)}, mode0), DomainError);
}

TEST_CASE("open triangulated mesh with mirrored Dirichlet walls") {
    // Flat unit square mesh: the planar mirror is exact, so the spectrum
    // approaches (j^2 + k^2) pi^2.
    std::vector<Vec3> verts;
    std::vector<std::array<int, 3>> tris;
    const int n = 8;
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            verts.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n, 0.0);
        }
    }
    auto vid = [&](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            tris.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            tris.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    }
    auto surf = make_trimesh_surface(TriMesh::build(std::move(verts), std::move(tris)));
    REQUIRE(surf->is_open());

    Grid grid;
    grid.dx = 1.0 / 20;
    grid.dim = 3;
    grid.origin = Vec3(0.3 / 20, 0.41 / 20, 0.37 / 20); // generic offsets
    StencilSpec spec;
    Band band = build_band(*surf, grid, spec);
    CHECK(band.ghost_count() > 0);

    SparseOperator E = build_extension_matrix(band, 3, BcSpec{BcKind::dirichlet_homogeneous});
    SparseOperator dh = build_fd_laplacian(band, 2);
    SparseOperator M = assemble_stabilized(dh, E);
    SpectralResult res = arnoldi_near_shift(M, 4, 0.0);
    const double pi2 = kPi * kPi;
    const double expected[] = {2 * pi2, 5 * pi2, 5 * pi2, 8 * pi2};
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(res.eigenvalues(i).real() - expected[i]) / expected[i] < 0.04);
        CHECK(std::abs(res.eigenvalues(i).imag()) < 1e-6 * expected[i]);
    }
}

TEST_CASE("analytic sphere spectrum with multiplicities") {
    auto sphere = make_sphere(1.0);
    Assembled a = assemble_surface(*sphere, 1.0 / 8, 3, 2, BcKind::none);
    SpectralResult res = arnoldi_near_shift(a.M, 9, 0.0);
    const double expected[] = {0, 2, 2, 2, 6, 6, 6, 6, 6};
    for (int i = 0; i < 9; ++i) {
        CHECK(std::abs(res.eigenvalues(i).real() - expected[i]) < 0.02 + 0.02 * expected[i]);
    }
}

TEST_CASE("interval segment spectrum") {
    auto segment = make_segment(Vec3(0, 0, 0), Vec3(1, 0, 0));
    Assembled a = assemble_surface(*segment, 1.0 / 32, 3, 2, BcKind::dirichlet_homogeneous);
    SpectralResult res = arnoldi_near_shift(a.M, 3, 0.0);
    const double pi2 = kPi * kPi;
    for (int k = 1; k <= 3; ++k) {
        CHECK(std::abs(res.eigenvalues(k - 1).real() - k * k * pi2) / (k * k * pi2) < 0.01);
    }

    // Neumann flavor on the same band: 0, pi^2, 4 pi^2, ...
    SparseOperator En = build_extension_matrix(a.band, 3, BcSpec{BcKind::neumann_homogeneous});
    SparseOperator Mn = assemble_stabilized(a.dh, En);
    SpectralResult rn = arnoldi_near_shift(Mn, 3, 0.0);
    CHECK(std::abs(rn.eigenvalues(0).real()) < 1e-6);
    CHECK(std::abs(rn.eigenvalues(1).real() - pi2) / pi2 < 0.01);
    CHECK(std::abs(rn.eigenvalues(2).real() - 4 * pi2) / (4 * pi2) < 0.01);
}
