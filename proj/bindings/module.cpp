#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cpmeig/discretize.hpp"
#include "cpmeig/eig.hpp"
#include "cpmeig/harness.hpp"
#include "cpmeig/study.hpp"
#include "cpmeig/trimesh.hpp"

namespace py = pybind11;
using namespace cpmeig;

namespace {

Vec3 to_vec3(const std::vector<double>& x) {
    if (x.size() != 2 && x.size() != 3)
        throw DomainError("point must have 2 or 3 coordinates");
    return Vec3(x[0], x[1], x.size() == 3 ? x[2] : 0.0);
}

py::tuple cp_tuple(const CpResult& r) {
    return py::make_tuple(py::make_tuple(r.point.x(), r.point.y(), r.point.z()), r.distance,
                          r.on_boundary);
}

py::tuple coo_tuple(const SparseOperator& op) {
    const auto& m = op.matrix();
    std::vector<long> rows, cols;
    std::vector<double> vals;
    rows.reserve(m.nonZeros());
    cols.reserve(m.nonZeros());
    vals.reserve(m.nonZeros());
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        for (SparseOperator::Storage::InnerIterator it(m, r); it; ++it) {
            rows.push_back(it.row());
            cols.push_back(it.col());
            vals.push_back(it.value());
        }
    }
    return py::make_tuple(rows, cols, vals, py::make_tuple(op.rows(), op.cols()));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Closest point method Laplace-Beltrami eigensolver";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DomainError>(m, "DomainError");
    py::register_exception<NumericError>(m, "NumericError");

    py::class_<Surface, std::shared_ptr<Surface>>(m, "Surface")
        .def_property_readonly("dim", &Surface::dim)
        .def_property_readonly("open", &Surface::is_open)
        .def_property_readonly("kind", &Surface::kind)
        .def("sample_points", [](const Surface& s, int n) {
            std::vector<std::array<double, 3>> out;
            for (const auto& p : s.sample_points(n)) out.push_back({p.x(), p.y(), p.z()});
            return out;
        });

    m.def(
        "make_surface",
        [](const std::string& kind, double radius) -> std::shared_ptr<Surface> {
            SurfaceParams params;
            params.radius = radius;
            return std::shared_ptr<Surface>(make_surface(kind, params));
        },
        py::arg("kind"), py::arg("radius") = 1.0);
    m.def("load_mesh_surface", [](const std::string& path) -> std::shared_ptr<Surface> {
        return std::shared_ptr<Surface>(make_trimesh_surface(read_off(path)));
    });

    m.def("closest_point", [](const Surface& s, const std::vector<double>& x) {
        return cp_tuple(s.closest_point(to_vec3(x)));
    });
    m.def("cp_bar", [](const Surface& s, const std::vector<double>& x) {
        return cp_tuple(cp_bar(s, to_vec3(x)));
    });
    m.def(
        "is_ghost",
        [](const Surface& s, const std::vector<double>& x, double tol) {
            return is_ghost(s, to_vec3(x), tol);
        },
        py::arg("surface"), py::arg("x"), py::arg("tol"));

    py::class_<Grid>(m, "Grid")
        .def(py::init([](double dx, const std::vector<double>& origin, int dim) {
                 Grid g;
                 g.dx = dx;
                 g.origin = to_vec3(origin);
                 g.dim = dim;
                 return g;
             }),
             py::arg("dx"), py::arg("origin"), py::arg("dim"))
        .def_readonly("dx", &Grid::dx)
        .def_readonly("dim", &Grid::dim);

    py::class_<Band>(m, "Band")
        .def_property_readonly("size", &Band::size)
        .def_property_readonly("rim_size", &Band::rim_size)
        .def_property_readonly("ghost_count", &Band::ghost_count)
        .def("nodes",
             [](const Band& b) {
                 std::vector<std::array<int, 3>> out(b.nodes.size());
                 for (std::size_t i = 0; i < b.nodes.size(); ++i)
                     out[i] = {b.nodes[i][0], b.nodes[i][1], b.nodes[i][2]};
                 return out;
             })
        .def("write_csv", [](const Band& b, const std::string& path) { write_band_csv(b, path); });

    m.def(
        "build_band",
        [](const Surface& surface, const Grid& grid, int p, int q, double seed_radius_factor,
           bool naive_ghost_footprints) {
            StencilSpec spec;
            spec.p = p;
            spec.q = q;
            BandOptions options;
            options.seed_radius_factor = seed_radius_factor;
            options.include_naive_ghost_footprints = naive_ghost_footprints;
            return build_band(surface, grid, spec, options);
        },
        py::arg("surface"), py::arg("grid"), py::arg("p") = 3, py::arg("q") = 2,
        py::arg("seed_radius_factor") = 1.5, py::arg("naive_ghost_footprints") = false);

    py::class_<SparseOperator>(m, "SparseOperator")
        .def_property_readonly("shape",
                               [](const SparseOperator& op) {
                                   return py::make_tuple(op.rows(), op.cols());
                               })
        .def_property_readonly("nnz", &SparseOperator::nonzeros)
        .def("coo", &coo_tuple)
        .def("apply",
             [](const SparseOperator& op, const Eigen::VectorXd& u) { return op.apply(u); })
        .def("write_matrix_market",
             [](const SparseOperator& op, const std::string& path) {
                 write_matrix_market(op, path);
             });

    m.def(
        "build_extension_matrix",
        [](const Band& band, int p, const std::string& bc) {
            return build_extension_matrix(band, p, BcSpec{bc_from_name(bc)});
        },
        py::arg("band"), py::arg("p") = 3, py::arg("bc") = "none");
    m.def("build_fd_laplacian", &build_fd_laplacian, py::arg("band"), py::arg("q") = 2);
    m.def("assemble_stabilized", &assemble_stabilized);
    m.def("assemble_unstabilized", &assemble_unstabilized);
    m.def("read_matrix_market", &read_matrix_market);

    py::class_<SpectralResult>(m, "SpectralResult")
        .def_readonly("eigenvalues", &SpectralResult::eigenvalues)
        .def_readonly("eigenvectors", &SpectralResult::eigenvectors)
        .def_readonly("residuals", &SpectralResult::residuals)
        .def_readonly("method", &SpectralResult::method)
        .def_readonly("shift", &SpectralResult::shift);

    m.def("dense_spectrum", &dense_spectrum, py::arg("op"), py::arg("max_dense") = 4000);
    m.def("arnoldi_near_shift",
          [](const SparseOperator& op, int k, double shift) {
              return arnoldi_near_shift(op, k, shift);
          },
          py::arg("op"), py::arg("k"), py::arg("shift") = 0.0);

    py::class_<FilterReport>(m, "FilterReport")
        .def_readonly("kept", &FilterReport::kept)
        .def_readonly("discarded_near_cutoff", &FilterReport::discarded_near_cutoff)
        .def_readonly("discarded_complex", &FilterReport::discarded_complex);

    m.def("filter_spurious", &filter_spurious, py::arg("result"), py::arg("dx"), py::arg("dim"),
          py::arg("imag_tol") = 1e-6, py::arg("cutoff_window") = -1.0);
    m.def("kept_real_eigenvalues", &kept_real_eigenvalues);
    m.def("condition_number_2norm", &condition_number_2norm);
    m.def(
        "sample_eigenfunction",
        [](const Band& band, int p, const std::vector<std::vector<double>>& points,
           const Eigen::VectorXcd& vec) {
            std::vector<Vec3> pts;
            pts.reserve(points.size());
            for (const auto& x : points) pts.push_back(to_vec3(x));
            return sample_eigenfunction(band, p, pts, vec);
        },
        py::arg("band"), py::arg("p"), py::arg("points"), py::arg("band_vector"));

    m.def("analytic_circle", [](double radius, int max_n) {
        return analytic_circle(radius, max_n).values;
    });
    m.def("analytic_closed_curve", [](double total_length, int max_n) {
        return analytic_closed_curve(total_length, max_n).values;
    });
    m.def("analytic_hemisphere_neumann", [](double radius, int max_l) {
        return analytic_hemisphere_neumann(radius, max_l).values;
    });
    m.def("analytic_sphere", [](double radius, int max_l) {
        return analytic_sphere(radius, max_l).values;
    });
    m.def("cosine_curve_arclength", &cosine_curve_arclength);
    m.def("embedded_circle_eigenfunction", &embedded_circle_eigenfunction, py::arg("lambda_"),
          py::arg("radius"), py::arg("eps"), py::arg("r"), py::arg("theta"));
}
