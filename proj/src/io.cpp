#include "cpmeig/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace cpmeig {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    return out;
}

} // namespace

void write_spectrum_csv(const SpectralResult& result, const FilterReport& filter,
                        const std::string& path) {
    std::vector<std::string> reason(result.eigenvalues.size(), "kept");
    for (int i : filter.discarded_near_cutoff) reason[i] = "near_cutoff";
    for (int i : filter.discarded_complex) reason[i] = "complex";

    auto out = open_out(path);
    out << "idx,re,im,residual,kept,reason\n";
    char buf[192];
    for (Eigen::Index i = 0; i < result.eigenvalues.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g,%d,%s\n",
                      static_cast<long long>(i), result.eigenvalues(i).real(),
                      result.eigenvalues(i).imag(), result.residuals(i),
                      reason[i] == "kept" ? 1 : 0, reason[i].c_str());
        out << buf;
    }
}

void write_histogram(const SpectralResult& result, int bins, const std::string& path) {
    if (bins < 1) throw ConfigError("histogram needs at least one bin");
    double lo = 0.0, hi = 0.0;
    for (Eigen::Index i = 0; i < result.eigenvalues.size(); ++i) {
        double re = result.eigenvalues(i).real();
        lo = std::min(lo, re);
        hi = std::max(hi, re);
    }
    if (hi <= lo) hi = lo + 1.0;
    std::vector<int> counts(bins, 0);
    for (Eigen::Index i = 0; i < result.eigenvalues.size(); ++i) {
        double re = result.eigenvalues(i).real();
        int b = static_cast<int>((re - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        counts[b]++;
    }
    auto out = open_out(path);
    char buf[96];
    for (int b = 0; b < bins; ++b) {
        double center = lo + (b + 0.5) * (hi - lo) / bins;
        std::snprintf(buf, sizeof(buf), "%.17g %d\n", center, counts[b]);
        out << buf;
    }
}

void write_study_csv(const StudyReport& report, const std::string& path) {
    auto out = open_out(path);
    out << "dx,m,lambda_analytic,lambda_computed,abs_err\n";
    char buf[192];
    for (const auto& level : report.levels) {
        if (level.failed) {
            std::snprintf(buf, sizeof(buf), "%.17g,%d,nan,nan,nan\n", level.dx, level.m);
            out << buf;
            continue;
        }
        for (const auto& row : level.matches) {
            if (!row.matched) continue;
            std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%.17g,%.17g\n", level.dx, level.m,
                          row.analytic, row.computed, row.abs_err);
            out << buf;
        }
    }
}

std::vector<std::string> write_order_data(const StudyReport& report, const std::string& prefix) {
    std::vector<std::string> written;
    auto tracked = tracked_errors(report);
    for (std::size_t t = 0; t < tracked.size(); ++t) {
        std::string path = prefix + "eig_" + std::to_string(t) + ".dat";
        auto out = open_out(path);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "# lambda = %.17g\n", tracked[t].analytic);
        out << buf;
        for (std::size_t i = 0; i < tracked[t].dxs.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", tracked[t].dxs[i],
                          tracked[t].errors[i]);
            out << buf;
        }
        written.push_back(path);
    }
    return written;
}

void write_orders_csv(const StudyReport& report, const std::string& path) {
    auto out = open_out(path);
    out << "lambda_analytic,order\n";
    char buf[96];
    for (const auto& o : report.orders) {
        if (o.defined) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", o.analytic, o.order);
        } else {
            std::snprintf(buf, sizeof(buf), "%.17g,nan\n", o.analytic);
        }
        out << buf;
    }
}

void write_kappa_csv(const StudyReport& report, const std::string& path) {
    auto out = open_out(path);
    out << "dx,m,kappa\n";
    char buf[96];
    for (const auto& level : report.levels) {
        if (!level.have_kappa) continue;
        std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g\n", level.dx, level.m, level.kappa);
        out << buf;
    }
}

void write_vtk_point_cloud(const std::vector<Vec3>& points, const std::vector<double>& values,
                           const std::string& scalar_name, const std::string& path) {
    if (points.size() != values.size())
        throw DomainError("write_vtk_point_cloud: point/value count mismatch");
    auto out = open_out(path);
    out << "# vtk DataFile Version 3.0\n";
    out << "eigenmode point cloud\n";
    out << "ASCII\n";
    out << "DATASET POLYDATA\n";
    out << "POINTS " << points.size() << " float\n";
    char buf[128];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", p.x(), p.y(), p.z());
        out << buf;
    }
    out << "POINT_DATA " << points.size() << "\n";
    out << "SCALARS " << scalar_name << " float 1\n";
    out << "LOOKUP_TABLE default\n";
    for (double v : values) {
        std::snprintf(buf, sizeof(buf), "%.9g\n", v);
        out << buf;
    }
}

} // namespace cpmeig
