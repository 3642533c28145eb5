#include "cpmeig/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cpmeig/quadrature.hpp"

namespace cpmeig {

namespace {
constexpr double kPi = std::numbers::pi;
}

AnalyticSpectrum analytic_closed_curve(double total_length, int max_n) {
    AnalyticSpectrum s;
    s.provenance = "closed_curve_arclength";
    s.values.emplace_back(0.0, 1);
    for (int n = 1; n <= max_n; ++n) {
        double w = 2.0 * kPi * n / total_length;
        s.values.emplace_back(w * w, 2);
    }
    return s;
}

AnalyticSpectrum analytic_interval_dirichlet(double length, int max_k) {
    AnalyticSpectrum s;
    s.provenance = "interval_dirichlet";
    for (int k = 1; k <= max_k; ++k) {
        double w = k * kPi / length;
        s.values.emplace_back(w * w, 1);
    }
    return s;
}

AnalyticSpectrum analytic_interval_neumann(double length, int max_k) {
    AnalyticSpectrum s;
    s.provenance = "interval_neumann";
    for (int k = 0; k <= max_k; ++k) {
        double w = k * kPi / length;
        s.values.emplace_back(w * w, 1);
    }
    return s;
}

AnalyticSpectrum analytic_hemisphere_neumann(double radius, int max_l) {
    AnalyticSpectrum s;
    s.provenance = "hemisphere_neumann";
    for (int l = 0; l <= max_l; ++l) {
        s.values.emplace_back(l * (l + 1.0) / (radius * radius), l + 1);
    }
    return s;
}

AnalyticSpectrum analytic_circle(double radius, int max_n) {
    AnalyticSpectrum s;
    s.provenance = "circle";
    s.values.emplace_back(0.0, 1);
    for (int n = 1; n <= max_n; ++n) {
        s.values.emplace_back(static_cast<double>(n) * n / (radius * radius), 2);
    }
    return s;
}

AnalyticSpectrum analytic_sphere(double radius, int max_l) {
    AnalyticSpectrum s;
    s.provenance = "sphere";
    for (int l = 0; l <= max_l; ++l) {
        s.values.emplace_back(l * (l + 1.0) / (radius * radius), 2 * l + 1);
    }
    return s;
}

double arclength(const ParametricCurve& curve, double rel_tol) {
    return adaptive_simpson([&](double t) { return curve.dgamma(t).norm(); }, curve.t_begin,
                            curve.t_end, rel_tol);
}

double cosine_curve_arclength() {
    static const double len = adaptive_simpson(
        [](double t) {
            double s = std::sin(t);
            return std::sqrt(1.0 + s * s);
        },
        0.25, 4.0, 1e-12);
    return len;
}

std::vector<MatchRow> match_eigenvalues(std::vector<double> computed,
                                        const AnalyticSpectrum& spectrum, int count_distinct) {
    std::sort(computed.begin(), computed.end());
    std::vector<MatchRow> rows;
    std::size_t next = 0;
    int used = 0;
    for (const auto& [lambda, mult] : spectrum.values) {
        if (used >= count_distinct) break;
        ++used;
        for (int copy = 0; copy < mult; ++copy) {
            MatchRow row;
            row.analytic = lambda;
            if (next < computed.size()) {
                row.computed = computed[next++];
                row.abs_err = std::abs(row.computed - lambda);
                row.matched = true;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

double observed_order(const std::vector<double>& errors, const std::vector<double>& dxs) {
    if (errors.size() != dxs.size() || errors.size() < 2)
        throw DomainError("observed_order: need matching error/dx lists with >= 2 levels");
    for (double e : errors) {
        if (e == 0.0) return std::numeric_limits<double>::infinity();
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(errors.size());
    for (std::size_t i = 0; i < errors.size(); ++i) {
        double x = std::log(dxs[i]);
        double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double embedded_circle_eigenfunction(double lambda, double radius, double eps, double r,
                                     double theta) {
    if (r <= 0.0) throw DomainError("embedded_circle_eigenfunction: r must be positive");
    double le = lambda * eps * eps;
    double denom = -le + 4.0;
    if (std::abs(denom) < 1e-12)
        throw DomainError("embedded_circle_eigenfunction: eigenvalue sits at the "
                          "regularization singularity");
    double radial = le * (1.0 - radius * radius / (r * r)) / denom + 1.0;
    return radial * std::cos(std::sqrt(lambda) * radius * theta);
}

std::optional<AnalyticSpectrum> analytic_for(const Surface& surface, BcKind bc, double radius,
                                             int max_terms) {
    const std::string kind = surface.kind();
    const bool dirichlet =
        bc == BcKind::dirichlet_homogeneous || bc == BcKind::naive_firstorder_dirichlet;
    if (kind == "circle") return analytic_circle(radius, max_terms);
    if (kind == "egg") return analytic_closed_curve(2.0 * kPi, max_terms);
    if (kind == "sphere") return analytic_sphere(radius, max_terms);
    if (kind == "cosine") {
        double len = cosine_curve_arclength();
        return dirichlet ? analytic_interval_dirichlet(len, max_terms)
                         : analytic_interval_neumann(len, max_terms);
    }
    if (kind == "semicircle") {
        double len = kPi * radius;
        return dirichlet ? analytic_interval_dirichlet(len, max_terms)
                         : analytic_interval_neumann(len, max_terms);
    }
    if (kind == "interval") {
        return dirichlet ? analytic_interval_dirichlet(1.0, max_terms)
                         : analytic_interval_neumann(1.0, max_terms);
    }
    if (kind == "hemisphere") {
        if (!dirichlet) return analytic_hemisphere_neumann(radius, max_terms);
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace cpmeig
