#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpmeig/discretize.hpp"
#include "cpmeig/eig.hpp"
#include "cpmeig/geometry.hpp"

namespace cpmeig {

/// Reference spectrum: ascending (eigenvalue, multiplicity) pairs.
struct AnalyticSpectrum {
    std::vector<std::pair<double, int>> values;
    std::string provenance;
};

/// Closed curve of total arclength L: (2 pi n / L)^2, multiplicity 2 for
/// n >= 1 plus the zero mode.
AnalyticSpectrum analytic_closed_curve(double total_length, int max_n);
/// Interval of length L with Dirichlet ends: (k pi / L)^2, k >= 1, simple.
AnalyticSpectrum analytic_interval_dirichlet(double length, int max_k);
/// Interval of length L with Neumann ends: (k pi / L)^2, k >= 0, simple.
AnalyticSpectrum analytic_interval_neumann(double length, int max_k);
/// Unit hemisphere with Neumann equator: l(l+1)/R^2, multiplicity l+1.
AnalyticSpectrum analytic_hemisphere_neumann(double radius, int max_l);
/// Circle of radius R: (n/R)^2, multiplicity 2 for n >= 1 plus the zero mode.
AnalyticSpectrum analytic_circle(double radius, int max_n);
/// Sphere of radius R: l(l+1)/R^2, multiplicity 2l+1.
AnalyticSpectrum analytic_sphere(double radius, int max_l);

/// Arclength of a parametric curve by adaptive quadrature of |gamma'|.
double arclength(const ParametricCurve& curve, double rel_tol = 1e-12);

/// Arclength of the cosine test curve (t, cos t), t in [1/4, 4].
double cosine_curve_arclength();

/// One matched eigenvalue.  matched is false when the computed list ran out
/// before this multiplicity copy.
struct MatchRow {
    double analytic = 0.0;
    double computed = 0.0;
    double abs_err = 0.0;
    bool matched = false;
};

/// Greedy ascending match of computed (kept, real, sorted) eigenvalues
/// against the first count_distinct analytic values, consuming multiplicity
/// copies.  Permuting the computed input does not change the result.
std::vector<MatchRow> match_eigenvalues(std::vector<double> computed,
                                        const AnalyticSpectrum& spectrum, int count_distinct);

/// Least-squares slope of log(error) against log(dx).  Requires two or more
/// levels; an exact zero error reports the infinity sentinel.
double observed_order(const std::vector<double>& errors, const std::vector<double>& dxs);

/// Embedded eigenfunction of the regularized problem on a circle of radius
/// R: the closed-form radial profile times cos(sqrt(lambda) R theta).
double embedded_circle_eigenfunction(double lambda, double radius, double eps, double r,
                                     double theta);

/// Reference spectrum implied by a surface kind and boundary treatment, when
/// one exists in closed form.
std::optional<AnalyticSpectrum> analytic_for(const Surface& surface, BcKind bc, double radius,
                                             int max_terms);

} // namespace cpmeig
