#pragma once

#include <string>
#include <vector>

#include "cpmeig/eig.hpp"
#include "cpmeig/study.hpp"
#include "cpmeig/types.hpp"

namespace cpmeig {

/// Spectrum CSV: idx, re, im, residual, kept, reason.
void write_spectrum_csv(const SpectralResult& result, const FilterReport& filter,
                        const std::string& path);

/// Real-axis histogram of all eigenvalues (kept and discarded): bin_center
/// and count per line, gnuplot-ready.
void write_histogram(const SpectralResult& result, int bins, const std::string& path);

/// Study CSV: dx, m, lambda_analytic, lambda_computed, abs_err.
void write_study_csv(const StudyReport& report, const std::string& path);

/// Per tracked eigenvalue, a two-column log-log data file (dx, abs_err)
/// named <prefix>eig_<index>.dat.  Returns the written paths.
std::vector<std::string> write_order_data(const StudyReport& report, const std::string& prefix);

/// Observed-order CSV: lambda_analytic, order.
void write_orders_csv(const StudyReport& report, const std::string& path);

/// Condition-number CSV: dx, m, kappa.
void write_kappa_csv(const StudyReport& report, const std::string& path);

/// Legacy VTK polydata point cloud with one scalar field.
void write_vtk_point_cloud(const std::vector<Vec3>& points, const std::vector<double>& values,
                           const std::string& scalar_name, const std::string& path);

} // namespace cpmeig
