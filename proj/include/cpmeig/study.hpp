#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cpmeig/band.hpp"
#include "cpmeig/discretize.hpp"
#include "cpmeig/eig.hpp"
#include "cpmeig/harness.hpp"

namespace cpmeig {

/// Flat key=value configuration shared by the CLI and the study driver.
/// Unknown keys are rejected.
struct StudyConfig {
    std::string surface = "egg";
    std::string mesh_path;
    double radius = 1.0;
    std::vector<double> dx_list;
    int p = 3;
    int q = 2;
    BcKind bc = BcKind::none;
    int k_eigs = 0;   ///< 0: derived from track
    double shift = 0.0;
    int track = 8;    ///< distinct analytic eigenvalues to follow
    std::string solver = "auto"; ///< auto | dense | arnoldi
    int dense_cutoff = 1100;
    int max_dense = 4000;
    bool compute_kappa = false;
    double origin_offset = 0.0; ///< grid origin, in units of dx, per axis
    double imag_tol = 1e-6;
    double cutoff_window_factor = 0.5;
    double seed_radius_factor = 1.5;
    std::size_t node_budget = 5'000'000;
    int histogram_bins = 50;
    int modes = 6;            ///< eigenfunctions written by the modes command
    int sample_count = 1500;  ///< surface sample points for mode output
    bool export_operators = false; ///< write Matrix Market files alongside spectra
    bool dump_band = false;        ///< write the band debug CSV

    static StudyConfig from_map(const std::map<std::string, std::string>& kv);

    std::unique_ptr<Surface> build_surface() const;
    Grid build_grid(double dx, int dim) const;
};

/// Parses "key=value" lines; '#' starts a comment.
std::map<std::string, std::string> parse_config_file(const std::string& path);
void apply_overrides(std::map<std::string, std::string>& kv,
                     const std::vector<std::string>& overrides);

/// One refinement level of a study.
struct StudyLevel {
    double dx = 0.0;
    int m = 0;
    int ghost_count = 0;
    std::vector<MatchRow> matches;
    double kappa = 0.0;
    bool have_kappa = false;
    bool failed = false;
    std::string error;
};

/// Per-tracked-eigenvalue convergence fit.
struct TrackedOrder {
    double analytic = 0.0;
    double order = 0.0;
    bool defined = false;
};

struct StudyReport {
    std::vector<StudyLevel> levels;
    std::vector<TrackedOrder> orders;
    std::vector<double> tracked_values; ///< distinct analytic values followed
};

/// Runs the configured refinement study: per dx builds the band and
/// operators, solves, filters, matches against the analytic spectrum and
/// fits observed orders (zero modes are matched but excluded from fits).
/// Levels that fail are marked and do not abort the rest.
StudyReport run_study(const StudyConfig& config);

/// Largest error among the multiplicity copies of each tracked value, per
/// level, for order fitting and plot emission.  Levels with unmatched copies
/// are skipped.
struct TrackedErrors {
    double analytic = 0.0;
    std::vector<double> dxs;
    std::vector<double> errors;
};
std::vector<TrackedErrors> tracked_errors(const StudyReport& report);

/// Solves for the spectrum of one assembled operator per the config's solver
/// policy (dense below the cutoff, shift-invert Arnoldi above).
SpectralResult solve_spectrum(const SparseOperator& op, const StudyConfig& config,
                              int want_pairs);

} // namespace cpmeig
