#include "cpmeig/study.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cpmeig/trimesh.hpp"

namespace cpmeig {

namespace {

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        std::size_t pos = 0;
        double v = std::stod(token, &pos);
        out.push_back(v);
    }
    return out;
}

} // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            s = a == std::string::npos ? "" : s.substr(a, b - a + 1);
        };
        trim(key);
        trim(value);
        if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

void apply_overrides(std::map<std::string, std::string>& kv,
                     const std::vector<std::string>& overrides) {
    for (const auto& item : overrides) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + item + "' is not of the form key=value");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
}

StudyConfig StudyConfig::from_map(const std::map<std::string, std::string>& kv) {
    StudyConfig c;
    for (const auto& [key, value] : kv) {
        try {
            if (key == "surface") c.surface = value;
            else if (key == "mesh") c.mesh_path = value;
            else if (key == "radius") c.radius = std::stod(value);
            else if (key == "dx_list") c.dx_list = parse_double_list(value);
            else if (key == "p") c.p = std::stoi(value);
            else if (key == "q") c.q = std::stoi(value);
            else if (key == "bc") c.bc = bc_from_name(value);
            else if (key == "k_eigs") c.k_eigs = std::stoi(value);
            else if (key == "shift") c.shift = std::stod(value);
            else if (key == "track") c.track = std::stoi(value);
            else if (key == "solver") c.solver = value;
            else if (key == "dense_cutoff") c.dense_cutoff = std::stoi(value);
            else if (key == "max_dense") c.max_dense = std::stoi(value);
            else if (key == "kappa") c.compute_kappa = value == "1" || value == "true";
            else if (key == "origin_offset") c.origin_offset = std::stod(value);
            else if (key == "imag_tol") c.imag_tol = std::stod(value);
            else if (key == "cutoff_window_factor") c.cutoff_window_factor = std::stod(value);
            else if (key == "seed_radius_factor") c.seed_radius_factor = std::stod(value);
            else if (key == "node_budget") c.node_budget = std::stoul(value);
            else if (key == "histogram_bins") c.histogram_bins = std::stoi(value);
            else if (key == "modes") c.modes = std::stoi(value);
            else if (key == "sample_count") c.sample_count = std::stoi(value);
            else if (key == "export_operators") c.export_operators = value == "1" || value == "true";
            else if (key == "dump_band") c.dump_band = value == "1" || value == "true";
            else
                throw ConfigError("unknown config key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw ConfigError("config key '" + key + "': cannot parse value '" + value + "'");
        } catch (const std::out_of_range&) {
            throw ConfigError("config key '" + key + "': value out of range");
        }
    }
    if (c.solver != "auto" && c.solver != "dense" && c.solver != "arnoldi")
        throw ConfigError("solver must be auto, dense or arnoldi");
    return c;
}

std::unique_ptr<Surface> StudyConfig::build_surface() const {
    if (surface == "mesh") {
        if (mesh_path.empty()) throw ConfigError("surface=mesh needs mesh=<path.off>");
        return make_trimesh_surface(read_off(mesh_path));
    }
    SurfaceParams params;
    params.radius = radius;
    return make_surface(surface, params);
}

Grid StudyConfig::build_grid(double dx, int dim) const {
    Grid grid;
    grid.dx = dx;
    grid.dim = dim;
    grid.origin = Vec3::Zero();
    for (int a = 0; a < dim; ++a) grid.origin[a] = origin_offset * dx;
    return grid;
}

SpectralResult solve_spectrum(const SparseOperator& op, const StudyConfig& config,
                              int want_pairs) {
    const bool dense = config.solver == "dense" ||
                       (config.solver == "auto" && op.rows() <= config.dense_cutoff);
    if (dense) return dense_spectrum(op, config.max_dense);
    int k = std::max(want_pairs, config.k_eigs);
    k = std::min(k, static_cast<int>(op.rows() / 2) - 1);
    if (k < 1) throw ConfigError("operator too small for the Arnoldi solver");
    return arnoldi_near_shift(op, k, config.shift);
}

StudyReport run_study(const StudyConfig& config) {
    if (config.dx_list.empty()) throw ConfigError("dx_list must not be empty");
    for (double dx : config.dx_list) {
        if (dx <= 0.0) throw ConfigError("dx values must be positive");
    }

    auto surface = config.build_surface();
    auto spectrum = analytic_for(*surface, config.bc, config.radius, config.track + 2);

    // The zero mode is matched when present but does not use up a tracked
    // slot (track counts nonzero eigenvalues).
    StudyReport report;
    int distinct_count = 0;
    int want_pairs = config.k_eigs;
    if (spectrum) {
        int nonzero_used = 0;
        int total = 0;
        for (const auto& [lambda, mult] : spectrum->values) {
            if (lambda > 0.0 && nonzero_used >= config.track) break;
            if (lambda > 0.0) ++nonzero_used;
            report.tracked_values.push_back(lambda);
            total += mult;
            ++distinct_count;
        }
        if (want_pairs <= 0) want_pairs = total + 4;
    }
    if (want_pairs <= 0) want_pairs = 8;

    StencilSpec spec;
    spec.p = config.p;
    spec.q = config.q;

    BandOptions band_options;
    band_options.seed_radius_factor = config.seed_radius_factor;
    band_options.node_budget = config.node_budget;
    band_options.include_naive_ghost_footprints =
        config.bc == BcKind::naive_firstorder_neumann;

    for (double dx : config.dx_list) {
        StudyLevel level;
        level.dx = dx;
        try {
            Grid grid = config.build_grid(dx, surface->dim());
            Band band = build_band(*surface, grid, spec, band_options);
            level.m = band.size();
            level.ghost_count = band.ghost_count();

            BcSpec bc{config.bc};
            SparseOperator E = build_extension_matrix(band, config.p, bc);
            SparseOperator dh = build_fd_laplacian(band, config.q);
            SparseOperator M = assemble_stabilized(dh, E);

            if (spectrum) {
                SpectralResult res = solve_spectrum(M, config, want_pairs);
                const double cutoff = 2.0 * grid.dim / (dx * dx);
                const double window = config.cutoff_window_factor * cutoff;
                FilterReport filter = filter_spurious(res, dx, grid.dim, config.imag_tol, window);
                std::vector<double> kept = kept_real_eigenvalues(res, filter);
                // Values at or above the spurious window are untrusted even
                // when the filter let them through; matching stops below it.
                std::erase_if(kept, [&](double v) { return v >= cutoff - window; });
                level.matches = match_eigenvalues(kept, *spectrum, distinct_count);
            }
            if (config.compute_kappa) {
                level.kappa = condition_number_2norm(M);
                level.have_kappa = true;
            }
        } catch (const std::exception& e) {
            level.failed = true;
            level.error = e.what();
        }
        report.levels.push_back(std::move(level));
    }

    // Observed order per tracked value, from the worst multiplicity member
    // at each level; the zero mode never enters a fit.
    for (const auto& tracked : tracked_errors(report)) {
        TrackedOrder order;
        order.analytic = tracked.analytic;
        if (tracked.analytic > 0.0 && tracked.errors.size() >= 3) {
            order.order = observed_order(tracked.errors, tracked.dxs);
            order.defined = true;
        }
        report.orders.push_back(order);
    }
    return report;
}

std::vector<TrackedErrors> tracked_errors(const StudyReport& report) {
    std::vector<TrackedErrors> out;
    for (double lambda : report.tracked_values) {
        TrackedErrors te;
        te.analytic = lambda;
        for (const auto& level : report.levels) {
            if (level.failed) continue;
            double worst = 0.0;
            bool complete = false;
            for (const auto& row : level.matches) {
                if (row.analytic != lambda) continue;
                if (!row.matched) {
                    complete = false;
                    break;
                }
                worst = std::max(worst, row.abs_err);
                complete = true;
            }
            if (complete) {
                te.dxs.push_back(level.dx);
                te.errors.push_back(worst);
            }
        }
        out.push_back(std::move(te));
    }
    return out;
}

} // namespace cpmeig
