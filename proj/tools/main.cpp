#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpmeig/io.hpp"
#include "cpmeig/study.hpp"
#include "cpmeig/trimesh.hpp"

namespace fs = std::filesystem;
using namespace cpmeig;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "key=value configuration file");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--set", args.overrides, "override config entries (repeatable)")
        ->take_all();
    cmd->add_flag("--quiet", args.quiet, "suppress progress output");
}

StudyConfig load_config(const CommonArgs& args) {
    std::map<std::string, std::string> kv;
    if (!args.config_path.empty()) kv = parse_config_file(args.config_path);
    apply_overrides(kv, args.overrides);
    return StudyConfig::from_map(kv);
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    if (ec || !fs::is_directory(args.out_dir))
        throw ConfigError("output directory '" + args.out_dir + "' is not writable");
    return (fs::path(args.out_dir) / name).string();
}

double single_dx(const StudyConfig& config) {
    if (config.dx_list.empty()) throw ConfigError("dx_list must contain at least one value");
    return config.dx_list.front();
}

struct Assembled {
    std::unique_ptr<Surface> surface;
    Band band;
    SparseOperator E;
    SparseOperator delta_h;
    SparseOperator M;
};

Assembled assemble(const StudyConfig& config, double dx) {
    Assembled out;
    out.surface = config.build_surface();
    Grid grid = config.build_grid(dx, out.surface->dim());
    StencilSpec spec;
    spec.p = config.p;
    spec.q = config.q;
    BandOptions options;
    options.seed_radius_factor = config.seed_radius_factor;
    options.node_budget = config.node_budget;
    options.include_naive_ghost_footprints =
        config.bc == BcKind::naive_firstorder_neumann;
    out.band = build_band(*out.surface, grid, spec, options);
    BcSpec bc{config.bc};
    out.E = build_extension_matrix(out.band, config.p, bc);
    out.delta_h = build_fd_laplacian(out.band, config.q);
    out.M = assemble_stabilized(out.delta_h, out.E);
    return out;
}

int cmd_spectrum(const CommonArgs& args, bool compare_unstabilized) {
    StudyConfig config = load_config(args);
    double dx = single_dx(config);
    Assembled a = assemble(config, dx);
    if (!args.quiet)
        std::printf("band: m=%d ghosts=%d dx=%g\n", a.band.size(), a.band.ghost_count(), dx);

    if (config.dump_band) write_band_csv(a.band, out_path(args, "band.csv"));
    if (config.export_operators) {
        write_matrix_market(a.M, out_path(args, "M.mtx"));
        write_matrix_market(a.E, out_path(args, "E.mtx"));
        write_matrix_market(a.delta_h, out_path(args, "delta_h.mtx"));
    }

    SpectralResult res = config.solver == "arnoldi" && config.k_eigs > 0
                             ? arnoldi_near_shift(a.M, config.k_eigs, config.shift)
                             : dense_spectrum(a.M, config.max_dense);
    FilterReport filter =
        filter_spurious(res, dx, a.band.grid.dim, config.imag_tol,
                        config.cutoff_window_factor * 2.0 * a.band.grid.dim / (dx * dx));
    write_spectrum_csv(res, filter, out_path(args, "spectrum.csv"));
    write_histogram(res, config.histogram_bins, out_path(args, "histogram.dat"));
    if (!args.quiet) {
        auto kept = kept_real_eigenvalues(res, filter);
        std::printf("spectrum: %lld pairs, %zu kept\n",
                    static_cast<long long>(res.eigenvalues.size()), kept.size());
    }

    if (compare_unstabilized) {
        SparseOperator mt = assemble_unstabilized(a.delta_h, a.E);
        if (config.export_operators)
            write_matrix_market(mt, out_path(args, "M_unstabilized.mtx"));
        SpectralResult res_u = dense_spectrum(mt, config.max_dense);
        FilterReport filter_u =
            filter_spurious(res_u, dx, a.band.grid.dim, config.imag_tol,
                            config.cutoff_window_factor * 2.0 * a.band.grid.dim / (dx * dx));
        write_spectrum_csv(res_u, filter_u, out_path(args, "spectrum_unstabilized.csv"));
        write_histogram(res_u, config.histogram_bins,
                        out_path(args, "histogram_unstabilized.dat"));
    }
    return 0;
}

int cmd_modes(const CommonArgs& args) {
    StudyConfig config = load_config(args);
    double dx = single_dx(config);
    Assembled a = assemble(config, dx);
    if (!args.quiet)
        std::printf("band: m=%d ghosts=%d dx=%g\n", a.band.size(), a.band.ghost_count(), dx);

    StudyConfig solver_cfg = config;
    SpectralResult res = solve_spectrum(a.M, solver_cfg, config.modes + 6);
    FilterReport filter =
        filter_spurious(res, dx, a.band.grid.dim, config.imag_tol,
                        config.cutoff_window_factor * 2.0 * a.band.grid.dim / (dx * dx));

    std::vector<Vec3> points = a.surface->sample_points(config.sample_count);
    // Points hugging the surface boundary may fall outside what the band can
    // interpolate; drop them rather than abort the whole mode dump.
    std::erase_if(points, [&](const Vec3& pt) { return !footprint_in_band(a.band, config.p, pt); });
    if (points.empty()) throw NumericError("no surface sample points are interpolable");
    int written = 0;
    char name[64];
    for (int idx : filter.kept) {
        if (written >= config.modes) break;
        Eigen::VectorXcd samples =
            sample_eigenfunction(a.band, config.p, points, res.eigenvectors.col(idx));
        // Rotate the arbitrary complex phase away, then keep the real part.
        Eigen::Index peak = 0;
        samples.cwiseAbs().maxCoeff(&peak);
        std::complex<double> phase = samples(peak);
        if (std::abs(phase) > 0) samples *= std::abs(phase) / phase;
        std::vector<double> values(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) values[i] = samples(i).real();
        std::snprintf(name, sizeof(name), "mode_%03d.vtk", written);
        write_vtk_point_cloud(points, values, "mode", out_path(args, name));
        if (!args.quiet)
            std::printf("mode %d: lambda=%.6g -> %s\n", written,
                        res.eigenvalues(idx).real(), name);
        ++written;
    }
    return 0;
}

int cmd_converge(const CommonArgs& args) {
    StudyConfig config = load_config(args);
    StudyReport report = run_study(config);
    write_study_csv(report, out_path(args, "study.csv"));
    write_orders_csv(report, out_path(args, "orders.csv"));
    write_order_data(report, out_path(args, ""));
    if (!args.quiet) {
        for (const auto& o : report.orders) {
            if (o.defined)
                std::printf("lambda %-10.6g observed order %.3f\n", o.analytic, o.order);
        }
        for (const auto& level : report.levels) {
            if (level.failed)
                std::printf("dx=%g failed: %s\n", level.dx, level.error.c_str());
        }
    }
    for (const auto& level : report.levels) {
        if (level.failed) throw NumericError("study level dx=" + std::to_string(level.dx) +
                                             " failed: " + level.error);
    }
    return 0;
}

int cmd_cond(const CommonArgs& args) {
    StudyConfig config = load_config(args);
    config.compute_kappa = true;
    StudyReport report = run_study(config);
    write_kappa_csv(report, out_path(args, "kappa.csv"));
    if (!report.tracked_values.empty())
        write_study_csv(report, out_path(args, "study.csv"));
    if (!args.quiet) {
        const StudyLevel* prev = nullptr;
        for (const auto& level : report.levels) {
            if (!level.have_kappa) continue;
            if (prev)
                std::printf("dx=%-10g m=%-6d kappa=%-12.6g ratio=%.3f\n", level.dx, level.m,
                            level.kappa, level.kappa / prev->kappa);
            else
                std::printf("dx=%-10g m=%-6d kappa=%-12.6g\n", level.dx, level.m, level.kappa);
            prev = &level;
        }
    }
    for (const auto& level : report.levels) {
        if (level.failed) throw NumericError("study level dx=" + std::to_string(level.dx) +
                                             " failed: " + level.error);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Laplace-Beltrami eigenvalues and eigenfunctions on curves, "
                 "surfaces and solids via the closest point method"};
    app.require_subcommand(1);

    CommonArgs spectrum_args, converge_args, modes_args, cond_args, compare_args;
    CLI::App* spectrum = app.add_subcommand("spectrum", "full spectrum, CSV and histogram");
    add_common(spectrum, spectrum_args);
    CLI::App* converge = app.add_subcommand("converge", "eigenvalue convergence study");
    add_common(converge, converge_args);
    CLI::App* modes = app.add_subcommand("modes", "write eigenfunction point clouds");
    add_common(modes, modes_args);
    CLI::App* cond = app.add_subcommand("cond", "condition number study");
    add_common(cond, cond_args);
    CLI::App* compare =
        app.add_subcommand("compare-unstab", "stabilized vs unstabilized spectra");
    add_common(compare, compare_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectrum->parsed()) return cmd_spectrum(spectrum_args, false);
        if (compare->parsed()) return cmd_spectrum(compare_args, true);
        if (converge->parsed()) return cmd_converge(converge_args);
        if (modes->parsed()) return cmd_modes(modes_args);
        if (cond->parsed()) return cmd_cond(cond_args);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
