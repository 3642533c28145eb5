#include "cpmeig/band.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <unordered_set>

#include "cpmeig/interp.hpp"

namespace cpmeig {

int Grid::floor_index(double coord, int axis) const {
    double u = (coord - origin[axis]) / dx;
    double r = std::round(u);
    if (std::abs(u - r) < 1e-12) return static_cast<int>(r);
    return static_cast<int>(std::floor(u));
}

void StencilSpec::validate() const {
    if (q != 2 && q != 4)
        throw ConfigError("finite-difference order q must be 2 or 4, got " + std::to_string(q));
    if (p < 1) throw ConfigError("interpolation degree p must be at least 1");
    if (p < q + 1) {
        std::fprintf(stderr,
                     "warning: interpolation degree p=%d is below q+1=%d; "
                     "the scheme may lose accuracy\n",
                     p, q + 1);
    }
}

std::vector<MultiIndex> interp_footprint(const Vec3& cp_point, const Grid& grid, int p) {
    WeightedFootprint wf = extension_weights(cp_point, grid, p);
    return wf.nodes;
}

int Band::ghost_count() const {
    int count = 0;
    for (const auto& g : geo) {
        if (g.ghost) ++count;
    }
    return count;
}

double Band::max_abs_distance() const {
    double worst = 0.0;
    for (const auto& g : geo) worst = std::max(worst, g.cp.distance);
    return worst;
}

void Band::finalize() {
    index_.clear();
    index_.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) index_[nodes[i]] = static_cast<int>(i);
    rim_index_.clear();
    rim_index_.reserve(rim_nodes.size());
    for (std::size_t i = 0; i < rim_nodes.size(); ++i)
        rim_index_[rim_nodes[i]] = static_cast<int>(i);
}

namespace {

// Bandwidth bound of the underlying banding estimate; used only as a sanity
// guard on how far closure queries may drift from the surface.
double band_radius_bound(int dim, const StencilSpec& spec, double dx) {
    double half = 0.5 * (spec.p + 1);
    double normal = spec.fd_radius() + half;
    return std::sqrt((dim - 1) * half * half + normal * normal) * dx;
}

std::vector<MultiIndex> fd_offsets(int dim, int q) {
    std::vector<MultiIndex> offsets;
    offsets.push_back({0, 0, 0});
    for (int a = 0; a < dim; ++a) {
        for (int r = 1; r <= q / 2; ++r) {
            MultiIndex plus{0, 0, 0}, minus{0, 0, 0};
            plus[a] = r;
            minus[a] = -r;
            offsets.push_back(plus);
            offsets.push_back(minus);
        }
    }
    return offsets;
}

} // namespace

Band build_band(const Surface& surface, const Grid& grid, const StencilSpec& spec,
                const BandOptions& options) {
    spec.validate();
    if (grid.dx <= 0.0) throw ConfigError("grid spacing must be positive");
    if (grid.dim != surface.dim())
        throw ConfigError("grid dimension " + std::to_string(grid.dim) +
                          " does not match surface dimension " + std::to_string(surface.dim()));

    const double dx = grid.dx;
    const double ghost_tol = 1e-8 * dx;
    const double guard = 2.0 * band_radius_bound(grid.dim, spec, dx);
    const bool open = surface.is_open();

    std::unordered_map<MultiIndex, NodeGeo, MultiIndexHash> geo_cache;
    auto node_geo = [&](const MultiIndex& mi) -> const NodeGeo& {
        auto it = geo_cache.find(mi);
        if (it != geo_cache.end()) return it->second;
        Vec3 x = grid.node_point(mi);
        NodeGeo g;
        g.cp = surface.closest_point(x);
        if (open) {
            g.cpbar = cp_bar(surface, x);
            g.ghost = (g.cp.point - g.cpbar.point).norm() > ghost_tol;
        } else {
            g.cpbar = g.cp;
        }
        return geo_cache.emplace(mi, std::move(g)).first->second;
    };

    std::unordered_set<MultiIndex, MultiIndexHash> band_set;
    std::deque<MultiIndex> worklist;

    // Footprint targets of one stencil point.
    auto add_targets = [&](const NodeGeo& g, bool from_seed) {
        std::vector<Vec3> targets;
        if (g.ghost) {
            if (g.cpbar.on_boundary) {
                if (from_seed) return; // mirror failed: keep the node out
                throw DomainError(
                    "mirrored closest point landed on the surface boundary; "
                    "the band cannot honor this node");
            }
            targets.push_back(g.cpbar.point);
            if (options.include_naive_ghost_footprints) targets.push_back(g.cp.point);
        } else {
            targets.push_back(g.cp.point);
        }
        for (const Vec3& t : targets) {
            WeightedFootprint wf = extension_weights(t, grid, spec.p);
            for (std::size_t i = 0; i < wf.nodes.size(); ++i) {
                if (std::abs(wf.weights[i]) <= kSupportTol) continue;
                if (band_set.insert(wf.nodes[i]).second) {
                    worklist.push_back(wf.nodes[i]);
                    if (band_set.size() > options.node_budget)
                        throw ResourceError("band exceeds the node budget of " +
                                            std::to_string(options.node_budget));
                }
            }
        }
    };

    // Seed: footprints of every node within the seed radius of the surface.
    Vec3 lo, hi;
    surface.bounding_box(lo, hi);
    const double seed_r = options.seed_radius_factor * dx;
    int ilo[3] = {0, 0, 0}, ihi[3] = {0, 0, 0};
    for (int a = 0; a < grid.dim; ++a) {
        ilo[a] = static_cast<int>(std::floor((lo[a] - seed_r - grid.origin[a]) / dx)) - 1;
        ihi[a] = static_cast<int>(std::ceil((hi[a] + seed_r - grid.origin[a]) / dx)) + 1;
    }
    for (int i = ilo[0]; i <= ihi[0]; ++i) {
        for (int j = ilo[1]; j <= ihi[1]; ++j) {
            for (int k = ilo[2]; k <= ihi[2]; ++k) {
                MultiIndex mi{i, j, k};
                const NodeGeo& g = node_geo(mi);
                if (g.cp.distance <= seed_r) add_targets(g, true);
            }
        }
    }
    if (band_set.empty())
        throw ConfigError("band seed is empty: the grid does not resolve the surface");

    // Fixpoint closure over FD-stencil points of band nodes.
    const auto offsets = fd_offsets(grid.dim, spec.q);
    while (!worklist.empty()) {
        MultiIndex x = worklist.front();
        worklist.pop_front();
        for (const auto& off : offsets) {
            MultiIndex y{x[0] + off[0], x[1] + off[1], x[2] + off[2]};
            const NodeGeo& g = node_geo(y);
            if (g.cp.distance > guard)
                throw DomainError("closure drifted beyond the supported neighborhood");
            add_targets(g, false);
        }
    }

    Band band;
    band.grid = grid;
    band.spec = spec;
    band.surface_open = open;
    band.nodes.assign(band_set.begin(), band_set.end());
    std::sort(band.nodes.begin(), band.nodes.end(), lex_less);
    band.geo.reserve(band.nodes.size());
    for (const auto& mi : band.nodes) band.geo.push_back(geo_cache.at(mi));
    band.finalize();

    // Rim: stencil points of band nodes that are not band members.  Their
    // extension rows are needed even though they carry no unknowns.
    std::unordered_set<MultiIndex, MultiIndexHash> rim_set;
    for (const auto& x : band.nodes) {
        for (const auto& off : offsets) {
            MultiIndex y{x[0] + off[0], x[1] + off[1], x[2] + off[2]};
            if (!band_set.count(y)) rim_set.insert(y);
        }
    }
    band.rim_nodes.assign(rim_set.begin(), rim_set.end());
    std::sort(band.rim_nodes.begin(), band.rim_nodes.end(), lex_less);
    band.rim_geo.reserve(band.rim_nodes.size());
    for (const auto& mi : band.rim_nodes) band.rim_geo.push_back(geo_cache.at(mi));
    band.finalize();

    return band;
}

BandStatistics band_statistics(const Band& band) {
    BandStatistics stats;
    stats.m = band.size();
    stats.ghost_count = band.ghost_count();
    stats.max_abs_distance = band.max_abs_distance();
    return stats;
}

void write_band_csv(const Band& band, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    const bool three_d = band.grid.dim >= 3;
    out << (three_d ? "idx,i,j,k,cpx,cpy,cpz,dist,ghost\n" : "idx,i,j,cpx,cpy,dist,ghost\n");
    char buf[256];
    for (int i = 0; i < band.size(); ++i) {
        const auto& mi = band.nodes[i];
        const auto& g = band.geo[i];
        if (three_d) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%d\n", i, mi[0],
                          mi[1], mi[2], g.cp.point.x(), g.cp.point.y(), g.cp.point.z(),
                          g.cp.distance, g.ghost ? 1 : 0);
        } else {
            std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%.17g,%.17g,%d\n", i, mi[0], mi[1],
                          g.cp.point.x(), g.cp.point.y(), g.cp.distance, g.ghost ? 1 : 0);
        }
        out << buf;
    }
}

} // namespace cpmeig
