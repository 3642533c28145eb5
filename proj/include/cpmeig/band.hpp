#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "cpmeig/geometry.hpp"
#include "cpmeig/types.hpp"

namespace cpmeig {

/// Uniform Cartesian grid over the embedding space.
struct Grid {
    double dx = 0.1;
    Vec3 origin = Vec3::Zero();
    int dim = 2;

    Vec3 node_point(const MultiIndex& m) const {
        return origin + dx * Vec3(m[0], m[1], m[2]);
    }

    /// Index of the grid plane at or below coord, snapping to the exact
    /// plane when coord sits within 1e-12 grid units of it.  Keeps
    /// footprints stable when closest points land on grid planes.
    int floor_index(double coord, int axis) const;
};

/// Finite-difference / interpolation stencil configuration.
struct StencilSpec {
    int p = 3; ///< interpolation degree
    int q = 2; ///< FD order, 2 or 4

    void validate() const; ///< throws on bad q or p; warns when p < q + 1
    int fd_radius() const { return q / 2; }
};

/// Tensor-product interpolation footprint for a target point: the (p+1)^dim
/// cube of grid nodes whose base corner follows the floor rule (cp in the
/// central cell for odd p).  Nodes with vanishing weight are included.
std::vector<MultiIndex> interp_footprint(const Vec3& cp_point, const Grid& grid, int p);

/// Geometry cache for one grid node or stencil point.
struct NodeGeo {
    CpResult cp;
    CpResult cpbar;
    bool ghost = false;
};

/// Narrow band of grid nodes enveloping the surface, closed under all
/// interpolation footprints the discretization needs: for every band node
/// and every FD-stencil point of it, the (nonzero-weight) footprint of that
/// point's extension target is contained in the band.
///
/// Stencil points that fall outside the band ("rim" points) never carry
/// unknowns; they are kept with their geometry so extension rows can be
/// built for them.  Construction is single-threaded; the finished band is
/// immutable and safe for shared concurrent reads.
class Band {
public:
    Grid grid;
    StencilSpec spec;
    bool surface_open = false;

    std::vector<MultiIndex> nodes; ///< lexicographically sorted, size m
    std::vector<NodeGeo> geo;      ///< per node

    std::vector<MultiIndex> rim_nodes; ///< off-band stencil points, sorted
    std::vector<NodeGeo> rim_geo;

    int size() const { return static_cast<int>(nodes.size()); }
    int rim_size() const { return static_cast<int>(rim_nodes.size()); }

    /// Row index of a band node, or -1.
    int index_of(const MultiIndex& m) const {
        auto it = index_.find(m);
        return it == index_.end() ? -1 : it->second;
    }
    /// Index into rim_nodes, or -1.
    int rim_index_of(const MultiIndex& m) const {
        auto it = rim_index_.find(m);
        return it == rim_index_.end() ? -1 : it->second;
    }

    int ghost_count() const;
    double max_abs_distance() const;

    void finalize(); ///< sorts nodes and rebuilds the index maps

private:
    std::unordered_map<MultiIndex, int, MultiIndexHash> index_;
    std::unordered_map<MultiIndex, int, MultiIndexHash> rim_index_;
};

struct BandOptions {
    double seed_radius_factor = 1.5;  ///< seed nodes within this times dx
    std::size_t node_budget = 5'000'000;
    /// Also close over the plain cp footprints of ghost points, which the
    /// first-order ("naive") boundary treatments interpolate at.  The
    /// mirrored footprints are always included.
    bool include_naive_ghost_footprints = false;
};

/// Builds the band by fixpoint closure: seed with the footprints of
/// extension targets near the surface, then repeatedly add every
/// nonzero-weight footprint node of the extension target of any FD-stencil
/// point of a band node until nothing is added.  Deterministic: the final
/// node ordering is lexicographic and the fixpoint is independent of
/// traversal order.
Band build_band(const Surface& surface, const Grid& grid, const StencilSpec& spec,
                const BandOptions& options = {});

struct BandStatistics {
    int m = 0;
    int ghost_count = 0;
    double max_abs_distance = 0.0;
};

BandStatistics band_statistics(const Band& band);

/// Debug dump: idx, i, j[, k], cpx, cpy[, cpz], dist, ghost.
void write_band_csv(const Band& band, const std::string& path);

} // namespace cpmeig
