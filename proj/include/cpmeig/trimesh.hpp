#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "cpmeig/geometry.hpp"
#include "cpmeig/types.hpp"

namespace cpmeig {

/// Triangle soup with derived boundary topology.  Degenerate (zero-area)
/// triangles are rejected when the mesh is built.
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 2>> boundary_edges; ///< edges with one incident triangle

    // Derived lookup tables for fast boundary classification.
    std::vector<char> vertex_on_boundary;
    std::vector<std::array<char, 3>> edge_on_boundary; ///< per triangle: ab, bc, ca

    static TriMesh build(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles);
};

/// Exact point-to-triangle minimization over all triangles (with a bounding
/// box early-out).  on_boundary is set when the minimizer lies on a boundary
/// edge or boundary vertex.  Ties go to the lowest triangle index.
CpResult cp_trimesh(const TriMesh& mesh, const Vec3& x);

/// ASCII OFF reader: "OFF" header, counts line, vertex lines, "3 i j k" faces.
TriMesh read_off(const std::string& path);
void write_off(const TriMesh& mesh, const std::string& path);

/// Wraps a mesh as a closest-point surface.
std::unique_ptr<Surface> make_trimesh_surface(TriMesh mesh);

/// Longitude/latitude sphere tessellation used by tests and demos.
TriMesh make_uv_sphere_mesh(double radius, int stacks, int slices);

} // namespace cpmeig
