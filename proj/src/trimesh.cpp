#include "cpmeig/trimesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace cpmeig {

namespace {

// Closest point on triangle (a, b, c) to p; region classification follows the
// standard Voronoi-region walk.  feature: 0..2 vertex, 3..5 edge(ab,bc,ca),
// 6 face interior.
Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c,
                         int& feature) {
    Vec3 ab = b - a, ac = c - a, ap = p - a;
    double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) {
        feature = 0;
        return a;
    }
    Vec3 bp = p - b;
    double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) {
        feature = 1;
        return b;
    }
    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        feature = 3;
        return a + ab * (d1 / (d1 - d3));
    }
    Vec3 cp_ = p - c;
    double d5 = ab.dot(cp_), d6 = ac.dot(cp_);
    if (d6 >= 0.0 && d5 <= d6) {
        feature = 2;
        return c;
    }
    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        feature = 5;
        return a + ac * (d2 / (d2 - d6));
    }
    double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        feature = 4;
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    double denom = 1.0 / (va + vb + vc);
    feature = 6;
    return a + ab * (vb * denom) + ac * (vc * denom);
}

std::array<int, 2> sorted_edge(int i, int j) {
    return i < j ? std::array<int, 2>{i, j} : std::array<int, 2>{j, i};
}

} // namespace

TriMesh TriMesh::build(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles) {
    TriMesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.triangles = std::move(triangles);

    double scale = 0.0;
    for (const auto& v : mesh.vertices) scale = std::max(scale, v.norm());
    if (scale == 0.0) scale = 1.0;

    std::map<std::array<int, 2>, int> edge_count;
    int nv = static_cast<int>(mesh.vertices.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            if (tri[k] < 0 || tri[k] >= nv)
                throw ConfigError("mesh: triangle " + std::to_string(t) +
                                  " has out-of-range vertex index");
        }
        Vec3 n = (mesh.vertices[tri[1]] - mesh.vertices[tri[0]])
                     .cross(mesh.vertices[tri[2]] - mesh.vertices[tri[0]]);
        if (n.norm() < 1e-14 * scale * scale)
            throw ConfigError("mesh: triangle " + std::to_string(t) + " is degenerate");
        for (int k = 0; k < 3; ++k) {
            edge_count[sorted_edge(tri[k], tri[(k + 1) % 3])]++;
        }
    }
    std::set<std::array<int, 2>> boundary;
    for (const auto& [edge, count] : edge_count) {
        if (count == 1) {
            mesh.boundary_edges.push_back(edge);
            boundary.insert(edge);
        }
    }
    mesh.vertex_on_boundary.assign(mesh.vertices.size(), 0);
    for (const auto& e : mesh.boundary_edges) {
        mesh.vertex_on_boundary[e[0]] = 1;
        mesh.vertex_on_boundary[e[1]] = 1;
    }
    mesh.edge_on_boundary.resize(mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            mesh.edge_on_boundary[t][k] =
                boundary.count(sorted_edge(tri[k], tri[(k + 1) % 3])) ? 1 : 0;
        }
    }
    return mesh;
}

CpResult cp_trimesh(const TriMesh& mesh, const Vec3& x) {
    if (mesh.triangles.empty()) throw DomainError("cp_trimesh: empty mesh");

    double best = std::numeric_limits<double>::infinity();
    Vec3 best_p = Vec3::Zero();
    bool best_boundary = false;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        const Vec3 &a = mesh.vertices[tri[0]], &b = mesh.vertices[tri[1]],
                   &c = mesh.vertices[tri[2]];
        // Cheap reject: distance to the triangle's bounding box.
        Vec3 lo = a.cwiseMin(b).cwiseMin(c), hi = a.cwiseMax(b).cwiseMax(c);
        Vec3 clamped = x.cwiseMax(lo).cwiseMin(hi);
        if ((x - clamped).squaredNorm() >= best) continue;

        int feature = 6;
        Vec3 p = closest_on_triangle(x, a, b, c, feature);
        double d = (x - p).squaredNorm();
        if (d < best - 1e-30) {
            best = d;
            best_p = p;
            bool on_b = false;
            if (feature < 3) {
                on_b = mesh.vertex_on_boundary[tri[feature]] != 0;
            } else if (feature < 6) {
                on_b = mesh.edge_on_boundary[t][feature - 3] != 0;
            }
            best_boundary = on_b;
        }
    }
    CpResult out;
    out.point = best_p;
    out.distance = std::sqrt(best);
    out.on_boundary = best_boundary;
    return out;
}

TriMesh read_off(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open mesh file " + path);
    std::string token;
    if (!(in >> token) || token != "OFF") throw ConfigError(path + ": missing OFF header");
    int nv = 0, nf = 0, ne = 0;
    if (!(in >> nv >> nf >> ne)) throw ConfigError(path + ": bad counts line");
    std::vector<Vec3> verts(nv);
    for (int i = 0; i < nv; ++i) {
        if (!(in >> verts[i].x() >> verts[i].y() >> verts[i].z()))
            throw ConfigError(path + ": truncated vertex list");
    }
    std::vector<std::array<int, 3>> tris;
    tris.reserve(nf);
    for (int f = 0; f < nf; ++f) {
        int arity = 0;
        if (!(in >> arity)) throw ConfigError(path + ": truncated face list");
        if (arity != 3) throw ConfigError(path + ": only triangle faces are supported");
        std::array<int, 3> tri{};
        if (!(in >> tri[0] >> tri[1] >> tri[2])) throw ConfigError(path + ": truncated face");
        tris.push_back(tri);
    }
    return TriMesh::build(std::move(verts), std::move(tris));
}

void write_off(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << "OFF\n" << mesh.vertices.size() << " " << mesh.triangles.size() << " 0\n";
    char buf[96];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        out << buf;
    }
    for (const auto& t : mesh.triangles) {
        out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    }
}

namespace {

class TriMeshSurface final : public Surface {
public:
    explicit TriMeshSurface(TriMesh mesh) : mesh_(std::move(mesh)) {}

    int dim() const override { return 3; }
    bool is_open() const override { return !mesh_.boundary_edges.empty(); }
    std::string kind() const override { return "mesh"; }

    CpResult closest_point(const Vec3& x) const override { return cp_trimesh(mesh_, x); }

    void bounding_box(Vec3& lo, Vec3& hi) const override {
        lo = Vec3::Constant(std::numeric_limits<double>::infinity());
        hi = -lo;
        for (const auto& v : mesh_.vertices) {
            lo = lo.cwiseMin(v);
            hi = hi.cwiseMax(v);
        }
    }

    std::vector<Vec3> sample_points(int target_count) const override {
        // Vertices plus triangle centroids until the budget is met.
        std::vector<Vec3> pts = mesh_.vertices;
        for (const auto& t : mesh_.triangles) {
            if (static_cast<int>(pts.size()) >= target_count) break;
            pts.push_back((mesh_.vertices[t[0]] + mesh_.vertices[t[1]] + mesh_.vertices[t[2]]) /
                          3.0);
        }
        return pts;
    }

    const TriMesh& mesh() const { return mesh_; }

private:
    TriMesh mesh_;
};

} // namespace

std::unique_ptr<Surface> make_trimesh_surface(TriMesh mesh) {
    return std::make_unique<TriMeshSurface>(std::move(mesh));
}

TriMesh make_uv_sphere_mesh(double radius, int stacks, int slices) {
    std::vector<Vec3> verts;
    verts.emplace_back(0, 0, radius);
    for (int i = 1; i < stacks; ++i) {
        double phi = std::numbers::pi * i / stacks;
        for (int j = 0; j < slices; ++j) {
            double th = 2.0 * std::numbers::pi * j / slices;
            verts.emplace_back(radius * std::sin(phi) * std::cos(th),
                               radius * std::sin(phi) * std::sin(th), radius * std::cos(phi));
        }
    }
    verts.emplace_back(0, 0, -radius);
    int south = static_cast<int>(verts.size()) - 1;

    auto ring = [&](int i, int j) { return 1 + (i - 1) * slices + (j % slices); };
    std::vector<std::array<int, 3>> tris;
    for (int j = 0; j < slices; ++j) {
        tris.push_back({0, ring(1, j), ring(1, j + 1)});
    }
    for (int i = 1; i < stacks - 1; ++i) {
        for (int j = 0; j < slices; ++j) {
            tris.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
            tris.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
        }
    }
    for (int j = 0; j < slices; ++j) {
        tris.push_back({south, ring(stacks - 1, j + 1), ring(stacks - 1, j)});
    }
    return TriMesh::build(std::move(verts), std::move(tris));
}

} // namespace cpmeig
