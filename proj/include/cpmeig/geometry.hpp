#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cpmeig/errors.hpp"
#include "cpmeig/types.hpp"

namespace cpmeig {

/// Result of a closest-point query.
struct CpResult {
    Vec3 point = Vec3::Zero(); ///< closest point on the surface
    double distance = 0.0;     ///< Euclidean distance from the query
    bool on_boundary = false;  ///< closest point lies on the surface boundary
};

/// Closest-point representation of a curve, surface or solid.
///
/// Queries are pure functions of immutable surface data and are safe to call
/// concurrently.  Non-unique closest points are broken deterministically:
/// smallest parameter value for parametric shapes, lowest triangle index for
/// meshes, the theta = 0 branch at a circle/sphere center.
class Surface {
public:
    virtual ~Surface() = default;

    virtual int dim() const = 0;
    virtual bool is_open() const = 0;
    virtual std::string kind() const = 0;
    virtual bool analytic_spectrum_available() const { return false; }

    virtual CpResult closest_point(const Vec3& x) const = 0;

    /// Axis-aligned box containing the surface (used to seed band scans).
    virtual void bounding_box(Vec3& lo, Vec3& hi) const = 0;

    /// Roughly uniform sample of on-surface points (mode output, oracles).
    virtual std::vector<Vec3> sample_points(int target_count) const = 0;
};

/// Mirrored closest-point map cp(2 cp(x) - x).  Equals cp(x) away from the
/// surface boundary; near a boundary it lands at the interior mirror point.
CpResult cp_bar(const Surface& surface, const Vec3& x);

/// True iff the mirrored map disagrees with cp(x) beyond tol, i.e. the
/// closest point of x lies on the surface boundary.
bool is_ghost(const Surface& surface, const Vec3& x, double tol);

/// One-parameter curve gamma(t) with derivative, for Newton-based queries.
struct ParametricCurve {
    std::function<Vec3(double)> gamma;
    std::function<Vec3(double)> dgamma;
    std::function<Vec3(double)> d2gamma;
    double t_begin = 0.0;
    double t_end = 1.0;
    bool periodic = false;
    int sample_density = 400; ///< dense initial-guess samples
};

/// Sample-then-Newton minimizer of |gamma(t) - x|^2.  Newton runs until the
/// parameter update drops below 1e-12 (at most 50 iterations) and falls back
/// to the best dense sample if it diverges.  For open curves the endpoints
/// compete as candidates and win with on_boundary set.
CpResult cp_parametric(const ParametricCurve& curve, const Vec3& x);

struct SurfaceParams {
    double radius = 1.0;
};

/// Factory for the named surface kinds.  Throws ConfigError for unknown
/// names, with the valid list in the message.
std::unique_ptr<Surface> make_surface(const std::string& kind, const SurfaceParams& params = {});

/// Names accepted by make_surface.
std::vector<std::string> surface_kind_names();

// Concrete kinds with extra knobs beyond the factory defaults.

std::unique_ptr<Surface> make_circle(double radius);
std::unique_ptr<Surface> make_semicircle(double radius);
std::unique_ptr<Surface> make_egg_curve();
std::unique_ptr<Surface> make_cosine_curve();
std::unique_ptr<Surface> make_segment(const Vec3& a, const Vec3& b);
std::unique_ptr<Surface> make_sphere(double radius);
std::unique_ptr<Surface> make_hemisphere(double radius);
std::unique_ptr<Surface> make_mobius_strip();
std::unique_ptr<Surface> make_l_shape_solid();

/// Scale factor applied to the egg curve so its total arclength is 2*pi.
double egg_curve_scale();
/// Egg curve point at parameter theta (after scaling).
Vec3 egg_curve_point(double theta);

} // namespace cpmeig
