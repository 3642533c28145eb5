#include "cpmeig/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cpmeig/quadrature.hpp"

namespace cpmeig {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

CpResult cp_bar(const Surface& surface, const Vec3& x) {
    CpResult first = surface.closest_point(x);
    Vec3 reflected = 2.0 * first.point - x;
    CpResult second = surface.closest_point(reflected);
    CpResult out;
    out.point = second.point;
    out.distance = (x - second.point).norm();
    out.on_boundary = second.on_boundary;
    return out;
}

bool is_ghost(const Surface& surface, const Vec3& x, double tol) {
    if (!surface.is_open()) return false;
    if (tol <= 0.0) throw DomainError("is_ghost: tolerance must be positive");
    CpResult a = surface.closest_point(x);
    CpResult b = cp_bar(surface, x);
    return (a.point - b.point).norm() > tol;
}

CpResult cp_parametric(const ParametricCurve& curve, const Vec3& x) {
    const double span = curve.t_end - curve.t_begin;
    const int n = std::max(8, curve.sample_density);
    // Dense scan for the starting basin; ties resolve to the smallest t.
    double best_t = curve.t_begin;
    double best_f = (curve.gamma(curve.t_begin) - x).squaredNorm();
    const int last = curve.periodic ? n - 1 : n;
    for (int i = 1; i <= last; ++i) {
        double t = curve.t_begin + span * static_cast<double>(i) / n;
        double f = (curve.gamma(t) - x).squaredNorm();
        if (f < best_f) {
            best_f = f;
            best_t = t;
        }
    }

    double t = best_t;
    double f_at_t = best_f;
    const double step_cap = 2.0 * span / n;
    for (int it = 0; it < 50; ++it) {
        Vec3 g = curve.gamma(t);
        Vec3 dg = curve.dgamma(t);
        Vec3 d2g = curve.d2gamma(t);
        Vec3 r = g - x;
        double fp = 2.0 * r.dot(dg);
        double fpp = 2.0 * (dg.squaredNorm() + r.dot(d2g));
        if (fpp <= 0.0) break; // wrong basin curvature, keep the sample
        double step = -fp / fpp;
        step = std::clamp(step, -step_cap, step_cap);
        double t_next = t + step;
        if (curve.periodic) {
            t_next = curve.t_begin + std::fmod(t_next - curve.t_begin + 2.0 * span, span);
        } else {
            t_next = std::clamp(t_next, curve.t_begin, curve.t_end);
        }
        double f_next = (curve.gamma(t_next) - x).squaredNorm();
        if (f_next > f_at_t + 1e-15 * (1.0 + f_at_t)) break; // diverging
        double moved = std::abs(t_next - t);
        t = t_next;
        f_at_t = f_next;
        if (moved < 1e-12) break;
    }
    if (f_at_t > best_f) { // Newton lost to the dense scan
        t = best_t;
        f_at_t = best_f;
    }

    CpResult out;
    if (!curve.periodic) {
        // Endpoints compete exactly.
        double f_begin = (curve.gamma(curve.t_begin) - x).squaredNorm();
        double f_end = (curve.gamma(curve.t_end) - x).squaredNorm();
        if (f_begin <= f_at_t && f_begin <= f_end) {
            t = curve.t_begin;
            f_at_t = f_begin;
        } else if (f_end < f_at_t) {
            t = curve.t_end;
            f_at_t = f_end;
        }
        double edge_tol = 1e-9 * span;
        out.on_boundary = (t <= curve.t_begin + edge_tol) || (t >= curve.t_end - edge_tol);
    }
    out.point = curve.gamma(t);
    out.distance = (x - out.point).norm();
    return out;
}

// ---------------------------------------------------------------------------
// analytic curves in the z = 0 plane

namespace {

class Circle final : public Surface {
public:
    explicit Circle(double radius) : radius_(radius) {}

    int dim() const override { return 2; }
    bool is_open() const override { return false; }
    std::string kind() const override { return "circle"; }
    bool analytic_spectrum_available() const override { return true; }

    CpResult closest_point(const Vec3& x) const override {
        CpResult out;
        double r = std::hypot(x.x(), x.y());
        if (r < 1e-300) {
            out.point = Vec3(radius_, 0.0, 0.0); // center: theta = 0 branch
        } else {
            out.point = Vec3(radius_ * x.x() / r, radius_ * x.y() / r, 0.0);
        }
        out.distance = (x - out.point).norm();
        return out;
    }

    void bounding_box(Vec3& lo, Vec3& hi) const override {
        lo = Vec3(-radius_, -radius_, 0.0);
        hi = Vec3(radius_, radius_, 0.0);
    }

    std::vector<Vec3> sample_points(int target_count) const override {
        std::vector<Vec3> pts;
        pts.reserve(target_count);
        for (int i = 0; i < target_count; ++i) {
            double th = 2.0 * kPi * i / target_count;
            pts.emplace_back(radius_ * std::cos(th), radius_ * std::sin(th), 0.0);
        }
        return pts;
    }

private:
    double radius_;
};

class Semicircle final : public Surface {
public:
    explicit Semicircle(double radius) : radius_(radius) {}

    int dim() const override { return 2; }
    bool is_open() const override { return true; }
    std::string kind() const override { return "semicircle"; }
    bool analytic_spectrum_available() const override { return true; }

    CpResult closest_point(const Vec3& x) const override {
        CpResult out;
        double r = std::hypot(x.x(), x.y());
        if (r < 1e-300) {
            out.point = Vec3(radius_, 0.0, 0.0);
            out.on_boundary = true;
        } else if (x.y() >= 0.0) {
            out.point = Vec3(radius_ * x.x() / r, radius_ * x.y() / r, 0.0);
            out.on_boundary = std::abs(x.y()) == 0.0;
        } else {
            // Below the axis the arc endpoints are the only candidates.
            double d_right = (x - Vec3(radius_, 0, 0)).squaredNorm();
            double d_left = (x - Vec3(-radius_, 0, 0)).squaredNorm();
            out.point = d_right <= d_left ? Vec3(radius_, 0, 0) : Vec3(-radius_, 0, 0);
            out.on_boundary = true;
        }
        out.distance = (x - out.point).norm();
        return out;
    }

    void bounding_box(Vec3& lo, Vec3& hi) const override {
        lo = Vec3(-radius_, 0.0, 0.0);
        hi = Vec3(radius_, radius_, 0.0);
    }

    std::vector<Vec3> sample_points(int target_count) const override {
        std::vector<Vec3> pts;
        pts.reserve(target_count);
        for (int i = 0; i < target_count; ++i) {
            double th = kPi * i / (target_count - 1.0);
            pts.emplace_back(radius_ * std::cos(th), radius_ * std::sin(th), 0.0);
        }
        return pts;
    }

private:
    double radius_;
};

// Closed egg-shaped curve, scaled so the total arclength is 2*pi.
Vec3 egg_unscaled(double th) {
    return Vec3(std::cos(th), 1.2 * std::sin(th) * (1.0 + 0.15 * std::cos(th)), 0.0);
}

Vec3 egg_unscaled_d(double th) {
    return Vec3(-std::sin(th), 1.2 * (std::cos(th) + 0.15 * std::cos(2.0 * th)), 0.0);
}

Vec3 egg_unscaled_d2(double th) {
    return Vec3(-std::cos(th), 1.2 * (-std::sin(th) - 0.3 * std::sin(2.0 * th)), 0.0);
}

double egg_scale_factor() {
    static const double scale = [] {
        double len = adaptive_simpson([](double t) { return egg_unscaled_d(t).norm(); },
                                      0.0, 2.0 * kPi, 1e-13);
        return 2.0 * kPi / len;
    }();
    return scale;
}

class EggCurve final : public Surface {
public:
    EggCurve() {
        double c = egg_scale_factor();
        curve_.gamma = [c](double t) { return Vec3(c * egg_unscaled(t)); };
        curve_.dgamma = [c](double t) { return Vec3(c * egg_unscaled_d(t)); };
        curve_.d2gamma = [c](double t) { return Vec3(c * egg_unscaled_d2(t)); };
        curve_.t_begin = 0.0;
        curve_.t_end = 2.0 * kPi;
        curve_.periodic = true;
        curve_.sample_density = 400;
    }

    int dim() const override { return 2; }
    bool is_open() const override { return false; }
    std::string kind() const override { return "egg"; }
    bool analytic_spectrum_available() const override { return true; }

    CpResult closest_point(const Vec3& x) const override { return cp_parametric(curve_, x); }

    void bounding_box(Vec3& lo, Vec3& hi) const override {
        double c = egg_scale_factor();
        lo = Vec3(-c, -1.38 * c, 0.0);
        hi = Vec3(c, 1.38 * c, 0.0);
    }

    std::vector<Vec3> sample_points(int target_count) const override {
        std::vector<Vec3> pts;
        pts.reserve(target_count);
        for (int i = 0; i < target_count; ++i) {
            pts.push_back(curve_.gamma(2.0 * kPi * i / target_count));
        }
        return pts;
    }

private:
    ParametricCurve curve_;
};

class CosineCurve final : public Surface {
public:
    CosineCurve() {
        curve_.gamma = [](double t) { return Vec3(t, std::cos(t), 0.0); };
        curve_.dgamma = [](double t) { return Vec3(1.0, -std::sin(t), 0.0); };
        curve_.d2gamma = [](double t) { return Vec3(0.0, -std::cos(t), 0.0); };
        curve_.t_begin = 0.25;
        curve_.t_end = 4.0;
        curve_.periodic = false;
        curve_.sample_density = 400;
    }

    int dim() const override { return 2; }
    bool is_open() const override { return true; }
    std::string kind() const override { return "cosine"; }
    bool analytic_spectrum_available() const override { return true; }

    CpResult closest_point(const Vec3& x) const override { return cp_parametric(curve_, x); }

    void bounding_box(Vec3& lo, Vec3& hi) const override {
        lo = Vec3(0.25, -1.0, 0.0);
        hi = Vec3(4.0, 1.0, 0.0);
    }

    std::vector<Vec3> sample_points(int target_count) const override {
        std::vector<Vec3> pts;
        pts.reserve(target_count);
        for (int i = 0; i < target_count; ++i) {
            double t = 0.25 + (4.0 - 0.25) * i / (target_count - 1.0);
            pts.push_back(curve_.gamma(t));
        }
        return pts;
    }

private:
    ParametricCurve curve_;
};

class Segment final : public Surface {
public:
    Segment(const Vec3& a, const Vec3& b) : a_(a), b_(b) {}

    int dim() const override { return 2; }
    bool is_open() const override { return true; }
    std::string kind() const override { return "interval"; }
    bool analytic_spectrum_available() const override { return true; }

    CpResult closest_point(const Vec3& x) const override {
        Vec3 ab = b_ - a_;
        double t = ab.squaredNorm() > 0.0 ? (x - a_).dot(ab) / ab.squaredNorm() : 0.0;
        double tc = std::clamp(t, 0.0, 1.0);
        CpResult out;
        out.point = a_ + tc * ab;
        out.distance = (x - out.point).norm();
        out.on_boundary = (tc == 0.0 || tc == 1.0);
        return out;
    }

    void bounding_box(Vec3& lo, Vec3& hi) const override {
        lo = a_.cwiseMin(b_);
        hi = a_.cwiseMax(b_);
    }

    std::vector<Vec3> sample_points(int target_count) const override {
        std::vector<Vec3> pts;
        pts.reserve(target_count);
        for (int i = 0; i < target_count; ++i) {
            pts.push_back(a_ + (b_ - a_) * (i / (target_count - 1.0)));
        }
        return pts;
    }

private:
    Vec3 a_, b_;
};

// ---------------------------------------------------------------------------
// surfaces in R^3

class Sphere final : public Surface {
public:
    explicit Sphere(double radius) : radius_(radius) {}

    int dim() const override { return 3; }
    bool is_open() const override { return false; }
    std::string kind() const override { return "sphere"; }
    bool analytic_spectrum_available() const override { return true; }

    CpResult closest_point(const Vec3& x) const override {
        CpResult out;
        double r = x.norm();
        if (r < 1e-300) {
            out.point = Vec3(radius_, 0.0, 0.0);
        } else {
            out.point = x * (radius_ / r);
        }
        out.distance = (x - out.point).norm();
        return out;
    }

    void bounding_box(Vec3& lo, Vec3& hi) const override {
        lo = Vec3::Constant(-radius_);
        hi = Vec3::Constant(radius_);
    }

    std::vector<Vec3> sample_points(int target_count) const override {
        // Fibonacci sphere.
        std::vector<Vec3> pts;
        pts.reserve(target_count);
        const double golden = kPi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < target_count; ++i) {
            double z = 1.0 - 2.0 * (i + 0.5) / target_count;
            double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            double phi = golden * i;
            pts.emplace_back(radius_ * rho * std::cos(phi), radius_ * rho * std::sin(phi),
                             radius_ * z);
        }
        return pts;
    }

private:
    double radius_;
};

class Hemisphere final : public Surface {
public:
    explicit Hemisphere(double radius) : radius_(radius) {}

    int dim() const override { return 3; }
    bool is_open() const override { return true; }
    std::string kind() const override { return "hemisphere"; }
    bool analytic_spectrum_available() const override { return true; }

    CpResult closest_point(const Vec3& x) const override {
        CpResult out;
        double r = x.norm();
        if (r < 1e-300) {
            out.point = Vec3(radius_, 0.0, 0.0);
            out.on_boundary = true;
        } else if (x.z() >= 0.0) {
            out.point = x * (radius_ / r);
            out.on_boundary = x.z() == 0.0;
        } else {
            double rho = std::hypot(x.x(), x.y());
            if (rho < 1e-300) {
                out.point = Vec3(radius_, 0.0, 0.0); // below the pole: equator tie
            } else {
                out.point = Vec3(radius_ * x.x() / rho, radius_ * x.y() / rho, 0.0);
            }
            out.on_boundary = true;
        }
        out.distance = (x - out.point).norm();
        return out;
    }

    void bounding_box(Vec3& lo, Vec3& hi) const override {
        lo = Vec3(-radius_, -radius_, 0.0);
        hi = Vec3(radius_, radius_, radius_);
    }

    std::vector<Vec3> sample_points(int target_count) const override {
        std::vector<Vec3> pts;
        pts.reserve(target_count);
        const double golden = kPi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < target_count; ++i) {
            double z = (i + 0.5) / target_count; // upper half only
            double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            double phi = golden * i;
            pts.emplace_back(radius_ * rho * std::cos(phi), radius_ * rho * std::sin(phi),
                             radius_ * z);
        }
        return pts;
    }

private:
    double radius_;
};

// Mobius strip with center-circle radius 1 and width 1 (v in [-1/2, 1/2]).
class MobiusStrip final : public Surface {
public:
    int dim() const override { return 3; }
    bool is_open() const override { return true; }
    std::string kind() const override { return "mobius"; }

    static Vec3 gamma(double u, double v) {
        double c2 = std::cos(0.5 * u), s2 = std::sin(0.5 * u);
        double a = 1.0 + v * c2;
        return Vec3(a * std::cos(u), a * std::sin(u), v * s2);
    }

    CpResult closest_point(const Vec3& x) const override {
        // Coarse scan over the fundamental domain, then 2-D Newton.
        const int nu = 360, nv = 41;
        double best_u = 0.0, best_v = 0.0;
        double best_f = std::numeric_limits<double>::infinity();
        for (int i = 0; i < nu; ++i) {
            double u = 2.0 * kPi * i / nu;
            for (int j = 0; j < nv; ++j) {
                double v = -0.5 + static_cast<double>(j) / (nv - 1);
                double f = (gamma(u, v) - x).squaredNorm();
                if (f < best_f) {
                    best_f = f;
                    best_u = u;
                    best_v = v;
                }
            }
        }
        double u = best_u, v = best_v, f = best_f;
        for (int it = 0; it < 50; ++it) {
            double c2 = std::cos(0.5 * u), s2 = std::sin(0.5 * u);
            double cu = std::cos(u), su = std::sin(u);
            double a = 1.0 + v * c2;
            double a_u = -0.5 * v * s2;
            double a_uu = -0.25 * v * c2;
            Vec3 g(a * cu, a * su, v * s2);
            Vec3 gu(a_u * cu - a * su, a_u * su + a * cu, 0.5 * v * c2);
            Vec3 gv(c2 * cu, c2 * su, s2);
            Vec3 guu(a_uu * cu - 2.0 * a_u * su - a * cu,
                     a_uu * su + 2.0 * a_u * cu - a * su, -0.25 * v * s2);
            Vec3 guv(-0.5 * s2 * cu - c2 * su, -0.5 * s2 * su + c2 * cu, 0.5 * c2);
            Vec3 r = g - x;
            Eigen::Vector2d grad(2.0 * r.dot(gu), 2.0 * r.dot(gv));
            Eigen::Matrix2d hess;
            hess(0, 0) = 2.0 * (gu.squaredNorm() + r.dot(guu));
            hess(0, 1) = hess(1, 0) = 2.0 * (gu.dot(gv) + r.dot(guv));
            hess(1, 1) = 2.0 * gv.squaredNorm();
            double det = hess.determinant();
            if (det <= 0.0 || hess(0, 0) <= 0.0) break;
            Eigen::Vector2d step = hess.ldlt().solve(-grad);
            double cap = 2.0 * kPi / nu;
            if (step.norm() > cap) step *= cap / step.norm();
            double u_next = u + step(0);
            double v_next = std::clamp(v + step(1), -0.5, 0.5);
            double f_next = (gamma(u_next, v_next) - x).squaredNorm();
            if (f_next > f + 1e-15 * (1.0 + f)) break;
            double moved = std::abs(u_next - u) + std::abs(v_next - v);
            u = u_next;
            v = v_next;
            f = f_next;
            if (moved < 1e-12) break;
        }
        CpResult out;
        out.point = gamma(u, v);
        out.distance = (x - out.point).norm();
        out.on_boundary = std::abs(v) >= 0.5 - 1e-9;

        // Edge-pinned minimizers: refine along the boundary curve, which
        // closes after two turns (u, +1/2) ~ (u + 2 pi, -1/2).
        if (out.on_boundary) {
            ParametricCurve edge;
            edge.gamma = [](double t) { return gamma(t, 0.5); };
            edge.dgamma = [](double t) {
                double h = 1e-6;
                return Vec3((gamma(t + h, 0.5) - gamma(t - h, 0.5)) / (2.0 * h));
            };
            edge.d2gamma = [](double t) {
                double h = 1e-5;
                return Vec3((gamma(t + h, 0.5) - 2.0 * gamma(t, 0.5) + gamma(t - h, 0.5)) /
                            (h * h));
            };
            edge.t_begin = 0.0;
            edge.t_end = 4.0 * kPi;
            edge.periodic = true;
            edge.sample_density = 1440;
            CpResult on_edge = cp_parametric(edge, x);
            if (on_edge.distance < out.distance) {
                out.point = on_edge.point;
                out.distance = on_edge.distance;
            }
        }
        return out;
    }

    void bounding_box(Vec3& lo, Vec3& hi) const override {
        lo = Vec3(-1.5, -1.5, -0.5);
        hi = Vec3(1.5, 1.5, 0.5);
    }

    std::vector<Vec3> sample_points(int target_count) const override {
        int nv = std::max(9, static_cast<int>(std::sqrt(target_count / 8.0)));
        int nu = std::max(8, target_count / nv);
        std::vector<Vec3> pts;
        pts.reserve(static_cast<std::size_t>(nu) * nv);
        for (int i = 0; i < nu; ++i) {
            for (int j = 0; j < nv; ++j) {
                pts.push_back(gamma(2.0 * kPi * i / nu, -0.5 + static_cast<double>(j) / (nv - 1)));
            }
        }
        return pts;
    }
};

// Grid-aligned L-shaped solid: [0,2]^2 with the open quadrant (1,2]x(1,2]
// removed.  Codimension zero, so cp(x) = x inside and the perimeter acts as
// the surface boundary.
class LShapeSolid final : public Surface {
public:
    LShapeSolid() {
        const Vec3 verts[6] = {
            {0, 0, 0}, {2, 0, 0}, {2, 1, 0}, {1, 1, 0}, {1, 2, 0}, {0, 2, 0}};
        for (int i = 0; i < 6; ++i) {
            seg_a_[i] = verts[i];
            seg_b_[i] = verts[(i + 1) % 6];
        }
    }

    int dim() const override { return 2; }
    bool is_open() const override { return true; }
    std::string kind() const override { return "lshape"; }

    static bool inside(const Vec3& x) {
        return x.x() >= 0.0 && x.x() <= 2.0 && x.y() >= 0.0 && x.y() <= 2.0 &&
               !(x.x() > 1.0 && x.y() > 1.0);
    }

    CpResult closest_point(const Vec3& x) const override {
        CpResult out;
        Vec3 q(x.x(), x.y(), 0.0);
        if (inside(q)) {
            out.point = q;
            out.distance = std::abs(x.z());
            out.on_boundary = false;
            return out;
        }
        double best = std::numeric_limits<double>::infinity();
        Vec3 best_p = Vec3::Zero();
        for (int i = 0; i < 6; ++i) {
            Vec3 ab = seg_b_[i] - seg_a_[i];
            double t = std::clamp((q - seg_a_[i]).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
            Vec3 p = seg_a_[i] + t * ab;
            double d = (q - p).squaredNorm();
            if (d < best - 1e-30) { // ties keep the lowest segment index
                best = d;
                best_p = p;
            }
        }
        out.point = best_p;
        out.distance = (x - best_p).norm();
        out.on_boundary = true;
        return out;
    }

    void bounding_box(Vec3& lo, Vec3& hi) const override {
        lo = Vec3(0.0, 0.0, 0.0);
        hi = Vec3(2.0, 2.0, 0.0);
    }

    std::vector<Vec3> sample_points(int target_count) const override {
        int n = std::max(2, static_cast<int>(std::sqrt(target_count / 3.0)));
        std::vector<Vec3> pts;
        for (int i = 0; i <= 2 * n; ++i) {
            for (int j = 0; j <= 2 * n; ++j) {
                Vec3 p(2.0 * i / (2.0 * n), 2.0 * j / (2.0 * n), 0.0);
                if (inside(p)) pts.push_back(p);
            }
        }
        return pts;
    }

private:
    Vec3 seg_a_[6], seg_b_[6];
};

} // namespace

double egg_curve_scale() { return egg_scale_factor(); }

Vec3 egg_curve_point(double theta) { return egg_scale_factor() * egg_unscaled(theta); }

std::unique_ptr<Surface> make_circle(double r) { return std::make_unique<Circle>(r); }
std::unique_ptr<Surface> make_semicircle(double r) { return std::make_unique<Semicircle>(r); }
std::unique_ptr<Surface> make_egg_curve() { return std::make_unique<EggCurve>(); }
std::unique_ptr<Surface> make_cosine_curve() { return std::make_unique<CosineCurve>(); }
std::unique_ptr<Surface> make_segment(const Vec3& a, const Vec3& b) {
    return std::make_unique<Segment>(a, b);
}
std::unique_ptr<Surface> make_sphere(double r) { return std::make_unique<Sphere>(r); }
std::unique_ptr<Surface> make_hemisphere(double r) { return std::make_unique<Hemisphere>(r); }
std::unique_ptr<Surface> make_mobius_strip() { return std::make_unique<MobiusStrip>(); }
std::unique_ptr<Surface> make_l_shape_solid() { return std::make_unique<LShapeSolid>(); }

std::vector<std::string> surface_kind_names() {
    return {"circle", "semicircle", "egg", "cosine", "interval",
            "sphere", "hemisphere", "mobius", "lshape", "mesh"};
}

std::unique_ptr<Surface> make_surface(const std::string& kind, const SurfaceParams& params) {
    if (kind == "circle") return make_circle(params.radius);
    if (kind == "semicircle") return make_semicircle(params.radius);
    if (kind == "egg") return make_egg_curve();
    if (kind == "cosine") return make_cosine_curve();
    if (kind == "interval") return make_segment(Vec3(0, 0, 0), Vec3(1, 0, 0));
    if (kind == "sphere") return make_sphere(params.radius);
    if (kind == "hemisphere") return make_hemisphere(params.radius);
    if (kind == "mobius") return make_mobius_strip();
    if (kind == "lshape") return make_l_shape_solid();
    std::string names;
    for (const auto& n : surface_kind_names()) names += n + " ";
    throw ConfigError("unknown surface kind '" + kind + "' (valid: " + names + ")");
}

} // namespace cpmeig
