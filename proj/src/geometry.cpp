#include "mtkrisk/geometry.hpp"

#include <cmath>

namespace mtk {

namespace {

Eigen::Vector3d central_d1(const CurveSampler::Fn& f, double t, double h) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

Eigen::Vector3d central_d2(const CurveSampler::Fn& f, double t, double h) {
    return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
}

// 5-point stencil, h = 1e-3 to tame roundoff amplification at third order
Eigen::Vector3d central_d3(const CurveSampler::Fn& f, double t) {
    const double h = 1e-3;
    return (f(t + 2 * h) - 2.0 * f(t + h) + 2.0 * f(t - h) - f(t - 2 * h)) / (2.0 * h * h * h);
}

void require_finite(const Eigen::Vector3d& v, const char* what) {
    if (!v.allFinite()) throw NumericError(std::string(what) + ": non-finite value");
}

}  // namespace

CurveSampler CurveSampler::circle(double r) {
    if (!(r > 0.0)) throw ConfigError("circle: radius must be positive");
    CurveSampler c;
    c.pos_ = [r](double t) { return Eigen::Vector3d(r * std::cos(t), r * std::sin(t), 0.0); };
    c.d1_ = [r](double t) { return Eigen::Vector3d(-r * std::sin(t), r * std::cos(t), 0.0); };
    c.d2_ = [r](double t) { return Eigen::Vector3d(-r * std::cos(t), -r * std::sin(t), 0.0); };
    c.d3_ = [r](double t) { return Eigen::Vector3d(r * std::sin(t), -r * std::cos(t), 0.0); };
    return c;
}

CurveSampler CurveSampler::helix(double a, double b) {
    if (!(a > 0.0)) throw ConfigError("helix: radius a must be positive");
    CurveSampler c;
    c.pos_ = [a, b](double t) { return Eigen::Vector3d(a * std::cos(t), a * std::sin(t), b * t); };
    c.d1_ = [a, b](double t) { return Eigen::Vector3d(-a * std::sin(t), a * std::cos(t), b); };
    c.d2_ = [a](double t) { return Eigen::Vector3d(-a * std::cos(t), -a * std::sin(t), 0.0); };
    c.d3_ = [a](double t) { return Eigen::Vector3d(a * std::sin(t), -a * std::cos(t), 0.0); };
    return c;
}

CurveSampler CurveSampler::line(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) {
    CurveSampler c;
    c.pos_ = [origin, dir](double t) -> Eigen::Vector3d { return origin + t * dir; };
    c.d1_ = [dir](double) { return dir; };
    c.d2_ = [](double) { return Eigen::Vector3d::Zero().eval(); };
    c.d3_ = [](double) { return Eigen::Vector3d::Zero().eval(); };
    return c;
}

CurveSampler CurveSampler::custom(Fn position, double fd_h) {
    if (!(fd_h >= 1e-8 && fd_h <= 1e-2))
        throw ConfigError("curve: finite-difference h must lie in [1e-8, 1e-2]");
    CurveSampler c;
    c.pos_ = std::move(position);
    c.h_ = fd_h;
    return c;
}

CurveSampler CurveSampler::custom(Fn position, Fn d1, Fn d2, Fn d3) {
    CurveSampler c;
    c.pos_ = std::move(position);
    c.d1_ = std::move(d1);
    c.d2_ = std::move(d2);
    c.d3_ = std::move(d3);
    return c;
}

Eigen::Vector3d CurveSampler::eval(double t) const {
    Eigen::Vector3d v = pos_(t);
    require_finite(v, "curve");
    return v;
}

Eigen::Vector3d CurveSampler::d1(double t) const {
    Eigen::Vector3d v = d1_ ? d1_(t) : central_d1(pos_, t, h_);
    require_finite(v, "curve d1");
    return v;
}

Eigen::Vector3d CurveSampler::d2(double t) const {
    Eigen::Vector3d v = d2_ ? d2_(t) : central_d2(pos_, t, h_);
    require_finite(v, "curve d2");
    return v;
}

Eigen::Vector3d CurveSampler::d3(double t) const {
    Eigen::Vector3d v = d3_ ? d3_(t) : central_d3(pos_, t);
    require_finite(v, "curve d3");
    return v;
}

Eigen::Vector3d spin_vector(const CurveSampler& curve, double t) {
    const Eigen::Vector3d x = curve.eval(t);
    const double xx = x.squaredNorm();
    if (xx <= 1e-24) throw DomainError("spin_vector: curve passes through the origin");
    return x.cross(curve.d1(t)) / xx;
}

FrenetReport frenet(const CurveSampler& curve, double t) {
    const Eigen::Vector3d x = curve.eval(t);
    const Eigen::Vector3d v = curve.d1(t);
    const Eigen::Vector3d a = curve.d2(t);
    const double speed = v.norm();
    if (speed <= 1e-10) throw DomainError("frenet: degenerate tangent (cusp)");

    FrenetReport rep;
    if (x.squaredNorm() > 1e-24) rep.spin = x.cross(v) / x.squaredNorm();

    const Eigen::Vector3d va = v.cross(a);
    rep.curvature = va.norm() / (speed * speed * speed);
    if (va.norm() > 1e-12) {
        rep.binormal = va.normalized();
        rep.torsion = va.dot(curve.d3(t)) / va.squaredNorm();
    }
    return rep;
}

SurfaceSampler SurfaceSampler::custom(Fn f, double fd_h) {
    if (!(fd_h >= 1e-8 && fd_h <= 1e-2))
        throw ConfigError("surface: finite-difference h must lie in [1e-8, 1e-2]");
    SurfaceSampler s;
    s.f_ = std::move(f);
    s.h_ = fd_h;
    return s;
}

SurfaceSampler SurfaceSampler::saddle() {
    SurfaceSampler s;
    s.f_ = [](double x, double y) { return x * x - y * y; };
    s.fx_ = [](double x, double) { return 2.0 * x; };
    s.fy_ = [](double, double y) { return -2.0 * y; };
    s.fxx_ = [](double, double) { return 2.0; };
    s.fyy_ = [](double, double) { return -2.0; };
    s.fxy_ = [](double, double) { return 0.0; };
    return s;
}

SurfaceSampler SurfaceSampler::paraboloid() {
    SurfaceSampler s;
    s.f_ = [](double x, double y) { return x * x + y * y; };
    s.fx_ = [](double x, double) { return 2.0 * x; };
    s.fy_ = [](double, double y) { return 2.0 * y; };
    s.fxx_ = [](double, double) { return 2.0; };
    s.fyy_ = [](double, double) { return 2.0; };
    s.fxy_ = [](double, double) { return 0.0; };
    return s;
}

SurfaceSampler SurfaceSampler::plane(double a, double b, double c) {
    SurfaceSampler s;
    s.f_ = [a, b, c](double x, double y) { return a * x + b * y + c; };
    s.fx_ = [a](double, double) { return a; };
    s.fy_ = [b](double, double) { return b; };
    s.fxx_ = [](double, double) { return 0.0; };
    s.fyy_ = [](double, double) { return 0.0; };
    s.fxy_ = [](double, double) { return 0.0; };
    return s;
}

double SurfaceSampler::dx(double x, double y) const {
    if (fx_) return fx_(x, y);
    return (f_(x + h_, y) - f_(x - h_, y)) / (2.0 * h_);
}

double SurfaceSampler::dy(double x, double y) const {
    if (fy_) return fy_(x, y);
    return (f_(x, y + h_) - f_(x, y - h_)) / (2.0 * h_);
}

double SurfaceSampler::dxx(double x, double y) const {
    if (fxx_) return fxx_(x, y);
    return (f_(x + h_, y) - 2.0 * f_(x, y) + f_(x - h_, y)) / (h_ * h_);
}

double SurfaceSampler::dyy(double x, double y) const {
    if (fyy_) return fyy_(x, y);
    return (f_(x, y + h_) - 2.0 * f_(x, y) + f_(x, y - h_)) / (h_ * h_);
}

double SurfaceSampler::dxy(double x, double y) const {
    if (fxy_) return fxy_(x, y);
    return (f_(x + h_, y + h_) - f_(x + h_, y - h_) - f_(x - h_, y + h_) + f_(x - h_, y - h_)) /
           (4.0 * h_ * h_);
}

const char* surface_class_name(SurfaceClass c) {
    switch (c) {
        case SurfaceClass::Hyperbolic: return "hyperbolic";
        case SurfaceClass::Elliptic: return "elliptic";
        case SurfaceClass::Parabolic: return "parabolic";
    }
    return "unknown";
}

SurfacePointReport gauss_curvature(const SurfaceSampler& u, double x, double y) {
    const double ux = u.dx(x, y), uy = u.dy(x, y);
    const double uxx = u.dxx(x, y), uyy = u.dyy(x, y), uxy = u.dxy(x, y);
    for (double v : {ux, uy, uxx, uyy, uxy})
        if (!std::isfinite(v)) throw NumericError("gauss_curvature: non-finite derivative");

    SurfacePointReport rep;
    const double g = 1.0 + ux * ux + uy * uy;
    rep.gauss_curvature = (uxx * uyy - uxy * uxy) / (g * g);

    // Hessian eigenvalues: mixed signs at a critical point mean a saddle
    const double tr = uxx + uyy;
    const double disc = std::sqrt(std::max(0.0, (uxx - uyy) * (uxx - uyy) + 4.0 * uxy * uxy));
    rep.hessian_eigenvalues = {0.5 * (tr + disc), 0.5 * (tr - disc)};

    const double tol = 1e-9;
    if (rep.gauss_curvature < -tol)
        rep.classification = SurfaceClass::Hyperbolic;
    else if (rep.gauss_curvature > tol)
        rep.classification = SurfaceClass::Elliptic;
    else
        rep.classification = SurfaceClass::Parabolic;
    return rep;
}

}  // namespace mtk
