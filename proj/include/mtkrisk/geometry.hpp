#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <optional>

#include "mtkrisk/errors.hpp"

namespace mtk {

// Parametric 3-vector curve with derivatives up to order 3. 2D curves embed
// with third component 0. Missing analytic derivatives are replaced by
// central differences (5-point stencil for the third derivative, h = 1e-3).
class CurveSampler {
public:
    using Fn = std::function<Eigen::Vector3d(double)>;

    static CurveSampler circle(double r);
    static CurveSampler helix(double a, double b);
    static CurveSampler line(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir);
    static CurveSampler custom(Fn position, double fd_h = 1e-5);
    static CurveSampler custom(Fn position, Fn d1, Fn d2, Fn d3);

    Eigen::Vector3d eval(double t) const;
    Eigen::Vector3d d1(double t) const;
    Eigen::Vector3d d2(double t) const;
    Eigen::Vector3d d3(double t) const;

    bool analytic() const noexcept { return static_cast<bool>(d1_); }

private:
    CurveSampler() = default;

    Fn pos_, d1_, d2_, d3_;
    double h_ = 1e-5;
};

// (x ^ x') / (x . x); singular where the curve passes through the origin.
Eigen::Vector3d spin_vector(const CurveSampler& curve, double t);

struct FrenetReport {
    std::optional<Eigen::Vector3d> spin;
    double curvature = 0.0;
    std::optional<Eigen::Vector3d> binormal;
    std::optional<double> torsion;  // undefined (not 0) when binormal is undefined
};

// kappa = |x' ^ x''| / |x'|^3, binormal = (x' ^ x'')/|x' ^ x''|,
// tau = ((x' ^ x'') . x''') / |x' ^ x''|^2.
FrenetReport frenet(const CurveSampler& curve, double t);

// Scalar graph z = u(x, y) with optional analytic partials.
class SurfaceSampler {
public:
    using Fn = std::function<double(double, double)>;

    static SurfaceSampler custom(Fn f, double fd_h = 1e-4);
    static SurfaceSampler saddle();       // x^2 - y^2
    static SurfaceSampler paraboloid();   // x^2 + y^2
    static SurfaceSampler plane(double a, double b, double c);

    double eval(double x, double y) const { return f_(x, y); }
    double dx(double x, double y) const;
    double dy(double x, double y) const;
    double dxx(double x, double y) const;
    double dyy(double x, double y) const;
    double dxy(double x, double y) const;

private:
    SurfaceSampler() = default;

    Fn f_, fx_, fy_, fxx_, fyy_, fxy_;
    double h_ = 1e-4;
};

enum class SurfaceClass { Hyperbolic, Elliptic, Parabolic };

const char* surface_class_name(SurfaceClass c);

struct SurfacePointReport {
    double gauss_curvature = 0.0;
    SurfaceClass classification = SurfaceClass::Parabolic;
    std::array<double, 2> hessian_eigenvalues{0.0, 0.0};
};

// K = (u_xx u_yy - u_xy^2) / (1 + u_x^2 + u_y^2)^2, classified by sign at
// tolerance 1e-9.
SurfacePointReport gauss_curvature(const SurfaceSampler& u, double x, double y);

}  // namespace mtk
