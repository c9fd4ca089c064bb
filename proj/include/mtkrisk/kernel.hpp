#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "mtkrisk/errors.hpp"
#include "mtkrisk/pwf.hpp"

namespace mtk {

enum class Quadrature { Trapezoid, Simpson };

// Composite quadrature of w over [a, b] with n subintervals.
double integrate_pwf(const WeightingFunctionSpec& w, double a, double b,
                     Quadrature quad = Quadrature::Simpson, int n = 1024);

// K(p_l, p_g) = int_{p_l}^{p_g} w(p) dp - (p_g^2 - p_l^2)/2.
double confidence_kernel(const WeightingFunctionSpec& w, double p_l, double p_g,
                         Quadrature quad = Quadrature::Simpson, int n = 1024);

// K_hat = K(p_l, p_g) / (p_g - p_l); near-singular when the gap collapses.
double singular_kernel(const WeightingFunctionSpec& w, double p_l, double p_g,
                       Quadrature quad = Quadrature::Simpson, int n = 1024);

struct KernelMatrix {
    Eigen::MatrixXd entries;          // m x r
    std::vector<double> loss_grid;    // m points in [0, p*]
    std::vector<double> gain_grid;    // r points in (p*, 1]
    double p_star = 0.0;
    Quadrature quadrature = Quadrature::Simpson;
    int quad_points = 1024;
};

// Uniform grids: loss_grid spans [0, p*] (loss_n points), gain_grid spans
// (p*, 1] with left endpoint p* + (1 - p*)/gain_n (gain_n points). `scale`
// rescales entries before orbit studies.
KernelMatrix build_kernel_matrix(const WeightingFunctionSpec& w, int loss_n, int gain_n,
                                 std::optional<double> p_star = std::nullopt,
                                 Quadrature quad = Quadrature::Simpson, int quad_points = 1024,
                                 double scale = 1.0);

// K* = -K^T, the rotation-and-reversal adjoint.
Eigen::MatrixXd behavioral_adjoint(const Eigen::MatrixXd& M);

// T = K^T K (symmetric PSD).
Eigen::MatrixXd composite_T(const Eigen::MatrixXd& K);

struct SpectrumReport {
    std::vector<std::complex<double>> eigenvalues;  // square input only
    std::vector<double> singular_values;
    double spectral_norm = 0.0;
    bool is_contraction = false;
    double eigenvalue_product_norm = 0.0;  // |prod eigenvalues|, square input
    double symmetry_residual = 0.0;        // max|M - M^T|, square input
    double skew_symmetry_residual = 0.0;   // max|M + M^T|, square input
};

SpectrumReport spectrum(const Eigen::MatrixXd& M);

}  // namespace mtk
