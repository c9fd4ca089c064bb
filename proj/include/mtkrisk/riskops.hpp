#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "mtkrisk/errors.hpp"
#include "mtkrisk/geometry.hpp"

namespace mtk {

enum class UtilityFamily { CARA, CRRA, Linear, TKValue, Custom };

// Scalar utility with derivatives up to order 3. Built-in families carry
// analytic derivatives; Custom falls back to central differences with
// per-order step sizes (h1=1e-6, h2=1e-5, h3=1e-3, 5-point stencils).
class UtilitySampler {
public:
    static UtilitySampler cara(double a);                       // u = -exp(-a x), a > 0
    static UtilitySampler crra(double rho);                     // u = x^(1-rho)/(1-rho), rho>0, rho!=1
    static UtilitySampler linear();                             // u = x
    static UtilitySampler tk_value(double alpha_g, double beta_l, double lambda);
    static UtilitySampler custom(std::function<double(double)> u);
    static UtilitySampler custom(std::function<double(double)> u,
                                 std::function<double(double)> du,
                                 std::function<double(double)> d2u,
                                 std::function<double(double)> d3u);

    double eval(double x) const;
    double d1(double x) const;
    double d2(double x) const;
    double d3(double x) const;

    // Sampler for u' (shifts derivative orders down; d3 of the result uses
    // finite differences of this sampler's d3 for built-ins).
    UtilitySampler derivative() const;

    UtilityFamily family() const noexcept { return family_; }
    std::string family_name() const;

private:
    UtilitySampler() = default;
    void check_domain(double x) const;

    UtilityFamily family_ = UtilityFamily::Custom;
    double a_ = 0, rho_ = 0, alpha_g_ = 0, beta_l_ = 0, lambda_ = 0;
    std::function<double(double)> u_, du_, d2u_, d3u_;
};

// sgn(u'(x)) * ln|u'(x)|; undefined where u'(x) = 0.
double log_diff(const UtilitySampler& u, double x);

// Arrow-Pratt absolute risk aversion -u''/u'.
double arrow_pratt(const UtilitySampler& u, double x);

// Prudence -u'''/u''; equals arrow_pratt applied to u'.
double prudence(const UtilitySampler& u, double x);

struct RiskTorsion {
    double ra = 0;       // risk-averse Arrow-Pratt
    double rs = 0;       // risk-seeking counterpart, rs = -ra
    double torsion = 0;  // ra - rs = 2 ra
};

RiskTorsion risk_torsion(const UtilitySampler& u, double x);

// Tangent x'(0), analytic when the curve carries derivatives, otherwise
// central difference with h = 1e-6.
Eigen::Vector3d infinitesimal_vector(const CurveSampler& curve);

struct InfinitesimalPair {
    Eigen::VectorXd alpha;
    Eigen::VectorXd beta;
    double r = 0.0;  // circle radius parameter, in (0,1) for the lambda bound
};

// theta_ij = (alpha_i^2 + beta_j^2)/(alpha_i beta_j); a_ij = 2 + theta_ij;
// a_hat[k] = (2/(alpha_k + beta_k)) a; c[k](i,j) = -(a_hat[k](i,j) + a_hat[k](j,i)).
struct StructureTensor {
    Eigen::MatrixXd theta;
    Eigen::MatrixXd a;
    std::vector<Eigen::MatrixXd> a_hat;
    std::vector<Eigen::MatrixXd> c;
};

StructureTensor structure_constants(const InfinitesimalPair& pair);

Eigen::MatrixXd lie_bracket(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

// X^-1 Y^-1 X Y; rejects near-singular inputs.
Eigen::MatrixXd group_commutator(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

struct LambdaEstimate {
    double upper_bound = 0.0;
    double inf_product = 0.0;
};

// Upper bound r^2 / inf_ij(alpha_i beta_j) - 1 on the loss aversion index.
// hardy_variant uses the membership form r^2 / (2 inf) - 1 instead.
LambdaEstimate estimate_lambda(const InfinitesimalPair& pair, bool hardy_variant = false);

enum class Regime { Annulus, Complex, Boundary };

// Sign of 4 alpha_i beta_j - r^2 at tolerance 1e-12.
Regime classify_regime(double alpha_i, double beta_j, double r);

const char* regime_name(Regime r);

// Composite-Simpson antiderivative of u over [x0, x], 1024 subintervals.
double antiderivative(const UtilitySampler& u, double x0, double x);

}  // namespace mtk
