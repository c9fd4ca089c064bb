#include "mtkrisk/riskops.hpp"

#include <cmath>
#include <limits>

namespace mtk {

namespace {

double fd1(const std::function<double(double)>& f, double x, double h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

double fd2(const std::function<double(double)>& f, double x, double h = 1e-5) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

double fd3(const std::function<double(double)>& f, double x, double h = 1e-3) {
    return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2 * h)) / (2.0 * h * h * h);
}

}  // namespace

UtilitySampler UtilitySampler::cara(double a) {
    if (!(a > 0.0)) throw ConfigError("cara: a must be positive");
    UtilitySampler s;
    s.family_ = UtilityFamily::CARA;
    s.a_ = a;
    s.u_ = [a](double x) { return -std::exp(-a * x); };
    s.du_ = [a](double x) { return a * std::exp(-a * x); };
    s.d2u_ = [a](double x) { return -a * a * std::exp(-a * x); };
    s.d3u_ = [a](double x) { return a * a * a * std::exp(-a * x); };
    return s;
}

UtilitySampler UtilitySampler::crra(double rho) {
    if (!(rho > 0.0) || rho == 1.0)
        throw ConfigError("crra: rho must be positive and not 1 (log utility excluded)");
    UtilitySampler s;
    s.family_ = UtilityFamily::CRRA;
    s.rho_ = rho;
    s.u_ = [rho](double x) { return std::pow(x, 1.0 - rho) / (1.0 - rho); };
    s.du_ = [rho](double x) { return std::pow(x, -rho); };
    s.d2u_ = [rho](double x) { return -rho * std::pow(x, -rho - 1.0); };
    s.d3u_ = [rho](double x) { return rho * (rho + 1.0) * std::pow(x, -rho - 2.0); };
    return s;
}

UtilitySampler UtilitySampler::linear() {
    UtilitySampler s;
    s.family_ = UtilityFamily::Linear;
    s.u_ = [](double x) { return x; };
    s.du_ = [](double) { return 1.0; };
    s.d2u_ = [](double) { return 0.0; };
    s.d3u_ = [](double) { return 0.0; };
    return s;
}

UtilitySampler UtilitySampler::tk_value(double alpha_g, double beta_l, double lambda) {
    if (!(alpha_g > 0.0 && alpha_g <= 1.0) || !(beta_l > 0.0 && beta_l <= 1.0))
        throw ConfigError("tk_value: exponents must lie in (0, 1]");
    if (!(lambda > 0.0)) throw ConfigError("tk_value: lambda must be positive");
    UtilitySampler s;
    s.family_ = UtilityFamily::TKValue;
    s.alpha_g_ = alpha_g;
    s.beta_l_ = beta_l;
    s.lambda_ = lambda;
    auto v = [alpha_g, beta_l, lambda](double x) {
        if (x > 0.0) return std::pow(x, alpha_g);
        if (x < 0.0) return -lambda * std::pow(-x, beta_l);
        return 0.0;
    };
    s.u_ = v;
    s.du_ = [alpha_g, beta_l, lambda](double x) {
        if (x > 0.0) return alpha_g * std::pow(x, alpha_g - 1.0);
        return lambda * beta_l * std::pow(-x, beta_l - 1.0);
    };
    s.d2u_ = [alpha_g, beta_l, lambda](double x) {
        if (x > 0.0) return alpha_g * (alpha_g - 1.0) * std::pow(x, alpha_g - 2.0);
        return -lambda * beta_l * (beta_l - 1.0) * std::pow(-x, beta_l - 2.0);
    };
    s.d3u_ = [alpha_g, beta_l, lambda](double x) {
        if (x > 0.0) return alpha_g * (alpha_g - 1.0) * (alpha_g - 2.0) * std::pow(x, alpha_g - 3.0);
        return lambda * beta_l * (beta_l - 1.0) * (beta_l - 2.0) * std::pow(-x, beta_l - 3.0);
    };
    return s;
}

UtilitySampler UtilitySampler::custom(std::function<double(double)> u) {
    UtilitySampler s;
    s.family_ = UtilityFamily::Custom;
    s.u_ = std::move(u);
    return s;
}

UtilitySampler UtilitySampler::custom(std::function<double(double)> u,
                                      std::function<double(double)> du,
                                      std::function<double(double)> d2u,
                                      std::function<double(double)> d3u) {
    UtilitySampler s;
    s.family_ = UtilityFamily::Custom;
    s.u_ = std::move(u);
    s.du_ = std::move(du);
    s.d2u_ = std::move(d2u);
    s.d3u_ = std::move(d3u);
    return s;
}

void UtilitySampler::check_domain(double x) const {
    if (family_ == UtilityFamily::TKValue && std::abs(x) < 1e-9)
        throw DomainError("tk_value: derivatives undefined at the reference-point kink");
    if (family_ == UtilityFamily::CRRA && !(x > 0.0))
        throw DomainError("crra: requires x > 0");
}

double UtilitySampler::eval(double x) const { return u_(x); }

double UtilitySampler::d1(double x) const {
    check_domain(x);
    return du_ ? du_(x) : fd1(u_, x);
}

double UtilitySampler::d2(double x) const {
    check_domain(x);
    return d2u_ ? d2u_(x) : fd2(u_, x);
}

double UtilitySampler::d3(double x) const {
    check_domain(x);
    return d3u_ ? d3u_(x) : fd3(u_, x);
}

UtilitySampler UtilitySampler::derivative() const {
    UtilitySampler s;
    s.family_ = UtilityFamily::Custom;
    if (du_ && d2u_ && d3u_) {
        auto d3 = d3u_;
        s.u_ = du_;
        s.du_ = d2u_;
        s.d2u_ = d3u_;
        s.d3u_ = [d3](double x) { return fd1(d3, x, 1e-5); };
    } else {
        auto base = u_;
        s.u_ = [base](double x) { return fd1(base, x); };
    }
    return s;
}

std::string UtilitySampler::family_name() const {
    switch (family_) {
        case UtilityFamily::CARA: return "cara";
        case UtilityFamily::CRRA: return "crra";
        case UtilityFamily::Linear: return "linear";
        case UtilityFamily::TKValue: return "tkvalue";
        case UtilityFamily::Custom: return "custom";
    }
    return "unknown";
}

double log_diff(const UtilitySampler& u, double x) {
    const double d = u.d1(x);
    if (std::abs(d) <= 1e-12) throw DomainError("log_diff: undefined where u'(x) = 0");
    return (d > 0.0 ? 1.0 : -1.0) * std::log(std::abs(d));
}

double arrow_pratt(const UtilitySampler& u, double x) {
    const double d = u.d1(x);
    if (std::abs(d) <= 1e-12) throw DomainError("arrow_pratt: undefined where u'(x) = 0");
    return -u.d2(x) / d;
}

double prudence(const UtilitySampler& u, double x) {
    const double d2 = u.d2(x);
    if (std::abs(d2) <= 1e-12) throw DomainError("prudence: undefined where u''(x) = 0");
    return -u.d3(x) / d2;
}

RiskTorsion risk_torsion(const UtilitySampler& u, double x) {
    RiskTorsion t;
    t.ra = arrow_pratt(u, x);
    t.rs = -t.ra;
    t.torsion = t.ra - t.rs;
    return t;
}

Eigen::Vector3d infinitesimal_vector(const CurveSampler& curve) {
    if (curve.analytic()) return curve.d1(0.0);
    const double h = 1e-6;
    const Eigen::Vector3d v = (curve.eval(h) - curve.eval(-h)) / (2.0 * h);
    if (!v.allFinite()) throw NumericError("infinitesimal_vector: non-finite derivative");
    return v;
}

StructureTensor structure_constants(const InfinitesimalPair& pair) {
    const Eigen::Index n = pair.alpha.size();
    if (n == 0 || pair.beta.size() != n)
        throw DomainError("structure_constants: alpha and beta must be nonempty, same size");

    StructureTensor t;
    t.theta.resize(n, n);
    t.a.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double prod = pair.alpha(i) * pair.beta(j);
            if (prod == 0.0)
                throw DomainError("structure_constants: alpha_i * beta_j = 0 at (i=" +
                                  std::to_string(i + 1) + ", j=" + std::to_string(j + 1) + ")");
            t.theta(i, j) =
                (pair.alpha(i) * pair.alpha(i) + pair.beta(j) * pair.beta(j)) / prod;
            t.a(i, j) = 2.0 + t.theta(i, j);
        }
    }
    t.a_hat.reserve(static_cast<std::size_t>(n));
    t.c.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        const double denom = pair.alpha(k) + pair.beta(k);
        if (denom == 0.0)
            throw DomainError("structure_constants: alpha_k + beta_k = 0 at k=" +
                              std::to_string(k + 1));
        Eigen::MatrixXd ah = (2.0 / denom) * t.a;
        Eigen::MatrixXd c = -(ah + ah.transpose());
        t.a_hat.push_back(std::move(ah));
        t.c.push_back(std::move(c));
    }
    return t;
}

Eigen::MatrixXd lie_bracket(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw DomainError("lie_bracket: matrices must be square and of equal size");
    return A * B - B * A;
}

Eigen::MatrixXd group_commutator(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    if (X.rows() != X.cols() || Y.rows() != Y.cols() || X.rows() != Y.rows())
        throw DomainError("group_commutator: matrices must be square and of equal size");
    Eigen::JacobiSVD<Eigen::MatrixXd> sx(X), sy(Y);
    const auto cond = [](const Eigen::JacobiSVD<Eigen::MatrixXd>& s) {
        const double smin = s.singularValues().tail(1)(0);
        return smin > 0.0 ? s.singularValues()(0) / smin
                          : std::numeric_limits<double>::infinity();
    };
    if (cond(sx) >= 1e12 || cond(sy) >= 1e12)
        throw NumericError("group_commutator: near-singular input");
    return X.inverse() * Y.inverse() * X * Y;
}

LambdaEstimate estimate_lambda(const InfinitesimalPair& pair, bool hardy_variant) {
    if (!(pair.r > 0.0 && pair.r < 1.0))
        throw DomainError("estimate_lambda: r must lie in (0, 1)");
    const Eigen::Index n = pair.alpha.size();
    if (n == 0 || pair.beta.size() != n)
        throw DomainError("estimate_lambda: alpha and beta must be nonempty, same size");

    double inf_product = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            inf_product = std::min(inf_product, pair.alpha(i) * pair.beta(j));
    if (!(inf_product > 0.0))
        throw DomainError("estimate_lambda: inf(alpha_i beta_j) must be positive");

    LambdaEstimate est;
    est.inf_product = inf_product;
    const double denom = hardy_variant ? 2.0 * inf_product : inf_product;
    est.upper_bound = pair.r * pair.r / denom - 1.0;
    if (!(est.upper_bound > 0.0))
        throw DomainError("estimate_lambda: infeasible bound (requires lambda > 0)");
    return est;
}

Regime classify_regime(double alpha_i, double beta_j, double r) {
    if (!(r > 0.0)) throw DomainError("classify_regime: r must be positive");
    const double d = 4.0 * alpha_i * beta_j - r * r;
    const double tol = 1e-12;
    if (d > tol) return Regime::Annulus;
    if (d < -tol) return Regime::Complex;
    return Regime::Boundary;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Annulus: return "annulus";
        case Regime::Complex: return "complex";
        case Regime::Boundary: return "boundary";
    }
    return "unknown";
}

double antiderivative(const UtilitySampler& u, double x0, double x) {
    const int n = 1024;
    const double h = (x - x0) / n;
    double sum = u.eval(x0) + u.eval(x);
    for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * u.eval(x0 + i * h);
    const double result = sum * h / 3.0;
    if (!std::isfinite(result)) throw NumericError("antiderivative: non-finite samples");
    return result;
}

}  // namespace mtk
