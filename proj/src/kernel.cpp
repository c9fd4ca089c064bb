#include "mtkrisk/kernel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace mtk {

double integrate_pwf(const WeightingFunctionSpec& w, double a, double b, Quadrature quad,
                     int n) {
    if (n < 1) throw ConfigError("integrate_pwf: need at least one subinterval");
    if (quad == Quadrature::Simpson && n % 2 != 0) ++n;
    const double h = (b - a) / n;
    if (quad == Quadrature::Trapezoid) {
        double sum = 0.5 * (w.eval(a) + w.eval(b));
        for (int i = 1; i < n; ++i) sum += w.eval(a + i * h);
        return sum * h;
    }
    // Simpson on a mesh graded toward both endpoints (quintic smoothstep
    // node map). Per-cell Simpson stays exact for cubics, and the grading
    // restores full order for families behaving like p^gamma at 0 or 1.
    const int m = std::max(1, n / 2);
    const auto node = [&](int k) {
        const double t = static_cast<double>(k) / m;
        const double g = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
        return a + (b - a) * g;
    };
    double sum = 0.0;
    double x0 = a;
    double f0 = w.eval(x0);
    for (int k = 1; k <= m; ++k) {
        const double x1 = node(k);
        const double f1 = w.eval(x1);
        sum += (x1 - x0) / 6.0 * (f0 + 4.0 * w.eval(0.5 * (x0 + x1)) + f1);
        x0 = x1;
        f0 = f1;
    }
    return sum;
}

double confidence_kernel(const WeightingFunctionSpec& w, double p_l, double p_g,
                         Quadrature quad, int n) {
    if (!(p_l >= 0.0 && p_g <= 1.0)) throw DomainError("confidence_kernel: grid points in [0,1]");
    if (!(p_l < p_g)) throw DomainError("confidence_kernel: requires p_l < p_g");
    return integrate_pwf(w, p_l, p_g, quad, n) - 0.5 * (p_g * p_g - p_l * p_l);
}

double singular_kernel(const WeightingFunctionSpec& w, double p_l, double p_g, Quadrature quad,
                       int n) {
    if (!(p_l < p_g)) throw DomainError("singular_kernel: requires p_l < p_g");
    if (p_g - p_l < 1e-14)
        throw NumericError("singular_kernel: interval collapsed below 1e-14");
    return confidence_kernel(w, p_l, p_g, quad, n) / (p_g - p_l);
}

KernelMatrix build_kernel_matrix(const WeightingFunctionSpec& w, int loss_n, int gain_n,
                                 std::optional<double> p_star, Quadrature quad, int quad_points,
                                 double scale) {
    if (loss_n < 1 || gain_n < 1) throw ConfigError("build_kernel_matrix: grids need >= 1 point");
    double ps;
    if (p_star) {
        ps = *p_star;
        if (!(ps > 0.0 && ps < 1.0)) throw ConfigError("build_kernel_matrix: p_star in (0,1)");
    } else {
        ps = fixed_point(w);
    }

    KernelMatrix K;
    K.p_star = ps;
    K.quadrature = quad;
    K.quad_points = quad_points;
    K.loss_grid.resize(static_cast<std::size_t>(loss_n));
    K.gain_grid.resize(static_cast<std::size_t>(gain_n));
    if (loss_n == 1) {
        K.loss_grid[0] = 0.0;
    } else {
        for (int i = 0; i < loss_n; ++i)
            K.loss_grid[static_cast<std::size_t>(i)] = ps * i / (loss_n - 1);
    }
    const double g0 = ps + (1.0 - ps) / gain_n;  // open at p*
    if (gain_n == 1) {
        K.gain_grid[0] = 1.0;
    } else {
        for (int j = 0; j < gain_n; ++j)
            K.gain_grid[static_cast<std::size_t>(j)] = g0 + (1.0 - g0) * j / (gain_n - 1);
    }

    K.entries.resize(loss_n, gain_n);
    for (int i = 0; i < loss_n; ++i)
        for (int j = 0; j < gain_n; ++j)
            K.entries(i, j) =
                scale * confidence_kernel(w, K.loss_grid[static_cast<std::size_t>(i)],
                                          K.gain_grid[static_cast<std::size_t>(j)], quad,
                                          quad_points);
    return K;
}

Eigen::MatrixXd behavioral_adjoint(const Eigen::MatrixXd& M) { return -M.transpose(); }

Eigen::MatrixXd composite_T(const Eigen::MatrixXd& K) { return K.transpose() * K; }

SpectrumReport spectrum(const Eigen::MatrixXd& M) {
    if (!M.allFinite()) throw NumericError("spectrum: non-finite entries");
    SpectrumReport rep;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    rep.singular_values.assign(sv.data(), sv.data() + sv.size());
    rep.spectral_norm = sv.size() > 0 ? sv(0) : 0.0;
    rep.is_contraction = rep.spectral_norm < 1.0;
    if (M.rows() == M.cols()) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(M);
        std::complex<double> prod(1.0, 0.0);
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            rep.eigenvalues.push_back(es.eigenvalues()(i));
            prod *= es.eigenvalues()(i);
        }
        rep.eigenvalue_product_norm = std::abs(prod);
        rep.symmetry_residual = (M - M.transpose()).cwiseAbs().maxCoeff();
        rep.skew_symmetry_residual = (M + M.transpose()).cwiseAbs().maxCoeff();
    }
    return rep;
}

}  // namespace mtk
