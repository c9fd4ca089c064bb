#include "mtkrisk/ergodic.hpp"

#include <cmath>

namespace mtk {

namespace {
constexpr double kDivergenceCutoff = 1e12;
}

OrbitRecord orbit(const Eigen::MatrixXd& T, const Eigen::VectorXd& f0, int N) {
    if (T.rows() != T.cols()) throw DomainError("orbit: T must be square");
    if (T.cols() != f0.size()) throw DomainError("orbit: dimension mismatch");
    if (N < 1) throw ConfigError("orbit: N must be >= 1");

    OrbitRecord rec;
    rec.iterates.reserve(static_cast<std::size_t>(N) + 1);
    rec.iterates.push_back(f0);
    rec.norms.push_back(f0.norm());
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(f0.size());
    Eigen::VectorXd f = f0;
    for (int j = 1; j <= N; ++j) {
        f = T * f;
        const double nrm = f.norm();
        if (!std::isfinite(nrm) || nrm > kDivergenceCutoff) {
            rec.diverged = true;
            break;
        }
        rec.iterates.push_back(f);
        rec.norms.push_back(nrm);
        sum += f;
        rec.steps_completed = j;
    }
    if (rec.steps_completed > 0)
        rec.time_average = sum / static_cast<double>(rec.steps_completed);
    else
        rec.time_average = Eigen::VectorXd::Zero(f0.size());
    return rec;
}

ErgodicReport birkhoff_check(const Eigen::MatrixXd& T, const Eigen::VectorXd& f0, int N) {
    if (T.rows() != T.cols() || T.cols() != f0.size())
        throw DomainError("birkhoff_check: dimension mismatch");
    if (N < 1) throw ConfigError("birkhoff_check: N must be >= 1");

    Eigen::VectorXd f = f0;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(f0.size());
    ErgodicReport rep;
    rep.N_used = N;
    Eigen::VectorXd avg_N = Eigen::VectorXd::Zero(f0.size());
    for (int j = 1; j <= 2 * N; ++j) {
        f = T * f;
        const double nrm = f.norm();
        if (!std::isfinite(nrm) || nrm > 1e12) {
            rep.diverged = true;
            rep.time_average_limit = sum / static_cast<double>(j);
            return rep;
        }
        sum += f;
        if (j == N) avg_N = sum / static_cast<double>(N);
    }
    const Eigen::VectorXd avg_2N = sum / static_cast<double>(2 * N);
    rep.time_average_limit = avg_2N;
    rep.time_vs_space_gap = (avg_2N - avg_N).norm();
    rep.invariance_residual = (T * avg_2N - avg_2N).norm();
    return rep;
}

PhasePortrait phase_portrait(const WeightingFunctionSpec& w, int grid_n) {
    if (grid_n < 2) throw ConfigError("phase_portrait: grid_n must be >= 2");
    PhasePortrait port;
    port.points.reserve(static_cast<std::size_t>(grid_n));
    for (int k = 0; k < grid_n; ++k) {
        const double p = static_cast<double>(k) / (grid_n - 1);
        PhasePoint pt;
        pt.p = p;
        pt.w = w.eval(p);
        pt.gap = pt.w - p;
        port.points.push_back(pt);
    }
    for (std::size_t k = 1; k < port.points.size(); ++k) {
        const auto& a = port.points[k - 1];
        const auto& b = port.points[k];
        // interior sign changes of the diagonal gap bracket p*
        if (a.p > 0.0 && b.p < 1.0 && a.gap * b.gap < 0.0)
            port.sign_change_brackets.emplace_back(a.p, b.p);
    }
    return port;
}

}  // namespace mtk
