#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mtkrisk/errors.hpp"
#include "mtkrisk/pwf.hpp"

namespace mtk {

struct OrbitRecord {
    std::vector<Eigen::VectorXd> iterates;  // f_0 .. f_N (truncated on divergence)
    std::vector<double> norms;
    Eigen::VectorXd time_average;           // (1/N) sum_{j=1..N} T^j f_0
    bool diverged = false;
    int steps_completed = 0;
};

// Repeated application f_{j+1} = T f_j with divergence cutoff at norm 1e12;
// a diverging orbit returns the partial record instead of throwing.
OrbitRecord orbit(const Eigen::MatrixXd& T, const Eigen::VectorXd& f0, int N);

struct ErgodicReport {
    Eigen::VectorXd time_average_limit;  // f*_{2N}
    double invariance_residual = 0.0;    // |T f*_{2N} - f*_{2N}|
    double time_vs_space_gap = 0.0;      // |f*_{2N} - f*_N| (Cauchy surrogate)
    int N_used = 0;
    bool diverged = false;
};

ErgodicReport birkhoff_check(const Eigen::MatrixXd& T, const Eigen::VectorXd& f0, int N);

struct PhasePoint {
    double p = 0.0;
    double w = 0.0;
    double gap = 0.0;  // w(p) - p
};

struct PhasePortrait {
    std::vector<PhasePoint> points;
    std::vector<std::pair<double, double>> sign_change_brackets;  // p* brackets
};

PhasePortrait phase_portrait(const WeightingFunctionSpec& w, int grid_n);

}  // namespace mtk
