#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mtkrisk/errors.hpp"

namespace mtk {

enum class PwfFamily { Identity, Prelec, TverskyKahneman1992, Tabulated };

// A named, parameterized probability weighting function w:[0,1] -> [0,1].
// Prelec: w(p) = exp(-beta * (-ln p)^gamma), gamma,beta > 0.
// TK-1992: w(p) = p^g / (p^g + (1-p)^g)^(1/g), gamma in (0,1].
// Tabulated: monotone cubic (Fritsch-Carlson) through strictly increasing
// (p, w) knots with endpoints (0,0) and (1,1).
class WeightingFunctionSpec {
public:
    static WeightingFunctionSpec identity();
    static WeightingFunctionSpec prelec(double gamma, double beta);
    static WeightingFunctionSpec tk1992(double gamma);
    static WeightingFunctionSpec tabulated(std::vector<std::pair<double, double>> table);

    double operator()(double p) const { return eval(p); }
    double eval(double p) const;

    PwfFamily family() const noexcept { return family_; }
    double gamma() const noexcept { return gamma_; }
    double beta() const noexcept { return beta_; }
    const std::vector<std::pair<double, double>>& table() const noexcept { return table_; }
    std::string family_name() const;

private:
    WeightingFunctionSpec() = default;

    PwfFamily family_ = PwfFamily::Identity;
    double gamma_ = 1.0;
    double beta_ = 1.0;
    std::vector<std::pair<double, double>> table_;
    std::vector<double> slopes_;  // Fritsch-Carlson tangents for Tabulated
};

double eval_pwf(const WeightingFunctionSpec& spec, double p);

// Interior fixed point p* with |w(p*) - p*| < 1e-12, by bisection on
// [1e-9, 1 - 1e-9]. Identity is degenerate (every point fixed).
double fixed_point(const WeightingFunctionSpec& spec);

// Normalized C-infinity bumps w_i = b_i / sum_j b_j on a uniform grid over
// [0,1], b_i(p) = exp(-1/(1-s^2)) with s = (p - c_i)/h_i inside the support.
class ProbabilityPartition {
public:
    ProbabilityPartition(std::vector<double> centers, std::vector<double> half_widths,
                         int grid_n);

    std::size_t size() const noexcept { return centers_.size(); }
    const std::vector<double>& grid() const noexcept { return grid_; }
    // weights[i][k] = w_i(grid[k])
    const std::vector<std::vector<double>>& weights() const noexcept { return weights_; }
    double max_sum_deviation() const noexcept { return max_sum_deviation_; }

    // Pointwise evaluation of all member weights at p (coverage required).
    std::vector<double> weights_at(double p) const;

    const std::vector<double>& centers() const noexcept { return centers_; }
    const std::vector<double>& half_widths() const noexcept { return half_widths_; }

private:
    double bump(std::size_t i, double p) const;

    std::vector<double> centers_;
    std::vector<double> half_widths_;
    std::vector<double> grid_;
    std::vector<std::vector<double>> weights_;
    double max_sum_deviation_ = 0.0;
};

ProbabilityPartition build_partition(const std::vector<double>& centers,
                                     const std::vector<double>& half_widths, int grid_n);

struct ReferencePointReport {
    double x = 0.0;
    bool in_M = false;
    bool in_TK = false;
    bool in_MTK = false;
    double u_pos = 0.0;       // u(x)
    double u_neg = 0.0;       // u(-x)
    double u2_pos = 0.0;      // u''(x)
    double u2_neg = 0.0;      // u''(-x)
};

class UtilitySampler;  // riskops.hpp

// Markowitz condition u(x) > |u(-x)| (x > 0 the gain side) intersected with
// the Tversky-Kahneman curvature condition u''(x) < 0, u''(-x) > 0.
ReferencePointReport mtk_membership(const UtilitySampler& u, double x);

}  // namespace mtk
