#include "mtkrisk/pwf.hpp"

#include <algorithm>
#include <cmath>

#include "mtkrisk/riskops.hpp"

namespace mtk {

WeightingFunctionSpec WeightingFunctionSpec::identity() {
    WeightingFunctionSpec s;
    s.family_ = PwfFamily::Identity;
    return s;
}

WeightingFunctionSpec WeightingFunctionSpec::prelec(double gamma, double beta) {
    if (!(gamma > 0.0) || !(beta > 0.0))
        throw ConfigError("prelec: gamma and beta must be positive");
    WeightingFunctionSpec s;
    s.family_ = PwfFamily::Prelec;
    s.gamma_ = gamma;
    s.beta_ = beta;
    return s;
}

WeightingFunctionSpec WeightingFunctionSpec::tk1992(double gamma) {
    if (!(gamma > 0.0) || gamma > 1.0)
        throw ConfigError("tk1992: gamma must lie in (0, 1]");
    WeightingFunctionSpec s;
    s.family_ = PwfFamily::TverskyKahneman1992;
    s.gamma_ = gamma;
    return s;
}

WeightingFunctionSpec WeightingFunctionSpec::tabulated(
    std::vector<std::pair<double, double>> table) {
    if (table.size() < 2) throw ConfigError("tabulated: need at least two knots");
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (!(table[i].first > table[i - 1].first))
            throw ConfigError("tabulated: p column must be strictly increasing");
        if (!(table[i].second >= table[i - 1].second))
            throw ConfigError("tabulated: w column must be nondecreasing");
    }
    if (table.front().first != 0.0 || table.back().first != 1.0)
        throw ConfigError("tabulated: p endpoints must be 0 and 1");
    if (std::abs(table.front().second) > 1e-12 || std::abs(table.back().second - 1.0) > 1e-12)
        throw ConfigError("tabulated: w endpoints must be 0 and 1");

    WeightingFunctionSpec s;
    s.family_ = PwfFamily::Tabulated;
    s.table_ = std::move(table);

    // Fritsch-Carlson monotone tangents
    const auto& t = s.table_;
    const std::size_t n = t.size();
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        d[i] = (t[i + 1].second - t[i].second) / (t[i + 1].first - t[i].first);
    s.slopes_.resize(n);
    s.slopes_[0] = d[0];
    s.slopes_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i)
        s.slopes_[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            s.slopes_[i] = s.slopes_[i + 1] = 0.0;
            continue;
        }
        const double a = s.slopes_[i] / d[i];
        const double b = s.slopes_[i + 1] / d[i];
        const double q = a * a + b * b;
        if (q > 9.0) {
            const double tau = 3.0 / std::sqrt(q);
            s.slopes_[i] = tau * a * d[i];
            s.slopes_[i + 1] = tau * b * d[i];
        }
    }
    return s;
}

double WeightingFunctionSpec::eval(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("pwf: p must lie in [0, 1]");
    switch (family_) {
        case PwfFamily::Identity:
            return p;
        case PwfFamily::Prelec:
            if (p == 0.0) return 0.0;
            if (p == 1.0) return 1.0;
            return std::exp(-beta_ * std::pow(-std::log(p), gamma_));
        case PwfFamily::TverskyKahneman1992: {
            if (p == 0.0) return 0.0;
            if (p == 1.0) return 1.0;
            const double num = std::pow(p, gamma_);
            const double den = std::pow(num + std::pow(1.0 - p, gamma_), 1.0 / gamma_);
            return num / den;
        }
        case PwfFamily::Tabulated: {
            const auto& t = table_;
            auto it = std::upper_bound(
                t.begin(), t.end(), p,
                [](double v, const std::pair<double, double>& knot) { return v < knot.first; });
            if (it == t.begin()) return t.front().second;
            if (it == t.end()) return t.back().second;
            const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
            const double h = t[i + 1].first - t[i].first;
            const double s = (p - t[i].first) / h;
            const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
            const double h10 = s * (1 - s) * (1 - s);
            const double h01 = s * s * (3 - 2 * s);
            const double h11 = s * s * (s - 1);
            return h00 * t[i].second + h10 * h * slopes_[i] + h01 * t[i + 1].second +
                   h11 * h * slopes_[i + 1];
        }
    }
    throw ConfigError("pwf: unknown family");
}

std::string WeightingFunctionSpec::family_name() const {
    switch (family_) {
        case PwfFamily::Identity: return "identity";
        case PwfFamily::Prelec: return "prelec";
        case PwfFamily::TverskyKahneman1992: return "tk";
        case PwfFamily::Tabulated: return "tabulated";
    }
    return "unknown";
}

double eval_pwf(const WeightingFunctionSpec& spec, double p) { return spec.eval(p); }

double fixed_point(const WeightingFunctionSpec& spec) {
    if (spec.family() == PwfFamily::Identity)
        throw DomainError("fixed_point: identity PWF is degenerate (every point fixed)");
    const double eps = 1e-9;
    double a = eps, b = 1.0 - eps;
    auto g = [&](double p) { return spec.eval(p) - p; };
    double ga = g(a), gb = g(b);
    if (ga == 0.0) return a;
    if (gb == 0.0) return b;
    if (ga * gb > 0.0) throw DomainError("fixed_point: w(p) - p has no sign change on (0, 1)");
    while (b - a > 1e-15) {
        const double m = 0.5 * (a + b);
        const double gm = g(m);
        if (gm == 0.0) return m;
        if (ga * gm < 0.0) {
            b = m;
        } else {
            a = m;
            ga = gm;
        }
    }
    return 0.5 * (a + b);
}

ProbabilityPartition::ProbabilityPartition(std::vector<double> centers,
                                           std::vector<double> half_widths, int grid_n)
    : centers_(std::move(centers)), half_widths_(std::move(half_widths)) {
    if (centers_.empty() || centers_.size() != half_widths_.size())
        throw ConfigError("partition: centers and half_widths must be nonempty, same size");
    for (double h : half_widths_)
        if (!(h > 0.0)) throw ConfigError("partition: half widths must be positive");
    if (grid_n < 2) throw ConfigError("partition: grid_n must be >= 2");

    grid_.resize(static_cast<std::size_t>(grid_n));
    for (int k = 0; k < grid_n; ++k)
        grid_[static_cast<std::size_t>(k)] = static_cast<double>(k) / (grid_n - 1);

    weights_.assign(centers_.size(), std::vector<double>(grid_.size(), 0.0));
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        const double p = grid_[k];
        double total = 0.0;
        for (std::size_t i = 0; i < centers_.size(); ++i) total += bump(i, p);
        if (total <= 0.0) {
            if (p > 0.0 && p < 1.0)
                throw DomainError("partition: coverage gap at p = " + std::to_string(p));
            continue;  // endpoints may fall outside every support
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < centers_.size(); ++i) {
            weights_[i][k] = bump(i, p) / total;
            sum += weights_[i][k];
        }
        max_sum_deviation_ = std::max(max_sum_deviation_, std::abs(sum - 1.0));
    }
}

double ProbabilityPartition::bump(std::size_t i, double p) const {
    const double s = (p - centers_[i]) / half_widths_[i];
    if (std::abs(s) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
}

std::vector<double> ProbabilityPartition::weights_at(double p) const {
    double total = 0.0;
    for (std::size_t i = 0; i < centers_.size(); ++i) total += bump(i, p);
    if (total <= 0.0) throw DomainError("partition: p outside every support");
    std::vector<double> out(centers_.size());
    for (std::size_t i = 0; i < centers_.size(); ++i) out[i] = bump(i, p) / total;
    return out;
}

ProbabilityPartition build_partition(const std::vector<double>& centers,
                                     const std::vector<double>& half_widths, int grid_n) {
    return ProbabilityPartition(centers, half_widths, grid_n);
}

ReferencePointReport mtk_membership(const UtilitySampler& u, double x) {
    if (x == 0.0) throw DomainError("mtk_membership: undefined at the reference point x = 0");
    const double xp = std::abs(x);  // gain side
    ReferencePointReport rep;
    rep.x = x;
    rep.u_pos = u.eval(xp);
    rep.u_neg = u.eval(-xp);
    rep.u2_pos = u.d2(xp);
    rep.u2_neg = u.d2(-xp);
    rep.in_M = rep.u_pos > std::abs(rep.u_neg);
    rep.in_TK = rep.u2_pos < 0.0 && rep.u2_neg > 0.0;
    rep.in_MTK = rep.in_M && rep.in_TK;
    return rep;
}

}  // namespace mtk
