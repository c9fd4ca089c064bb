#include <doctest.h>

#include <cmath>
#include <random>

#include "mtkrisk/pwf.hpp"
#include "mtkrisk/riskops.hpp"

using namespace mtk;

namespace {
// frozen with an independent 40-digit evaluation of p^g/(p^g+(1-p)^g)^(1/g)
constexpr double kTkW01 = 0.18630256637717415;
// frozen from an independent high-precision bisection of w(p) - p
constexpr double kTkFixedPoint = 0.33878114431913281;
}  // namespace

TEST_CASE("prelec with gamma=beta=1 is the identity") {
    const auto w = WeightingFunctionSpec::prelec(1.0, 1.0);
    CHECK(eval_pwf(w, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("prelec at p = 1/e is invariant in gamma when beta = 1") {
    const auto w = WeightingFunctionSpec::prelec(0.65, 1.0);
    CHECK(eval_pwf(w, std::exp(-1.0)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("tk-1992 matches the arbitrary-precision oracle") {
    const auto w = WeightingFunctionSpec::tk1992(0.61);
    CHECK(std::abs(eval_pwf(w, 0.1) - kTkW01) < 1e-12);
}

TEST_CASE("pwf rejects out-of-range p and bad parameters") {
    const auto w = WeightingFunctionSpec::prelec(0.65, 1.0);
    CHECK_THROWS_AS(eval_pwf(w, 1.5), DomainError);
    CHECK_THROWS_AS(eval_pwf(w, -0.1), DomainError);
    CHECK_THROWS_AS(WeightingFunctionSpec::prelec(0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(WeightingFunctionSpec::tk1992(-0.5), ConfigError);
    CHECK_THROWS_AS(WeightingFunctionSpec::tk1992(1.5), ConfigError);
}

TEST_CASE("closed-form families map [0,1] into [0,1] with pinned endpoints") {
    std::mt19937_64 gen(12345);
    std::uniform_real_distribution<double> gdist(0.05, 1.0), bdist(0.1, 3.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const WeightingFunctionSpec w =
            (trial % 2 == 0) ? WeightingFunctionSpec::prelec(gdist(gen) + 0.5, bdist(gen))
                             : WeightingFunctionSpec::tk1992(gdist(gen));
        CHECK(std::abs(w.eval(0.0)) < 1e-12);
        CHECK(std::abs(w.eval(1.0) - 1.0) < 1e-12);
        for (int k = 1; k < 32; ++k) {
            const double p = k / 32.0;
            const double v = w.eval(p);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("fine endpoint grid stays in range for fixed representative params") {
    for (const auto& w : {WeightingFunctionSpec::prelec(0.65, 1.0),
                          WeightingFunctionSpec::tk1992(0.61)}) {
        for (int k = 0; k <= 1000; ++k) {
            const double v = w.eval(k / 1000.0);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("prelec beta=1 fixed point is exactly 1/e for gamma != 1") {
    for (double g : {0.5, 0.65, 0.8}) {
        const double ps = fixed_point(WeightingFunctionSpec::prelec(g, 1.0));
        CHECK(std::abs(ps - std::exp(-1.0)) < 1e-9);
    }
}

TEST_CASE("tk fixed point matches the bisection oracle with a bracketing certificate") {
    const auto w = WeightingFunctionSpec::tk1992(0.61);
    const double ps = fixed_point(w);
    CHECK(std::abs(ps - kTkFixedPoint) < 1e-9);
    CHECK(std::abs(w.eval(ps) - ps) < 1e-12);
    const double lo = w.eval(ps - 1e-6) - (ps - 1e-6);
    const double hi = w.eval(ps + 1e-6) - (ps + 1e-6);
    CHECK(lo * hi < 0.0);
}

TEST_CASE("identity family has a degenerate fixed point") {
    CHECK_THROWS_AS(fixed_point(WeightingFunctionSpec::identity()), DomainError);
}

TEST_CASE("single covering bump normalizes to one") {
    const auto part = build_partition({0.5}, {0.6}, 101);
    for (std::size_t k = 0; k < part.grid().size(); ++k) {
        const double p = part.grid()[k];
        if (p > 0.0 && p < 1.0) CHECK(part.weights()[0][k] == doctest::Approx(1.0));
    }
}

TEST_CASE("two-bump partition sums to one on the interior grid") {
    const auto part = build_partition({0.25, 0.75}, {0.35, 0.35}, 1001);
    CHECK(part.max_sum_deviation() < 1e-15);
    for (std::size_t k = 0; k < part.grid().size(); ++k) {
        const double p = part.grid()[k];
        if (p <= 0.0 || p >= 1.0) continue;
        double sum = 0.0;
        for (std::size_t i = 0; i < part.size(); ++i) {
            CHECK(part.weights()[i][k] >= 0.0);
            sum += part.weights()[i][k];
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("bumps vanish outside their support") {
    const auto part = build_partition({0.25, 0.75}, {0.35, 0.35}, 1001);
    for (std::size_t k = 0; k < part.grid().size(); ++k) {
        const double p = part.grid()[k];
        if (p > 0.6) CHECK(part.weights()[0][k] == 0.0);
        if (p < 0.4) CHECK(part.weights()[1][k] == 0.0);
    }
}

TEST_CASE("coverage gaps are rejected") {
    CHECK_THROWS_AS(build_partition({0.2, 0.9}, {0.1, 0.05}, 101), DomainError);
}

TEST_CASE("tabulated family validates its knots") {
    using T = std::vector<std::pair<double, double>>;
    CHECK_THROWS_AS(WeightingFunctionSpec::tabulated(T{{0, 0}}), ConfigError);
    CHECK_THROWS_AS(WeightingFunctionSpec::tabulated(T{{0, 0}, {0.5, 0.6}, {0.5, 0.7}, {1, 1}}),
                    ConfigError);
    CHECK_THROWS_AS(WeightingFunctionSpec::tabulated(T{{0.1, 0}, {1, 1}}), ConfigError);
    const auto w = WeightingFunctionSpec::tabulated(T{{0, 0}, {0.5, 0.7}, {1, 1}});
    CHECK(w.eval(0.5) == doctest::Approx(0.7));
    CHECK(w.eval(0.0) == 0.0);
    CHECK(w.eval(1.0) == 1.0);
}

TEST_CASE("mtk membership: linear utility fails both conditions") {
    const auto rep = mtk_membership(UtilitySampler::linear(), 1.0);
    CHECK_FALSE(rep.in_M);
    CHECK_FALSE(rep.in_TK);
    CHECK_FALSE(rep.in_MTK);
}

TEST_CASE("mtk membership: tk value function is TK- but not M-shaped at x=1") {
    const auto rep = mtk_membership(UtilitySampler::tk_value(0.88, 0.88, 2.25), 1.0);
    CHECK_FALSE(rep.in_M);  // |v(-1)| = 2.25 > 1
    CHECK(rep.in_TK);
    CHECK_FALSE(rep.in_MTK);
}

TEST_CASE("mtk membership: odd cubic hits the strict-inequality boundary") {
    const auto u = UtilitySampler::custom(
        [](double x) { return x - x * x * x / 10.0; },
        [](double x) { return 1.0 - 0.3 * x * x; }, [](double x) { return -0.6 * x; },
        [](double) { return -0.6; });
    const auto rep = mtk_membership(u, 1.0);
    CHECK_FALSE(rep.in_M);  // u(1) = 0.9 equals |u(-1)|, strict fails
}

TEST_CASE("mtk membership is undefined at the reference point") {
    CHECK_THROWS_AS(mtk_membership(UtilitySampler::linear(), 0.0), DomainError);
}
