#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "mtkrisk/ergodic.hpp"
#include "mtkrisk/kernel.hpp"

using namespace mtk;

TEST_CASE("contraction orbit decays geometrically") {
    const Eigen::MatrixXd T = 0.5 * Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd f0(2);
    f0 << 1, 1;
    const auto rec = orbit(T, f0, 3);
    REQUIRE(rec.iterates.size() == 4);
    for (int j = 0; j <= 3; ++j) {
        const double s = std::pow(0.5, j);
        CHECK(rec.iterates[static_cast<std::size_t>(j)](0) == doctest::Approx(s));
        CHECK(rec.iterates[static_cast<std::size_t>(j)](1) == doctest::Approx(s));
    }
}

TEST_CASE("identity orbit is constant with time average f0") {
    Eigen::VectorXd f0(3);
    f0 << 2, -1, 0.5;
    const auto rec = orbit(Eigen::MatrixXd::Identity(3, 3), f0, 10);
    for (const auto& f : rec.iterates) CHECK((f - f0).norm() < 1e-15);
    CHECK((rec.time_average - f0).norm() < 1e-15);
}

TEST_CASE("orbit rejects mismatched dimensions and flags divergence") {
    CHECK_THROWS_AS(orbit(Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Ones(2), 5),
                    DomainError);
    const Eigen::MatrixXd big = 1e7 * Eigen::MatrixXd::Identity(2, 2);
    const auto rec = orbit(big, Eigen::VectorXd::Ones(2), 10);
    CHECK(rec.diverged);
    CHECK(rec.steps_completed < 10);
}

TEST_CASE("tk kernel orbit matches the eigendecomposition oracle") {
    const auto K = build_kernel_matrix(WeightingFunctionSpec::tk1992(0.61), 20, 20);
    Eigen::MatrixXd T = composite_T(K.entries);
    T *= 0.9 / spectrum(T).spectral_norm;
    Eigen::VectorXd f0 = Eigen::VectorXd::Zero(20);
    f0(0) = 1.0;
    const auto rec = orbit(T, f0, 200);

    // independent route: T is symmetric, power through the eigenbasis
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    Eigen::VectorXd coeff = es.eigenvectors().transpose() * f0;
    for (Eigen::Index i = 0; i < coeff.size(); ++i)
        coeff(i) *= std::pow(es.eigenvalues()(i), 200);
    const Eigen::VectorXd oracle = es.eigenvectors() * coeff;
    CHECK(std::abs(rec.norms.back() - oracle.norm()) < 1e-6);
    CHECK((rec.iterates.back() - oracle).norm() < 1e-6);
}

TEST_CASE("submultiplicativity certificate holds for a contraction") {
    const auto K = build_kernel_matrix(WeightingFunctionSpec::tk1992(0.61), 12, 12);
    Eigen::MatrixXd T = composite_T(K.entries);
    T *= 0.9 / spectrum(T).spectral_norm;
    Eigen::VectorXd f0 = Eigen::VectorXd::Zero(12);
    f0(0) = 1.0;
    const auto rec = orbit(T, f0, 100);
    for (std::size_t j = 0; j < rec.norms.size(); ++j)
        CHECK(rec.norms[j] <= std::pow(0.9, static_cast<double>(j)) * rec.norms[0] + 1e-9);
}

TEST_CASE("birkhoff average of a contraction tends to zero, residual shrinking") {
    const Eigen::MatrixXd T = 0.8 * Eigen::MatrixXd::Identity(3, 3);
    Eigen::VectorXd f0(3);
    f0 << 1, 2, 3;
    double prev = 1e300;
    for (int k = 4; k <= 10; ++k) {
        const auto rep = birkhoff_check(T, f0, 1 << k);
        CHECK(rep.invariance_residual <= prev + 1e-9);
        prev = rep.invariance_residual;
    }
    // residual ~ |T f0| / 2N for a contraction, so ~1.5e-3 at N = 1024
    CHECK(prev < 2e-3);
}

TEST_CASE("2-cycle permutation has invariant time average (0.5, 0.5)") {
    Eigen::MatrixXd P(2, 2);
    P << 0, 1, 1, 0;
    Eigen::VectorXd f0(2);
    f0 << 1, 0;
    const auto rep = birkhoff_check(P, f0, 64);
    CHECK(rep.time_average_limit(0) == doctest::Approx(0.5));
    CHECK(rep.time_average_limit(1) == doctest::Approx(0.5));
    CHECK(rep.invariance_residual < 1e-12);
}

TEST_CASE("identity operator keeps its time average fixed") {
    Eigen::VectorXd f0(2);
    f0 << 2, 3;
    const auto rep = birkhoff_check(Eigen::MatrixXd::Identity(2, 2), f0, 16);
    CHECK((rep.time_average_limit - f0).norm() < 1e-12);
    CHECK(rep.invariance_residual < 1e-12);
}

TEST_CASE("time averages are linear in the initial vector") {
    const auto K = build_kernel_matrix(WeightingFunctionSpec::prelec(0.65, 1.0), 6, 6);
    Eigen::MatrixXd T = composite_T(K.entries);
    T *= 0.7 / spectrum(T).spectral_norm;
    Eigen::VectorXd f0 = Eigen::VectorXd::LinSpaced(6, 1.0, 2.0);
    Eigen::VectorXd g0 = Eigen::VectorXd::LinSpaced(6, -1.0, 1.0);
    const double a = 2.5, b = -0.75;
    const auto mixed = birkhoff_check(T, a * f0 + b * g0, 32);
    const auto fa = birkhoff_check(T, f0, 32);
    const auto gb = birkhoff_check(T, g0, 32);
    CHECK((mixed.time_average_limit - a * fa.time_average_limit - b * gb.time_average_limit)
              .norm() < 1e-10);
}

TEST_CASE("identity phase portrait has a zero gap column") {
    const auto port = phase_portrait(WeightingFunctionSpec::identity(), 11);
    REQUIRE(port.points.size() == 11);
    for (const auto& pt : port.points) CHECK(pt.gap == 0.0);
    CHECK(port.sign_change_brackets.empty());
}

TEST_CASE("prelec gap is positive below 1/e and negative above") {
    const auto port = phase_portrait(WeightingFunctionSpec::prelec(0.65, 1.0), 101);
    const double ps = std::exp(-1.0);
    for (const auto& pt : port.points) {
        if (pt.p > 1e-6 && pt.p < ps - 1e-3) CHECK(pt.gap > 0.0);
        if (pt.p > ps + 1e-3 && pt.p < 1.0 - 1e-6) CHECK(pt.gap < 0.0);
    }
}

TEST_CASE("tk phase portrait brackets the fixed point") {
    const auto w = WeightingFunctionSpec::tk1992(0.61);
    const auto port = phase_portrait(w, 101);
    const double ps = fixed_point(w);
    REQUIRE(port.sign_change_brackets.size() == 1);
    CHECK(port.sign_change_brackets[0].first < ps);
    CHECK(port.sign_change_brackets[0].second > ps);
}
