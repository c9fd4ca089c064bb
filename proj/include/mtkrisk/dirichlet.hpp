#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "mtkrisk/errors.hpp"
#include "mtkrisk/geometry.hpp"
#include "mtkrisk/rng.hpp"

namespace mtk {

enum class DomainShape { Disk, Rectangle, Annulus };

// Planar domain for the first-exit estimator. delta is the absorption shell
// width for the walk-on-spheres back end.
class DomainSpec {
public:
    static DomainSpec disk(const Eigen::Vector2d& center, double radius, double delta = 1e-6);
    static DomainSpec rectangle(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi,
                                double delta = 1e-6);
    static DomainSpec annulus(const Eigen::Vector2d& center, double r_in, double r_out,
                              double delta = 1e-6);

    DomainShape shape() const noexcept { return shape_; }
    double delta() const noexcept { return delta_; }
    const Eigen::Vector2d& center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }
    double r_in() const noexcept { return r_in_; }
    double r_out() const noexcept { return r_out_; }
    const Eigen::Vector2d& lo() const noexcept { return lo_; }
    const Eigen::Vector2d& hi() const noexcept { return hi_; }

    // Signed distance to the boundary, positive strictly inside.
    double distance_to_boundary(const Eigen::Vector2d& p) const;
    Eigen::Vector2d project_to_boundary(const Eigen::Vector2d& p) const;

private:
    DomainSpec() = default;

    DomainShape shape_ = DomainShape::Disk;
    double delta_ = 1e-6;
    Eigen::Vector2d center_{0, 0}, lo_{0, 0}, hi_{1, 1};
    double radius_ = 1.0, r_in_ = 0.5, r_out_ = 1.0;
};

enum class BoundaryFamily { Constant, CosHarmonic, SinHarmonic, TKValueOnBoundary };

// Boundary data phi. Harmonic families use the polar angle about the domain
// center; the TK family applies the piecewise value function to the boundary
// point's coordinate along `axis`.
class BoundaryData {
public:
    static BoundaryData constant(double c);
    static BoundaryData cos_harmonic(int k);
    static BoundaryData sin_harmonic(int k);
    static BoundaryData tk_value(double alpha_g, double beta_l, double lambda,
                                 const Eigen::Vector2d& axis);

    double eval(const Eigen::Vector2d& p, const DomainSpec& domain) const;
    BoundaryFamily family() const noexcept { return family_; }

private:
    BoundaryData() = default;

    BoundaryFamily family_ = BoundaryFamily::Constant;
    double c_ = 0.0;
    int k_ = 1;
    double alpha_g_ = 0.88, beta_l_ = 0.88, lambda_ = 2.25;
    Eigen::Vector2d axis_{1, 0};
};

// 5-point finite-difference Laplacian at step h.
double laplacian(const SurfaceSampler& u, double x, double y, double h);

// r^|n| e^{i n theta}; the literal variant evaluates r^|n| e^{i theta}.
std::complex<double> harmonic_mode(int n, double r, double theta, bool literal_exponent = false);

struct ExitSample {
    Eigen::Vector2d exit_point;
    long steps = 0;
};

// Walk-on-spheres: jump to a uniform point on the largest inscribed circle
// until within delta of the boundary, then project.
ExitSample sample_first_exit(const DomainSpec& domain, const Eigen::Vector2d& x0,
                             CounterRng& rng);

struct ExitEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
    double mean_exit_steps = 0.0;
    std::uint64_t seed = 0;
};

// Monte Carlo mean of phi over first-exit points. Deterministic in
// (seed, n_paths, domain, x0) for any worker count: per-path counter-based
// substreams, pairwise accumulation over path-index blocks of 1024.
// n_threads = 0 reads MTK_RISK_THREADS (default 1).
ExitEstimate estimate_value(const DomainSpec& domain, const BoundaryData& phi,
                            const Eigen::Vector2d& x0, long n_paths, std::uint64_t seed,
                            int n_threads = 0);

struct GridPointEstimate {
    bool ok = false;
    std::string error;
    ExitEstimate estimate;
};

// Batch driver: per-point derived seeds, output order matches input order,
// per-point failures reported without aborting the batch.
std::vector<GridPointEstimate> estimate_value_grid(const DomainSpec& domain,
                                                   const BoundaryData& phi,
                                                   const std::vector<Eigen::Vector2d>& grid,
                                                   long n_paths, std::uint64_t seed,
                                                   int n_threads = 0);

}  // namespace mtk
