#include "mtkrisk/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "mtkrisk/riskops.hpp"

namespace mtk {

namespace {

void check_delta(double delta) {
    if (!(delta >= 1e-8 && delta <= 1e-2))
        throw ConfigError("domain: delta must lie in [1e-8, 1e-2]");
}

int resolve_threads(int n_threads) {
    if (n_threads > 0) return n_threads;
    if (const char* env = std::getenv("MTK_RISK_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

}  // namespace

DomainSpec DomainSpec::disk(const Eigen::Vector2d& center, double radius, double delta) {
    if (!(radius > 0.0)) throw ConfigError("disk: radius must be positive");
    check_delta(delta);
    DomainSpec d;
    d.shape_ = DomainShape::Disk;
    d.center_ = center;
    d.radius_ = radius;
    d.delta_ = delta;
    return d;
}

DomainSpec DomainSpec::rectangle(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi,
                                 double delta) {
    if (!(hi.x() > lo.x() && hi.y() > lo.y()))
        throw ConfigError("rectangle: degenerate extent");
    check_delta(delta);
    DomainSpec d;
    d.shape_ = DomainShape::Rectangle;
    d.lo_ = lo;
    d.hi_ = hi;
    d.center_ = 0.5 * (lo + hi);
    d.delta_ = delta;
    return d;
}

DomainSpec DomainSpec::annulus(const Eigen::Vector2d& center, double r_in, double r_out,
                               double delta) {
    if (!(r_in > 0.0 && r_out > r_in)) throw ConfigError("annulus: need 0 < r_in < r_out");
    check_delta(delta);
    DomainSpec d;
    d.shape_ = DomainShape::Annulus;
    d.center_ = center;
    d.r_in_ = r_in;
    d.r_out_ = r_out;
    d.delta_ = delta;
    return d;
}

double DomainSpec::distance_to_boundary(const Eigen::Vector2d& p) const {
    switch (shape_) {
        case DomainShape::Disk:
            return radius_ - (p - center_).norm();
        case DomainShape::Rectangle:
            return std::min({p.x() - lo_.x(), hi_.x() - p.x(), p.y() - lo_.y(), hi_.y() - p.y()});
        case DomainShape::Annulus: {
            const double r = (p - center_).norm();
            return std::min(r - r_in_, r_out_ - r);
        }
    }
    throw ConfigError("domain: unknown shape");
}

Eigen::Vector2d DomainSpec::project_to_boundary(const Eigen::Vector2d& p) const {
    switch (shape_) {
        case DomainShape::Disk: {
            Eigen::Vector2d d = p - center_;
            const double n = d.norm();
            if (n == 0.0) return center_ + Eigen::Vector2d(radius_, 0.0);
            return center_ + d * (radius_ / n);
        }
        case DomainShape::Rectangle: {
            // snap to the nearest side
            const double dl = p.x() - lo_.x(), dr = hi_.x() - p.x();
            const double db = p.y() - lo_.y(), dt = hi_.y() - p.y();
            const double m = std::min({dl, dr, db, dt});
            Eigen::Vector2d q = p;
            q.x() = std::clamp(q.x(), lo_.x(), hi_.x());
            q.y() = std::clamp(q.y(), lo_.y(), hi_.y());
            if (m == dl) q.x() = lo_.x();
            else if (m == dr) q.x() = hi_.x();
            else if (m == db) q.y() = lo_.y();
            else q.y() = hi_.y();
            return q;
        }
        case DomainShape::Annulus: {
            Eigen::Vector2d d = p - center_;
            const double n = d.norm();
            if (n == 0.0) return center_ + Eigen::Vector2d(r_in_, 0.0);
            const double target = (n - r_in_ < r_out_ - n) ? r_in_ : r_out_;
            return center_ + d * (target / n);
        }
    }
    throw ConfigError("domain: unknown shape");
}

BoundaryData BoundaryData::constant(double c) {
    BoundaryData b;
    b.family_ = BoundaryFamily::Constant;
    b.c_ = c;
    return b;
}

BoundaryData BoundaryData::cos_harmonic(int k) {
    BoundaryData b;
    b.family_ = BoundaryFamily::CosHarmonic;
    b.k_ = k;
    return b;
}

BoundaryData BoundaryData::sin_harmonic(int k) {
    BoundaryData b;
    b.family_ = BoundaryFamily::SinHarmonic;
    b.k_ = k;
    return b;
}

BoundaryData BoundaryData::tk_value(double alpha_g, double beta_l, double lambda,
                                    const Eigen::Vector2d& axis) {
    if (axis.norm() == 0.0) throw ConfigError("boundary: axis must be nonzero");
    BoundaryData b;
    b.family_ = BoundaryFamily::TKValueOnBoundary;
    b.alpha_g_ = alpha_g;
    b.beta_l_ = beta_l;
    b.lambda_ = lambda;
    b.axis_ = axis.normalized();
    return b;
}

double BoundaryData::eval(const Eigen::Vector2d& p, const DomainSpec& domain) const {
    switch (family_) {
        case BoundaryFamily::Constant:
            return c_;
        case BoundaryFamily::CosHarmonic: {
            const Eigen::Vector2d d = p - domain.center();
            return std::cos(k_ * std::atan2(d.y(), d.x()));
        }
        case BoundaryFamily::SinHarmonic: {
            const Eigen::Vector2d d = p - domain.center();
            return std::sin(k_ * std::atan2(d.y(), d.x()));
        }
        case BoundaryFamily::TKValueOnBoundary: {
            const double x = p.dot(axis_);
            if (x > 0.0) return std::pow(x, alpha_g_);
            if (x < 0.0) return -lambda_ * std::pow(-x, beta_l_);
            return 0.0;
        }
    }
    throw ConfigError("boundary: unknown family");
}

double laplacian(const SurfaceSampler& u, double x, double y, double h) {
    if (!(h >= 1e-6 && h <= 1e-1)) throw ConfigError("laplacian: h must lie in [1e-6, 1e-1]");
    const double v = (u.eval(x + h, y) + u.eval(x - h, y) + u.eval(x, y + h) + u.eval(x, y - h) -
                      4.0 * u.eval(x, y)) /
                     (h * h);
    if (!std::isfinite(v)) throw NumericError("laplacian: non-finite samples");
    return v;
}

std::complex<double> harmonic_mode(int n, double r, double theta, bool literal_exponent) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("harmonic_mode: r must lie in [0, 1]");
    const double rad = std::pow(r, std::abs(n));
    const double ang = literal_exponent ? theta : n * theta;
    return std::complex<double>(rad * std::cos(ang), rad * std::sin(ang));
}

ExitSample sample_first_exit(const DomainSpec& domain, const Eigen::Vector2d& x0,
                             CounterRng& rng) {
    const double d0 = domain.distance_to_boundary(x0);
    if (d0 <= 0.0) throw DomainError("sample_first_exit: x0 must be strictly inside the domain");

    ExitSample s;
    Eigen::Vector2d x = x0;
    double dist = d0;
    while (dist > domain.delta()) {
        const double theta = 2.0 * std::numbers::pi * rng.next_double();
        x += dist * Eigen::Vector2d(std::cos(theta), std::sin(theta));
        ++s.steps;
        dist = domain.distance_to_boundary(x);
    }
    s.exit_point = domain.project_to_boundary(x);
    return s;
}

ExitEstimate estimate_value(const DomainSpec& domain, const BoundaryData& phi,
                            const Eigen::Vector2d& x0, long n_paths, std::uint64_t seed,
                            int n_threads) {
    if (n_paths < 1) throw ConfigError("estimate_value: n_paths must be >= 1");
    if (domain.distance_to_boundary(x0) <= domain.delta())
        throw DomainError("estimate_value: x0 must lie strictly inside, beyond the shell");

    constexpr long kBlock = 1024;
    const long n_blocks = (n_paths + kBlock - 1) / kBlock;
    std::vector<double> block_sum(static_cast<std::size_t>(n_blocks), 0.0);
    std::vector<double> block_sum2(static_cast<std::size_t>(n_blocks), 0.0);
    std::vector<double> block_steps(static_cast<std::size_t>(n_blocks), 0.0);

    auto run_block = [&](long b) {
        const long lo = b * kBlock;
        const long hi = std::min(n_paths, lo + kBlock);
        double s = 0.0, s2 = 0.0, st = 0.0;
        for (long p = lo; p < hi; ++p) {
            CounterRng rng(CounterRng::derive_key(seed, static_cast<std::uint64_t>(p)));
            const ExitSample exit = sample_first_exit(domain, x0, rng);
            const double v = phi.eval(exit.exit_point, domain);
            s += v;
            s2 += v * v;
            st += static_cast<double>(exit.steps);
        }
        block_sum[static_cast<std::size_t>(b)] = s;
        block_sum2[static_cast<std::size_t>(b)] = s2;
        block_steps[static_cast<std::size_t>(b)] = st;
    };

    const int workers = std::min<long>(resolve_threads(n_threads), n_blocks);
    if (workers <= 1) {
        for (long b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (long b = w; b < n_blocks; b += workers) run_block(b);
            });
        for (auto& t : pool) t.join();
    }

    // pairwise reduction over block index, independent of worker schedule
    auto pairwise = [](std::vector<double> v) {
        std::size_t n = v.size();
        while (n > 1) {
            const std::size_t half = (n + 1) / 2;
            for (std::size_t i = 0; i + half < n; ++i) v[i] += v[i + half];
            n = half;
        }
        return v.empty() ? 0.0 : v[0];
    };

    const double sum = pairwise(block_sum);
    const double sum2 = pairwise(block_sum2);
    const double steps = pairwise(block_steps);

    ExitEstimate est;
    est.n_paths = n_paths;
    est.seed = seed;
    est.mean = sum / static_cast<double>(n_paths);
    est.mean_exit_steps = steps / static_cast<double>(n_paths);
    if (n_paths > 1) {
        const double var =
            std::max(0.0, (sum2 - static_cast<double>(n_paths) * est.mean * est.mean) /
                              static_cast<double>(n_paths - 1));
        est.std_error = std::sqrt(var / static_cast<double>(n_paths));
    }
    return est;
}

std::vector<GridPointEstimate> estimate_value_grid(const DomainSpec& domain,
                                                   const BoundaryData& phi,
                                                   const std::vector<Eigen::Vector2d>& grid,
                                                   long n_paths, std::uint64_t seed,
                                                   int n_threads) {
    std::vector<GridPointEstimate> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::uint64_t point_seed = CounterRng::derive_key(seed, 0x9e3779b9ULL + i);
        try {
            out[i].estimate = estimate_value(domain, phi, grid[i], n_paths, point_seed, n_threads);
            out[i].ok = true;
        } catch (const Error& e) {
            out[i].ok = false;
            out[i].error = e.what();
        }
    }
    return out;
}

}  // namespace mtk
