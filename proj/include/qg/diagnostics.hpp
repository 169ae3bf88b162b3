#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "qg/field.hpp"
#include "qg/operators.hpp"
#include "qg/transform.hpp"

namespace qg {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Quadrature grid used for grid-based norms and amplitude normalization:
// 4x oversampled relative to the minimal representation. Equal-weight
// quadrature is then exact for |f|^2 and |f|^4 of band-limited fields, and
// the grid maximum undershoots the true sup by at most about
// 0.5*(pi*n_max/m)^2 relative, far below the monotonicity tolerances.
inline int norm_grid_size(int n_max) {
    return next_smooth(4 * (2 * n_max + 1));
}

// Lebesgue norm by equal-weight quadrature,
//   ||f||_p = ((2*pi/m)^2 sum |f|^p)^(1/p),
// with p = infinity meaning the grid maximum of |f|.
inline double lp_norm(const PhysicalField& f, double p) {
    const auto& v = f.data();
    if (p == std::numeric_limits<double>::infinity()) {
        double worst = 0.0;
        for (double x : v) worst = std::max(worst, std::abs(x));
        return worst;
    }
    if (!(p >= 1.0))
        throw std::invalid_argument("lp_norm: p must be >= 1 or infinity");
    const double h = two_pi / f.m();
    double acc = 0.0;
    if (p == 2.0) {
        for (double x : v) acc += x * x;
    } else if (p == 4.0) {
        for (double x : v) {
            const double x2 = x * x;
            acc += x2 * x2;
        }
    } else {
        for (double x : v) acc += std::pow(std::abs(x), p);
    }
    return std::pow(h * h * acc, 1.0 / p);
}

// Homogeneous Sobolev seminorm in spectral form,
//   ||t||_{H^s} = sqrt(sum |j|^(2s) |that(j)|^2).
// s = 0 gives the spectral l2 norm, which is the physical L2 norm divided
// by 2*pi (Parseval with mean-value coefficients).
inline double sobolev_norm(const SpectralField& t, double s) {
    if (s < 0.0)
        throw std::invalid_argument("sobolev_norm: s must be >= 0");
    const int n = t.n_max();
    double acc = 0.0;
    for (int j1 = -n; j1 <= n; ++j1)
        for (int j2 = -n; j2 <= n; ++j2) {
            if (j1 == 0 && j2 == 0) continue;
            const double nsq = double(WaveVector{j1, j2}.norm_sq());
            acc += std::pow(nsq, s) * std::norm(t.at(j1, j2));
        }
    return std::sqrt(acc);
}

// Weak norm: largest coefficient magnitude sup_j |that(j)|.
inline double weak_norm(const SpectralField& t) {
    double worst = 0.0;
    for (const auto& c : t.data()) worst = std::max(worst, std::abs(c));
    return worst;
}

// l1 sum of coefficient magnitudes, an upper bound for the sup norm.
inline double fourier_l1(const SpectralField& t) {
    double acc = 0.0;
    for (const auto& c : t.data()) acc += std::abs(c);
    return acc;
}

struct GevreySums {
    double y = 0.0; // sum |that(j)| exp((t-t0)*kappa*|j|/2)
    double z = 0.0; // same with an extra |j| factor
};

// Tracks the analyticity diagnostic: once the coefficient l1 sum first dips
// to kappa/4 at a sample time t0, exponentially weighted sums with weight
// exp((t-t0)*kappa*|j|/2) are monitored against the ceiling kappa/2.
class GevreyMonitor {
public:
    explicit GevreyMonitor(double kappa) : kappa_(kappa) {
        if (!(kappa > 0.0))
            throw std::invalid_argument("GevreyMonitor: kappa must be > 0");
    }

    double kappa() const { return kappa_; }
    double activation_threshold() const { return 0.25 * kappa_; }
    double ceiling() const { return 0.5 * kappa_; }
    std::optional<double> t0() const { return t0_; }
    bool active() const { return t0_.has_value(); }

    // Feed one sampled (time, l1 sum) pair, in increasing time order.
    void observe(double t, double fourier_l1_value) {
        if (!t0_ && fourier_l1_value <= activation_threshold()) t0_ = t;
    }

private:
    double kappa_;
    std::optional<double> t0_;
};

// Weighted coefficient sums at time `t` (>= activation time). Modes with a
// zero coefficient are skipped so huge weights never multiply zero.
inline GevreySums gevrey_sums(const SpectralField& theta, double t,
                              const GevreyMonitor& mon) {
    if (!mon.active())
        throw std::invalid_argument("gevrey_sums: monitor not activated");
    const double t0 = *mon.t0();
    if (t < t0 - 1e-12)
        throw std::invalid_argument("gevrey_sums: time precedes activation");
    const double rate = 0.5 * mon.kappa() * (t - t0);
    GevreySums s;
    const int n = theta.n_max();
    for (int j1 = -n; j1 <= n; ++j1)
        for (int j2 = -n; j2 <= n; ++j2) {
            if (j1 == 0 && j2 == 0) continue;
            const double a = std::abs(theta.at(j1, j2));
            if (a == 0.0) continue;
            const double mod = WaveVector{j1, j2}.modulus();
            const double w = std::exp(rate * mod);
            s.y += a * w;
            s.z += a * w * mod;
        }
    return s;
}

// One sampled row of the run diagnostics. Gevrey entries are absent until
// the monitor activates.
struct DiagnosticsRecord {
    double t = 0.0;
    double l2 = 0.0;
    double l4 = 0.0;
    double linf = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
    double weak = 0.0;
    double fourier_l1 = 0.0;
    std::optional<double> gevrey_y;
    std::optional<double> gevrey_z;
};

// Evaluate every diagnostic for one state. When a monitor is supplied it is
// updated with this sample's l1 sum first, so activation can happen at the
// very sample being recorded.
inline DiagnosticsRecord sample_diagnostics(const SpectralField& theta, double t,
                                            GevreyMonitor* mon = nullptr) {
    DiagnosticsRecord r;
    r.t = t;
    const PhysicalField g = inverse_transform(theta, norm_grid_size(theta.n_max()));
    r.l2 = lp_norm(g, 2.0);
    r.l4 = lp_norm(g, 4.0);
    r.linf = lp_norm(g, std::numeric_limits<double>::infinity());
    r.h1 = sobolev_norm(theta, 1.0);
    r.h2 = sobolev_norm(theta, 2.0);
    r.weak = weak_norm(theta);
    r.fourier_l1 = fourier_l1(theta);
    if (mon) {
        mon->observe(t, r.fourier_l1);
        if (mon->active()) {
            const GevreySums s = gevrey_sums(theta, t, *mon);
            r.gevrey_y = s.y;
            r.gevrey_z = s.z;
        }
    }
    return r;
}

} // namespace qg
