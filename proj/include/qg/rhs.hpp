#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qg/diagnostics.hpp"
#include "qg/field.hpp"
#include "qg/operators.hpp"
#include "qg/transform.hpp"

namespace qg {

enum class NonlinearityPath { pseudospectral, convolution, symmetrized };

// Parameters of the right-hand side
//   d theta/dt = -(u_delta . grad theta)^ - kappa |j|^(2*alpha) thetahat,
// where u_delta is the velocity mollified by exp(-delta*|j|) (velocity only,
// never the advected scalar).
struct RhsConfig {
    double kappa = 1.0;  // dissipation strength, >= 0 (0 only for conservation runs)
    double alpha = 0.5;  // dissipation exponent in [0,1]; 0.5 is the critical case
    double delta = 0.0;  // Poisson mollification of the velocity, >= 0
    DealiasRule dealias_rule = DealiasRule::two_thirds;
    NonlinearityPath path = NonlinearityPath::pseudospectral;

    void validate() const {
        if (!(kappa >= 0.0)) throw std::invalid_argument("RhsConfig: kappa must be >= 0");
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::invalid_argument("RhsConfig: alpha must lie in [0,1]");
        if (!(delta >= 0.0)) throw std::invalid_argument("RhsConfig: delta must be >= 0");
        if (delta > 0.0 && path == NonlinearityPath::symmetrized)
            throw std::invalid_argument(
                "RhsConfig: the symmetrized path only exists for delta = 0");
    }
};

// Interaction coefficient of the symmetrized quadratic form,
//   gamma(j,k) = (1/2) (j_perp . l) (|k| - |j|) / (|j| |k|),  l = j + k.
// Written so that gamma(j,k) == gamma(k,j) holds bit-exactly: the integer
// dot product and the norm difference both flip sign under the swap, and
// floating-point negation and multiplication preserve that exactly.
inline double gamma_coefficient(WaveVector j, WaveVector k) {
    if (j.is_zero() || k.is_zero())
        throw std::invalid_argument("gamma_coefficient: modes must be nonzero");
    const WaveVector l = j + k;
    const double pl = double(dot(j.perp(), l));
    const double nj = j.modulus();
    const double nk = k.modulus();
    return (0.5 * pl) * (nk - nj) / (nj * nk);
}

// |gamma(j,k)| <= |l|^2 / (2 max(|j|,|k|)). Strict in exact arithmetic; a
// 1e-12 relative allowance absorbs rounding of both sides.
inline bool gamma_bound_holds(WaveVector j, WaveVector k) {
    const WaveVector l = j + k;
    const double bound =
        double(l.norm_sq()) / (2.0 * std::max(j.modulus(), k.modulus()));
    return std::abs(gamma_coefficient(j, k)) <= bound * (1.0 + 1e-12);
}

// Direct O(n_max^4) evaluation of the spectral nonlinearity
//   b_l = sum_{j+k=l} exp(-delta*|j|) (1/|j|) (j_perp . k) that(j) that(k),
// restricted to stored modes. This equals -(u_delta . grad theta)^ and is the
// oracle the fast path is tested against. The mollifier weight rides on the
// velocity factor j, matching the mollified equation; delta = 0 recovers the
// plain form.
inline SpectralField nonlinear_convolution(const SpectralField& t,
                                           double delta = 0.0) {
    if (delta < 0.0)
        throw std::invalid_argument("nonlinear_convolution: delta must be >= 0");
    const int n = t.n_max();
    SpectralField b(n);
    for (int j1 = -n; j1 <= n; ++j1) {
        for (int j2 = -n; j2 <= n; ++j2) {
            if (j1 == 0 && j2 == 0) continue;
            const std::complex<double> cj = t.at(j1, j2);
            if (cj == std::complex<double>(0.0, 0.0)) continue;
            const WaveVector j{j1, j2};
            const WaveVector jp = j.perp();
            const double wj = std::exp(-delta * j.modulus()) / j.modulus();
            for (int k1 = -n; k1 <= n; ++k1) {
                const int l1 = j1 + k1;
                if (l1 < -n || l1 > n) continue;
                for (int k2 = -n; k2 <= n; ++k2) {
                    if (k1 == 0 && k2 == 0) continue;
                    const int l2 = j2 + k2;
                    if (l2 < -n || l2 > n) continue;
                    if (l1 == 0 && l2 == 0) continue;
                    const double coef = wj * double(dot(jp, WaveVector{k1, k2}));
                    if (coef == 0.0) continue;
                    b.at(l1, l2) += coef * cj * t.at(k1, k2);
                }
            }
        }
    }
    symmetrize(b);
    return b;
}

// Same sum rearranged over the symmetric coefficients gamma(j,k). Agrees
// with nonlinear_convolution to round-off; exists as an independent check
// and for inspecting the interaction structure. delta = 0 only.
inline SpectralField nonlinear_symmetrized(const SpectralField& t) {
    const int n = t.n_max();
    SpectralField b(n);
    for (int j1 = -n; j1 <= n; ++j1) {
        for (int j2 = -n; j2 <= n; ++j2) {
            if (j1 == 0 && j2 == 0) continue;
            const std::complex<double> cj = t.at(j1, j2);
            if (cj == std::complex<double>(0.0, 0.0)) continue;
            const WaveVector j{j1, j2};
            for (int k1 = -n; k1 <= n; ++k1) {
                const int l1 = j1 + k1;
                if (l1 < -n || l1 > n) continue;
                for (int k2 = -n; k2 <= n; ++k2) {
                    if (k1 == 0 && k2 == 0) continue;
                    const int l2 = j2 + k2;
                    if (l2 < -n || l2 > n) continue;
                    if (l1 == 0 && l2 == 0) continue;
                    const WaveVector k{k1, k2};
                    b.at(l1, l2) += gamma_coefficient(j, k) * cj * t.at(k1, k2);
                }
            }
        }
    }
    symmetrize(b);
    return b;
}

// Physical grid size used by the transform path. Under the two-thirds rule
// the grid takes m >= 3*n_max+1, which makes the quadratic product exact on
// every retained mode; under `none` only representation is guaranteed
// (m >= 2*n_max+1) and products of full-support fields alias in the upper
// half of the spectrum.
inline int product_grid_size(int n_max, DealiasRule rule) {
    const int need = (rule == DealiasRule::two_thirds) ? 3 * n_max + 1
                                                       : 2 * n_max + 1;
    return next_smooth(need);
}

// Fast evaluation of -(u_delta . grad theta)^: build u and grad theta
// spectrally, multiply pointwise on the grid, transform back, negate,
// dealias. Matches nonlinear_convolution wherever the product is alias-free.
inline SpectralField nonlinear_pseudospectral(const SpectralField& t,
                                              const RhsConfig& cfg) {
    cfg.validate();
    const int n = t.n_max();
    const int m = product_grid_size(n, cfg.dealias_rule);
    const std::size_t mm = std::size_t(m) * m;

    SpectralField u1(n), u2(n), d1(n), d2(n);
    const std::complex<double> I(0.0, 1.0);
    for (int j1 = -n; j1 <= n; ++j1) {
        for (int j2 = -n; j2 <= n; ++j2) {
            if (j1 == 0 && j2 == 0) continue;
            const std::complex<double> c = t.at(j1, j2);
            const double mod = WaveVector{j1, j2}.modulus();
            const double w = (cfg.delta > 0.0 ? std::exp(-cfg.delta * mod) : 1.0) / mod;
            u1.at(j1, j2) = I * (-j2 * w) * c;
            u2.at(j1, j2) = I * (j1 * w) * c;
            d1.at(j1, j2) = I * double(j1) * c;
            d2.at(j1, j2) = I * double(j2) * c;
        }
    }

    auto& fft = detail::PlanCache::instance();
    std::vector<std::complex<double>> gu1(mm), gu2(mm), gd1(mm), gd2(mm);
    detail::scatter_modes(u1, m, gu1.data());
    detail::scatter_modes(u2, m, gu2.data());
    detail::scatter_modes(d1, m, gd1.data());
    detail::scatter_modes(d2, m, gd2.data());
    fft.backward(m, gu1.data());
    fft.backward(m, gu2.data());
    fft.backward(m, gd1.data());
    fft.backward(m, gd2.data());

    // Pointwise advection term on the grid; imaginary parts are transform
    // round-off and are discarded.
    for (std::size_t i = 0; i < mm; ++i) {
        const double adv =
            gu1[i].real() * gd1[i].real() + gu2[i].real() * gd2[i].real();
        gu1[i] = {adv, 0.0};
    }
    fft.forward(m, gu1.data());

    SpectralField b = detail::gather_modes(gu1.data(), m, n, -1.0 / (double(m) * m));
    symmetrize(b);
    return dealias(b, cfg.dealias_rule);
}

// Nonlinearity through whichever path the config selects.
inline SpectralField nonlinearity(const SpectralField& t, const RhsConfig& cfg) {
    cfg.validate();
    switch (cfg.path) {
    case NonlinearityPath::pseudospectral:
        return nonlinear_pseudospectral(t, cfg);
    case NonlinearityPath::convolution:
        return nonlinear_convolution(t, cfg.delta);
    case NonlinearityPath::symmetrized:
        return nonlinear_symmetrized(t);
    }
    throw std::logic_error("nonlinearity: unreachable");
}

// Full tendency d theta/dt: nonlinear transport plus dissipation
// -kappa |j|^(2*alpha) thetahat.
inline SpectralField tendency(const SpectralField& t, const RhsConfig& cfg) {
    SpectralField b = nonlinearity(t, cfg);
    const int n = t.n_max();
    for (int j1 = -n; j1 <= n; ++j1)
        for (int j2 = -n; j2 <= n; ++j2) {
            if (j1 == 0 && j2 == 0) continue;
            const double nsq = double(WaveVector{j1, j2}.norm_sq());
            b.at(j1, j2) -= cfg.kappa * std::pow(nsq, cfg.alpha) * t.at(j1, j2);
        }
    return b;
}

} // namespace qg
