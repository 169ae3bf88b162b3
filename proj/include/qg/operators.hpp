#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qg/field.hpp"

namespace qg {

enum class DealiasRule { none, two_thirds };

// Fractional Laplacian power: multiply each mode by |j|^s. The zero mode is
// identically zero, so negative powers are well defined on the stored set.
inline SpectralField apply_lambda_power(const SpectralField& t, double s) {
    SpectralField out(t.n_max());
    const int n = t.n_max();
    for (int j1 = -n; j1 <= n; ++j1) {
        for (int j2 = -n; j2 <= n; ++j2) {
            if (j1 == 0 && j2 == 0) continue;
            const double nsq = double(WaveVector{j1, j2}.norm_sq());
            // |j|^s as (|j|^2)^(s/2); nsq is an exact integer.
            out.at(j1, j2) = std::pow(nsq, 0.5 * s) * t.at(j1, j2);
        }
    }
    return out;
}

struct Velocity {
    SpectralField u1;
    SpectralField u2;
};

// Divergence-free velocity recovered from the scalar:
//   uhat(j) = i * (j_perp / |j|) * thetahat(j),  j_perp = (-j2, j1).
// Componentwise this is u = (-R2 theta, R1 theta) with R the Riesz
// transforms. The discrete divergence j1*u1hat + j2*u2hat is the same
// three-factor product evaluated with two rounding orders, so it cancels
// to a couple of ulp per mode (not bitwise).
inline Velocity velocity_from_theta(const SpectralField& t) {
    const int n = t.n_max();
    Velocity u{SpectralField(n), SpectralField(n)};
    const std::complex<double> I(0.0, 1.0);
    for (int j1 = -n; j1 <= n; ++j1) {
        for (int j2 = -n; j2 <= n; ++j2) {
            if (j1 == 0 && j2 == 0) continue;
            const double inv = 1.0 / WaveVector{j1, j2}.modulus();
            const std::complex<double> c = t.at(j1, j2);
            u.u1.at(j1, j2) = I * (-j2 * inv) * c;
            u.u2.at(j1, j2) = I * (j1 * inv) * c;
        }
    }
    return u;
}

// Convolution against the periodized Poisson kernel: multiplier
// exp(-delta*|j|). The kernel is positive with unit mass, so no Lp norm can
// grow; delta = 0 is the bit-exact identity.
inline SpectralField apply_poisson_mollifier(const SpectralField& t, double delta) {
    if (delta < 0.0)
        throw std::invalid_argument("apply_poisson_mollifier: delta must be >= 0");
    SpectralField out(t.n_max());
    const int n = t.n_max();
    for (int j1 = -n; j1 <= n; ++j1)
        for (int j2 = -n; j2 <= n; ++j2) {
            if (j1 == 0 && j2 == 0) continue;
            const double w = std::exp(-delta * WaveVector{j1, j2}.modulus());
            out.at(j1, j2) = w * t.at(j1, j2);
        }
    return out;
}

inline int dealias_cutoff(int n_max) { return (2 * n_max) / 3; }

// Two-thirds truncation: zero every mode with max(|j1|,|j2|) above
// floor(2*n_max/3). `none` returns the input unchanged.
inline SpectralField dealias(const SpectralField& t, DealiasRule rule) {
    if (rule == DealiasRule::none) return t;
    SpectralField out = t;
    const int n = t.n_max();
    const int cut = dealias_cutoff(n);
    for (int j1 = -n; j1 <= n; ++j1)
        for (int j2 = -n; j2 <= n; ++j2)
            if (WaveVector{j1, j2}.max_norm() > cut)
                out.at(j1, j2) = {0.0, 0.0};
    return out;
}

} // namespace qg
