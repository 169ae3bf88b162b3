#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "qg/diagnostics.hpp"
#include "qg/field.hpp"
#include "qg/transform.hpp"

namespace qg {

enum class InitialKind { single_mode, two_mode, random_band };

// Description of an initial condition. `amplitude` always means the sup
// norm on the oversampled quadrature grid; fields are rescaled to it after
// construction, so it is met exactly.
struct InitialSpec {
    InitialKind kind = InitialKind::random_band;
    WaveVector mode{1, 0}; // single_mode only
    int k_lo = 1;          // random_band only: Euclidean band bounds
    int k_hi = 8;
    double slope = -1.0;   // random_band: |that(j)| proportional to |j|^slope
    double amplitude = 0.05;
};

namespace detail {

// Deterministic uniform [0,1) from a 64-bit generator; avoids the
// implementation-defined std::uniform_real_distribution so the same seed
// yields the same field everywhere.
inline double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

} // namespace detail

// Build an initial state. Kinds:
//   single_mode: a cos(j.x + phi) with a seed-determined phase phi;
//   two_mode:    a (cos x1 + cos 2 x2) / 2;
//   random_band: random phases on k_lo <= |j| <= k_hi with a power-law
//                magnitude profile, drawn in a fixed lattice order so the
//                coefficients do not depend on n_max.
// Every kind is rescaled so the grid sup norm equals `amplitude`.
inline SpectralField generate_initial(const InitialSpec& spec, int n_max,
                                      std::uint64_t seed) {
    if (!(spec.amplitude > 0.0))
        throw std::invalid_argument("generate_initial: amplitude must be > 0");
    SpectralField t(n_max);
    std::mt19937_64 rng(seed);

    switch (spec.kind) {
    case InitialKind::single_mode: {
        if (spec.mode.is_zero())
            throw std::invalid_argument("generate_initial: mode must be nonzero");
        if (spec.mode.max_norm() > n_max)
            throw std::invalid_argument(
                "generate_initial: mode outside the truncation");
        const double phi = two_pi * detail::uniform01(rng);
        const std::complex<double> c = 0.5 * std::polar(1.0, phi);
        t.at(spec.mode) = c;
        t.at(spec.mode.negated()) = std::conj(c);
        break;
    }
    case InitialKind::two_mode: {
        if (n_max < 2)
            throw std::invalid_argument("generate_initial: two_mode needs n_max >= 2");
        t.at(1, 0) = t.at(-1, 0) = 0.25;
        t.at(0, 2) = t.at(0, -2) = 0.25;
        break;
    }
    case InitialKind::random_band: {
        if (spec.k_lo < 1 || spec.k_hi < spec.k_lo)
            throw std::invalid_argument("generate_initial: need 1 <= k_lo <= k_hi");
        if (spec.k_hi > n_max)
            throw std::invalid_argument(
                "generate_initial: band exceeds the truncation");
        const std::int64_t lo2 = std::int64_t(spec.k_lo) * spec.k_lo;
        const std::int64_t hi2 = std::int64_t(spec.k_hi) * spec.k_hi;
        // One representative per conjugate pair: j1 > 0, or j1 == 0, j2 > 0.
        for (int j1 = 0; j1 <= spec.k_hi; ++j1) {
            for (int j2 = (j1 == 0 ? 1 : -spec.k_hi); j2 <= spec.k_hi; ++j2) {
                const WaveVector j{j1, j2};
                const std::int64_t nsq = j.norm_sq();
                if (nsq < lo2 || nsq > hi2) continue;
                const double mag = std::pow(j.modulus(), spec.slope);
                const double phi = two_pi * detail::uniform01(rng);
                const std::complex<double> c = mag * std::polar(1.0, phi);
                t.at(j) = c;
                t.at(j.negated()) = std::conj(c);
            }
        }
        break;
    }
    }

    const PhysicalField g = inverse_transform(t, norm_grid_size(n_max));
    double sup = 0.0;
    for (double x : g.data()) sup = std::max(sup, std::abs(x));
    if (sup == 0.0)
        throw std::invalid_argument("generate_initial: constructed field is zero");
    t *= spec.amplitude / sup;
    return t;
}

} // namespace qg
