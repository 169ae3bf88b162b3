#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>

namespace qg {

// Integer wave vector on the 2*pi-periodic lattice. Fields are expanded as
//   f(x) = sum_j fhat(j) exp(i j.x),
// so j ranges over Z^2 and the zero mode carries the spatial mean.
struct WaveVector {
    int j1 = 0;
    int j2 = 0;

    friend constexpr bool operator==(WaveVector a, WaveVector b) {
        return a.j1 == b.j1 && a.j2 == b.j2;
    }

    constexpr bool is_zero() const { return j1 == 0 && j2 == 0; }

    constexpr std::int64_t norm_sq() const {
        return std::int64_t(j1) * j1 + std::int64_t(j2) * j2;
    }

    // Euclidean modulus |j|. norm_sq is exact, so the result is correctly
    // rounded and reproducible.
    double modulus() const { return std::sqrt(double(norm_sq())); }

    // Counterclockwise rotation by pi/2: (j1, j2) -> (-j2, j1).
    constexpr WaveVector perp() const { return {-j2, j1}; }

    constexpr int max_norm() const {
        int a = j1 < 0 ? -j1 : j1;
        int b = j2 < 0 ? -j2 : j2;
        return a > b ? a : b;
    }

    constexpr WaveVector negated() const { return {-j1, -j2}; }
};

constexpr WaveVector operator+(WaveVector a, WaveVector b) {
    return {a.j1 + b.j1, a.j2 + b.j2};
}

constexpr WaveVector operator-(WaveVector a, WaveVector b) {
    return {a.j1 - b.j1, a.j2 - b.j2};
}

constexpr std::int64_t dot(WaveVector a, WaveVector b) {
    return std::int64_t(a.j1) * b.j1 + std::int64_t(a.j2) * b.j2;
}

} // namespace qg
