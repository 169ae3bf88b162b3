#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qg/wavevector.hpp"

namespace qg {

// Truncated spectral representation of a real, mean-zero scalar on the
// 2*pi-periodic box. Stores every mode with max(|j1|,|j2|) <= n_max on a
// dense (2*n_max+1)^2 lattice; the zero mode is kept identically zero and
// coefficients satisfy the reality condition fhat(-j) = conj(fhat(j)).
class SpectralField {
public:
    explicit SpectralField(int n_max)
        : n_(n_max), w_(2 * n_max + 1),
          c_(std::size_t(w_) * w_, std::complex<double>(0.0, 0.0)) {
        if (n_max < 1)
            throw std::invalid_argument("SpectralField: n_max must be >= 1");
    }

    int n_max() const { return n_; }
    int width() const { return w_; }

    bool contains(WaveVector j) const { return j.max_norm() <= n_; }

    std::complex<double>& at(int j1, int j2) {
        assert(std::abs(j1) <= n_ && std::abs(j2) <= n_);
        return c_[idx(j1, j2)];
    }
    const std::complex<double>& at(int j1, int j2) const {
        assert(std::abs(j1) <= n_ && std::abs(j2) <= n_);
        return c_[idx(j1, j2)];
    }
    std::complex<double>& at(WaveVector j) { return at(j.j1, j.j2); }
    const std::complex<double>& at(WaveVector j) const { return at(j.j1, j.j2); }

    std::vector<std::complex<double>>& data() { return c_; }
    const std::vector<std::complex<double>>& data() const { return c_; }

    std::size_t idx(int j1, int j2) const {
        return std::size_t(j1 + n_) * w_ + std::size_t(j2 + n_);
    }

    // Visit every stored mode including (0,0), row-major in j1 then j2.
    template <class F> void for_each_mode(F&& f) const {
        for (int j1 = -n_; j1 <= n_; ++j1)
            for (int j2 = -n_; j2 <= n_; ++j2)
                f(WaveVector{j1, j2}, c_[idx(j1, j2)]);
    }
    template <class F> void for_each_mode(F&& f) {
        for (int j1 = -n_; j1 <= n_; ++j1)
            for (int j2 = -n_; j2 <= n_; ++j2)
                f(WaveVector{j1, j2}, c_[idx(j1, j2)]);
    }

    SpectralField& operator+=(const SpectralField& o) {
        require_same(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        require_same(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    SpectralField& operator*=(double s) {
        for (auto& c : c_) c *= s;
        return *this;
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) {
        a += b;
        return a;
    }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) {
        a -= b;
        return a;
    }
    friend SpectralField operator*(SpectralField a, double s) {
        a *= s;
        return a;
    }
    friend SpectralField operator*(double s, SpectralField a) {
        a *= s;
        return a;
    }

private:
    void require_same(const SpectralField& o) const {
        if (o.n_ != n_)
            throw std::invalid_argument("SpectralField: truncation mismatch");
    }

    int n_;
    int w_;
    std::vector<std::complex<double>> c_;
};

// Point samples of a real scalar on the uniform m x m grid
// x = (2*pi*p/m, 2*pi*q/m), stored row-major with p as the slow index.
class PhysicalField {
public:
    explicit PhysicalField(int m)
        : m_(m), v_(std::size_t(m) * m, 0.0) {
        if (m < 1)
            throw std::invalid_argument("PhysicalField: m must be >= 1");
    }

    int m() const { return m_; }

    double& at(int p, int q) { return v_[std::size_t(p) * m_ + q]; }
    const double& at(int p, int q) const { return v_[std::size_t(p) * m_ + q]; }

    std::vector<double>& data() { return v_; }
    const std::vector<double>& data() const { return v_; }

private:
    int m_;
    std::vector<double> v_;
};

// Average fhat(j) with conj(fhat(-j)) so the reality condition holds to the
// last bit. Transform round-off is the only thing this moves (order 1e-16
// relative); exact-arithmetic Hermitian inputs are unchanged.
inline void symmetrize(SpectralField& t) {
    const int n = t.n_max();
    for (int j1 = 0; j1 <= n; ++j1) {
        const int j2_start = (j1 == 0) ? 1 : -n;
        for (int j2 = j2_start; j2 <= n; ++j2) {
            const std::complex<double> a = t.at(j1, j2);
            const std::complex<double> b = t.at(-j1, -j2);
            const std::complex<double> avg =
                0.5 * (a + std::conj(b));
            t.at(j1, j2) = avg;
            t.at(-j1, -j2) = std::conj(avg);
        }
    }
    t.at(0, 0) = std::complex<double>(0.0, 0.0);
}

// Largest deviation from the reality condition, max |fhat(j) - conj(fhat(-j))|.
inline double hermitian_defect(const SpectralField& t) {
    const int n = t.n_max();
    double worst = 0.0;
    for (int j1 = -n; j1 <= n; ++j1)
        for (int j2 = -n; j2 <= n; ++j2)
            worst = std::max(worst,
                             std::abs(t.at(j1, j2) - std::conj(t.at(-j1, -j2))));
    return worst;
}

inline bool is_hermitian(const SpectralField& t, double tol = 0.0) {
    return hermitian_defect(t) <= tol && t.at(0, 0) == std::complex<double>(0.0, 0.0);
}

inline bool all_finite(const SpectralField& t) {
    for (const auto& c : t.data())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

} // namespace qg
