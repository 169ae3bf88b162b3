#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "qg/field.hpp"

namespace qg {

// Smallest integer >= n whose prime factors are all in {2,3,5,7}. FFTW
// handles such sizes with fast codelets, so grids are rounded up to them.
inline int next_smooth(int n) {
    if (n < 1) n = 1;
    for (int m = n;; ++m) {
        int r = m;
        for (int p : {2, 3, 5, 7})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

namespace detail {

// Process-wide cache of in-place 2D complex FFTW plans, one pair per grid
// size. Planning is serialized (the FFTW planner is not thread safe);
// execution through fftw_execute_dft on caller-owned buffers is. Plans are
// created with FFTW_ESTIMATE | FFTW_UNALIGNED so the choice of algorithm
// never depends on buffer addresses and results are run-to-run identical.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    void forward(int m, std::complex<double>* buf) { execute(m, buf, true); }
    void backward(int m, std::complex<double>* buf) { execute(m, buf, false); }

private:
    struct Pair {
        fftw_plan fwd;
        fftw_plan bwd;
    };

    void execute(int m, std::complex<double>* buf, bool fwd) {
        const Pair& p = plans_for(m);
        auto* ptr = reinterpret_cast<fftw_complex*>(buf);
        fftw_execute_dft(fwd ? p.fwd : p.bwd, ptr, ptr);
    }

    const Pair& plans_for(int m) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = plans_.find(m);
        if (it != plans_.end()) return it->second;
        auto* scratch = static_cast<fftw_complex*>(
            fftw_malloc(sizeof(fftw_complex) * std::size_t(m) * m));
        if (!scratch) throw std::bad_alloc();
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        Pair p;
        p.fwd = fftw_plan_dft_2d(m, m, scratch, scratch, FFTW_FORWARD, flags);
        p.bwd = fftw_plan_dft_2d(m, m, scratch, scratch, FFTW_BACKWARD, flags);
        fftw_free(scratch);
        if (!p.fwd || !p.bwd)
            throw std::runtime_error("PlanCache: fftw planning failed");
        return plans_.emplace(m, p).first->second;
    }

    std::mutex mu_;
    std::map<int, Pair> plans_;
};

// Place stored coefficients onto an m x m DFT grid at indices (j mod m);
// buf must hold m*m entries and is zeroed first. Requires m >= 2*n_max+1 so
// distinct modes land on distinct grid indices.
inline void scatter_modes(const SpectralField& t, int m,
                          std::complex<double>* buf) {
    const std::size_t mm = std::size_t(m) * m;
    for (std::size_t i = 0; i < mm; ++i) buf[i] = {0.0, 0.0};
    const int n = t.n_max();
    for (int j1 = -n; j1 <= n; ++j1) {
        const int a = (j1 + m) % m;
        for (int j2 = -n; j2 <= n; ++j2) {
            const int b = (j2 + m) % m;
            buf[std::size_t(a) * m + b] = t.at(j1, j2);
        }
    }
}

// Read modes with max-norm <= n_max back off an m x m DFT grid, scaling by
// `scale` (1/m^2 turns an unnormalized forward DFT into mode means).
inline SpectralField gather_modes(const std::complex<double>* buf, int m,
                                  int n_max, double scale) {
    SpectralField out(n_max);
    for (int j1 = -n_max; j1 <= n_max; ++j1) {
        const int a = (j1 + m) % m;
        for (int j2 = -n_max; j2 <= n_max; ++j2) {
            const int b = (j2 + m) % m;
            out.at(j1, j2) = scale * buf[std::size_t(a) * m + b];
        }
    }
    return out;
}

} // namespace detail

// Grid samples -> spectral coefficients, using the mean-value normalization
//   fhat(j) = (1/m^2) sum_{p,q} f(x_pq) exp(-i j.x_pq).
// Exact for fields band-limited to the truncation when m >= 2*n_max+1.
// The zero mode is dropped (fields are mean-free by convention) and the
// output is symmetrized, which for real input only moves round-off.
inline SpectralField forward_transform(const PhysicalField& f, int n_max) {
    if (n_max < 1)
        throw std::invalid_argument("forward_transform: n_max must be >= 1");
    const int m = f.m();
    if (m < 2 * n_max + 1)
        throw std::invalid_argument(
            "forward_transform: grid too small, need m >= 2*n_max+1");
    std::vector<std::complex<double>> buf(std::size_t(m) * m);
    const auto& v = f.data();
    for (std::size_t i = 0; i < buf.size(); ++i) {
        if (!std::isfinite(v[i]))
            throw std::invalid_argument("forward_transform: non-finite sample");
        buf[i] = {v[i], 0.0};
    }
    detail::PlanCache::instance().forward(m, buf.data());
    SpectralField out =
        detail::gather_modes(buf.data(), m, n_max, 1.0 / (double(m) * m));
    symmetrize(out);
    return out;
}

// Spectral coefficients -> samples on an m x m grid (m >= 2*n_max+1),
//   f(x_pq) = sum_j fhat(j) exp(i j.x_pq).
// The imaginary residue of every sample must stay below 1e-12 times the
// coefficient l1 sum (the natural bound on the field scale); anything larger
// means the input violated the reality condition and is reported as an error.
inline PhysicalField inverse_transform(const SpectralField& t, int m) {
    if (m < 2 * t.n_max() + 1)
        throw std::invalid_argument(
            "inverse_transform: grid too small, need m >= 2*n_max+1");
    std::vector<std::complex<double>> buf(std::size_t(m) * m);
    detail::scatter_modes(t, m, buf.data());
    detail::PlanCache::instance().backward(m, buf.data());

    double scale = 0.0;
    for (const auto& c : t.data()) scale += std::abs(c);

    PhysicalField out(m);
    auto& v = out.data();
    double worst_imag = 0.0;
    for (std::size_t i = 0; i < buf.size(); ++i) {
        worst_imag = std::max(worst_imag, std::abs(buf[i].imag()));
        v[i] = buf[i].real();
    }
    if (worst_imag > 1e-12 * scale)
        throw std::runtime_error(
            "inverse_transform: input breaks Hermitian symmetry beyond tolerance");
    return out;
}

} // namespace qg
