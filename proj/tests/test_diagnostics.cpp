#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "qg/diagnostics.hpp"
#include "qg/initial.hpp"
#include "qg/transform.hpp"

using namespace qg;
using Catch::Approx;

namespace {

SpectralField cosine_x1(int n_max) {
    SpectralField t(n_max);
    t.at(1, 0) = {0.5, 0.0};
    t.at(-1, 0) = {0.5, 0.0};
    return t;
}

} // namespace

TEST_CASE("norm grid size oversamples the truncation") {
    REQUIRE(norm_grid_size(8) == 70);
    REQUIRE(norm_grid_size(1) == 12);
}

TEST_CASE("Lp norms of cos x1 against closed forms") {
    const SpectralField t = cosine_x1(8);
    const PhysicalField g = inverse_transform(t, norm_grid_size(8));
    const double pi = 0.5 * two_pi;
    REQUIRE(lp_norm(g, 2.0) == Approx(pi * std::sqrt(2.0)).epsilon(1e-13));
    REQUIRE(lp_norm(g, 4.0) ==
            Approx(std::pow(1.5 * pi * pi, 0.25)).epsilon(1e-13));
    // the grid hits x1 = 0, so the sup is met exactly
    REQUIRE(lp_norm(g, std::numeric_limits<double>::infinity()) ==
            Approx(1.0).margin(1e-14));
    // generic exponent falls back to the pow loop; |cos|^3 is only C^2, so
    // the trapezoid sum carries an O(h^4) error instead of being exact
    REQUIRE(lp_norm(g, 3.0) ==
            Approx(std::cbrt(16.0 * pi / 3.0)).epsilon(1e-6));
    REQUIRE_THROWS_AS(lp_norm(g, 0.5), std::invalid_argument);
}

TEST_CASE("spectral norms of a two-coefficient state") {
    SpectralField t(4);
    t.at(2, 0) = {0.5, 0.0};
    t.at(-2, 0) = {0.5, 0.0};
    REQUIRE(sobolev_norm(t, 2.0) == Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
    REQUIRE(sobolev_norm(t, 0.0) == Approx(std::sqrt(0.5)).epsilon(1e-15));
    REQUIRE(weak_norm(t) == 0.5);
    REQUIRE(fourier_l1(t) == 1.0);
    REQUIRE_THROWS_AS(sobolev_norm(t, -1.0), std::invalid_argument);
}

TEST_CASE("coefficient l1 sum dominated by H2 times a lattice constant") {
    InitialSpec spec;
    spec.kind = InitialKind::random_band;
    spec.k_lo = 1;
    spec.k_hi = 6;
    spec.amplitude = 0.4;
    const SpectralField t = generate_initial(spec, 6, 77);
    double csq = 0.0;
    for (int j1 = -6; j1 <= 6; ++j1)
        for (int j2 = -6; j2 <= 6; ++j2) {
            if (j1 == 0 && j2 == 0) continue;
            csq += 1.0 / double(WaveVector{j1, j2}.norm_sq() *
                                WaveVector{j1, j2}.norm_sq());
        }
    REQUIRE(fourier_l1(t) <=
            std::sqrt(csq) * sobolev_norm(t, 2.0) * (1.0 + 1e-12));
}

TEST_CASE("monitor activates once and remembers the first crossing") {
    GevreyMonitor mon(2.0);
    REQUIRE(mon.activation_threshold() == 0.5);
    REQUIRE(mon.ceiling() == 1.0);
    REQUIRE_FALSE(mon.active());
    mon.observe(0.0, 0.9);
    REQUIRE_FALSE(mon.active());
    mon.observe(1.0, 0.5);
    REQUIRE(mon.active());
    REQUIRE(*mon.t0() == 1.0);
    mon.observe(2.0, 10.0);
    REQUIRE(*mon.t0() == 1.0);
    REQUIRE_THROWS_AS(GevreyMonitor(0.0), std::invalid_argument);
}

TEST_CASE("weighted sums grow with the analyticity radius") {
    const SpectralField t = [&] {
        SpectralField f(4);
        f.at(1, 0) = {0.3, 0.0};
        f.at(-1, 0) = {0.3, 0.0};
        return f;
    }();
    GevreyMonitor mon(2.0);
    REQUIRE_THROWS_AS(gevrey_sums(t, 1.0, mon), std::invalid_argument);
    mon.observe(1.0, 0.5);
    REQUIRE_THROWS_AS(gevrey_sums(t, 0.5, mon), std::invalid_argument);

    const GevreySums at_t0 = gevrey_sums(t, 1.0, mon);
    REQUIRE(at_t0.y == fourier_l1(t));
    REQUIRE(at_t0.z == at_t0.y); // every carried mode has |j| = 1

    // weight exp((t-t0) kappa |j| / 2) = e at t-t0 = 1, kappa = 2
    const GevreySums later = gevrey_sums(t, 2.0, mon);
    REQUIRE(later.y == Approx(0.6 * std::exp(1.0)).epsilon(1e-14));
    REQUIRE(later.z == Approx(later.y).epsilon(1e-15));
}

TEST_CASE("diagnostic record assembles every norm consistently") {
    InitialSpec spec;
    spec.kind = InitialKind::random_band;
    spec.k_lo = 1;
    spec.k_hi = 8;
    spec.amplitude = 0.2;
    const SpectralField t = generate_initial(spec, 8, 99);

    const DiagnosticsRecord plain = sample_diagnostics(t, 0.25);
    REQUIRE(plain.t == 0.25);
    REQUIRE(plain.l2 == Approx(two_pi * sobolev_norm(t, 0.0)).epsilon(1e-12));
    REQUIRE(plain.h1 == sobolev_norm(t, 1.0));
    REQUIRE(plain.h2 == sobolev_norm(t, 2.0));
    REQUIRE(plain.weak == weak_norm(t));
    REQUIRE(plain.linf <= plain.fourier_l1 * (1.0 + 1e-12));
    REQUIRE_FALSE(plain.gevrey_y.has_value());
    REQUIRE_FALSE(plain.gevrey_z.has_value());

    // a monitor with an enormous threshold activates on the spot, and the
    // weight at t0 is exactly one
    GevreyMonitor mon(1e12);
    const DiagnosticsRecord with = sample_diagnostics(t, 0.25, &mon);
    REQUIRE(mon.active());
    REQUIRE(with.gevrey_y.has_value());
    REQUIRE(*with.gevrey_y == with.fourier_l1);
}
