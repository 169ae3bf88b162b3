// Acceptance gate: every claim the library stands behind, one line each.
// Exit status is the number of failed criteria; "inconclusive" lines are
// sanctioned outcomes (a measurement that refused to commit) and do not fail
// the gate.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "qg/qg.hpp"

using namespace qg;
namespace fs = std::filesystem;

namespace {

int g_failed = 0;
int g_passed = 0;
int g_inconclusive = 0;
std::chrono::steady_clock::time_point g_tick;

void start() { g_tick = std::chrono::steady_clock::now(); }

double elapsed() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         g_tick)
        .count();
}

void report(const char* id, const char* name, int status,
            const std::string& detail) {
    const char* word = status > 0 ? "PASS" : status == 0 ? "FAIL" : "INCONCLUSIVE";
    if (status > 0) ++g_passed;
    else if (status == 0) ++g_failed;
    else ++g_inconclusive;
    std::printf("%s %s %s (%s) [%.1fs]\n", id, name, word, detail.c_str(),
                elapsed());
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

SpectralField band(int n_max, int k_hi, std::uint64_t seed, double amplitude) {
    InitialSpec spec;
    spec.kind = InitialKind::random_band;
    spec.k_lo = 1;
    spec.k_hi = k_hi;
    spec.slope = -1.0;
    spec.amplitude = amplitude;
    return generate_initial(spec, n_max, seed);
}

double rel_sup_diff(const SpectralField& a, const SpectralField& b) {
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
        scale = std::max(scale, std::abs(a.data()[i]));
    }
    return scale > 0.0 ? worst / scale : worst;
}

// C1: with transport exactly zero (zonal data), the integrator must track the
// closed-form dissipative decay of a single mode to near round-off over a
// thousand steps.
void c1() {
    start();
    const double tol = 1e-10;
    SpectralField t0(8);
    t0.at(1, 0) = {0.5, 0.0};
    t0.at(-1, 0) = {0.5, 0.0};
    SimConfig cfg;
    cfg.n_max = 8;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.sample_every = 100;
    const Trajectory traj = run(t0, cfg);
    const double ratio = traj.final_state.at(1, 0).real() / 0.5;
    const double err = std::abs(ratio / std::exp(-1.0) - 1.0);
    double off = 0.0;
    traj.final_state.for_each_mode([&](WaveVector j, std::complex<double> c) {
        if (j == WaveVector{1, 0} || j == WaveVector{-1, 0}) return;
        off = std::max(off, std::abs(c));
    });
    const bool ok = !traj.blew_up && err <= tol && off == 0.0;
    report("C1", "exact_linear_decay", ok,
           fmt("rel_err=%.3g tol=%.0e off_mode_sup=%.3g", err, tol, off));
}

// C2: the three nonlinearity evaluations agree wherever they are defined to
// agree: direct convolution vs the symmetrized form everywhere, and the
// grid path vs convolution on alias-free data.
void c2() {
    start();
    const double tol = 1e-12;
    double worst_sym = 0.0, worst_ps = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double amp = 0.5 * std::pow(10.0, -double(i % 4));
        const SpectralField full = band(8, 8, 100 + i, amp);
        worst_sym = std::max(
            worst_sym,
            rel_sup_diff(nonlinear_convolution(full), nonlinear_symmetrized(full)));

        const SpectralField half = band(8, 4, 200 + i, amp);
        RhsConfig ps;
        ps.path = NonlinearityPath::pseudospectral;
        ps.dealias_rule = DealiasRule::none;
        worst_ps = std::max(worst_ps,
                            rel_sup_diff(nonlinear_convolution(half),
                                         nonlinear_pseudospectral(half, ps)));
    }
    const bool ok = worst_sym <= tol && worst_ps <= tol;
    report("C2", "nonlinearity_cross_validation", ok,
           fmt("worst_sym=%.3g worst_grid=%.3g tol=%.0e", worst_sym, worst_ps,
               tol));
}

// C3: the symmetrized interaction coefficient obeys its cancellation bound
// |gamma| <= |j+k|^2 / (2 max(|j|,|k|)) and is exchange-symmetric bit for bit
// across the whole |j|,|k| <= 32 range.
void c3() {
    start();
    long bound_bad = 0, sym_bad = 0;
    for (int j1 = -32; j1 <= 32; ++j1)
        for (int j2 = -32; j2 <= 32; ++j2) {
            if (j1 == 0 && j2 == 0) continue;
            for (int k1 = -32; k1 <= 32; ++k1)
                for (int k2 = -32; k2 <= 32; ++k2) {
                    if (k1 == 0 && k2 == 0) continue;
                    const WaveVector j{j1, j2}, k{k1, k2};
                    if (!gamma_bound_holds(j, k)) ++bound_bad;
                    if (gamma_coefficient(j, k) != gamma_coefficient(k, j))
                        ++sym_bad;
                }
        }
    const bool ok = bound_bad == 0 && sym_bad == 0;
    report("C3", "interaction_coefficient_laws", ok,
           fmt("bound_violations=%ld symmetry_violations=%ld over 65^4 pairs",
               bound_bad, sym_bad));
}

// C4: with kappa = 0 the truncated dynamics conserve the L2 norm (drift
// <= 1e-8 over a thousand steps) and the transport term stays orthogonal to
// the state (residual <= 1e-12 at every step).
void c4() {
    start();
    const double drift_tol = 1e-8, orth_tol = 1e-12;
    SimConfig cfg;
    cfg.rhs.kappa = 0.0;
    cfg.n_max = 32;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.sample_every = 1; // snapshot each step so orthogonality is per step
    const SpectralField t0 = band(32, 8, 7, 0.05);
    RunOptions opts;
    opts.snapshot_every = 1;
    const Trajectory traj = run(t0, cfg, opts);

    const TheoremReport energy = check_energy_conservation(traj);
    double worst_orth = 0.0;
    if (!traj.blew_up)
        for (const auto& [when, state] : traj.snapshots) {
            (void)when;
            worst_orth =
                std::max(worst_orth, orthogonality_residual(state, cfg.rhs));
        }
    const bool ok = !traj.blew_up && energy.verdict == Verdict::pass &&
                    worst_orth <= orth_tol;
    report("C4", "inviscid_invariants", ok,
           fmt("l2_drift=%.3g tol=%.0e orthogonality=%.3g tol=%.0e snapshots=%zu",
               energy.measured.count("worst_relative_drift")
                   ? energy.measured.at("worst_relative_drift")
                   : -1.0,
               drift_tol, worst_orth, orth_tol, traj.snapshots.size()));
}

Trajectory g_critical_run{}; // shared by C5 and C6

// C5: along a dissipative critical-case run, the L2, L4 and Linf norms never
// increase between samples (worst relative increment <= 1e-8).
void c5() {
    start();
    SimConfig cfg;
    cfg.n_max = 64;
    cfg.dt = 5e-3;
    cfg.t_end = 5.0;
    cfg.sample_every = 3;
    const SpectralField t0 = band(64, 8, 3, 0.05);
    g_critical_run = run(t0, cfg);

    const TheoremReport l2 = check_maximum_principle(g_critical_run, 2.0);
    const TheoremReport l4 = check_maximum_principle(g_critical_run, 4.0);
    const TheoremReport li = check_maximum_principle(
        g_critical_run, std::numeric_limits<double>::infinity());
    const bool ok = l2.verdict == Verdict::pass &&
                    l4.verdict == Verdict::pass && li.verdict == Verdict::pass;
    auto w = [](const TheoremReport& r) {
        return r.measured.count("worst_relative_increment")
                   ? r.measured.at("worst_relative_increment")
                   : std::numeric_limits<double>::quiet_NaN();
    };
    report("C5", "maximum_principle", ok,
           fmt("worst_increment l2=%.3g l4=%.3g linf=%.3g tol=1e-08", w(l2),
               w(l4), w(li)));
}

// C6: small-data H2 monotonicity on the critical run, and H1 monotonicity for
// the velocity-mollified equation.
void c6() {
    start();
    const TheoremReport h2 = check_sobolev_monotonicity(g_critical_run, 2.0);

    SimConfig cfg;
    cfg.rhs.delta = 0.1;
    cfg.n_max = 32;
    cfg.dt = 5e-3;
    cfg.t_end = 2.0;
    cfg.sample_every = 5;
    const Trajectory mollified = run(band(32, 8, 5, 0.05), cfg);
    const TheoremReport h1 = check_sobolev_monotonicity(mollified, 1.0);

    const bool ok = h2.verdict == Verdict::pass && h1.verdict == Verdict::pass;
    auto w = [](const TheoremReport& r) {
        return r.measured.count("worst_relative_increment")
                   ? r.measured.at("worst_relative_increment")
                   : std::numeric_limits<double>::quiet_NaN();
    };
    report("C6", "sobolev_monotonicity", ok,
           fmt("h2_worst=%.3g (critical) h1_worst=%.3g (delta=0.1) tol=1e-08",
               w(h2), w(h1)));
}

// C7: vanishing-amplitude solutions decay at the linear rate. A multi-mode
// band must fit 2*kappa within 5%; a lone gravest mode must hit it to 1e-6.
void c7() {
    start();
    SimConfig cfg;
    cfg.n_max = 32;
    cfg.dt = 2e-3;
    cfg.t_end = 5.0;
    cfg.sample_every = 10;
    const Trajectory bandrun = run(band(32, 8, 13, 0.01), cfg);
    const TheoremReport a = check_exponential_decay(bandrun);

    InitialSpec mode;
    mode.kind = InitialKind::single_mode;
    mode.mode = {1, 0};
    mode.amplitude = 0.01;
    SimConfig mcfg;
    mcfg.n_max = 8;
    mcfg.dt = 0.01;
    mcfg.t_end = 3.0;
    mcfg.sample_every = 10;
    const Trajectory monorun = run(generate_initial(mode, 8, 1), mcfg);
    const TheoremReport b = check_exponential_decay(monorun);
    const double mono_err =
        b.measured.count("rate") ? std::abs(b.measured.at("rate") - 2.0)
                                 : std::numeric_limits<double>::infinity();

    const bool ok = a.verdict == Verdict::pass && b.verdict == Verdict::pass &&
                    mono_err <= 1e-6;
    report("C7", "small_amplitude_decay_rate", ok,
           fmt("band_rate=%.6g (5%% of 2) mono_rate_err=%.3g tol=1e-06",
               a.measured.count("rate") ? a.measured.at("rate") : -1.0,
               mono_err));
}

// C8: after the coefficient l1 sum dips to kappa/4, the exponentially
// weighted sum stays below kappa/2 and never grows between samples. The run
// is sized so the largest weight exp(kappa T |j|_max / 2) ~ e^23 times the
// double-precision noise floor of the coefficients stays far below the
// tolerances; at much larger n_max * T the weighted sum of a computed
// trajectory measures round-off, not the solution.
void c8() {
    start();
    SimConfig cfg;
    cfg.n_max = 24;
    cfg.dt = 5e-3;
    cfg.t_end = 2.0;
    cfg.sample_every = 3;
    const Trajectory traj = run(band(24, 8, 3, 0.05), cfg);
    const TheoremReport rep = check_gevrey(traj);
    const bool ok = rep.verdict == Verdict::pass;
    report("C8", "gevrey_smoothing", ok,
           fmt("t0=%.3g max_y=%.3g ceiling=%.3g worst_increment=%.3g",
               rep.measured.count("t0") ? rep.measured.at("t0") : -1.0,
               rep.measured.count("max_y") ? rep.measured.at("max_y") : -1.0,
               rep.measured.count("ceiling") ? rep.measured.at("ceiling") : -1.0,
               rep.measured.count("worst_relative_increment")
                   ? rep.measured.at("worst_relative_increment")
                   : -1.0));
}

// C9: large data under super-critical dissipation (alpha = 0.75) settles into
// a monotone H2 tail covering at least a quarter of the run. If the primary
// resolution fails, disagreement with a coarser resolution above 1% marks the
// measurement unresolved (inconclusive) rather than failed.
void c9() {
    start();
    SimConfig cfg;
    cfg.rhs.alpha = 0.75;
    cfg.n_max = 128;
    cfg.dt = 1e-3;
    cfg.t_end = 2.0;
    cfg.sample_every = 20;
    const Trajectory traj = run(band(128, 8, 11, 10.0), cfg);
    const TheoremReport rep =
        check_sobolev_monotonicity(traj, 2.0, MonotonicityWindow::eventual);

    if (traj.blew_up) {
        report("C9", "eventual_regularization", 0,
               fmt("blow-up at t=%.3g", traj.blowup_time));
        return;
    }
    if (rep.verdict == Verdict::pass) {
        report("C9", "eventual_regularization", 1,
               fmt("monotone_from=%.3g tail_fraction=%.3g (need 0.25) peak_h2=%.4g",
                   rep.measured.at("monotone_from_time"),
                   rep.measured.at("monotone_tail_fraction"),
                   rep.measured.at("peak")));
        return;
    }

    // resolution control: does the H2 history even agree between truncations?
    SimConfig coarse = cfg;
    coarse.n_max = 96;
    const Trajectory check = run(band(96, 8, 11, 10.0), coarse);
    const double h2_fine = traj.records.back().h2;
    const double h2_coarse = check.records.back().h2;
    const double disagree = std::abs(h2_fine - h2_coarse) / h2_fine;
    if (disagree > 0.01) {
        report("C9", "eventual_regularization", -1,
               fmt("tail_fraction=%.3g but resolutions disagree by %.2g "
                   "(under-resolved)",
                   rep.measured.at("monotone_tail_fraction"), disagree));
    } else {
        report("C9", "eventual_regularization", 0,
               fmt("tail_fraction=%.3g < 0.25, resolutions agree to %.2g",
                   rep.measured.at("monotone_tail_fraction"), disagree));
    }
}

// C10: the measured weak-norm continuity ratio of the transport term is
// stable (within 10%) across truncations 8/12/16 over 100 random pairs
// spanning three decades of amplitude.
void c10() {
    start();
    const TheoremReport rep = check_weak_continuity_refinement({8, 12, 16}, 100, 17);
    report("C10", "weak_continuity_stability", rep.verdict == Verdict::pass,
           fmt("max_ratio n8=%.4g n12=%.4g n16=%.4g spread=%.3g tol=0.10",
               rep.measured.at("ratio_max_n8"), rep.measured.at("ratio_max_n12"),
               rep.measured.at("ratio_max_n16"),
               rep.measured.at("max_relative_spread")));
}

// C11: the two interpolation-inequality ratios have resolution-stable maxima
// (within 10%) over 100-field ensembles at n = 16/32/64, and are exactly
// scale invariant (to 1e-12) in the amplitude.
void c11() {
    start();
    const TheoremReport rep = check_gn_refinement({16, 32, 64}, 100, 29);

    const SpectralField probe = band(16, 16, 31, 1.0);
    const GnRatios mid = gn_ratios(probe);
    const GnRatios lo = gn_ratios(probe * 0.1);
    const GnRatios hi = gn_ratios(probe * 10.0);
    const double scale_err = std::max(
        std::max(std::abs(lo.r1 / mid.r1 - 1.0), std::abs(hi.r1 / mid.r1 - 1.0)),
        std::max(std::abs(lo.r2 / mid.r2 - 1.0), std::abs(hi.r2 / mid.r2 - 1.0)));

    const bool ok = rep.verdict == Verdict::pass && scale_err <= 1e-12;
    report("C11", "gn_ratio_stability", ok,
           fmt("r1_max n16=%.4g n32=%.4g n64=%.4g spread=%.3g tol=0.10 "
               "scale_err=%.2g",
               rep.measured.at("r1_max_n16"), rep.measured.at("r1_max_n32"),
               rep.measured.at("r1_max_n64"),
               rep.measured.at("max_relative_spread"), scale_err));
}

// C12: the command line round trip. Two identical runs produce byte-identical
// timeseries and final snapshots, the manifest verifies, and the check and
// spectrum commands exit cleanly.
void c12() {
    start();
    const fs::path base = "acceptance_out";
    fs::remove_all(base);
    fs::create_directories(base);

    auto config_text = [&](const std::string& sub) {
        return std::string("kappa=1\nn_max=16\ndt=0.002\nt_end=0.5\n"
                           "sample_every=5\nseed=7\n"
                           "initial=random-band(1,8,-1)@0.05\n") +
               "output_dir=" + (base / sub).string() + "\n";
    };
    detail::write_file((base / "a.cfg").string(), config_text("run_a"));
    detail::write_file((base / "b.cfg").string(), config_text("run_b"));

    const int ra = run_cli({"run", (base / "a.cfg").string(),
                            "--snapshot-every", "2"});
    const int rb = run_cli({"run", (base / "b.cfg").string(),
                            "--snapshot-every", "2"});

    bool bytes_equal = false, snaps_equal = false, manifest_ok = false;
    if (ra == 0 && rb == 0) {
        bytes_equal =
            detail::read_file((base / "run_a" / "timeseries.csv").string()) ==
            detail::read_file((base / "run_b" / "timeseries.csv").string());
        snaps_equal =
            detail::read_file((base / "run_a" / "final.snap").string()) ==
            detail::read_file((base / "run_b" / "final.snap").string());
        const RunManifest man =
            load_manifest((base / "run_a" / "manifest.json").string());
        manifest_ok = verify_manifest(man, (base / "run_a").string());
    }
    const int rs = run_cli({"spectrum", (base / "run_a" / "final.snap").string()});
    const int rc = run_cli({"check", (base / "a.cfg").string()});
    const int rbad = run_cli({"run", (base / "nonexistent.cfg").string()});

    const bool ok = ra == 0 && rb == 0 && bytes_equal && snaps_equal &&
                    manifest_ok && rs == 0 && rc == 0 && rbad == 2;
    report("C12", "cli_round_trip", ok,
           fmt("run=%d,%d identical_csv=%d identical_snap=%d manifest=%d "
               "spectrum=%d check=%d bad_config=%d",
               ra, rb, int(bytes_equal), int(snaps_equal), int(manifest_ok), rs,
               rc, rbad));
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    std::printf("acceptance gate, %s\n", version_string);
    std::fflush(stdout);

    struct Entry {
        const char* id;
        const char* name;
        void (*fn)();
    };
    const Entry entries[] = {
        {"C1", "exact_linear_decay", c1},
        {"C2", "nonlinearity_cross_validation", c2},
        {"C3", "interaction_coefficient_laws", c3},
        {"C4", "inviscid_invariants", c4},
        {"C5", "maximum_principle", c5},
        {"C6", "sobolev_monotonicity", c6},
        {"C7", "small_amplitude_decay_rate", c7},
        {"C8", "gevrey_smoothing", c8},
        {"C9", "eventual_regularization", c9},
        {"C10", "weak_continuity_stability", c10},
        {"C11", "gn_ratio_stability", c11},
        {"C12", "cli_round_trip", c12},
    };
    for (const Entry& e : entries) {
        try {
            e.fn();
        } catch (const std::exception& ex) {
            report(e.id, e.name, 0, fmt("unexpected exception: %s", ex.what()));
        }
    }

    // second clause of C12: the whole gate fits a 10 minute budget
    start();
    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report("C12", "suite_budget", total <= 600.0,
           fmt("total=%.1fs budget=600s", total));

    std::printf("summary: %d passed, %d failed, %d inconclusive in %.1fs\n",
                g_passed, g_failed, g_inconclusive, total);
    return g_failed == 0 ? 0 : 1;
}
