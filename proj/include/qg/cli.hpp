#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qg/config.hpp"
#include "qg/harness.hpp"
#include "qg/io.hpp"
#include "qg/version.hpp"

namespace qg {

namespace detail {

inline std::int64_t unix_time_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch())
        .count();
}

// Pull `--name value` or `--name=value` out of the argument list.
inline bool take_opt(std::vector<std::string>& args, const std::string& name,
                     std::string& out) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == name) {
            if (i + 1 >= args.size())
                throw ConfigError("missing value for " + name);
            out = args[i + 1];
            args.erase(args.begin() + long(i), args.begin() + long(i) + 2);
            return true;
        }
        if (args[i].rfind(name + "=", 0) == 0) {
            out = args[i].substr(name.size() + 1);
            args.erase(args.begin() + long(i));
            return true;
        }
    }
    return false;
}

inline std::string sanitize_component(const std::string& s) {
    std::string out;
    for (char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                c == '-' || c == '_')
                   ? c
                   : '_';
    return out;
}

// Writes files under one directory and remembers size + digest for the
// manifest.
struct OutputWriter {
    std::string dir;
    std::vector<ManifestEntry> entries;
    void put(const std::string& rel, const std::string& bytes) {
        write_file(dir + "/" + rel, bytes);
        entries.push_back({rel, bytes.size(), fnv1a64_hex(bytes)});
    }
};

struct RunResult {
    Trajectory traj;
    std::string dir;
};

// One full simulation with its on-disk products: timeseries.csv, the final
// state, optional intermediate snapshots and heatmaps, and a manifest
// digesting everything written.
inline RunResult execute_run(const RunSpec& spec, int snapshot_every,
                             int heatmap_every) {
    std::filesystem::create_directories(spec.output_dir);
    const SpectralField init =
        generate_initial(spec.initial, spec.sim.n_max, spec.sim.seed);

    RunManifest man;
    man.config_text = format_config(spec);
    man.seed = spec.sim.seed;
    man.started_unix_ms = unix_time_ms();
    RunOptions opts;
    opts.snapshot_every = snapshot_every;
    Trajectory traj = run(init, spec.sim, opts);
    man.finished_unix_ms = unix_time_ms();
    man.blew_up = traj.blew_up;
    man.final_time = traj.final_time;

    OutputWriter out{spec.output_dir, {}};
    out.put("timeseries.csv", timeseries_csv(traj));
    char name[64];
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        std::snprintf(name, sizeof name, "state_%04zu.snap", i);
        out.put(name,
                snapshot_bytes(traj.snapshots[i].second, traj.snapshots[i].first));
    }
    if (heatmap_every > 0) {
        const int m = next_smooth(std::max(128, 2 * spec.sim.n_max + 1));
        for (std::size_t i = 0; i < traj.snapshots.size();
             i += std::size_t(heatmap_every)) {
            std::snprintf(name, sizeof name, "heatmap_%04zu.pgm", i);
            out.put(name, heatmap_pgm(inverse_transform(traj.snapshots[i].second, m)));
        }
        out.put("final.pgm", heatmap_pgm(inverse_transform(traj.final_state, m)));
    }
    out.put("final.snap", snapshot_bytes(traj.final_state, traj.final_time));
    man.outputs = out.entries;
    write_manifest(man, spec.output_dir + "/manifest.json");
    return {std::move(traj), spec.output_dir};
}

inline void print_report(const TheoremReport& r) {
    std::string line = "[";
    line += verdict_name(r.verdict);
    line += "] ";
    line += r.check_name;
    char buf[128];
    std::snprintf(buf, sizeof buf, " margin=%.3g", r.margin);
    line += buf;
    for (const auto& [k, v] : r.measured) {
        std::snprintf(buf, sizeof buf, " %s=%.6g", k.c_str(), v);
        line += buf;
    }
    if (r.verdict == Verdict::inconclusive && !r.context.empty())
        line += "  (" + r.context + ")";
    std::printf("%s\n", line.c_str());
}

inline std::string reports_json(const std::vector<TheoremReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json j;
        j["name"] = r.check_name;
        j["verdict"] = verdict_name(r.verdict);
        j["margin"] = r.margin;
        j["context"] = r.context;
        j["measured"] = nlohmann::json::object();
        for (const auto& [k, v] : r.measured) j["measured"][k] = v;
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

// Largest mode magnitude (sup norm on indices) the initial data can touch.
inline int initial_support(const InitialSpec& spec) {
    switch (spec.kind) {
    case InitialKind::single_mode: return spec.mode.max_norm();
    case InitialKind::two_mode: return 2;
    case InitialKind::random_band: return spec.k_hi;
    }
    return 0;
}

} // namespace detail

inline int cmd_run(const RunSpec& spec, int snapshot_every, int heatmap_every) {
    const detail::RunResult res =
        detail::execute_run(spec, snapshot_every, heatmap_every);
    if (res.traj.blew_up) {
        std::fprintf(stderr, "blow-up at t=%.6g; last sampled L2 values:",
                     res.traj.blowup_time);
        for (double x : res.traj.blowup_norm_history)
            std::fprintf(stderr, " %.6g", x);
        std::fprintf(stderr, "\n");
        return 3;
    }
    std::printf("run finished: t=%.17g, %zu samples, outputs in %s\n",
                res.traj.final_time, res.traj.records.size(), res.dir.c_str());
    return 0;
}

// The `check` verification suites. `core` simulates the configured problem
// once and tests every property the trajectory should satisfy; the other
// suites are resolution studies independent of the configured dynamics
// (they only take n_max-free parameters and the seed from the config).
inline int cmd_check(const RunSpec& spec, const std::string& suite) {
    std::vector<TheoremReport> reports;
    bool blew = false;

    if (suite == "core" || suite == "all") {
        const SpectralField init =
            generate_initial(spec.initial, spec.sim.n_max, spec.sim.seed);
        const Trajectory traj = run(init, spec.sim);
        blew = traj.blew_up;
        const double inf = std::numeric_limits<double>::infinity();
        reports.push_back(check_maximum_principle(traj, 2.0));
        reports.push_back(check_maximum_principle(traj, 4.0));
        reports.push_back(check_maximum_principle(traj, inf));
        if (spec.sim.rhs.kappa > 0.0) {
            // Mollified dissipation controls H1; the plain equation controls
            // H2. Super-critical dissipation needs no smallness but only
            // promises an eventually monotone norm.
            const double s = spec.sim.rhs.delta > 0.0 ? 1.0 : 2.0;
            const auto window = spec.sim.rhs.alpha <= 0.5
                                    ? MonotonicityWindow::global
                                    : MonotonicityWindow::eventual;
            reports.push_back(check_sobolev_monotonicity(traj, s, window));
            reports.push_back(check_exponential_decay(traj));
            const double cadence = double(spec.sim.sample_every) * spec.sim.dt *
                                   spec.sim.rhs.kappa * double(spec.sim.n_max) /
                                   2.0;
            if (cadence <= tol::gevrey_sampling_guard * (1.0 + 1e-12)) {
                reports.push_back(check_gevrey(traj));
            } else {
                TheoremReport r;
                r.check_name = "gevrey_smoothing";
                r.verdict = Verdict::inconclusive;
                r.context =
                    "sampling too coarse for the weighted sums; lower sample_every*dt";
                reports.push_back(r);
            }
        } else {
            reports.push_back(check_energy_conservation(traj));
        }

        // The transport term is orthogonal to the state on the alias-free
        // set; only meaningful while the state stays inside it.
        TheoremReport orep;
        orep.check_name = "nonlinear_orthogonality";
        orep.context = detail::config_summary(spec.sim);
        const bool alias_free =
            spec.sim.rhs.dealias_rule == DealiasRule::two_thirds &&
            detail::initial_support(spec.initial) <= dealias_cutoff(spec.sim.n_max);
        if (alias_free && !blew && weak_norm(traj.final_state) > 0.0) {
            const double res =
                orthogonality_residual(traj.final_state, spec.sim.rhs);
            orep.measured["residual"] = res;
            orep.margin = 1e-12 - res;
            orep.verdict = res <= 1e-12 ? Verdict::pass : Verdict::fail;
        } else {
            orep.verdict = Verdict::inconclusive;
            orep.context = "state support exceeds the alias-free set";
        }
        reports.push_back(orep);
    }

    if (suite == "gn" || suite == "all")
        reports.push_back(check_gn_refinement({16, 32, 64}, 25, spec.sim.seed));
    if (suite == "weak" || suite == "all")
        reports.push_back(
            check_weak_continuity_refinement({8, 12, 16}, 50, spec.sim.seed));
    if (suite == "smallness" || suite == "all") {
        InitialSpec unit = spec.initial;
        unit.amplitude = 1.0;
        const SpectralField base =
            generate_initial(unit, spec.sim.n_max, spec.sim.seed);
        reports.push_back(estimate_smallness_constant(base, spec.sim));
    }

    for (const auto& r : reports) detail::print_report(r);
    std::filesystem::create_directories(spec.output_dir);
    detail::write_file(spec.output_dir + "/reports.json",
                       detail::reports_json(reports));

    if (blew) return 3;
    for (const auto& r : reports)
        if (r.verdict == Verdict::fail) return 1;
    return 0;
}

inline int cmd_sweep(const std::string& config_path, const std::string& key,
                     const std::string& values_csv) {
    if (key == "output_dir")
        throw ConfigError("sweep: cannot sweep output_dir");
    std::string base_text;
    {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("config: cannot open " + config_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        base_text = ss.str();
    }
    const RunSpec base = parse_config(base_text);

    std::vector<std::string> values;
    {
        std::string cur;
        for (char c : values_csv + ",") {
            if (c == ',') {
                const std::string v = detail::trim(cur);
                if (!v.empty()) values.push_back(v);
                cur.clear();
            } else {
                cur += c;
            }
        }
    }
    if (values.empty()) throw ConfigError("sweep: no values given");

    std::string agg =
        "param,value,status,final_t,l2,l4,linf,h1,h2,weak,Y,l2_diff_prev\n";
    std::optional<SpectralField> prev_final;
    int prev_nmax = -1;
    bool prev_ok = false;
    bool any_blow = false;

    for (const std::string& v : values) {
        const std::string sub = detail::sanitize_component(key) + "_" +
                                detail::sanitize_component(v);
        // Later keys win, so overrides are plain appended lines.
        const std::string text = base_text + "\n" + key + "=" + v +
                                 "\noutput_dir=" + base.output_dir + "/" + sub +
                                 "\n";
        const RunSpec spec = parse_config(text);
        const detail::RunResult res = detail::execute_run(spec, 0, 0);
        const bool ok = !res.traj.blew_up;
        any_blow = any_blow || !ok;
        const DiagnosticsRecord& r = res.traj.records.back();

        agg += key + "," + v + "," + (ok ? "ok" : "blowup");
        for (double x : {res.traj.final_time, r.l2, r.l4, r.linf, r.h1, r.h2,
                         r.weak, r.fourier_l1}) {
            agg += ',';
            agg += detail::format_g17(x);
        }
        agg += ',';
        if (prev_final && prev_nmax == spec.sim.n_max && ok && prev_ok) {
            const SpectralField diff = res.traj.final_state - *prev_final;
            agg += detail::format_g17(two_pi * sobolev_norm(diff, 0.0));
        }
        agg += '\n';
        std::printf("sweep %s=%s: %s, final t=%.6g, l2=%.6g\n", key.c_str(),
                    v.c_str(), ok ? "ok" : "blowup", res.traj.final_time, r.l2);

        prev_final = res.traj.final_state;
        prev_nmax = spec.sim.n_max;
        prev_ok = ok;
    }

    std::filesystem::create_directories(base.output_dir);
    detail::write_file(base.output_dir + "/sweep.csv", agg);
    std::printf("wrote %s/sweep.csv\n", base.output_dir.c_str());
    return any_blow ? 3 : 0;
}

inline int cmd_spectrum(const std::string& path) {
    const Snapshot snap = load_snapshot(path);
    std::map<long, std::pair<double, long>> shells;
    snap.field.for_each_mode([&](WaveVector j, std::complex<double> c) {
        if (j.is_zero()) return;
        auto& [sum, count] = shells[std::lround(j.modulus())];
        sum += std::abs(c);
        count += 1;
    });
    std::printf("shell,mean_abs,count\n");
    for (const auto& [shell, sc] : shells)
        std::printf("%ld,%s,%ld\n", shell,
                    detail::format_g17(sc.first / double(sc.second)).c_str(),
                    sc.second);
    return 0;
}

inline void print_usage(std::FILE* to) {
    std::fprintf(to,
                 "%s - pseudo-spectral solver for the dissipative quasi-geostrophic\n"
                 "scalar on the 2-pi periodic box, with built-in property checks\n"
                 "\n"
                 "usage:\n"
                 "  qgsim run <config> [--snapshot-every N] [--heatmap-every N]\n"
                 "  qgsim check <config> [--suite core|gn|weak|smallness|all]\n"
                 "  qgsim sweep <config> --param KEY --values V1,V2,...\n"
                 "  qgsim spectrum <state.snap>\n"
                 "  qgsim version\n"
                 "\n"
                 "run keeps every Nth sample as a .snap file (--snapshot-every) and\n"
                 "renders every Nth kept snapshot as a .pgm (--heatmap-every, which\n"
                 "also writes final.pgm and needs --snapshot-every for the numbered\n"
                 "frames)\n"
                 "\n"
                 "exit codes: 0 ok, 1 check failed, 2 usage/config error, 3 blow-up\n",
                 version_string);
}

inline int run_cli(std::vector<std::string> args) {
    try {
        if (args.empty()) {
            print_usage(stderr);
            return 2;
        }
        const std::string cmd = args.front();
        args.erase(args.begin());

        if (cmd == "version") {
            std::printf("%s\n", version_string);
            return 0;
        }
        if (cmd == "help" || cmd == "--help" || cmd == "-h") {
            print_usage(stdout);
            return 0;
        }
        if (cmd == "run") {
            std::string v;
            int snapshot_every = 0, heatmap_every = 0;
            if (detail::take_opt(args, "--snapshot-every", v)) {
                snapshot_every = int(detail::parse_int("--snapshot-every", v));
                if (snapshot_every < 0)
                    throw ConfigError("--snapshot-every must be >= 0");
            }
            if (detail::take_opt(args, "--heatmap-every", v)) {
                heatmap_every = int(detail::parse_int("--heatmap-every", v));
                if (heatmap_every < 0)
                    throw ConfigError("--heatmap-every must be >= 0");
            }
            if (args.size() != 1) {
                print_usage(stderr);
                return 2;
            }
            return cmd_run(load_config_file(args[0]), snapshot_every,
                           heatmap_every);
        }
        if (cmd == "check") {
            std::string suite = "core";
            detail::take_opt(args, "--suite", suite);
            if (suite != "core" && suite != "gn" && suite != "weak" &&
                suite != "smallness" && suite != "all")
                throw ConfigError("check: unknown suite '" + suite + "'");
            if (args.size() != 1) {
                print_usage(stderr);
                return 2;
            }
            return cmd_check(load_config_file(args[0]), suite);
        }
        if (cmd == "sweep") {
            std::string key, values;
            if (!detail::take_opt(args, "--param", key) ||
                !detail::take_opt(args, "--values", values))
                throw ConfigError("sweep: --param and --values are required");
            if (args.size() != 1) {
                print_usage(stderr);
                return 2;
            }
            return cmd_sweep(args[0], key, values);
        }
        if (cmd == "spectrum") {
            if (args.size() != 1) {
                print_usage(stderr);
                return 2;
            }
            return cmd_spectrum(args[0]);
        }
        std::fprintf(stderr, "error: unknown command '%s'\n", cmd.c_str());
        print_usage(stderr);
        return 2;
    } catch (const BlowupError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

} // namespace qg
