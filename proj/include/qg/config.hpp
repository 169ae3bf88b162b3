#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qg/initial.hpp"
#include "qg/integrator.hpp"

namespace qg {

// Configuration problems get their own type so the command line layer can
// map them onto the usage/config exit code.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parsed run description: simulation parameters, initial data, and where
// outputs go.
struct RunSpec {
    SimConfig sim;
    InitialSpec initial;
    std::string output_dir = ".";
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing junk");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: value of '" + key + "' is not a number: " + v);
    }
}

inline long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing junk");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: value of '" + key + "' is not an integer: " + v);
    }
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size() || (!v.empty() && v[0] == '-'))
            throw std::invalid_argument("bad");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: value of '" + key + "' is not a non-negative integer: " + v);
    }
}

// Comma-separated numbers inside "name(a,b,...)".
inline std::vector<double> parse_args(const std::string& key, const std::string& s) {
    std::vector<double> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(parse_double(key, trim(cur)));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!trim(cur).empty()) out.push_back(parse_double(key, trim(cur)));
    return out;
}

} // namespace detail

// Initial-condition grammar:  kind[(args)]@amplitude
//   single-mode(j1,j2)@a   random-band(k_lo,k_hi,slope)@a   two-mode@a
inline InitialSpec parse_initial_spec(const std::string& text) {
    const std::string s = detail::trim(text);
    const std::size_t at = s.rfind('@');
    if (at == std::string::npos || at + 1 == s.size())
        throw ConfigError("config: 'initial' needs an @amplitude suffix: " + s);
    InitialSpec spec;
    spec.amplitude = detail::parse_double("initial", s.substr(at + 1));
    if (!(spec.amplitude > 0.0))
        throw ConfigError("config: initial amplitude must be > 0");

    std::string head = detail::trim(s.substr(0, at));
    std::string name = head;
    std::vector<double> args;
    const std::size_t par = head.find('(');
    if (par != std::string::npos) {
        if (head.back() != ')')
            throw ConfigError("config: unbalanced parentheses in 'initial': " + s);
        name = detail::trim(head.substr(0, par));
        args = detail::parse_args("initial",
                                  head.substr(par + 1, head.size() - par - 2));
    }

    if (name == "single-mode") {
        if (args.size() != 2)
            throw ConfigError("config: single-mode takes (j1,j2)");
        spec.kind = InitialKind::single_mode;
        spec.mode = {int(args[0]), int(args[1])};
    } else if (name == "two-mode") {
        if (!args.empty()) throw ConfigError("config: two-mode takes no arguments");
        spec.kind = InitialKind::two_mode;
    } else if (name == "random-band") {
        if (args.size() != 3)
            throw ConfigError("config: random-band takes (k_lo,k_hi,slope)");
        spec.kind = InitialKind::random_band;
        spec.k_lo = int(args[0]);
        spec.k_hi = int(args[1]);
        spec.slope = args[2];
    } else {
        throw ConfigError("config: unknown initial kind '" + name + "'");
    }
    return spec;
}

inline std::string format_initial_spec(const InitialSpec& spec) {
    char buf[128];
    switch (spec.kind) {
    case InitialKind::single_mode:
        std::snprintf(buf, sizeof buf, "single-mode(%d,%d)@%.17g", spec.mode.j1,
                      spec.mode.j2, spec.amplitude);
        break;
    case InitialKind::two_mode:
        std::snprintf(buf, sizeof buf, "two-mode@%.17g", spec.amplitude);
        break;
    case InitialKind::random_band:
        std::snprintf(buf, sizeof buf, "random-band(%d,%d,%.17g)@%.17g", spec.k_lo,
                      spec.k_hi, spec.slope, spec.amplitude);
        break;
    }
    return buf;
}

// Parse key=value text. '#' starts a comment, blank lines are skipped,
// unknown keys are errors (typos should not silently become defaults).
// Required keys: kappa, n_max, dt, t_end. Everything else has a documented
// default. Range violations name the key and the legal range.
inline RunSpec parse_config(std::string_view text) {
    RunSpec spec;
    bool saw_kappa = false, saw_nmax = false, saw_dt = false, saw_tend = false;

    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string s = detail::trim(line);
        if (s.empty()) continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not key=value: " + s);
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string val = detail::trim(s.substr(eq + 1));
        if (val.empty())
            throw ConfigError("config: empty value for '" + key + "'");

        if (key == "kappa") {
            spec.sim.rhs.kappa = detail::parse_double(key, val);
            if (!(spec.sim.rhs.kappa >= 0.0))
                throw ConfigError("config: kappa must be >= 0");
            saw_kappa = true;
        } else if (key == "alpha") {
            spec.sim.rhs.alpha = detail::parse_double(key, val);
            if (!(spec.sim.rhs.alpha >= 0.0 && spec.sim.rhs.alpha <= 1.0))
                throw ConfigError("config: alpha must lie in [0,1]");
        } else if (key == "delta") {
            spec.sim.rhs.delta = detail::parse_double(key, val);
            if (!(spec.sim.rhs.delta >= 0.0))
                throw ConfigError("config: delta must be >= 0");
        } else if (key == "n_max") {
            const long long n = detail::parse_int(key, val);
            if (n < 1 || n > 4096)
                throw ConfigError("config: n_max must lie in [1,4096]");
            spec.sim.n_max = int(n);
            saw_nmax = true;
        } else if (key == "dt") {
            spec.sim.dt = detail::parse_double(key, val);
            if (!(spec.sim.dt > 0.0)) throw ConfigError("config: dt must be > 0");
            saw_dt = true;
        } else if (key == "t_end") {
            spec.sim.t_end = detail::parse_double(key, val);
            if (!(spec.sim.t_end > 0.0))
                throw ConfigError("config: t_end must be > 0");
            saw_tend = true;
        } else if (key == "sample_every") {
            const long long n = detail::parse_int(key, val);
            if (n < 1) throw ConfigError("config: sample_every must be >= 1");
            spec.sim.sample_every = int(n);
        } else if (key == "scheme") {
            if (val == "if-rk4") spec.sim.scheme = Scheme::if_rk4;
            else if (val == "if-euler") spec.sim.scheme = Scheme::if_euler;
            else throw ConfigError("config: scheme must be if-rk4 or if-euler");
        } else if (key == "dealias") {
            if (val == "two-thirds") spec.sim.rhs.dealias_rule = DealiasRule::two_thirds;
            else if (val == "none") spec.sim.rhs.dealias_rule = DealiasRule::none;
            else throw ConfigError("config: dealias must be two-thirds or none");
        } else if (key == "nonlinearity") {
            if (val == "pseudospectral")
                spec.sim.rhs.path = NonlinearityPath::pseudospectral;
            else if (val == "convolution")
                spec.sim.rhs.path = NonlinearityPath::convolution;
            else if (val == "symmetrized")
                spec.sim.rhs.path = NonlinearityPath::symmetrized;
            else
                throw ConfigError(
                    "config: nonlinearity must be pseudospectral, convolution or symmetrized");
        } else if (key == "seed") {
            spec.sim.seed = detail::parse_uint(key, val);
        } else if (key == "initial") {
            spec.initial = parse_initial_spec(val);
        } else if (key == "output_dir") {
            spec.output_dir = val;
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }

    std::string missing;
    if (!saw_kappa) missing += " kappa";
    if (!saw_nmax) missing += " n_max";
    if (!saw_dt) missing += " dt";
    if (!saw_tend) missing += " t_end";
    if (!missing.empty())
        throw ConfigError("config: missing required key(s):" + missing);

    try {
        spec.sim.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (spec.initial.kind == InitialKind::random_band &&
        spec.initial.k_hi > spec.sim.n_max)
        throw ConfigError("config: initial band exceeds n_max");
    if (spec.initial.kind == InitialKind::single_mode &&
        spec.initial.mode.max_norm() > spec.sim.n_max)
        throw ConfigError("config: initial mode exceeds n_max");
    return spec;
}

inline RunSpec load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// Canonical echo: parsing the result reproduces the spec exactly.
inline std::string format_config(const RunSpec& spec) {
    char buf[256];
    std::string out;
    auto kv = [&](const char* fmt, auto... v) {
        std::snprintf(buf, sizeof buf, fmt, v...);
        out += buf;
        out += '\n';
    };
    kv("kappa=%.17g", spec.sim.rhs.kappa);
    kv("alpha=%.17g", spec.sim.rhs.alpha);
    kv("delta=%.17g", spec.sim.rhs.delta);
    kv("n_max=%d", spec.sim.n_max);
    kv("dt=%.17g", spec.sim.dt);
    kv("t_end=%.17g", spec.sim.t_end);
    kv("sample_every=%d", spec.sim.sample_every);
    kv("scheme=%s", spec.sim.scheme == Scheme::if_rk4 ? "if-rk4" : "if-euler");
    kv("dealias=%s",
       spec.sim.rhs.dealias_rule == DealiasRule::two_thirds ? "two-thirds" : "none");
    const char* path = "pseudospectral";
    if (spec.sim.rhs.path == NonlinearityPath::convolution) path = "convolution";
    if (spec.sim.rhs.path == NonlinearityPath::symmetrized) path = "symmetrized";
    kv("nonlinearity=%s", path);
    kv("seed=%llu", static_cast<unsigned long long>(spec.sim.seed));
    out += "initial=" + format_initial_spec(spec.initial) + "\n";
    out += "output_dir=" + spec.output_dir + "\n";
    return out;
}

} // namespace qg
