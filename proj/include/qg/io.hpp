#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qg/field.hpp"
#include "qg/integrator.hpp"
#include "qg/version.hpp"

namespace qg {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Shortest-ish decimal that still round-trips a double exactly.
inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void append_le32(std::string& out, std::int32_t v) {
    const auto u = static_cast<std::uint32_t>(v);
    out.push_back(char(u & 0xff));
    out.push_back(char((u >> 8) & 0xff));
    out.push_back(char((u >> 16) & 0xff));
    out.push_back(char((u >> 24) & 0xff));
}

inline void append_le64(std::string& out, double v) {
    auto u = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(char((u >> (8 * i)) & 0xff));
}

inline std::int32_t read_le32(const unsigned char* p) {
    std::uint32_t u = std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
                      (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
    return std::bit_cast<std::int32_t>(u);
}

inline double read_le_double(const unsigned char* p) {
    std::uint64_t u = 0;
    for (int i = 7; i >= 0; --i) u = (u << 8) | p[i];
    return std::bit_cast<double>(u);
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(bytes.data(), std::streamsize(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace detail

// FNV-1a 64-bit content digest, reported as 16 hex digits. Integrity check
// for the manifest, not a cryptographic hash.
inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
    return buf;
}

// ---- timeseries -------------------------------------------------------------

// CSV rendering of the sampled diagnostics. Header is fixed; floats carry 17
// significant digits so parsing them back is exact; Gevrey cells are empty
// (not zero) before the monitor activates.
inline std::string timeseries_csv(const Trajectory& traj) {
    std::string out = "t,l2,l4,linf,h1,h2,weak,Y,gevrey_y,gevrey_z\n";
    for (const auto& r : traj.records) {
        out += detail::format_g17(r.t);
        for (double v : {r.l2, r.l4, r.linf, r.h1, r.h2, r.weak, r.fourier_l1}) {
            out += ',';
            out += detail::format_g17(v);
        }
        out += ',';
        if (r.gevrey_y) out += detail::format_g17(*r.gevrey_y);
        out += ',';
        if (r.gevrey_z) out += detail::format_g17(*r.gevrey_z);
        out += '\n';
    }
    return out;
}

inline void write_timeseries(const Trajectory& traj, const std::string& path) {
    detail::write_file(path, timeseries_csv(traj));
}

// ---- snapshots --------------------------------------------------------------

// Binary snapshot layout: one ASCII header line
//   qgsnap v1 n_max=<n> time=<t> count=<c>\n
// followed by `count` little-endian records (j1 int32, j2 int32, re f64,
// im f64), all stored modes except (0,0), ordered lexicographically by
// (j1, j2). Loading reconstructs the field bit for bit.
inline std::string snapshot_bytes(const SpectralField& t, double time) {
    const int n = t.n_max();
    const long count = long(2 * n + 1) * (2 * n + 1) - 1;
    char head[96];
    std::snprintf(head, sizeof head, "qgsnap v1 n_max=%d time=%.17g count=%ld\n",
                  n, time, count);
    std::string out = head;
    out.reserve(out.size() + std::size_t(count) * 24);
    for (int j1 = -n; j1 <= n; ++j1)
        for (int j2 = -n; j2 <= n; ++j2) {
            if (j1 == 0 && j2 == 0) continue;
            detail::append_le32(out, j1);
            detail::append_le32(out, j2);
            const std::complex<double> c = t.at(j1, j2);
            detail::append_le64(out, c.real());
            detail::append_le64(out, c.imag());
        }
    return out;
}

inline void write_snapshot(const SpectralField& t, double time,
                           const std::string& path) {
    detail::write_file(path, snapshot_bytes(t, time));
}

struct Snapshot {
    SpectralField field{1};
    double time = 0.0;
};

inline Snapshot load_snapshot_bytes(const std::string& bytes) {
    const std::size_t nl = bytes.find('\n');
    if (nl == std::string::npos)
        throw IoError("snapshot: missing header line");
    const std::string head = bytes.substr(0, nl);
    int n = 0;
    double time = 0.0;
    long count = 0;
    if (std::sscanf(head.c_str(), "qgsnap v1 n_max=%d time=%lg count=%ld", &n,
                    &time, &count) != 3)
        throw IoError("snapshot: unrecognized header/schema: " + head);
    if (n < 1) throw IoError("snapshot: bad n_max");
    const long expect = long(2 * n + 1) * (2 * n + 1) - 1;
    if (count != expect)
        throw IoError("snapshot: record count does not match n_max");
    const std::size_t need = nl + 1 + std::size_t(count) * 24;
    if (bytes.size() != need)
        throw IoError("snapshot: file size disagrees with header count");

    Snapshot snap;
    snap.field = SpectralField(n);
    snap.time = time;
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + nl + 1;
    for (long i = 0; i < count; ++i, p += 24) {
        const int j1 = detail::read_le32(p);
        const int j2 = detail::read_le32(p + 4);
        if (std::abs(j1) > n || std::abs(j2) > n || (j1 == 0 && j2 == 0))
            throw IoError("snapshot: record mode out of range");
        snap.field.at(j1, j2) = {detail::read_le_double(p + 8),
                                 detail::read_le_double(p + 16)};
    }
    return snap;
}

inline Snapshot load_snapshot(const std::string& path) {
    return load_snapshot_bytes(detail::read_file(path));
}

// ---- heatmaps ---------------------------------------------------------------

// 8-bit binary graymap (P5) of the grid samples, [min,max] mapped linearly
// onto [0,255]; a constant field renders mid-gray. Image column index is the
// x1 grid index, row index the x2 grid index.
inline std::string heatmap_pgm(const PhysicalField& f) {
    const int m = f.m();
    double lo = f.data()[0], hi = f.data()[0];
    for (double v : f.data()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    char head[48];
    std::snprintf(head, sizeof head, "P5\n%d %d\n255\n", m, m);
    std::string out = head;
    out.reserve(out.size() + std::size_t(m) * m);
    const double span = hi - lo;
    for (int q = 0; q < m; ++q)
        for (int p = 0; p < m; ++p) {
            int g = 128;
            if (span > 0.0)
                g = int(std::lround(255.0 * (f.at(p, q) - lo) / span));
            out.push_back(char(static_cast<unsigned char>(g)));
        }
    return out;
}

inline void write_heatmap(const PhysicalField& f, const std::string& path) {
    detail::write_file(path, heatmap_pgm(f));
}

// ---- run manifest -----------------------------------------------------------

struct ManifestEntry {
    std::string path;   // relative to the manifest's directory
    std::size_t bytes = 0;
    std::string digest; // fnv1a64 hex
};

struct RunManifest {
    std::string version = version_string;
    std::string config_text;
    std::uint64_t seed = 0;
    std::int64_t started_unix_ms = 0;
    std::int64_t finished_unix_ms = 0;
    bool blew_up = false;
    double final_time = 0.0;
    std::vector<ManifestEntry> outputs;
};

inline std::string manifest_json(const RunManifest& m) {
    nlohmann::json j;
    j["version"] = m.version;
    j["config"] = m.config_text;
    j["seed"] = m.seed;
    j["started_unix_ms"] = m.started_unix_ms;
    j["finished_unix_ms"] = m.finished_unix_ms;
    j["blew_up"] = m.blew_up;
    j["final_time"] = m.final_time;
    j["outputs"] = nlohmann::json::array();
    for (const auto& e : m.outputs)
        j["outputs"].push_back(
            {{"path", e.path}, {"bytes", e.bytes}, {"digest", e.digest}});
    return j.dump(2) + "\n";
}

inline void write_manifest(const RunManifest& m, const std::string& path) {
    detail::write_file(path, manifest_json(m));
}

inline RunManifest load_manifest(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(detail::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("manifest: ") + e.what());
    }
    RunManifest m;
    m.version = j.at("version").get<std::string>();
    m.config_text = j.at("config").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.started_unix_ms = j.at("started_unix_ms").get<std::int64_t>();
    m.finished_unix_ms = j.at("finished_unix_ms").get<std::int64_t>();
    m.blew_up = j.at("blew_up").get<bool>();
    m.final_time = j.at("final_time").get<double>();
    for (const auto& e : j.at("outputs")) {
        ManifestEntry me;
        me.path = e.at("path").get<std::string>();
        me.bytes = e.at("bytes").get<std::size_t>();
        me.digest = e.at("digest").get<std::string>();
        m.outputs.push_back(me);
    }
    return m;
}

// Re-read every listed file and confirm size and digest. `dir` is the
// directory the manifest lives in.
inline bool verify_manifest(const RunManifest& m, const std::string& dir) {
    for (const auto& e : m.outputs) {
        std::string bytes;
        try {
            bytes = detail::read_file(dir.empty() ? e.path : dir + "/" + e.path);
        } catch (const IoError&) {
            return false;
        }
        if (bytes.size() != e.bytes || fnv1a64_hex(bytes) != e.digest) return false;
    }
    return true;
}

} // namespace qg
