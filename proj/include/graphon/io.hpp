#ifndef GRAPHON_IO_HPP
#define GRAPHON_IO_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "graphon/builtin.hpp"
#include "graphon/connectivity.hpp"
#include "graphon/core.hpp"

namespace graphon {

using Json = nlohmann::ordered_json;

/// Symmetry tolerance applied to matrices read from spec files.
inline constexpr double kLoadSymmetryTol = 1e-9;

// ---------------------------------------------------------------------------
// Text helpers

/// Shortest round-trip decimal form, independent of the locale.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const char* what) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    if (s == "NA") return std::numeric_limits<double>::quiet_NaN();
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ValidationError(std::string("cannot parse ") + what + " '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

/// "a:b,c:d" -> [a,b) ∪ [c,d). An empty string is the empty set.
inline IntervalSet parse_interval_set(std::string_view s) {
    if (s.find_first_not_of(' ') == std::string_view::npos) return {};
    std::vector<Interval> parts;
    for (auto piece : split(s, ',')) {
        const auto ends = split(piece, ':');
        if (ends.size() != 2) throw ValidationError("interval '" + std::string(piece) + "' is not of the form a:b");
        parts.push_back({parse_double(ends[0], "interval endpoint"), parse_double(ends[1], "interval endpoint")});
    }
    return IntervalSet(std::move(parts));
}

/// Sets separated by ';'.
inline std::vector<IntervalSet> parse_interval_sets(std::string_view s) {
    std::vector<IntervalSet> out;
    for (auto piece : split(s, ';')) out.push_back(parse_interval_set(piece));
    return out;
}

inline std::string format_interval_set(const IntervalSet& s) {
    std::string out;
    for (const auto& iv : s.intervals()) {
        if (!out.empty()) out += ',';
        out += format_double(iv.lo) + ':' + format_double(iv.hi);
    }
    return out;
}

/// "a:b:k" -> k points log-spaced between a and b, in decreasing order.
inline Vector parse_t_grid(std::string_view s) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw ValidationError("t-grid '" + std::string(s) + "' is not of the form a:b:k");
    double a = parse_double(parts[0], "t-grid bound");
    double b = parse_double(parts[1], "t-grid bound");
    const double kd = parse_double(parts[2], "t-grid count");
    if (!(a > 0.0 && b > 0.0) || a == b) throw ValidationError("t-grid bounds must be distinct and positive");
    if (!(kd >= 2.0) || kd != std::floor(kd) || kd > 10000.0) throw ValidationError("t-grid count must be an integer >= 2");
    if (a < b) std::swap(a, b);
    const auto k = static_cast<std::size_t>(kd);
    Vector g(k);
    const double la = std::log10(a), lb = std::log10(b);
    for (std::size_t i = 0; i < k; ++i) g[i] = std::pow(10.0, la + (lb - la) * static_cast<double>(i) / static_cast<double>(k - 1));
    g.front() = a;
    g.back() = b;
    return g;
}

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
    return s;
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    body(out);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Graphon specs

namespace detail {

inline Matrix matrix_from_json(const Json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw ValidationError(std::string(what) + " must be a nonempty array of rows");
    const std::size_t n = j.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const Json& row = j[i];
        if (!row.is_array() || row.size() != n)
            throw ValidationError(std::string(what) + " row " + std::to_string(i) + " does not have " +
                                  std::to_string(n) + " entries");
        for (std::size_t k = 0; k < n; ++k) {
            if (!row[k].is_number()) throw ValidationError(std::string(what) + " contains a non-numeric entry");
            m(i, k) = row[k].get<double>();
        }
    }
    if (!m.all_finite()) throw ValidationError(std::string(what) + " has non-finite entries");
    if (!m.is_symmetric(kLoadSymmetryTol))
        throw ValidationError(std::string(what) + " is not symmetric within " + format_double(kLoadSymmetryTol));
    m.symmetrize();
    return m;
}

inline Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (double v : m.row(i)) row.push_back(v);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline double param(const Json& params, const char* key, std::optional<double> fallback = std::nullopt) {
    if (params.contains(key)) {
        if (!params[key].is_number()) throw ValidationError(std::string("parameter '") + key + "' must be a number");
        return params[key].get<double>();
    }
    if (fallback) return *fallback;
    throw ValidationError(std::string("missing parameter '") + key + "'");
}

inline std::size_t count_param(const Json& params, const char* key, std::size_t fallback) {
    const double v = param(params, key, static_cast<double>(fallback));
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e5)
        throw ValidationError(std::string("parameter '") + key + "' must be a positive integer");
    return static_cast<std::size_t>(v);
}

}  // namespace detail

/// Reads a graphon spec. Grid-valued builtins use `params.resolution`, or
/// `default_grid` when absent.
inline AnyGraphon graphon_from_json(const Json& spec, std::size_t default_grid = 512) {
    if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string())
        throw ValidationError("spec must be an object with a string field 'kind'");
    const std::string kind = spec["kind"].get<std::string>();
    if (kind == "step") {
        if (!spec.contains("measures") || !spec["measures"].is_array())
            throw ValidationError("step spec needs an array 'measures'");
        std::vector<double> mu;
        for (const auto& v : spec["measures"]) {
            if (!v.is_number()) throw ValidationError("measures must be numbers");
            mu.push_back(v.get<double>());
        }
        double total = 0.0;
        for (double v : mu) total += v;
        if (std::abs(total - 1.0) > kLoadSymmetryTol)
            throw ValidationError("measures sum to " + format_double(total) + ", expected 1");
        if (total != 1.0)
            for (double& v : mu) v /= total;
        if (!spec.contains("blocks")) throw ValidationError("step spec needs 'blocks'");
        Matrix a = detail::matrix_from_json(spec["blocks"], "blocks");
        Partition p(mu);
        if (p.is_homogeneous(1e-12)) p = Partition::uniform(mu.size());
        return StepGraphon(std::move(p), std::move(a));
    }
    if (kind == "grid") {
        if (!spec.contains("values")) throw ValidationError("grid spec needs 'values'");
        Matrix v = detail::matrix_from_json(spec["values"], "values");
        if (spec.contains("resolution") &&
            (!spec["resolution"].is_number_integer() || spec["resolution"].get<long long>() != static_cast<long long>(v.rows())))
            throw ValidationError("grid 'resolution' does not match the size of 'values'");
        return GridGraphon(std::move(v));
    }
    if (kind == "builtin") {
        if (!spec.contains("name") || !spec["name"].is_string()) throw ValidationError("builtin spec needs a 'name'");
        const std::string name = spec["name"].get<std::string>();
        const Json params = spec.contains("params") ? spec["params"] : Json::object();
        if (!params.is_object()) throw ValidationError("'params' must be an object");
        if (name == "bipartite") return bipartite();
        if (name == "er") return erdos_renyi(detail::param(params, "p"));
        if (name == "circular_band")
            return circular_band(detail::param(params, "tau"), detail::count_param(params, "resolution", default_grid),
                                 detail::count_param(params, "subsamples", 4));
        if (name == "one_minus_max")
            return one_minus_max(detail::count_param(params, "resolution", default_grid),
                                 detail::count_param(params, "subsamples", 4));
        throw ValidationError("unknown builtin graphon '" + name + "'");
    }
    throw ValidationError("unknown spec kind '" + kind + "'");
}

inline Json graphon_to_json(const StepGraphon& w) {
    Json j;
    j["kind"] = "step";
    j["measures"] = w.partition().measures();
    j["blocks"] = detail::matrix_to_json(w.blocks());
    return j;
}

inline Json graphon_to_json(const GridGraphon& w) {
    Json j;
    j["kind"] = "grid";
    j["resolution"] = w.resolution();
    j["values"] = detail::matrix_to_json(w.values());
    return j;
}

inline Json graphon_to_json(const AnyGraphon& w) {
    return std::visit([](const auto& g) { return graphon_to_json(g); }, w);
}

inline Json parse_json(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("'" + origin + "' is not valid JSON: " + e.what());
    }
}

inline AnyGraphon load_graphon(const std::string& path, std::size_t default_grid = 512) {
    return graphon_from_json(parse_json(read_file(path), path), default_grid);
}

inline void save_graphon(const std::string& path, const AnyGraphon& w) {
    write_file(path, [&](std::ostream& out) { out << graphon_to_json(w).dump(2) << '\n'; });
}

// ---------------------------------------------------------------------------
// CSV and PGM

/// Square matrix with row/column labels. NaN entries are written as NA.
struct LabeledMatrix {
    std::vector<std::string> labels;
    Matrix values;
};

inline void write_csv(std::ostream& out, const LabeledMatrix& m) {
    out << "row";
    for (const auto& l : m.labels) out << ',' << l;
    out << '\n';
    for (std::size_t i = 0; i < m.values.rows(); ++i) {
        out << m.labels[i];
        for (double v : m.values.row(i)) out << ',' << format_double(v);
        out << '\n';
    }
}

inline LabeledMatrix read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("CSV is empty");
    auto head = split(line, ',');
    if (head.empty() || head[0] != "row") throw ValidationError("CSV header must start with 'row'");
    LabeledMatrix m;
    for (std::size_t i = 1; i < head.size(); ++i) m.labels.emplace_back(head[i]);
    const std::size_t n = m.labels.size();
    m.values = Matrix(n, n);
    std::size_t r = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto cells = split(line, ',');
        if (r >= n || cells.size() != n + 1) throw ValidationError("CSV row " + std::to_string(r) + " has the wrong shape");
        for (std::size_t c = 0; c < n; ++c) m.values(r, c) = parse_double(cells[c + 1], "CSV value");
        ++r;
    }
    if (r != n) throw ValidationError("CSV has " + std::to_string(r) + " rows, expected " + std::to_string(n));
    return m;
}

inline Matrix hop_values(const HopMatrix& h) {
    Matrix m(h.size(), h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j) {
            const auto d = h.at(i, j);
            m(i, j) = d ? static_cast<double>(*d) : std::numeric_limits<double>::quiet_NaN();
        }
    return m;
}

/// Plain PGM (P2) of an n x n integer field with values in [0, maxval].
inline void write_pgm(std::ostream& out, std::size_t n, int maxval, const std::function<int(std::size_t, std::size_t)>& pixel) {
    if (maxval < 1) maxval = 1;
    out << "P2\n" << n << ' ' << n << '\n' << maxval << '\n';
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (c) out << ' ';
            out << pixel(r, c);
        }
        out << '\n';
    }
}

}  // namespace graphon

#endif  // GRAPHON_IO_HPP
