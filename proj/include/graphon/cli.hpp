#ifndef GRAPHON_CLI_HPP
#define GRAPHON_CLI_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "graphon/connectivity.hpp"
#include "graphon/core.hpp"
#include "graphon/io.hpp"
#include "graphon/linalg.hpp"
#include "graphon/metrics.hpp"
#include "graphon/sampler.hpp"
#include "graphon/varadhan.hpp"

namespace graphon {

inline constexpr const char* kToolName = "graphon";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitDomain = 3, kExitIo = 4 };

struct RunConfig {
    std::string command;
    std::string input;
    std::string out_dir = ".";
    std::size_t grid = 512;
    std::optional<double> epsilon;
    std::string t_grid_text;  ///< "a:b:k"; empty means the default grid
    std::optional<double> expect;
    double tolerance = 0.1;
    std::uint64_t seed = 0;
    bool reproducible = false;
    bool allow_disconnected = false;

    std::string u;     ///< slope: first set, "a:b,c:d"
    std::string v;     ///< slope: second set
    std::string sets;  ///< metrics: sets separated by ';'
    std::string transform;  ///< slope on the block matrix: exp | resolvent
    std::string weights = "unit";  ///< unit | random
    std::size_t embedding_dim = 0;  ///< 0 means every eigenpair
    std::size_t vertices = 500;
    std::size_t trials = 1;

    Vector t_grid() const { return t_grid_text.empty() ? default_t_grid() : parse_t_grid(t_grid_text); }

    void validate() const {
        static const std::vector<std::string> commands = {"varadhan", "slope", "metrics", "connectivity", "sample"};
        if (std::find(commands.begin(), commands.end(), command) == commands.end())
            throw ValidationError("unknown command '" + command + "'");
        if (input.empty()) throw ValidationError("--input is required");
        if (grid < 1 || grid > 8192) throw ValidationError("--grid must lie in [1, 8192]");
        if (epsilon && !(*epsilon >= 0.0)) throw ValidationError("--epsilon must be nonnegative");
        if (!(tolerance > 0.0)) throw ValidationError("--tolerance must be positive");
        if (!transform.empty() && transform != "exp" && transform != "resolvent")
            throw ValidationError("--transform must be 'exp' or 'resolvent'");
        if (weights != "unit" && weights != "random") throw ValidationError("--weights must be 'unit' or 'random'");
        if (vertices < 1 || vertices > 20000) throw ValidationError("--vertices must lie in [1, 20000]");
        if (trials < 1 || trials > 1000) throw ValidationError("--trials must lie in [1, 1000]");
        if (!t_grid_text.empty()) {
            const Vector g = parse_t_grid(t_grid_text);
            if (g.back() < 1e-8) throw ValidationError("--tgrid minimum is below 1e-8");
        }
        if (command == "slope" && transform.empty() && (u.empty() || v.empty()))
            throw ValidationError("slope needs --u and --v (or --transform for the block-matrix mode)");
    }
};

namespace detail {

struct Loaded {
    AnyGraphon graphon;
    std::string hash;
};

inline Loaded load_input(const RunConfig& c) {
    const std::string text = read_file(c.input);
    return {graphon_from_json(parse_json(text, c.input), c.grid), hex64(fnv1a64(text))};
}

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

inline Json metadata(const RunConfig& c, const std::string& hash) {
    Json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["command"] = c.command;
    m["spec_hash"] = "fnv1a64:" + hash;
    Json o;
    o["input"] = c.input;
    o["grid"] = c.grid;
    o["epsilon"] = c.epsilon ? Json(*c.epsilon) : Json(nullptr);
    o["tgrid"] = c.t_grid_text.empty() ? Json(nullptr) : Json(c.t_grid_text);
    o["expect"] = c.expect ? Json(*c.expect) : Json(nullptr);
    o["tolerance"] = c.tolerance;
    o["seed"] = c.seed;
    o["allow_disconnected"] = c.allow_disconnected;
    m["options"] = std::move(o);
    if (!c.reproducible) m["timestamp"] = utc_timestamp();
    return m;
}

inline std::filesystem::path prepare_out_dir(const RunConfig& c) {
    std::error_code ec;
    std::filesystem::create_directories(c.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + c.out_dir + "': " + ec.message());
    return std::filesystem::path(c.out_dir);
}

inline void write_json(const std::filesystem::path& path, const Json& j) {
    write_file(path.string(), [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

inline Json optional_int(std::optional<int> v) { return v ? Json(*v) : Json(nullptr); }

inline double epsilon_for(const RunConfig& c, const AnyGraphon& w) { return c.epsilon.value_or(default_epsilon(w)); }

inline bool is_grid(const AnyGraphon& w) { return std::holds_alternative<GridGraphon>(w); }

inline Json slope_json(const SlopeEstimate& e) {
    Json j;
    j["t_grid"] = e.t_grid;
    j["log_values"] = e.log_values;
    j["slope"] = e.slope;
    j["intercept"] = e.intercept;
    j["residual"] = e.residual;
    j["estimate"] = e.estimate;
    return j;
}

}  // namespace detail

/// Distance CSV, B_n heatmap (PGM, 0 = unreachable) and a summary.
inline int cmd_varadhan(const RunConfig& c, std::ostream& log) {
    const auto in = detail::load_input(c);
    const auto dir = detail::prepare_out_dir(c);
    const DistanceField field = distance_field(in.graphon, detail::epsilon_for(c, in.graphon));
    if (field.disconnected && !c.allow_disconnected)
        throw DomainError("graphon is disconnected (some block pairs are unreachable); pass --allow-disconnected");

    const std::size_t n = field.partition.size();
    LabeledMatrix table{std::vector<std::string>(n), hop_values(field.distances)};
    const bool grid = detail::is_grid(in.graphon);
    for (std::size_t i = 0; i < n; ++i)
        table.labels[i] = grid ? format_double((static_cast<double>(i) + 0.5) / static_cast<double>(n)) : std::to_string(i);
    write_file((dir / "distances.csv").string(), [&](std::ostream& out) { write_csv(out, table); });

    const std::size_t res = grid ? n : c.grid;
    std::vector<std::size_t> cell_block(res);
    for (std::size_t a = 0; a < res; ++a)
        cell_block[a] = grid ? a : field.partition.locate((static_cast<double>(a) + 0.5) / static_cast<double>(res));
    write_file((dir / "heatmap.pgm").string(), [&](std::ostream& out) {
        write_pgm(out, res, field.layers, [&](std::size_t r, std::size_t s) {
            return field.distances.at(cell_block[r], cell_block[s]).value_or(0);
        });
    });

    Json summary;
    summary["metadata"] = detail::metadata(c, in.hash);
    summary["representation"] = to_string(field.representation);
    summary["blocks"] = n;
    summary["epsilon"] = detail::epsilon_for(c, in.graphon);
    summary["connected"] = !field.disconnected;
    summary["connectivity_exact"] = !grid;
    summary["diameter"] = detail::optional_int(field.distances.max());
    summary["layers"] = field.layers;
    summary["layer_measures"] = field.layer_measures();
    summary["heatmap_resolution"] = res;
    detail::write_json(dir / "summary.json", summary);

    log << "varadhan: " << n << " blocks, " << field.layers << " layers"
        << (field.disconnected ? " (disconnected)" : "") << ", outputs in " << dir.string() << '\n';
    return kExitOk;
}

/// Heat-kernel slope for a pair of sets, or, with --transform, the slopes of
/// |f(Lt)_ij| for every pair of nodes of the block matrix read as a graph.
inline int cmd_slope(const RunConfig& c, std::ostream& log) {
    const auto in = detail::load_input(c);
    const auto dir = detail::prepare_out_dir(c);
    const Vector tg = c.t_grid();
    Json out;
    out["metadata"] = detail::metadata(c, in.hash);
    bool pass = true;

    if (c.transform.empty()) {
        const StepGraphon w = as_step(in.graphon);
        const IntervalSet u = parse_interval_set(c.u);
        const IntervalSet v = parse_interval_set(c.v);
        const std::optional<int> delta = delta_sets(distance_field(w, detail::epsilon_for(c, in.graphon)), u, v);
        const SlopeEstimate est = varadhan_slope(w, u, v, tg);
        out["pair"] = {{"U", format_interval_set(u)}, {"V", format_interval_set(v)}};
        out.update(detail::slope_json(est));
        out["delta"] = detail::optional_int(delta);
        out["expected"] = c.expect ? Json(*c.expect) : Json(nullptr);
        if (c.expect) pass = std::abs(est.slope - *c.expect) <= c.tolerance;
        out["pass"] = c.expect ? Json(pass) : Json(nullptr);
        log << "slope: " << format_double(est.slope) << " (residual " << format_double(est.residual) << ")";
        if (c.expect) log << (pass ? ", matches " : ", DOES NOT match ") << format_double(*c.expect);
        log << '\n';
    } else {
        const StepGraphon w = as_step(in.graphon);
        const Matrix& a = w.blocks();
        const std::size_t n = a.rows();
        if (!is_connected(support_graph(a, 0.0)))
            throw DomainError("block matrix is not a connected graph; |f(Lt)_ij| vanishes for some pairs");
        Matrix mw = a;
        Vector diag(n, 0.0);
        if (c.weights == "random") {
            SplitMix64 rng(c.seed);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j)
                    if (a(i, j) != 0.0) mw(i, j) = mw(j, i) = 0.5 + rng.uniform();
            for (double& d : diag) d = 2.0 * rng.uniform() - 1.0;
        }
        const TaylorFamily f = c.transform == "exp" ? exp_family() : resolvent_family();
        Json pairs = Json::array();
        for (std::size_t i = 0; i < n; ++i) {
            const auto hops = bfs_hops(support_graph(a, 0.0).adjacency, i);
            for (std::size_t j = 0; j < n; ++j) {
                const SlopeEstimate est = general_varadhan_slope(a, mw, diag, f, i, j, tg);
                const bool ok = std::abs(est.slope - hops[j]) <= c.tolerance;
                pass = pass && ok;
                Json p = detail::slope_json(est);
                p["i"] = i;
                p["j"] = j;
                p["distance"] = hops[j];
                p["pass"] = ok;
                pairs.push_back(std::move(p));
            }
        }
        out["transform"] = f.name;
        out["weights"] = c.weights;
        out["diagonal"] = diag;
        out["pairs"] = std::move(pairs);
        out["pass"] = pass;
        log << "slope (" << f.name << ", " << c.weights << " weights): " << n * n << " pairs, "
            << (pass ? "all match" : "MISMATCH") << " graph distances\n";
    }
    detail::write_json(dir / "slope.json", out);
    return pass ? kExitOk : kExitDomain;
}

/// Communicability matrix over a list of sets, their spectral embedding, and
/// a cut-norm report.
inline int cmd_metrics(const RunConfig& c, std::ostream& log) {
    const auto in = detail::load_input(c);
    const auto dir = detail::prepare_out_dir(c);
    const StepGraphon w = as_step(in.graphon);
    const std::size_t n = w.size();

    std::vector<IntervalSet> sets;
    if (!c.sets.empty())
        sets = parse_interval_sets(c.sets);
    else if (n <= 64)
        for (std::size_t i = 0; i < n; ++i) sets.push_back(IntervalSet::block(w.partition(), i));
    else
        throw ValidationError("graphon has " + std::to_string(n) + " blocks; pass --sets explicitly");

    const CommunicabilityMetric metric(w);
    LabeledMatrix table{std::vector<std::string>(sets.size()), Matrix(sets.size(), sets.size())};
    for (std::size_t i = 0; i < sets.size(); ++i) {
        table.labels[i] = "X" + std::to_string(i);
        for (std::size_t j = i + 1; j < sets.size(); ++j)
            table.values(i, j) = table.values(j, i) = metric(sets[i], sets[j]);
    }
    write_file((dir / "communicability.csv").string(), [&](std::ostream& out) { write_csv(out, table); });

    const std::size_t k = c.embedding_dim == 0 ? n : c.embedding_dim;
    const SpectralData spec = communicability_spectrum(w);
    Json emb;
    emb["metadata"] = detail::metadata(c, in.hash);
    emb["truncation"] = k;
    emb["eigenvalues"] = Vector(spec.eigenvalues.begin(), spec.eigenvalues.begin() + static_cast<std::ptrdiff_t>(std::min(k, n)));
    Json rows = Json::array();
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const Embedding e = communicability_embedding(w, spec, sets[i], k);
        rows.push_back({{"label", table.labels[i]}, {"set", format_interval_set(sets[i])},
                        {"coordinates", e.coordinates}, {"kernel_norm", e.kernel_norm}});
    }
    emb["sets"] = std::move(rows);
    detail::write_json(dir / "embedding.json", emb);

    Json report;
    report["metadata"] = detail::metadata(c, in.hash);
    report["blocks"] = n;
    report["sets"] = Json::array();
    for (std::size_t i = 0; i < sets.size(); ++i)
        report["sets"].push_back({{"label", table.labels[i]}, {"set", format_interval_set(sets[i])}});
    try {
        report["cut_norm"] = cut_norm(w);
    } catch (const ValidationError& e) {
        report["cut_norm"] = nullptr;
        report["cut_norm_error"] = e.what();
    }
    if (n <= 512) report["twin_free_blocks"] = merge_twins(w).size();
    detail::write_json(dir / "metrics.json", report);

    log << "metrics: " << sets.size() << " sets, cut norm "
        << (report["cut_norm"].is_null() ? std::string("refused") : format_double(report["cut_norm"].get<double>()))
        << '\n';
    return kExitOk;
}

inline int cmd_connectivity(const RunConfig& c, std::ostream& log) {
    const auto in = detail::load_input(c);
    const auto dir = detail::prepare_out_dir(c);
    const double eps = detail::epsilon_for(c, in.graphon);
    const StepGraphon w = as_step(in.graphon);
    const SupportGraph s = support_graph(w.blocks(), eps);
    const bool connected = is_connected(s);

    Json out;
    out["metadata"] = detail::metadata(c, in.hash);
    out["representation"] = detail::is_grid(in.graphon) ? "grid" : "step";
    out["blocks"] = w.size();
    out["epsilon"] = eps;
    out["connected"] = connected;
    out["connectivity_exact"] = !detail::is_grid(in.graphon);  // grids: decided on the cell support graph
    out["diameter"] = detail::optional_int(block_distance_matrix(s).max());
    out["finitely_connected"] = w.size() <= 256 ? Json(is_finitely_connected(s)) : Json(nullptr);
    if (w.size() <= 64) {
        const LaplacianKernel k = laplacian_kernel(w);
        out["laplacian_kernel"] = {{"step_dimension", k.step_dimension}, {"infinite", k.infinite}, {"simple", k.simple()}};
    } else {
        out["laplacian_kernel"] = nullptr;
    }
    detail::write_json(dir / "connectivity.json", out);
    log << "connectivity: " << (connected ? "connected" : "disconnected") << ", diameter "
        << (out["diameter"].is_null() ? std::string("unbounded") : std::to_string(out["diameter"].get<int>())) << '\n';
    return kExitOk;
}

/// Edge list of one W-random graph plus a report comparing BFS distances
/// with the Varadhan distance over `trials` samples.
inline int cmd_sample(const RunConfig& c, std::ostream& log) {
    const auto in = detail::load_input(c);
    const auto dir = detail::prepare_out_dir(c);
    const StepGraphon w = as_step(in.graphon);
    const DistanceField field = distance_field(in.graphon, detail::epsilon_for(c, in.graphon));
    if (field.disconnected && !c.allow_disconnected)
        throw DomainError("graphon is disconnected; pass --allow-disconnected to sample without the comparison");

    const std::uint64_t graph_seed = SplitMix64::derive(c.seed, 0);
    const SampledGraph g = sample_graph(w, c.vertices, graph_seed);
    write_file((dir / "edges.txt").string(), [&](std::ostream& out) {
        for (const auto& [a, b] : g.edges()) out << a << ' ' << b << '\n';
    });

    double expected_density = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j) expected_density += w.blocks()(i, j) * w.measure(i) * w.measure(j);
    const double pairs = static_cast<double>(g.size()) * static_cast<double>(g.size() - 1) / 2.0;

    Json report;
    Json meta = detail::metadata(c, in.hash);
    meta["rng"] = SplitMix64::kName;
    report["metadata"] = std::move(meta);
    report["vertices"] = g.size();
    report["graph_seed"] = graph_seed;
    report["edges"] = g.edge_count();
    report["density"] = pairs > 0 ? static_cast<double>(g.edge_count()) / pairs : 0.0;
    report["expected_density"] = expected_density;
    const DistanceProfile profile = empirical_distance_profile(g);
    Json hist = Json::object();
    for (const auto& [d, k] : profile.histogram) hist[std::to_string(d)] = k;
    report["distance_profile"] = {{"histogram", hist}, {"unreachable_pairs", profile.unreachable_pairs}};

    if (!field.disconnected) {
        const VaradhanComparison cmp = compare_with_varadhan(w, field, c.vertices, c.trials, c.seed);
        Json dev = Json::object();
        for (const auto& [d, k] : cmp.deviation) dev[std::to_string(d)] = k;
        report["comparison"] = {{"trials", cmp.trials},
                                {"pairs", cmp.pairs},
                                {"agreement", cmp.agreement()},
                                {"agreement_within_one", cmp.agreement_within_one()},
                                {"deviation", dev},
                                {"disconnected_pairs", cmp.disconnected_pairs},
                                {"disconnected_samples", cmp.disconnected_samples}};
        log << "sample: " << g.edge_count() << " edges, agreement " << format_double(cmp.agreement())
            << ", within +1 " << format_double(cmp.agreement_within_one()) << '\n';
    } else {
        report["comparison"] = nullptr;
        log << "sample: " << g.edge_count() << " edges (graphon disconnected, no comparison)\n";
    }
    detail::write_json(dir / "report.json", report);
    return kExitOk;
}

/// Validates the configuration, dispatches, and maps errors to exit codes.
inline int run(const RunConfig& c, std::ostream& log, std::ostream& err) {
    try {
        c.validate();
        if (c.command == "varadhan") return cmd_varadhan(c, log);
        if (c.command == "slope") return cmd_slope(c, log);
        if (c.command == "metrics") return cmd_metrics(c, log);
        if (c.command == "connectivity") return cmd_connectivity(c, log);
        return cmd_sample(c, log);
    } catch (const ValidationError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const nlohmann::json::exception& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInput;
    }
}

}  // namespace graphon

#endif  // GRAPHON_CLI_HPP
