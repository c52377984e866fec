#ifndef GRAPHON_SAMPLER_HPP
#define GRAPHON_SAMPLER_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "graphon/bitmatrix.hpp"
#include "graphon/connectivity.hpp"
#include "graphon/core.hpp"
#include "graphon/varadhan.hpp"

namespace graphon {

/// SplitMix64 (Steele, Lea and Flood). Doubles take the top 53 bits.
class SplitMix64 {
public:
    static constexpr const char* kName = "splitmix64";

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0,1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Independent stream derived from this seed.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 g(seed ^ (stream * 0xd1342543de82ef95ULL));
        return g.next();
    }

private:
    std::uint64_t state_;
};

/// Simple undirected graph with latent coordinates.
struct SampledGraph {
    std::vector<double> coordinates;
    BitMatrix adjacency;
    std::uint64_t seed = 0;

    std::size_t size() const { return coordinates.size(); }

    std::size_t edge_count() const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < size(); ++i) c += adjacency.row_count(i);
        return c / 2;
    }

    std::vector<std::pair<std::size_t, std::size_t>> edges() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j)
                if (adjacency.test(i, j)) out.emplace_back(i, j);
        return out;
    }
};

/// W-random graph: x_i i.i.d. uniform, edge {i,j} when u_ij < W(x_i, x_j).
/// Draw order: n coordinates, then one uniform per pair (i<j) row by row.
inline SampledGraph sample_graph(const StepGraphon& w, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ValidationError("sample size must be at least 1");
    SplitMix64 rng(seed);
    SampledGraph g{std::vector<double>(n), BitMatrix(n), seed};
    std::vector<std::size_t> block(n);
    for (std::size_t i = 0; i < n; ++i) {
        g.coordinates[i] = rng.uniform();
        block[i] = w.partition().locate(g.coordinates[i]);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.uniform() < w.blocks()(block[i], block[j])) g.adjacency.set_symmetric(i, j);
    return g;
}

inline SampledGraph sample_graph(const GridGraphon& w, std::size_t n, std::uint64_t seed) {
    return sample_graph(as_step(w), n, seed);
}

inline SampledGraph sample_graph(const AnyGraphon& w, std::size_t n, std::uint64_t seed) {
    return sample_graph(as_step(w), n, seed);
}

/// Histogram of BFS distances over unordered vertex pairs.
struct DistanceProfile {
    std::map<int, std::size_t> histogram;
    std::size_t unreachable_pairs = 0;

    std::size_t pairs() const {
        std::size_t s = unreachable_pairs;
        for (const auto& [d, c] : histogram) s += c;
        return s;
    }
};

inline DistanceProfile empirical_distance_profile(const SampledGraph& g) {
    DistanceProfile p;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto hops = bfs_hops(g.adjacency, i);
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            if (hops[j] < 0)
                ++p.unreachable_pairs;
            else
                ++p.histogram[hops[j]];
        }
    }
    return p;
}

struct VaradhanComparison {
    std::size_t vertices = 0;
    std::size_t trials = 0;
    std::size_t pairs = 0;              ///< pairs where both distances are finite
    std::size_t exact = 0;              ///< BFS distance == d_W
    std::size_t within_one = 0;         ///< BFS distance - d_W in {0, 1}
    std::size_t disconnected_pairs = 0; ///< unreachable in the sample although d_W is finite
    std::size_t disconnected_samples = 0;
    std::map<int, std::size_t> deviation;  ///< BFS distance - d_W

    double agreement() const { return pairs == 0 ? 0.0 : static_cast<double>(exact) / static_cast<double>(pairs); }
    double agreement_within_one() const {
        return pairs == 0 ? 0.0 : static_cast<double>(within_one) / static_cast<double>(pairs);
    }
};

/// Samples `trials` graphs of n vertices and compares every pair's BFS
/// distance with d_W at the latent coordinates. Trial k uses the seed
/// SplitMix64::derive(seed, k).
inline VaradhanComparison compare_with_varadhan(const StepGraphon& w, const DistanceField& field, std::size_t n,
                                                std::size_t trials, std::uint64_t seed) {
    if (field.disconnected) throw DomainError("compare_with_varadhan: the graphon is not connected");
    VaradhanComparison r;
    r.vertices = n;
    r.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const SampledGraph g = sample_graph(w, n, SplitMix64::derive(seed, t));
        std::vector<std::size_t> block(n);
        for (std::size_t i = 0; i < n; ++i) block[i] = field.partition.locate(g.coordinates[i]);
        bool connected = true;
        for (std::size_t i = 0; i < n; ++i) {
            const auto hops = bfs_hops(g.adjacency, i);
            for (std::size_t j = i + 1; j < n; ++j) {
                const std::optional<int> dw =
                    g.coordinates[i] == g.coordinates[j] ? std::optional<int>(0) : field.distances.at(block[i], block[j]);
                if (!dw) continue;
                if (hops[j] < 0) {
                    ++r.disconnected_pairs;
                    connected = false;
                    continue;
                }
                ++r.pairs;
                const int dev = hops[j] - *dw;
                ++r.deviation[dev];
                if (dev == 0) ++r.exact;
                if (dev == 0 || dev == 1) ++r.within_one;
            }
        }
        if (!connected) ++r.disconnected_samples;
    }
    return r;
}

template <class G>
VaradhanComparison compare_with_varadhan(const G& w, std::size_t n, std::size_t trials, std::uint64_t seed) {
    return compare_with_varadhan(StepGraphon(as_step(w)), distance_field(w), n, trials, seed);
}

}  // namespace graphon

#endif  // GRAPHON_SAMPLER_HPP
