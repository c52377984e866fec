#include <gtest/gtest.h>

#include <cmath>

#include "graphon/builtin.hpp"
#include "graphon/sampler.hpp"

using namespace graphon;

TEST(SplitMix64, ReferenceStream) {
    SplitMix64 g(0);
    EXPECT_EQ(g.next(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(g.next(), 0x6e789e6aa1b965f4ULL);
    SplitMix64 h(1234567);
    EXPECT_EQ(h.next(), 0x599ed017fb08fc85ULL);
    SplitMix64 u(7);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform();
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
    }
}

TEST(SampleGraph, CompleteAndEmpty) {
    const SampledGraph k5 = sample_graph(erdos_renyi(1.0), 5, 3);
    EXPECT_EQ(k5.edge_count(), 10u);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_FALSE(k5.adjacency.test(i, i));
    EXPECT_EQ(sample_graph(erdos_renyi(0.0), 50, 3).edge_count(), 0u);
    EXPECT_THROW(sample_graph(erdos_renyi(0.5), 0, 3), ValidationError);
}

TEST(SampleGraph, Deterministic) {
    const SampledGraph a = sample_graph(erdos_renyi(0.3), 200, 99);
    const SampledGraph b = sample_graph(erdos_renyi(0.3), 200, 99);
    const SampledGraph c = sample_graph(erdos_renyi(0.3), 200, 100);
    EXPECT_EQ(a.adjacency, b.adjacency);
    EXPECT_EQ(a.coordinates, b.coordinates);
    EXPECT_NE(a.adjacency, c.adjacency);
    EXPECT_TRUE(a.adjacency.is_symmetric());
}

TEST(SampleGraph, BipartiteStructure) {
    const std::size_t n = 1000;
    const SampledGraph g = sample_graph(bipartite(), n, 5);
    std::size_t left = 0;
    for (double x : g.coordinates) left += x < 0.5;
    EXPECT_EQ(g.edge_count(), left * (n - left));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            EXPECT_EQ(g.adjacency.test(i, j), (g.coordinates[i] < 0.5) != (g.coordinates[j] < 0.5));
    // |left| ~ Binomial(n, 1/2): within three standard deviations.
    EXPECT_LT(std::abs(static_cast<double>(left) - n / 2.0), 3.0 * std::sqrt(n / 4.0));
    const double cross = static_cast<double>(g.edge_count());
    EXPECT_LT(std::abs(cross - n * n / 4.0), 3.0 * std::sqrt(n / 4.0) * n);
}

TEST(SampleGraph, EdgeDensityWithinBinomialBounds) {
    const std::size_t n = 600;
    const SampledGraph g = sample_graph(erdos_renyi(0.3), n, 11);
    const double pairs = n * (n - 1) / 2.0;
    const double sigma = std::sqrt(pairs * 0.3 * 0.7);
    EXPECT_LT(std::abs(static_cast<double>(g.edge_count()) - 0.3 * pairs), 3.0 * sigma);
}

TEST(DistanceProfile, SmallGraphs) {
    const DistanceProfile k5 = empirical_distance_profile(sample_graph(erdos_renyi(1.0), 5, 1));
    EXPECT_EQ(k5.histogram.size(), 1u);
    EXPECT_EQ(k5.histogram.at(1), 10u);

    SampledGraph p4{{0.1, 0.2, 0.3, 0.4}, BitMatrix(4), 0};
    p4.adjacency.set_symmetric(0, 1);
    p4.adjacency.set_symmetric(1, 2);
    p4.adjacency.set_symmetric(2, 3);
    const DistanceProfile d = empirical_distance_profile(p4);
    EXPECT_EQ(d.histogram.at(1), 3u);
    EXPECT_EQ(d.histogram.at(2), 2u);
    EXPECT_EQ(d.histogram.at(3), 1u);
    EXPECT_EQ(d.unreachable_pairs, 0u);
    EXPECT_EQ(d.pairs(), 6u);

    const DistanceProfile empty = empirical_distance_profile(sample_graph(erdos_renyi(0.0), 4, 1));
    EXPECT_EQ(empty.unreachable_pairs, 6u);
}

TEST(DistanceProfile, DenseErdosRenyi) {
    const DistanceProfile d = empirical_distance_profile(sample_graph(erdos_renyi(0.5), 2000, 21));
    std::size_t near = 0;
    for (const auto& [dist, count] : d.histogram)
        if (dist <= 2) near += count;
    EXPECT_GE(static_cast<double>(near), 0.99 * static_cast<double>(d.pairs()));
}

TEST(CompareWithVaradhan, Bipartite) {
    const VaradhanComparison r = compare_with_varadhan(bipartite(), 500, 2, 17);
    EXPECT_EQ(r.pairs, 2u * 500u * 499u / 2u);
    EXPECT_GE(r.agreement(), 0.99);
    EXPECT_EQ(r.disconnected_samples, 0u);
}

TEST(CompareWithVaradhan, ErdosRenyiHalf) {
    const VaradhanComparison r = compare_with_varadhan(erdos_renyi(0.5), 500, 1, 3);
    EXPECT_NEAR(r.agreement(), 0.5, 0.02);  // direct edges
    EXPECT_NEAR(r.agreement_within_one(), 1.0, 1e-3);
    EXPECT_GT(r.deviation.at(1), 0u);
}

TEST(CompareWithVaradhan, CircularBandWithinOne) {
    const GridGraphon g = circular_band(1.0 / 7.0, 700);
    const VaradhanComparison r = compare_with_varadhan(g, 2000, 1, 8);
    EXPECT_GE(r.agreement_within_one(), 0.95);
}

TEST(CompareWithVaradhan, RefusesDisconnectedGraphon) {
    const StepGraphon w(Partition::uniform(2), Matrix{{1.0, 0.0}, {0.0, 1.0}});
    EXPECT_THROW(compare_with_varadhan(w, 10, 1, 0), DomainError);
}
