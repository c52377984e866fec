#include <gtest/gtest.h>

#include "graphon/builtin.hpp"
#include "graphon/connectivity.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace graphon;
using namespace testing_support;

TEST(SupportGraph, ThresholdsValues) {
    const SupportGraph s = support_graph(Matrix{{1e-13, 0.5}, {0.5, 2e-12}}, kStepEpsilon);
    EXPECT_FALSE(s.edge(0, 0));
    EXPECT_TRUE(s.edge(0, 1));
    EXPECT_TRUE(s.edge(1, 1));
    EXPECT_THROW(support_graph(Matrix(2, 2), -1.0), ValidationError);
}

TEST(BlockDistances, CycleOfSix) {
    const HopMatrix d = block_distance_matrix(support_graph(lift(cycle_adjacency(6))));
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            const std::size_t k = (j + 6 - i) % 6;
            const int want = i == j ? 2 : static_cast<int>(std::min(k, 6 - k));
            EXPECT_EQ(d.at(i, j), want) << i << "," << j;
        }
    EXPECT_EQ(d.max(), 3);
}

TEST(BlockDistances, SelfLoopsAndIsolatedBlocks) {
    const HopMatrix d = block_distance_matrix(support_graph(Matrix{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.5}, {0.0, 0.5, 0.0}}, 1e-12));
    EXPECT_EQ(d.at(0, 0), 1);
    EXPECT_EQ(d.at(1, 1), 2);
    EXPECT_EQ(d.at(1, 2), 1);
    EXPECT_FALSE(d.at(0, 1).has_value());
    EXPECT_EQ(d.max(), std::nullopt);
    EXPECT_EQ(d.max_reachable(), 2);
    const HopMatrix z = block_distance_matrix(support_graph(zero_graphon(2)));
    EXPECT_FALSE(z.at(0, 0).has_value());
}

TEST(BlockDistances, MatchBooleanPowerOracle) {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = uniform_index(rng, 1, 14);
        const Matrix a = random_blocks(rng, n, uniform(rng, 0.3, 0.9));
        const HopMatrix d = block_distance_matrix(support_graph(a, 1e-12));
        const auto want = oracle_walk_distances(a, 1e-12);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(d.at(i, j).value_or(-1), want[i][j]) << "trial " << trial;
    }
}

TEST(BfsHops, LongPathCrossesWordBoundaries) {
    const std::size_t n = 200;
    BitMatrix path(n);
    for (std::size_t i = 0; i + 1 < n; ++i) path.set_symmetric(i, i + 1);
    const auto hops = bfs_hops(path, 0);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(hops[i], static_cast<int>(i));
}

TEST(Connectivity, BuiltinExamples) {
    EXPECT_TRUE(is_connected(bipartite()));
    EXPECT_EQ(diameter(bipartite()), 2);
    EXPECT_TRUE(is_connected(erdos_renyi(0.3)));
    EXPECT_EQ(diameter(erdos_renyi(0.3)), 1);
    EXPECT_FALSE(is_connected(erdos_renyi(0.0)));
    EXPECT_FALSE(is_connected(zero_graphon(3)));
    EXPECT_EQ(diameter(zero_graphon(3)), std::nullopt);
    const AnyGraphon band = circular_band(0.25, 40);
    EXPECT_TRUE(is_connected(band));
    EXPECT_EQ(diameter(band), 2);
}

TEST(Connectivity, TwoComponents) {
    const StepGraphon w(Partition({0.5, 0.5}), Matrix{{1.0, 0.0}, {0.0, 1.0}});
    EXPECT_FALSE(is_connected(w));
    EXPECT_FALSE(is_finitely_connected(support_graph(w)));
    const LaplacianKernel k = laplacian_kernel(w);
    EXPECT_EQ(k.step_dimension, 2u);
    EXPECT_FALSE(k.infinite);
    EXPECT_FALSE(k.simple());
}

TEST(Connectivity, IsolatedBlockGivesInfiniteKernel) {
    const StepGraphon w(Partition({0.25, 0.25, 0.5}), Matrix{{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}});
    EXPECT_FALSE(is_connected(w));
    EXPECT_TRUE(laplacian_kernel(w).infinite);
}

TEST(Connectivity, CharacterizationsAgreeWithUnionFind) {
    Rng rng(22);
    int connected = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = uniform_index(rng, 1, 12);
        const StepGraphon w = random_step(rng, n, uniform(rng, 0.2, 0.95));
        const SupportGraph s = support_graph(w);
        const bool want = oracle_connected(w.blocks(), kStepEpsilon);
        EXPECT_EQ(is_connected(s), want) << "trial " << trial;
        EXPECT_EQ(is_finitely_connected(s), want) << "trial " << trial;
        EXPECT_EQ(laplacian_kernel(w).simple(), want) << "trial " << trial;
        connected += want;
    }
    EXPECT_GT(connected, 20);
    EXPECT_LT(connected, 130);
}
