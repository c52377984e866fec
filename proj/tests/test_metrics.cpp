#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "graphon/builtin.hpp"
#include "graphon/metrics.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace graphon;
using namespace testing_support;

namespace {

const IntervalSet kFirstHalf({{0.0, 0.5}});
const IntervalSet kSecondHalf({{0.5, 1.0}});

}  // namespace

TEST(Communicability, BipartiteHalves) {
    // f = (1, -1) on the halves; via the 2x2 exponential of B/2, B = [[0, 1/2], [1/2, 0]].
    const Matrix e = oracle_expm(Matrix{{0.0, 0.25}, {0.25, 0.0}});
    const double s = std::sqrt(0.5);
    const double h0 = e(0, 0) * s - e(0, 1) * s, h1 = e(1, 0) * s - e(1, 1) * s;
    const double want = std::sqrt(h0 * h0 + h1 * h1);
    EXPECT_NEAR(want, std::exp(-0.25), 1e-14);
    EXPECT_NEAR(communicability_distance(bipartite(), kFirstHalf, kSecondHalf), want, 1e-12);
}

TEST(Communicability, IdentityAndZeroKernel) {
    Rng rng(41);
    const StepGraphon w = random_step(rng, 5, 0.3);
    const IntervalSet x = random_set(rng);
    EXPECT_NEAR(communicability_distance(w, x, x), 0.0, 1e-14);
    const IntervalSet a({{0.1, 0.3}}), b({{0.6, 0.65}});
    EXPECT_NEAR(communicability_distance(erdos_renyi(0.0), a, b), std::sqrt(0.25), 1e-14);
    EXPECT_NEAR(communicability_distance(erdos_renyi(0.0), a, IntervalSet()), std::sqrt(0.2), 1e-14);
}

TEST(Communicability, MatchesFineGridOperator) {
    // On an aligned grid the operator e^{W/2} is a dense matrix exponential.
    Rng rng(42);
    const std::size_t cells = 40;
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = uniform_index(rng, 1, 5);
        const StepGraphon w(random_aligned_partition(rng, n, cells), random_blocks(rng, n, 0.3));
        const IntervalSet x = random_aligned_set(rng, cells), y = random_aligned_set(rng, cells);
        const double h = 1.0 / cells;
        Eigen::MatrixXd g(cells, cells);
        Eigen::VectorXd f(cells);
        for (std::size_t a = 0; a < cells; ++a) {
            const double xa = (a + 0.5) * h;
            f(a) = (x.contains(xa) ? 1.0 : 0.0) - (y.contains(xa) ? 1.0 : 0.0);
            for (std::size_t b = 0; b < cells; ++b) g(a, b) = 0.5 * w.eval(xa, (b + 0.5) * h) * h;
        }
        const Eigen::VectorXd ef = g.exp() * f;
        EXPECT_NEAR(communicability_distance(w, x, y), std::sqrt(h * ef.squaredNorm()), 1e-12) << trial;
    }
}

TEST(Communicability, TriangleInequalityAndSymmetry) {
    Rng rng(43);
    for (int trial = 0; trial < 300; ++trial) {
        const CommunicabilityMetric d(random_step(rng, uniform_index(rng, 1, 6), 0.3));
        const IntervalSet x = random_set(rng), y = random_set(rng), z = random_set(rng);
        EXPECT_LE(d(x, z), d(x, y) + d(y, z) + 1e-12);
        EXPECT_NEAR(d(x, y), d(y, x), 1e-14);
    }
}

TEST(Embedding, BipartiteCoordinates) {
    const StepGraphon w = bipartite();
    const Embedding e = communicability_embedding(w, kFirstHalf, 2);
    ASSERT_EQ(e.coordinates.size(), 2u);
    EXPECT_NEAR(e.eigenvalues[0], 0.5, 1e-15);
    EXPECT_NEAR(e.eigenvalues[1], -0.5, 1e-15);
    EXPECT_NEAR(std::abs(e.coordinates[0]), std::exp(0.25) * 0.5, 1e-14);
    EXPECT_NEAR(std::abs(e.coordinates[1]), std::exp(-0.25) * 0.5, 1e-14);
    EXPECT_NEAR(e.kernel_norm, 0.0, 1e-14);
}

TEST(Embedding, NullSetMapsToZero) {
    Rng rng(44);
    const StepGraphon w = random_step(rng, 4, 0.2);
    const Embedding e = communicability_embedding(w, IntervalSet(), 4);
    for (double c : e.coordinates) EXPECT_EQ(c, 0.0);
    EXPECT_EQ(e.kernel_norm, 0.0);
    EXPECT_THROW(communicability_embedding(w, IntervalSet(), 0), ValidationError);
    EXPECT_THROW(communicability_embedding(w, IntervalSet(), 5), ValidationError);
}

TEST(Embedding, DistanceIdentity) {
    Rng rng(45);
    for (int trial = 0; trial < 200; ++trial) {
        const StepGraphon w = random_step(rng, uniform_index(rng, 1, 7), 0.3);
        const IntervalSet x = random_set(rng), y = random_set(rng);
        const Embedding ex = communicability_embedding(w, x, w.size());
        const Embedding ey = communicability_embedding(w, y, w.size());
        double sq = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) sq += std::pow(ex.coordinates[k] - ey.coordinates[k], 2);
        const double r = kernel_residual(w, x, y);
        const double d = communicability_distance(w, x, y);
        EXPECT_NEAR(sq + r * r, d * d, 1e-9) << trial;
    }
}

TEST(Neighbourhood, Bipartite) {
    const StepGraphon w = bipartite();
    EXPECT_DOUBLE_EQ(neighbourhood_distance(w, 0.1, 0.9), 1.0);
    EXPECT_DOUBLE_EQ(neighbourhood_distance(w, 0.1, 0.3), 0.0);
    EXPECT_DOUBLE_EQ(similarity_distance(w, 0.1, 0.9), 0.5);
    EXPECT_DOUBLE_EQ(similarity_distance(w, 0.6, 0.7), 0.0);
}

TEST(Neighbourhood, CircularBandIsTwiceTheArc) {
    const std::size_t n = 512;
    const GridGraphon g = circular_band(0.25, n);
    for (std::size_t i = 0; i < n; i += 37)
        for (std::size_t j = 0; j < n; j += 29) {
            const double x = g.center(i), y = g.center(j);
            EXPECT_NEAR(neighbourhood_distance(g, x, y), 2.0 * circular_distance(x, y), 2.0 / n) << i << "," << j;
        }
}

TEST(Neighbourhood, SimilarityIsDominated) {
    Rng rng(46);
    for (int trial = 0; trial < 100; ++trial) {
        const StepGraphon w = random_step(rng, uniform_index(rng, 1, 7), 0.3);
        const StepGraphon w2 = comp_power(w, 2);
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = 0; j < w.size(); ++j) EXPECT_LE(row_distance(w2, i, j), row_distance(w, i, j) + 1e-14);
    }
}

TEST(MergeTwins, RecoversBipartite) {
    const StepGraphon split(Partition({0.25, 0.25, 0.5}), Matrix{{0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}, {1.0, 1.0, 0.0}});
    const StepGraphon merged = merge_twins(split);
    ASSERT_EQ(merged.size(), 2u);
    EXPECT_EQ(merged.blocks(), bipartite().blocks());
    EXPECT_TRUE(merged.partition().same_as(Partition::uniform(2), 0.0));
}

TEST(MergeTwins, PureGraphonUnchanged) {
    const StepGraphon c6 = lift(cycle_adjacency(6));
    const StepGraphon m = merge_twins(c6);
    EXPECT_EQ(m.blocks(), c6.blocks());
    EXPECT_THROW(merge_twins(c6, -1.0), ValidationError);
}

TEST(MergeTwins, DoubledCycle) {
    const Matrix a = cycle_adjacency(6);
    Matrix doubled(12, 12);
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 12; ++j) doubled(i, j) = a(i / 2, j / 2);
    const StepGraphon m = merge_twins(lift(doubled));
    ASSERT_EQ(m.size(), 6u);
    EXPECT_LT(max_abs_diff(m.blocks(), a), 1e-15);
    const Matrix r = neighbourhood_matrix(m);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j) EXPECT_GT(r(i, j), 1e-9);
}

TEST(MergeTwins, OutputHasNoCloseRows) {
    Rng rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        Matrix a = random_blocks(rng, 6, 0.5);
        for (std::size_t k = 0; k < 6; ++k) {  // copy row 0 into row 3
            a(3, k) = a(0, k);
            a(k, 3) = a(k, 0);
        }
        a(3, 3) = a(0, 0);
        a(0, 3) = a(3, 0) = a(0, 0);
        const StepGraphon m = merge_twins(StepGraphon(random_partition(rng, 6), a), 1e-9);
        EXPECT_LE(m.size(), 5u);
        const Matrix r = neighbourhood_matrix(m);
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = i + 1; j < m.size(); ++j) EXPECT_GT(r(i, j), 1e-9);
    }
}

TEST(CutNorm, Examples) {
    for (double p : {0.0, 0.3, 1.0}) EXPECT_NEAR(cut_norm(erdos_renyi(p)), p, 1e-15);
    EXPECT_NEAR(cut_norm(bipartite()), 0.5, 1e-15);
    EXPECT_EQ(cut_norm(zero_graphon(4)), 0.0);
}

TEST(CutNorm, MatchesBruteForceOnSignedKernels) {
    Rng rng(48);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = uniform_index(rng, 1, 8);
        const Partition p = random_partition(rng, n);
        Matrix w(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) w(i, j) = w(j, i) = uniform(rng, -1.0, 1.0);
        EXPECT_NEAR(cut_norm(p, w), oracle_cut_norm(p, w), 1e-13) << trial;
    }
}

TEST(CutNorm, BoundsAndPermutationInvariance) {
    Rng rng(49);
    for (int trial = 0; trial < 30; ++trial) {
        const StepGraphon w = random_step(rng, 6, 0.4);
        double l1 = 0.0;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) l1 += w.blocks()(i, j) * w.measure(i) * w.measure(j);
        const double c = cut_norm(w);
        EXPECT_LE(c, l1 + 1e-15);
        std::vector<std::size_t> sigma(6);
        std::iota(sigma.begin(), sigma.end(), 0);
        std::shuffle(sigma.begin(), sigma.end(), rng);
        EXPECT_NEAR(cut_norm(permute_blocks(w, sigma)), c, 1e-15);
    }
}

TEST(CutNorm, RefusesLargePartitions) {
    EXPECT_THROW(cut_norm(zero_graphon(25)), ValidationError);
    EXPECT_NO_THROW(cut_norm(zero_graphon(20)));
}

TEST(CutDistance, Examples) {
    Rng rng(50);
    const StepGraphon w(Partition::uniform(5), random_blocks(rng, 5, 0.3));
    const CutDistance same = cut_distance_homogeneous(w, permute_blocks(w, {3, 1, 4, 0, 2}));
    EXPECT_NEAR(same.value, 0.0, 1e-15);
    EXPECT_TRUE(same.upper_bound);
    EXPECT_NEAR(cut_distance_homogeneous(erdos_renyi(0.2), erdos_renyi(0.7)).value, 0.5, 1e-15);
    EXPECT_NEAR(cut_distance_homogeneous(bipartite(), zero_graphon(2)).value, 0.5, 1e-15);
    EXPECT_THROW(cut_distance_homogeneous(bipartite(), erdos_renyi(0.5)), ValidationError);
    EXPECT_THROW(cut_distance_homogeneous(StepGraphon(Partition({0.25, 0.75}), Matrix(2, 2)), bipartite()),
                 ValidationError);
}
