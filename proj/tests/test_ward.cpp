#include <gtest/gtest.h>

#include <set>

#include "galclust/rng.hpp"
#include "galclust/ward.hpp"
#include "oracles.hpp"

using namespace galclust;

namespace {

Matrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed)
{
    Rng rng(seed);
    Matrix m(n, d);
    for (auto& v : m.values()) {
        v = rng.normal();
    }
    return m;
}

} // namespace

TEST(Ward, ThreePointLineExample)
{
    const auto tree = agglomerative_ward(Matrix(3, 1, {0.0, 1.0, 10.0}));
    ASSERT_EQ(tree.merges.size(), 2u);
    EXPECT_EQ(tree.merges[0], (Merge{0, 1, 0.5, 2}));
    // {0,1} (centroid 0.5) with {10}: 2*1/3 * 9.5^2
    EXPECT_EQ(tree.merges[1].left, 2u);
    EXPECT_EQ(tree.merges[1].right, 3u);
    EXPECT_NEAR(tree.merges[1].cost, 2.0 / 3.0 * 9.5 * 9.5, 1e-12);
    EXPECT_NEAR(tree.merges[1].cost, 60.17, 5e-3);
    EXPECT_EQ(tree.merges[1].size, 3u);

    const auto two = cut_tree(tree, 2);
    EXPECT_EQ(two.labels, (std::vector<int>{0, 0, 1}));
}

TEST(Ward, IdenticalPointsMergeFirstAtZeroCost)
{
    const auto tree = agglomerative_ward(Matrix(4, 2, {5, 5, 0, 0, 9, 1, 0, 0}));
    EXPECT_EQ(tree.merges[0].left, 1u);
    EXPECT_EQ(tree.merges[0].right, 3u);
    EXPECT_DOUBLE_EQ(tree.merges[0].cost, 0.0);
}

TEST(Ward, MatchesNaiveOracle)
{
    for (std::uint64_t inst = 0; inst < 10; ++inst) {
        const std::size_t n = 5 + inst * 5;
        const auto x = random_matrix(n, 3, inst);
        const auto tree = agglomerative_ward(x);
        const auto ref = oracle::naive_ward(x);
        ASSERT_EQ(tree.merges.size(), ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) {
            EXPECT_NEAR(tree.merges[i].cost, ref[i].cost, 1e-9 * std::max(1.0, ref[i].cost));
            EXPECT_EQ(tree.merges[i].left, ref[i].left);
            EXPECT_EQ(tree.merges[i].right, ref[i].right);
            EXPECT_EQ(tree.merges[i].size, ref[i].size);
        }
    }
}

TEST(Ward, CutCostsTelescopeToWithinClusterSS)
{
    const auto x = random_matrix(40, 4, 9);
    const auto tree = agglomerative_ward(x);
    for (const auto& m : tree.merges) {
        EXPECT_GE(m.cost, 0.0);
    }
    EXPECT_EQ(tree.merges.back().size, 40u);
    for (int k = 1; k <= 40; ++k) {
        const auto labels = cut_tree(tree, k);
        const double direct = oracle::within_ss(x, labels.labels, k);
        EXPECT_NEAR(within_cluster_ss(tree, k), direct, 1e-9 * std::max(1.0, direct)) << "k=" << k;
    }
}

TEST(Ward, CutProducesExactlyKNonEmptyGroups)
{
    const auto x = random_matrix(25, 2, 4);
    const auto tree = agglomerative_ward(x);
    for (int k = 1; k <= 25; ++k) {
        const auto labels = cut_tree(tree, k);
        ASSERT_EQ(labels.labels.size(), 25u);
        std::set<int> used(labels.labels.begin(), labels.labels.end());
        EXPECT_EQ(used.size(), static_cast<std::size_t>(k));
        EXPECT_EQ(*used.rbegin(), k - 1);
        // Labels are numbered by first appearance along the leaves.
        int seen = -1;
        for (const int l : labels.labels) {
            EXPECT_LE(l, seen + 1);
            seen = std::max(seen, l);
        }
    }
    const auto all = cut_tree(tree, 25);
    for (int i = 0; i < 25; ++i) {
        EXPECT_EQ(all.labels[i], i);
    }
    const auto one = cut_tree(tree, 1);
    EXPECT_EQ(std::set<int>(one.labels.begin(), one.labels.end()).size(), 1u);
}

TEST(Ward, Errors)
{
    EXPECT_THROW(agglomerative_ward(Matrix(1, 2)), std::invalid_argument);
    const auto tree = agglomerative_ward(random_matrix(5, 2, 1));
    EXPECT_THROW(cut_tree(tree, 0), std::invalid_argument);
    EXPECT_THROW(cut_tree(tree, 6), std::invalid_argument);
}
