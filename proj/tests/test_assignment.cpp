#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "galclust/assignment.hpp"
#include "galclust/rng.hpp"
#include "oracles.hpp"

using namespace galclust;

namespace {

ConfusionMatrix random_confusion(std::size_t k, Rng& rng)
{
    ConfusionMatrix cm(k);
    for (std::size_t t = 0; t < k; ++t) {
        for (std::size_t p = 0; p < k; ++p) {
            cm(t, p) = rng.uniform_index(50);
        }
    }
    return cm;
}

std::vector<std::vector<std::int64_t>> as_signed(const ConfusionMatrix& cm)
{
    std::vector<std::vector<std::int64_t>> out(cm.size(), std::vector<std::int64_t>(cm.size()));
    for (std::size_t t = 0; t < cm.size(); ++t) {
        for (std::size_t p = 0; p < cm.size(); ++p) {
            out[t][p] = static_cast<std::int64_t>(cm(t, p));
        }
    }
    return out;
}

} // namespace

TEST(BuildConfusion, Tallies)
{
    const auto cm = build_confusion({0, 0, 1}, {0, 1, 1}, 2);
    EXPECT_EQ(cm.rows(), (std::vector<std::vector<std::uint64_t>>{{1, 1}, {0, 1}}));
    const auto diag = build_confusion({0, 1, 2, 1}, {0, 1, 2, 1}, 3);
    EXPECT_EQ(diag.trace(), diag.total());
    const auto empty = build_confusion({}, {}, 3);
    EXPECT_EQ(empty.total(), 0u);
    EXPECT_EQ(empty.size(), 3u);
}

TEST(BuildConfusion, Errors)
{
    EXPECT_THROW(build_confusion({0, 1}, {0}, 2), std::invalid_argument);
    EXPECT_THROW(build_confusion({0, 2}, {0, 1}, 2), std::out_of_range);
    EXPECT_THROW(build_confusion({0, 1}, {0, -1}, 2), std::out_of_range);
}

TEST(BestPermutation, Examples)
{
    const auto id = best_permutation(ConfusionMatrix(2, {5, 0, 0, 7}));
    EXPECT_EQ(id.mapping.mapping, (std::vector<int>{0, 1}));
    EXPECT_EQ(id.diagonal_sum, 12u);

    const auto swap = best_permutation(ConfusionMatrix(2, {0, 5, 7, 1}));
    EXPECT_EQ(swap.mapping.mapping, (std::vector<int>{1, 0}));
    EXPECT_EQ(swap.diagonal_sum, 12u);
}

TEST(BestPermutation, TiesGoToLexicographicallySmallest)
{
    const auto r = best_permutation(ConfusionMatrix(3, std::vector<std::uint64_t>(9, 4)));
    EXPECT_EQ(r.mapping.mapping, (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(r.diagonal_sum, 12u);
}

TEST(BestPermutation, MatchesAssignmentOracle)
{
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + rng.uniform_index(6);
        const auto cm = random_confusion(k, rng);
        const auto best = best_permutation(cm);
        EXPECT_EQ(static_cast<std::int64_t>(best.diagonal_sum), oracle::assignment_maximum(as_signed(cm)));
    }
}

TEST(BestPermutation, BeatsRandomPermutations)
{
    Rng rng(12);
    const auto cm = random_confusion(5, rng);
    const auto best = best_permutation(cm);
    EXPECT_GE(best.diagonal_sum, cm.trace());
    std::vector<int> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 0; i < 100; ++i) {
        for (std::size_t j = 4; j > 0; --j) {
            std::swap(perm[j], perm[rng.uniform_index(j + 1)]);
        }
        std::uint64_t sum = 0;
        for (std::size_t c = 0; c < 5; ++c) {
            sum += cm(perm[c], c);
        }
        EXPECT_GE(best.diagonal_sum, sum);
    }
}

TEST(BestPermutation, CapIsEnforced)
{
    EXPECT_THROW(best_permutation(ConfusionMatrix(9)), PermutationLimitError);
    EXPECT_NO_THROW(best_permutation(ConfusionMatrix(3), 3));
    EXPECT_THROW(best_permutation(ConfusionMatrix(4), 3), PermutationLimitError);
}

TEST(ApplyMapping, RelabelsAndInverts)
{
    const ClusterClassMapping identity{{0, 1}};
    EXPECT_EQ(apply_mapping({0, 1, 0}, identity), (std::vector<int>{0, 1, 0}));
    const ClusterClassMapping swap{{1, 0}};
    EXPECT_EQ(apply_mapping({0, 1, 0}, swap), (std::vector<int>{1, 0, 1}));

    const ClusterClassMapping m{{2, 0, 3, 1}};
    const std::vector<int> labels = {0, 1, 2, 3, 3, 0};
    EXPECT_EQ(apply_mapping(apply_mapping(labels, m), m.inverse()), labels);
    EXPECT_THROW(apply_mapping({4}, m), std::out_of_range);
}

TEST(Assignment, RelabellingClustersDoesNotChangeMappedLabels)
{
    Rng rng(5);
    std::vector<int> truth(200);
    std::vector<int> predicted(200);
    for (std::size_t i = 0; i < 200; ++i) {
        truth[i] = static_cast<int>(rng.uniform_index(4));
        // Mostly agrees with a fixed cluster permutation of the truth.
        predicted[i] = rng.uniform_index(5) == 0 ? static_cast<int>(rng.uniform_index(4)) : (truth[i] + 1) % 4;
    }
    const auto mapped = [&](const std::vector<int>& pred) {
        const auto best = best_permutation(build_confusion(truth, pred, 4));
        return apply_mapping(pred, best.mapping);
    };
    const ClusterClassMapping relabel{{3, 1, 0, 2}};
    EXPECT_EQ(mapped(predicted), mapped(apply_mapping(predicted, relabel)));

    const auto best = best_permutation(build_confusion(truth, predicted, 4));
    EXPECT_EQ(build_confusion(truth, apply_mapping(predicted, best.mapping), 4).trace(), best.diagonal_sum);
}
