#pragma once

#include <cstddef>
#include <vector>

#include "galclust/clustering.hpp"

namespace galclust {

// One agglomeration step. Leaves are nodes 0..n-1; the i-th merge creates
// node n+i. left < right always.
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double cost = 0.0; // increase in total within-cluster sum of squares
    std::size_t size = 0;

    bool operator==(const Merge&) const = default;
};

struct MergeTree {
    std::size_t leaves = 0;
    std::vector<Merge> merges; // n-1 entries, non-decreasing cost
};

// Ward agglomerative clustering via nearest-neighbour chains over a condensed
// matrix of merge costs, updated with the Lance-Williams recurrence.
// O(n^2) time and memory.
MergeTree agglomerative_ward(const Matrix& x);

// Labels from undoing the last k-1 merges. Clusters are numbered in order of
// their smallest leaf index.
HardLabeling cut_tree(const MergeTree& tree, int k);

// Total within-cluster sum of squares of the k-cluster cut: the sum of the
// first n-k merge costs.
double within_cluster_ss(const MergeTree& tree, int k);

} // namespace galclust
