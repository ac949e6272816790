#include "galclust/ward.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace galclust {

namespace {

class CondensedMatrix {
public:
    explicit CondensedMatrix(std::size_t n) : n_(n), values_(n * (n - 1) / 2) {}

    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[index(i, j)]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[index(i, j)]; }

private:
    std::size_t index(std::size_t i, std::size_t j) const noexcept
    {
        if (i > j) {
            std::swap(i, j);
        }
        return i * n_ - i * (i + 1) / 2 + (j - i - 1);
    }

    std::size_t n_;
    std::vector<double> values_;
};

struct SlotMerge {
    std::size_t first;  // surviving slot
    std::size_t second; // retired slot
    double cost;
};

class UnionFind {
public:
    explicit UnionFind(std::size_t size) : parent_(size)
    {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t i)
    {
        std::size_t root = i;
        while (parent_[root] != root) {
            root = parent_[root];
        }
        while (parent_[i] != root) {
            const std::size_t next = parent_[i];
            parent_[i] = root;
            i = next;
        }
        return root;
    }

    void attach(std::size_t child, std::size_t parent) { parent_[child] = parent; }

private:
    std::vector<std::size_t> parent_;
};

} // namespace

MergeTree agglomerative_ward(const Matrix& x)
{
    const std::size_t n = x.rows();
    if (n < 2) {
        throw std::invalid_argument("agglomerative_ward: at least two points are required");
    }

    // Merge cost of two singletons: (1*1/2) * ||a - b||^2.
    CondensedMatrix cost(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto a = x.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            cost(i, j) = 0.5 * squared_distance(a, x.row(j));
        }
    }

    std::vector<std::size_t> sizes(n, 1);
    std::vector<double> height(n, 0.0);
    std::vector<bool> active(n, true);
    std::vector<std::size_t> chain;
    chain.reserve(n);
    std::vector<SlotMerge> slot_merges;
    slot_merges.reserve(n - 1);

    std::size_t first_active = 0;
    for (std::size_t step = 0; step < n - 1; ++step) {
        if (chain.empty()) {
            while (!active[first_active]) {
                ++first_active;
            }
            chain.push_back(first_active);
        }

        std::size_t a = 0;
        std::size_t b = 0;
        while (true) {
            const std::size_t top = chain.back();
            const bool has_prev = chain.size() > 1;
            std::size_t nearest = has_prev ? chain[chain.size() - 2] : n;
            double best = has_prev ? cost(top, nearest) : std::numeric_limits<double>::infinity();
            for (std::size_t cand = 0; cand < n; ++cand) {
                if (cand == top || !active[cand]) {
                    continue;
                }
                const double c = cost(top, cand);
                if (c < best) {
                    best = c;
                    nearest = cand;
                }
            }
            if (has_prev && nearest == chain[chain.size() - 2]) {
                a = top;
                b = nearest;
                chain.resize(chain.size() - 2);
                break;
            }
            chain.push_back(nearest);
        }
        if (a > b) {
            std::swap(a, b);
        }

        const double merge_cost = cost(a, b);
        const double na = static_cast<double>(sizes[a]);
        const double nb = static_cast<double>(sizes[b]);
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == a || k == b) {
                continue;
            }
            const double nk = static_cast<double>(sizes[k]);
            cost(a, k) = ((na + nk) * cost(a, k) + (nb + nk) * cost(b, k) - nk * merge_cost) / (na + nb + nk);
        }
        active[b] = false;
        sizes[a] += sizes[b];
        // Rounding can leave a parent marginally below a child; clamp so the
        // sorted order below always respects the tree structure.
        const double recorded = std::max({merge_cost, height[a], height[b]});
        height[a] = recorded;
        slot_merges.push_back({a, b, recorded});
    }

    std::stable_sort(slot_merges.begin(), slot_merges.end(),
                     [](const SlotMerge& l, const SlotMerge& r) { return l.cost < r.cost; });

    MergeTree tree;
    tree.leaves = n;
    tree.merges.reserve(n - 1);
    UnionFind groups(n);
    std::vector<std::size_t> node_of_root(n);
    std::iota(node_of_root.begin(), node_of_root.end(), std::size_t{0});
    std::vector<std::size_t> node_size(2 * n - 1, 1);
    for (std::size_t i = 0; i < slot_merges.size(); ++i) {
        const std::size_t ra = groups.find(slot_merges[i].first);
        const std::size_t rb = groups.find(slot_merges[i].second);
        std::size_t left = node_of_root[ra];
        std::size_t right = node_of_root[rb];
        if (left > right) {
            std::swap(left, right);
        }
        const std::size_t node = n + i;
        node_size[node] = node_size[left] + node_size[right];
        tree.merges.push_back({left, right, slot_merges[i].cost, node_size[node]});
        const std::size_t root = std::min(ra, rb);
        groups.attach(std::max(ra, rb), root);
        node_of_root[root] = node;
    }
    return tree;
}

HardLabeling cut_tree(const MergeTree& tree, int k)
{
    const std::size_t n = tree.leaves;
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        throw std::invalid_argument("cut_tree: k must lie in [1, n]");
    }
    if (tree.merges.size() + 1 != n) {
        throw std::invalid_argument("cut_tree: merge tree is incomplete");
    }
    // Parent links over all 2n-1 nodes for the merges that are kept.
    const std::size_t kept = n - static_cast<std::size_t>(k);
    UnionFind groups(2 * n - 1);
    for (std::size_t i = 0; i < kept; ++i) {
        groups.attach(tree.merges[i].left, n + i);
        groups.attach(tree.merges[i].right, n + i);
    }

    HardLabeling out;
    out.k = k;
    out.labels.resize(n);
    std::vector<int> label_of_root(2 * n - 1, -1);
    int next_label = 0;
    for (std::size_t leaf = 0; leaf < n; ++leaf) {
        const std::size_t root = groups.find(leaf);
        if (label_of_root[root] < 0) {
            label_of_root[root] = next_label++;
        }
        out.labels[leaf] = label_of_root[root];
    }
    return out;
}

double within_cluster_ss(const MergeTree& tree, int k)
{
    const std::size_t n = tree.leaves;
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        throw std::invalid_argument("within_cluster_ss: k must lie in [1, n]");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n - static_cast<std::size_t>(k); ++i) {
        total += tree.merges[i].cost;
    }
    return total;
}

} // namespace galclust
