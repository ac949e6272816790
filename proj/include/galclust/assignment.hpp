#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace galclust {

// k x k counts; rows are true classes, columns are predicted clusters.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::size_t k) : k_(k), counts_(k * k, 0) {}
    ConfusionMatrix(std::size_t k, std::vector<std::uint64_t> counts);

    std::size_t size() const noexcept { return k_; }
    std::uint64_t& operator()(std::size_t t, std::size_t p) noexcept { return counts_[t * k_ + p]; }
    std::uint64_t operator()(std::size_t t, std::size_t p) const noexcept { return counts_[t * k_ + p]; }

    std::uint64_t total() const noexcept;
    std::uint64_t trace() const noexcept;
    ConfusionMatrix transposed() const;
    // Row-major nested copy, for reporting.
    std::vector<std::vector<std::uint64_t>> rows() const;

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::size_t k_ = 0;
    std::vector<std::uint64_t> counts_;
};

// mapping[cluster] = class; a permutation of [0, k).
struct ClusterClassMapping {
    std::vector<int> mapping;

    ClusterClassMapping inverse() const;
    bool operator==(const ClusterClassMapping&) const = default;
};

struct PermutationResult {
    ClusterClassMapping mapping;
    std::uint64_t diagonal_sum = 0;
};

class PermutationLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr std::size_t kDefaultPermutationCap = 8;

ConfusionMatrix build_confusion(const std::vector<int>& true_labels, const std::vector<int>& predicted, int k);

// Exhaustive search over all k! cluster-to-class permutations for the largest
// sum of counts(mapping[c], c). Ties go to the lexicographically smallest mapping.
PermutationResult best_permutation(const ConfusionMatrix& cm, std::size_t cap = kDefaultPermutationCap);

std::vector<int> apply_mapping(const std::vector<int>& predicted, const ClusterClassMapping& mapping);

} // namespace galclust
