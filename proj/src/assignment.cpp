#include "galclust/assignment.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace galclust {

ConfusionMatrix::ConfusionMatrix(std::size_t k, std::vector<std::uint64_t> counts)
    : k_(k), counts_(std::move(counts))
{
    if (counts_.size() != k_ * k_) {
        throw std::invalid_argument("ConfusionMatrix: expected k*k counts");
    }
}

std::uint64_t ConfusionMatrix::total() const noexcept
{
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const noexcept
{
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < k_; ++i) {
        sum += (*this)(i, i);
    }
    return sum;
}

ConfusionMatrix ConfusionMatrix::transposed() const
{
    ConfusionMatrix out(k_);
    for (std::size_t t = 0; t < k_; ++t) {
        for (std::size_t p = 0; p < k_; ++p) {
            out(p, t) = (*this)(t, p);
        }
    }
    return out;
}

std::vector<std::vector<std::uint64_t>> ConfusionMatrix::rows() const
{
    std::vector<std::vector<std::uint64_t>> out(k_);
    for (std::size_t t = 0; t < k_; ++t) {
        out[t].assign(counts_.begin() + static_cast<std::ptrdiff_t>(t * k_),
                      counts_.begin() + static_cast<std::ptrdiff_t>((t + 1) * k_));
    }
    return out;
}

ClusterClassMapping ClusterClassMapping::inverse() const
{
    ClusterClassMapping out;
    out.mapping.assign(mapping.size(), -1);
    for (std::size_t c = 0; c < mapping.size(); ++c) {
        out.mapping.at(static_cast<std::size_t>(mapping[c])) = static_cast<int>(c);
    }
    return out;
}

ConfusionMatrix build_confusion(const std::vector<int>& true_labels, const std::vector<int>& predicted, int k)
{
    if (true_labels.size() != predicted.size()) {
        throw std::invalid_argument("build_confusion: label lists differ in length");
    }
    if (k < 0) {
        throw std::invalid_argument("build_confusion: negative class count");
    }
    ConfusionMatrix cm(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        const int t = true_labels[i];
        const int p = predicted[i];
        if (t < 0 || t >= k || p < 0 || p >= k) {
            throw std::out_of_range("build_confusion: label out of range at position " + std::to_string(i));
        }
        ++cm(static_cast<std::size_t>(t), static_cast<std::size_t>(p));
    }
    return cm;
}

PermutationResult best_permutation(const ConfusionMatrix& cm, std::size_t cap)
{
    const std::size_t k = cm.size();
    if (k > cap) {
        throw PermutationLimitError("best_permutation: " + std::to_string(k) +
                                    " classes exceeds the exhaustive-search cap of " + std::to_string(cap) +
                                    "; raise the permutation cap in the configuration to allow " +
                                    std::to_string(k) + "! permutations");
    }
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);

    PermutationResult best;
    best.mapping.mapping = perm;
    bool first = true;
    // next_permutation walks in lexicographic order, so keeping only strict
    // improvements yields the lexicographically smallest maximiser.
    do {
        std::uint64_t sum = 0;
        for (std::size_t c = 0; c < k; ++c) {
            sum += cm(static_cast<std::size_t>(perm[c]), c);
        }
        if (first || sum > best.diagonal_sum) {
            best.diagonal_sum = sum;
            best.mapping.mapping = perm;
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<int> apply_mapping(const std::vector<int>& predicted, const ClusterClassMapping& mapping)
{
    std::vector<int> out;
    out.reserve(predicted.size());
    for (const int p : predicted) {
        if (p < 0 || static_cast<std::size_t>(p) >= mapping.mapping.size()) {
            throw std::out_of_range("apply_mapping: label " + std::to_string(p) + " outside mapping domain");
        }
        out.push_back(mapping.mapping[static_cast<std::size_t>(p)]);
    }
    return out;
}

} // namespace galclust
