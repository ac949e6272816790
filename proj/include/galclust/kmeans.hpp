#pragma once

#include <cstdint>
#include <vector>

#include "galclust/clustering.hpp"

namespace galclust {

enum class KMeansInit {
    // Greedy k-means++: each new centre is the best of 2 + floor(ln k)
    // D^2-weighted candidate rows.
    PlusPlus,
    // k distinct rows drawn uniformly without replacement.
    RandomRows,
};

struct KMeansResult {
    ClusterRunResult run;
    Centroids centroids;
    // J after each centre update (including empty-cluster repair), one entry per iteration.
    std::vector<double> objective_trace;
};

// Lloyd's algorithm from seeded initial centres (always k distinct rows).
// Iteration stops once an assignment step reproduces the previous labels or
// after max_iter rounds. Distance ties go to the lowest cluster index.
KMeansResult kmeans(const Matrix& x, int k, std::uint64_t seed, int max_iter = 300,
                    KMeansInit init = KMeansInit::PlusPlus);

// The initial centre rows chosen by `init` for this seed.
std::vector<std::size_t> kmeans_initial_rows(const Matrix& x, int k, std::uint64_t seed, KMeansInit init);

// Sum over rows of the squared Euclidean distance to the assigned centre.
double kmeans_objective(const Matrix& x, const HardLabeling& labeling, const Centroids& centroids);

} // namespace galclust
