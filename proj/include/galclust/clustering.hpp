#pragma once

#include <cstddef>
#include <vector>

#include "galclust/matrix.hpp"

namespace galclust {

// Hard assignment of n rows to k clusters.
struct HardLabeling {
    std::vector<int> labels;
    int k = 0;

    bool operator==(const HardLabeling&) const = default;
};

// k x d cluster centres.
struct Centroids {
    Matrix centers;
};

// Rows x cols membership matrix U: rows are clusters, columns are points.
struct FuzzyPartition {
    Matrix memberships;
    double fuzzifier = 2.0;
};

struct ClusterRunResult {
    HardLabeling labeling;
    double objective = 0.0; // J (k-means), J_m (fuzzy c-means) or total within-cluster SS (Ward)
    int iterations = 0;
    bool converged = false;
    double wall_time = 0.0; // seconds, filled by the caller that times the run
};

} // namespace galclust
