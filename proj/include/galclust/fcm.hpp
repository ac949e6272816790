#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "galclust/clustering.hpp"

namespace galclust {

struct FcmResult {
    ClusterRunResult run;
    FuzzyPartition partition;
    Centroids centroids;
    // Per iteration: J_m of the freshly updated memberships against the centres
    // they were computed from, and the largest |column sum - 1| of those memberships.
    std::vector<double> objective_trace;
    std::vector<double> column_sum_error_trace;
};

// Fuzzy c-means from a seeded random initial partition. Each iteration
// recomputes the centres from U, then U from the centres; the run stops when
// the element-wise max change in U is <= epsilon or after max_iter iterations.
FcmResult fcm(const Matrix& x, int clusters, double fuzzifier, double epsilon, std::uint64_t seed,
              int max_iter = 300);

// Membership column of one point against the given centres. A point that
// coincides with one or more centres gets crisp membership, split equally
// among the coincident centres.
std::vector<double> fcm_memberships(std::span<const double> point, const Matrix& centers, double fuzzifier);

// J_m = sum_k sum_i mu_ik^m * ||x_k - v_i||^2
double fcm_objective(const Matrix& x, const FuzzyPartition& partition, const Centroids& centroids);

// Maximum-membership labels; ties go to the lowest cluster index.
HardLabeling defuzzify(const FuzzyPartition& partition);

} // namespace galclust
