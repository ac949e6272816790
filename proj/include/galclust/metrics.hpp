#pragma once

#include <cstdint>
#include <vector>

#include "galclust/assignment.hpp"

namespace galclust {

struct ClassScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
    // Set when the named ratio had a zero denominator and was reported as 0.
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool f1_undefined = false;
};

struct ClassMetrics {
    std::vector<ClassScore> classes;
};

struct WeightedMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
};

ClassMetrics per_class(const ConfusionMatrix& cm);

// Support-weighted mean of the per-class scores. Throws if every support is zero.
WeightedMetrics weighted_average(const ClassMetrics& metrics);

std::uint64_t question_support(const std::vector<int>& true_labels);

struct SummaryStat {
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation; 0 for fewer than two values
};

SummaryStat summarize(const std::vector<double>& values);

} // namespace galclust
