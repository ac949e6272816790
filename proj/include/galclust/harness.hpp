#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "galclust/assignment.hpp"
#include "galclust/clustering.hpp"
#include "galclust/config.hpp"
#include "galclust/ingest.hpp"
#include "galclust/metrics.hpp"

namespace galclust {

// Mapping of raw cluster labels onto classes, plus the resulting scores.
struct Evaluation {
    ConfusionMatrix confusion; // true class x mapped class
    ClusterClassMapping mapping;
    std::uint64_t diagonal_sum = 0;
    std::vector<int> mapped_labels;
    ClassMetrics per_class;
    WeightedMetrics weighted;
};

Evaluation evaluate_labels(const std::vector<int>& true_labels, const std::vector<int>& cluster_labels, int k,
                           std::size_t permutation_cap = kDefaultPermutationCap);

// Runs one clustering method and returns its hard labels and diagnostics.
// wall_time covers the clustering call only.
ClusterRunResult run_method(Method method, const Matrix& x, int k, std::uint64_t seed, const ExperimentConfig& cfg);

// One (question, method, seed) cell.
struct CellRecord {
    std::string question;
    Method method = Method::KMeans;
    std::optional<std::uint64_t> seed; // absent for agglomerative
    int k = 0;
    std::uint64_t support = 0;
    bool ok = false;
    std::string error;

    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    double wall_time = 0.0;
    std::string labels_digest;
    ClusterClassMapping mapping;
    ConfusionMatrix confusion;
    ClassMetrics per_class;
    WeightedMetrics weighted;

    std::vector<std::string> galaxy_ids;
    std::vector<int> true_labels;
    std::vector<int> cluster_labels;
};

// Aggregate over the successful seeds of one (question, method) pair.
struct QuestionResult {
    std::string question;
    Method method = Method::KMeans;
    std::size_t runs = 0;
    std::size_t failures = 0;
    SummaryStat precision;
    SummaryStat recall;
    SummaryStat f1;
    double mean_wall_time = 0.0;
};

struct ExperimentResults {
    ExperimentConfig config;
    std::vector<std::string> questions; // evaluation order
    std::vector<CellRecord> records;    // question-major, then method, then seed
    std::vector<QuestionResult> summaries;
};

struct ExperimentInputs {
    FeatureMatrix features;
    VoteTable votes;
    QuestionSchema schema;
};

// Clustering input for one question: eligible, labelled galaxies in feature-file order.
struct QuestionInput {
    std::string name;
    int k = 0;
    FeatureMatrix features;
    std::vector<int> true_labels;
};

// Applies the classification-count filter, eligibility threshold and label
// presence to select each configured question's rows.
std::vector<QuestionInput> prepare_questions(const ExperimentConfig& cfg, const ExperimentInputs& inputs,
                                             const std::vector<std::string>& questions);

// Loads the configured files; any ingest failure propagates as IngestError.
ExperimentInputs load_inputs(const ExperimentConfig& cfg);

ExperimentResults run_experiment(const ExperimentConfig& cfg);
ExperimentResults run_experiment(const ExperimentConfig& cfg, const ExperimentInputs& inputs);

// Recomputes the per-(question, method) aggregates from the cell records.
std::vector<QuestionResult> summarize_records(const std::vector<CellRecord>& records,
                                              const std::vector<std::string>& questions,
                                              const std::vector<Method>& methods);

// 64-bit FNV-1a over the label sequence, as 16 hex digits.
std::string labels_digest(const std::vector<int>& labels);

} // namespace galclust
