#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "galclust/harness.hpp"

namespace galclust {

// Every per-cell record plus per-(question, method) aggregates. Contains no
// wall-clock values, so identical configurations give identical bytes.
nlohmann::json structured_report(const ExperimentResults& results);

// Wall times per cell and per (question, method), with the worker count.
nlohmann::json timing_report(const ExperimentResults& results);

// Markdown tables: clustering time, precision, recall and F1, one row per
// question and one column per method. Best value per row is bold, worst is
// underlined.
std::string render_tables(const ExperimentResults& results);

// Writes report.json + timing.json (structured), tables.md (tables), and
// labels/*.csv when the config asks for saved labels.
void emit_report(const ExperimentResults& results, const std::filesystem::path& out_dir, ReportFormat format);

struct LabelsFile {
    std::vector<std::string> galaxy_ids;
    std::vector<int> true_labels;
    std::vector<int> cluster_labels;
};

// CSV with header galaxy_id,true_label,cluster_label.
void write_labels_file(const std::filesystem::path& path, const CellRecord& record);
LabelsFile read_labels_file(const std::filesystem::path& path);
std::string labels_file_name(const CellRecord& record);

} // namespace galclust
