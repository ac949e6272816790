#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace galclust {

enum class Method { KMeans, FuzzyCMeans, Agglomerative };

std::string_view method_key(Method m) noexcept;         // "kmeans", "fcm", "agglomerative"
std::string_view method_display_name(Method m) noexcept; // "K-means", ...
Method parse_method(std::string_view key);
bool is_stochastic(Method m) noexcept;

enum class ReportFormat { Structured, Tables, Both };

ReportFormat parse_format(std::string_view key);
std::string_view format_key(ReportFormat f) noexcept;

// Seeds published as the defaults so runs are reproducible by third parties.
inline const std::vector<std::uint64_t> kDefaultSeeds = {11, 23, 37, 42, 101, 211, 307, 401, 503, 1009};

struct ExperimentConfig {
    std::filesystem::path features_path;
    std::filesystem::path votes_path;
    std::filesystem::path schema_path;
    std::vector<Method> methods = {Method::KMeans, Method::FuzzyCMeans, Method::Agglomerative};
    std::vector<std::uint64_t> seeds = kDefaultSeeds;
    double threshold = 0.5;
    std::uint64_t min_classifications = 3;
    int max_iter = 300;
    double fuzzifier = 2.0;
    double epsilon = 1e-9;
    std::size_t permutation_cap = 8;
    std::vector<std::string> questions; // empty = every question in the schema
    std::filesystem::path output_dir = "results";
    std::size_t workers = 1;
    ReportFormat format = ReportFormat::Both;
    bool save_labels = false;

    // Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
};

// Applies every key present in `doc` on top of `cfg`. Unknown keys are rejected.
void apply_config_json(const nlohmann::json& doc, ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

} // namespace galclust
