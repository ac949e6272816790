#include "galclust/config.hpp"

#include <fstream>
#include <stdexcept>

namespace galclust {

std::string_view method_key(Method m) noexcept
{
    switch (m) {
    case Method::KMeans:
        return "kmeans";
    case Method::FuzzyCMeans:
        return "fcm";
    case Method::Agglomerative:
        return "agglomerative";
    }
    return "unknown";
}

std::string_view method_display_name(Method m) noexcept
{
    switch (m) {
    case Method::KMeans:
        return "K-means";
    case Method::FuzzyCMeans:
        return "Fuzzy C-means";
    case Method::Agglomerative:
        return "Agglomerative";
    }
    return "unknown";
}

Method parse_method(std::string_view key)
{
    if (key == "kmeans" || key == "k-means") {
        return Method::KMeans;
    }
    if (key == "fcm" || key == "fuzzy-c-means") {
        return Method::FuzzyCMeans;
    }
    if (key == "agglomerative" || key == "ward") {
        return Method::Agglomerative;
    }
    throw std::invalid_argument("unknown clustering method '" + std::string(key) + "'");
}

bool is_stochastic(Method m) noexcept { return m != Method::Agglomerative; }

ReportFormat parse_format(std::string_view key)
{
    if (key == "structured") {
        return ReportFormat::Structured;
    }
    if (key == "tables") {
        return ReportFormat::Tables;
    }
    if (key == "both") {
        return ReportFormat::Both;
    }
    throw std::invalid_argument("unknown report format '" + std::string(key) + "'");
}

std::string_view format_key(ReportFormat f) noexcept
{
    switch (f) {
    case ReportFormat::Structured:
        return "structured";
    case ReportFormat::Tables:
        return "tables";
    case ReportFormat::Both:
        return "both";
    }
    return "both";
}

void ExperimentConfig::validate() const
{
    if (methods.empty()) {
        throw std::invalid_argument("no clustering methods configured");
    }
    for (const Method m : methods) {
        if (is_stochastic(m) && seeds.empty()) {
            throw std::invalid_argument("seeds must be non-empty for " + std::string(method_key(m)));
        }
    }
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("threshold must lie in [0, 1]");
    }
    if (max_iter < 1) {
        throw std::invalid_argument("max_iter must be at least 1");
    }
    if (!(fuzzifier > 1.0)) {
        throw std::invalid_argument("fuzzifier must exceed 1");
    }
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    if (workers < 1) {
        throw std::invalid_argument("workers must be at least 1");
    }
}

void apply_config_json(const nlohmann::json& doc, ExperimentConfig& cfg)
{
    if (!doc.is_object()) {
        throw std::invalid_argument("config must be a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        if (key == "features") {
            cfg.features_path = value.get<std::string>();
        } else if (key == "votes") {
            cfg.votes_path = value.get<std::string>();
        } else if (key == "schema") {
            cfg.schema_path = value.get<std::string>();
        } else if (key == "methods") {
            cfg.methods.clear();
            for (const auto& m : value) {
                cfg.methods.push_back(parse_method(m.get<std::string>()));
            }
        } else if (key == "seeds") {
            cfg.seeds = value.get<std::vector<std::uint64_t>>();
        } else if (key == "threshold") {
            cfg.threshold = value.get<double>();
        } else if (key == "min_classifications") {
            cfg.min_classifications = value.get<std::uint64_t>();
        } else if (key == "max_iter") {
            cfg.max_iter = value.get<int>();
        } else if (key == "fuzzifier") {
            cfg.fuzzifier = value.get<double>();
        } else if (key == "epsilon") {
            cfg.epsilon = value.get<double>();
        } else if (key == "permutation_cap") {
            cfg.permutation_cap = value.get<std::size_t>();
        } else if (key == "questions") {
            cfg.questions = value.get<std::vector<std::string>>();
        } else if (key == "out") {
            cfg.output_dir = value.get<std::string>();
        } else if (key == "workers") {
            cfg.workers = value.get<std::size_t>();
        } else if (key == "format") {
            cfg.format = parse_format(value.get<std::string>());
        } else if (key == "save_labels") {
            cfg.save_labels = value.get<bool>();
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path.string());
    }
    ExperimentConfig cfg;
    try {
        apply_config_json(nlohmann::json::parse(in), cfg);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg)
{
    nlohmann::json methods = nlohmann::json::array();
    for (const Method m : cfg.methods) {
        methods.push_back(std::string(method_key(m)));
    }
    return {
        {"methods", methods},
        {"seeds", cfg.seeds},
        {"threshold", cfg.threshold},
        {"min_classifications", cfg.min_classifications},
        {"max_iter", cfg.max_iter},
        {"fuzzifier", cfg.fuzzifier},
        {"epsilon", cfg.epsilon},
        {"permutation_cap", cfg.permutation_cap},
        {"questions", cfg.questions},
    };
}

} // namespace galclust
