// Command-line entry point: run / cluster / metrics / synth.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "galclust/config.hpp"
#include "galclust/harness.hpp"
#include "galclust/ingest.hpp"
#include "galclust/report.hpp"
#include "galclust/synth.hpp"

namespace {

using galclust::ExperimentConfig;

// Raw flag values; only those given on the command line override the config.
struct ExperimentFlags {
    std::string config;
    std::string features;
    std::string votes;
    std::string schema;
    std::vector<std::string> methods;
    std::vector<std::uint64_t> seeds;
    std::optional<double> threshold;
    std::vector<std::string> questions;
    std::optional<int> max_iter;
    std::optional<std::uint64_t> min_classifications;
    std::string out;
    std::optional<std::size_t> workers;
    std::string format;
    bool save_labels = false;
};

void add_input_flags(CLI::App* cmd, ExperimentFlags& f)
{
    cmd->add_option("--config", f.config, "JSON config file; flags override its values");
    cmd->add_option("--features", f.features, "Feature CSV (id, then one column per feature)");
    cmd->add_option("--votes", f.votes, "Vote CSV laid out by the schema");
    cmd->add_option("--schema", f.schema, "Question schema JSON");
    cmd->add_option("--threshold", f.threshold, "Minimum share of shown volunteers who answered");
    cmd->add_option("--max-iter", f.max_iter, "Iteration cap for k-means and fuzzy c-means");
    cmd->add_option("--min-classifications", f.min_classifications, "Drop galaxies with fewer classifications");
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--format", f.format, "structured | tables | both")
        ->check(CLI::IsMember({"structured", "tables", "both"}));
}

ExperimentConfig resolve(const ExperimentFlags& f)
{
    ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : galclust::load_config(f.config);
    if (!f.features.empty()) {
        cfg.features_path = f.features;
    }
    if (!f.votes.empty()) {
        cfg.votes_path = f.votes;
    }
    if (!f.schema.empty()) {
        cfg.schema_path = f.schema;
    }
    if (!f.methods.empty()) {
        cfg.methods.clear();
        for (const auto& m : f.methods) {
            cfg.methods.push_back(galclust::parse_method(m));
        }
    }
    if (!f.seeds.empty()) {
        cfg.seeds = f.seeds;
    }
    if (f.threshold) {
        cfg.threshold = *f.threshold;
    }
    if (!f.questions.empty()) {
        cfg.questions = f.questions;
    }
    if (f.max_iter) {
        cfg.max_iter = *f.max_iter;
    }
    if (f.min_classifications) {
        cfg.min_classifications = *f.min_classifications;
    }
    if (!f.out.empty()) {
        cfg.output_dir = f.out;
    }
    if (f.workers) {
        cfg.workers = *f.workers;
    }
    if (!f.format.empty()) {
        cfg.format = galclust::parse_format(f.format);
    }
    if (f.save_labels) {
        cfg.save_labels = true;
    }
    if (cfg.features_path.empty() || cfg.votes_path.empty() || cfg.schema_path.empty()) {
        throw std::invalid_argument("--features, --votes and --schema are required (directly or via --config)");
    }
    return cfg;
}

void print_summary(const galclust::ExperimentResults& results)
{
    for (const auto& s : results.summaries) {
        std::cout << s.question << " / " << galclust::method_display_name(s.method) << ": runs=" << s.runs
                  << " failures=" << s.failures << " precision=" << s.precision.mean
                  << " recall=" << s.recall.mean << " f1=" << s.f1.mean << " time=" << s.mean_wall_time << "s\n";
    }
    for (const auto& rec : results.records) {
        if (!rec.ok) {
            std::cerr << "failed: " << rec.question << " / " << galclust::method_key(rec.method)
                      << (rec.seed ? " seed " + std::to_string(*rec.seed) : std::string{}) << ": " << rec.error
                      << '\n';
        }
    }
}

int run_command(const ExperimentFlags& flags)
{
    const ExperimentConfig cfg = resolve(flags);
    const auto results = galclust::run_experiment(cfg);
    galclust::emit_report(results, cfg.output_dir, cfg.format);
    print_summary(results);
    std::cout << "reports written to " << cfg.output_dir.string() << '\n';
    return 0;
}

int metrics_command(const std::string& labels_path, std::optional<int> k, std::size_t cap)
{
    const auto file = galclust::read_labels_file(labels_path);
    int classes = k.value_or(0);
    if (!k) {
        for (std::size_t i = 0; i < file.true_labels.size(); ++i) {
            classes = std::max({classes, file.true_labels[i] + 1, file.cluster_labels[i] + 1});
        }
    }
    const auto eval = galclust::evaluate_labels(file.true_labels, file.cluster_labels, classes, cap);
    nlohmann::json per_class = nlohmann::json::array();
    for (const auto& s : eval.per_class.classes) {
        per_class.push_back({{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}});
    }
    const nlohmann::json out = {
        {"k", classes},
        {"support", file.true_labels.size()},
        {"mapping", eval.mapping.mapping},
        {"diagonal_sum", eval.diagonal_sum},
        {"confusion", eval.confusion.rows()},
        {"per_class", per_class},
        {"weighted",
         {{"precision", eval.weighted.precision}, {"recall", eval.weighted.recall}, {"f1", eval.weighted.f1}}},
    };
    std::cout << out.dump(2) << '\n';
    return 0;
}

struct SynthFlags {
    int n = 3000;
    int k = 3;
    int d = 16;
    double separation = 10.0;
    double spread = 1.0;
    std::uint64_t seed = 7;
    std::string out = "synth";
    std::string schema;
    int dims_per_question = 4;
};

int synth_command(const SynthFlags& f)
{
    const std::filesystem::path dir = f.out;
    std::filesystem::create_directories(dir);
    galclust::QuestionSchema schema;
    galclust::FeatureMatrix features;
    galclust::VoteTable votes;
    if (f.schema.empty()) {
        auto blobs = galclust::synth_blobs(f.n, f.k, f.d, f.separation, f.spread, f.seed);
        schema = galclust::blob_schema(f.k);
        votes = galclust::blob_votes(blobs, f.k);
        features = std::move(blobs.features);
    } else {
        schema = galclust::load_schema(f.schema);
        auto survey = galclust::synth_survey(schema, f.n, f.dims_per_question, f.separation, f.spread, f.seed);
        features = std::move(survey.features);
        votes = std::move(survey.votes);
    }
    galclust::write_features(dir / "features.csv", features);
    std::ofstream vout(dir / "votes.csv");
    galclust::write_votes(vout, votes, schema);
    std::ofstream sout(dir / "schema.json");
    sout << galclust::schema_to_json(schema);
    std::cout << "wrote " << features.n() << " galaxies x " << features.d() << " features to " << dir.string()
              << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cluster galaxy feature vectors per survey question and score them against volunteer labels"};
    app.require_subcommand(1);

    ExperimentFlags run_flags;
    auto* run = app.add_subcommand("run", "Full experiment over every configured question and method");
    add_input_flags(run, run_flags);
    run->add_option("--methods", run_flags.methods, "kmeans,fcm,agglomerative")->delimiter(',');
    run->add_option("--seeds", run_flags.seeds, "Seeds for the stochastic methods")->delimiter(',');
    run->add_option("--questions", run_flags.questions, "Question names (default: all)")->delimiter(',');
    run->add_option("--workers", run_flags.workers, "Concurrent clustering cells");
    run->add_flag("--save-labels", run_flags.save_labels, "Write per-cell label files under <out>/labels");

    ExperimentFlags cluster_flags;
    std::string cluster_question;
    std::string cluster_method = "kmeans";
    std::uint64_t cluster_seed = galclust::kDefaultSeeds.front();
    auto* cluster = app.add_subcommand("cluster", "Single question and method; writes a labels file");
    add_input_flags(cluster, cluster_flags);
    cluster->add_option("--question", cluster_question, "Question name")->required();
    cluster->add_option("--method", cluster_method, "kmeans | fcm | agglomerative");
    cluster->add_option("--seed", cluster_seed, "Seed for stochastic methods");

    std::string labels_path;
    std::optional<int> metrics_k;
    std::size_t metrics_cap = galclust::kDefaultPermutationCap;
    auto* metrics = app.add_subcommand("metrics", "Recompute mapping and metrics from a saved labels file");
    metrics->add_option("--labels", labels_path, "CSV: galaxy_id,true_label,cluster_label")->required();
    metrics->add_option("--k", metrics_k, "Class count (default: inferred from the labels)");
    metrics->add_option("--permutation-cap", metrics_cap, "Largest k searched exhaustively");

    SynthFlags synth_flags;
    auto* synth = app.add_subcommand("synth", "Write Gaussian blob (or synthetic survey) data");
    synth->add_option("--n", synth_flags.n, "Galaxies");
    synth->add_option("--k", synth_flags.k, "Blobs");
    synth->add_option("--d", synth_flags.d, "Feature dimension");
    synth->add_option("--separation", synth_flags.separation, "Minimum distance between blob centres");
    synth->add_option("--spread", synth_flags.spread, "Per-coordinate standard deviation");
    synth->add_option("--seed", synth_flags.seed, "Generator seed");
    synth->add_option("--out", synth_flags.out, "Output directory");
    synth->add_option("--schema", synth_flags.schema, "Generate a survey over this schema instead of one question");
    synth->add_option("--dims-per-question", synth_flags.dims_per_question, "Feature columns per question (survey)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return run_command(run_flags);
        }
        if (cluster->parsed()) {
            cluster_flags.methods = {cluster_method};
            cluster_flags.seeds = {cluster_seed};
            cluster_flags.questions = {cluster_question};
            cluster_flags.save_labels = true;
            return run_command(cluster_flags);
        }
        if (metrics->parsed()) {
            return metrics_command(labels_path, metrics_k, metrics_cap);
        }
        if (synth->parsed()) {
            return synth_command(synth_flags);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
