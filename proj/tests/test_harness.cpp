#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "galclust/harness.hpp"
#include "galclust/report.hpp"
#include "galclust/synth.hpp"

using namespace galclust;

namespace {

std::filesystem::path temp_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("galclust_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

ExperimentInputs blob_inputs(int n, int k, int d, std::uint64_t seed)
{
    auto blobs = synth_blobs(n, k, d, 10.0, 1.0, seed);
    ExperimentInputs in;
    in.schema = blob_schema(k);
    in.votes = blob_votes(blobs, k);
    in.features = std::move(blobs.features);
    return in;
}

QuestionSchema gzd5()
{
    return load_schema(std::filesystem::path(GALCLUST_DATA_DIR) / "gzd5_schema.json");
}

} // namespace

TEST(SynthBlobs, SingleBlobAndDeterminism)
{
    const auto one = synth_blobs(20, 1, 3, 10.0, 1.0, 4);
    for (const int l : one.labels) {
        EXPECT_EQ(l, 0);
    }
    const auto a = synth_blobs(50, 4, 3, 10.0, 1.0, 9);
    const auto b = synth_blobs(50, 4, 3, 10.0, 1.0, 9);
    EXPECT_TRUE(a.features.data == b.features.data);
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_FALSE(a.features.data == synth_blobs(50, 4, 3, 10.0, 1.0, 10).features.data);
}

TEST(SynthBlobs, BalancedAndSeparated)
{
    const int k = 5;
    const auto blobs = synth_blobs(1003, k, 6, 10.0, 0.1, 2);
    std::vector<int> counts(k, 0);
    std::vector<std::vector<double>> means(k, std::vector<double>(6, 0.0));
    for (std::size_t i = 0; i < blobs.labels.size(); ++i) {
        ++counts[blobs.labels[i]];
        for (std::size_t f = 0; f < 6; ++f) {
            means[blobs.labels[i]][f] += blobs.features.data(i, f);
        }
    }
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    EXPECT_LE(*hi - *lo, 1);
    for (int c = 0; c < k; ++c) {
        for (auto& v : means[c]) {
            v /= counts[c];
        }
    }
    // Sample means sit within a few spread/sqrt(200) of the true centres.
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
            EXPECT_GE(std::sqrt(squared_distance(means[a], means[b])), 9.9);
        }
    }
}

TEST(SynthBlobs, RejectsBadArguments)
{
    EXPECT_THROW(synth_blobs(2, 3, 2, 1.0, 1.0, 1), std::invalid_argument);
    EXPECT_THROW(synth_blobs(5, 0, 2, 1.0, 1.0, 1), std::invalid_argument);
    EXPECT_THROW(synth_blobs(5, 2, 2, 0.0, 1.0, 1), std::invalid_argument);
}

TEST(RunExperiment, RecoversBlobsWithAllMethods)
{
    const auto inputs = blob_inputs(300, 3, 8, 5);
    ExperimentConfig cfg;
    const auto results = run_experiment(cfg, inputs);
    ASSERT_EQ(results.records.size(), 21u);
    for (const auto& rec : results.records) {
        ASSERT_TRUE(rec.ok) << rec.error;
        EXPECT_GE(rec.weighted.f1, 0.99) << method_key(rec.method);
        EXPECT_EQ(rec.k, 3);
        EXPECT_EQ(rec.support, 300u);
    }
    for (const auto& s : results.summaries) {
        EXPECT_EQ(s.runs, is_stochastic(s.method) ? 10u : 1u);
    }
}

TEST(RunExperiment, KMatchesOptionCountAndRunShape)
{
    const auto schema = gzd5();
    auto survey = synth_survey(schema, 60, 2, 10.0, 1.0, 3);
    ExperimentInputs inputs{std::move(survey.features), std::move(survey.votes), schema};
    ExperimentConfig cfg;
    cfg.threshold = 0.0;
    cfg.max_iter = 20;
    const auto results = run_experiment(cfg, inputs);
    // 10 questions x (10 k-means + 10 fuzzy c-means + 1 agglomerative)
    EXPECT_EQ(results.records.size(), 210u);
    for (const auto& rec : results.records) {
        EXPECT_EQ(rec.k, static_cast<int>(schema[schema.index_of(rec.question)].options.size()));
    }
}

TEST(RunExperiment, AggregatesRederiveFromRecords)
{
    const auto inputs = blob_inputs(120, 3, 4, 8);
    ExperimentConfig cfg;
    const auto results = run_experiment(cfg, inputs);
    const auto again = summarize_records(results.records, results.questions, cfg.methods);
    ASSERT_EQ(again.size(), results.summaries.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
        EXPECT_EQ(again[i].f1.mean, results.summaries[i].f1.mean);
        EXPECT_EQ(again[i].precision.stddev, results.summaries[i].precision.stddev);
    }
    // And from the structured report alone.
    const auto doc = structured_report(results);
    double sum = 0;
    int count = 0;
    for (const auto& r : doc["records"]) {
        if (r["method"] == "kmeans") {
            sum += r["weighted"]["recall"].get<double>();
            ++count;
        }
    }
    EXPECT_EQ(count, 10);
    EXPECT_NEAR(sum / count, doc["summaries"][0]["recall"]["mean"].get<double>(), 1e-15);
}

TEST(RunExperiment, EligibilityDoesNotTouchOtherGalaxiesInputs)
{
    const auto schema = gzd5();
    auto survey = synth_survey(schema, 200, 2, 10.0, 1.0, 6);
    ExperimentInputs full{survey.features, survey.votes, schema};
    ExperimentConfig cfg;
    const std::vector<std::string> names = {"bar", "merging"};
    const auto base = prepare_questions(cfg, full, names);

    // Drop every 3rd galaxy entirely; the remaining galaxies keep their rows and labels.
    ExperimentInputs reduced{{}, {}, schema};
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < 200; ++i) {
        if (i % 3 != 0) {
            keep.push_back(i);
            reduced.votes.galaxies.push_back(full.votes.galaxies[i]);
        }
    }
    reduced.features = full.features.subset(keep);
    const auto smaller = prepare_questions(cfg, reduced, names);
    for (std::size_t q = 0; q < names.size(); ++q) {
        std::size_t j = 0;
        for (std::size_t i = 0; i < base[q].features.n(); ++i) {
            const auto& id = base[q].features.galaxy_ids[i];
            if (std::stoul(id.substr(1)) % 3 == 0) {
                continue;
            }
            ASSERT_LT(j, smaller[q].features.n());
            EXPECT_EQ(smaller[q].features.galaxy_ids[j], id);
            EXPECT_EQ(smaller[q].true_labels[j], base[q].true_labels[i]);
            EXPECT_TRUE(std::equal(smaller[q].features.data.row(j).begin(), smaller[q].features.data.row(j).end(),
                                   base[q].features.data.row(i).begin()));
            ++j;
        }
        EXPECT_EQ(j, smaller[q].features.n());
    }
    // Eligibility is honoured: every selected galaxy answered at least half the time.
    for (std::size_t q = 0; q < names.size(); ++q) {
        const std::size_t qi = schema.index_of(names[q]);
        for (const auto& id : base[q].features.galaxy_ids) {
            const auto& g = full.votes.galaxies[std::stoul(id.substr(1))];
            EXPECT_GE(2 * g.questions[qi].answered_count, g.total_classifications);
            EXPECT_GE(g.total_classifications, 3u);
        }
    }
}

TEST(RunExperiment, FailuresAreIsolatedPerCell)
{
    // A question where only one galaxy is eligible: k-means (k=2 > n=1) and
    // Ward (n < 2) fail; the other question still runs.
    const QuestionSchema schema({{"common", {"a", "b"}}, {"rare", {"x", "y"}}});
    ExperimentInputs inputs;
    inputs.schema = schema;
    inputs.features.data = Matrix(6, 1, {0, 0.1, 0.2, 10, 10.1, 10.2});
    for (int i = 0; i < 6; ++i) {
        inputs.features.galaxy_ids.push_back("g" + std::to_string(i));
        GalaxyVotes g{"g" + std::to_string(i), 10, {}};
        g.questions.push_back({i < 3 ? std::vector<double>{1, 0} : std::vector<double>{0, 1}, 10});
        g.questions.push_back({{1, 0}, static_cast<std::uint64_t>(i == 0 ? 10 : 0)});
        inputs.votes.galaxies.push_back(g);
    }
    ExperimentConfig cfg;
    cfg.seeds = {1, 2};
    const auto results = run_experiment(cfg, inputs);
    for (const auto& rec : results.records) {
        if (rec.question == "common") {
            EXPECT_TRUE(rec.ok) << rec.error;
            EXPECT_DOUBLE_EQ(rec.weighted.f1, 1.0);
        } else if (rec.method != Method::FuzzyCMeans) {
            EXPECT_FALSE(rec.ok);
            EXPECT_FALSE(rec.error.empty());
        }
    }
    const auto tables = render_tables(results);
    EXPECT_NE(tables.find("| rare | n/a |"), std::string::npos);
}

TEST(RunExperiment, MissingVoteRecordAborts)
{
    auto inputs = blob_inputs(30, 3, 2, 1);
    inputs.votes.galaxies.pop_back();
    ExperimentConfig cfg;
    EXPECT_THROW(run_experiment(cfg, inputs), IngestError);
}

TEST(RunExperiment, WorkerCountDoesNotChangeResults)
{
    const auto inputs = blob_inputs(150, 3, 4, 12);
    ExperimentConfig one;
    ExperimentConfig four;
    four.workers = 4;
    EXPECT_EQ(structured_report(run_experiment(one, inputs)).dump(),
              structured_report(run_experiment(four, inputs)).dump());
}

TEST(Report, EmitTwiceIsByteIdentical)
{
    const auto inputs = blob_inputs(120, 3, 4, 2);
    ExperimentConfig cfg;
    const auto results = run_experiment(cfg, inputs);
    const auto a = temp_dir("emit_a");
    const auto b = temp_dir("emit_b");
    emit_report(results, a, ReportFormat::Both);
    emit_report(results, b, ReportFormat::Both);
    for (const char* name : {"report.json", "timing.json", "tables.md"}) {
        EXPECT_EQ(read_file(a / name), read_file(b / name)) << name;
    }
    // Structured report is stable across independent runs too.
    const auto rerun = run_experiment(cfg, inputs);
    const auto c = temp_dir("emit_c");
    emit_report(rerun, c, ReportFormat::Structured);
    EXPECT_EQ(read_file(a / "report.json"), read_file(c / "report.json"));
    EXPECT_FALSE(std::filesystem::exists(c / "tables.md"));
}

TEST(Report, MinimalTablesAndTotals)
{
    const auto inputs = blob_inputs(60, 2, 3, 3);
    ExperimentConfig cfg;
    cfg.methods = {Method::KMeans};
    const auto results = run_experiment(cfg, inputs);
    const auto tables = render_tables(results);
    EXPECT_NE(tables.find("| Question | K-means |"), std::string::npos);
    EXPECT_NE(tables.find("| blobs | 1.000 |"), std::string::npos);
    EXPECT_NE(tables.find("| **Total Time** |"), std::string::npos);

    ExperimentResults two = results;
    two.config.methods = {Method::KMeans, Method::Agglomerative};
    two.questions = {"q1", "q2"};
    two.summaries = {
        {"q1", Method::KMeans, 1, 0, {0.5, 0}, {0.5, 0}, {0.5, 0}, 1.25},
        {"q1", Method::Agglomerative, 1, 0, {0.7, 0}, {0.4, 0}, {0.6, 0}, 10.0},
        {"q2", Method::KMeans, 1, 0, {0.2, 0}, {0.2, 0}, {0.2, 0}, 2.5},
        {"q2", Method::Agglomerative, 1, 0, {0.1, 0}, {0.3, 0}, {0.2, 0}, 20.0},
    };
    const auto t2 = render_tables(two);
    EXPECT_NE(t2.find("| q1 | **1.250** | <u>10.000</u> |"), std::string::npos);
    EXPECT_NE(t2.find("| **Total Time** | 3.750 | 30.000 |"), std::string::npos);
    EXPECT_NE(t2.find("| q1 | <u>0.500</u> | **0.700** |"), std::string::npos);
    // Equal values get no markers.
    EXPECT_NE(t2.find("| q2 | 0.200 | 0.200 |"), std::string::npos);
}

TEST(Report, UnwritableDirectoryThrows)
{
    const auto dir = temp_dir("unwritable");
    std::ofstream(dir / "file") << "x";
    const auto results = run_experiment(ExperimentConfig{}, blob_inputs(30, 2, 2, 1));
    EXPECT_THROW(emit_report(results, dir / "file" / "sub", ReportFormat::Both), std::runtime_error);
    EXPECT_THROW(emit_report(ExperimentResults{}, dir, ReportFormat::Both), std::invalid_argument);
}

TEST(Report, LabelsFileRoundTripsThroughMetrics)
{
    const auto inputs = blob_inputs(90, 3, 3, 4);
    ExperimentConfig cfg;
    cfg.save_labels = true;
    cfg.seeds = {5};
    const auto results = run_experiment(cfg, inputs);
    const auto dir = temp_dir("labels");
    emit_report(results, dir, ReportFormat::Structured);
    const auto& rec = results.records.front();
    const auto file = read_labels_file(dir / "labels" / labels_file_name(rec));
    EXPECT_EQ(file.galaxy_ids.front(), inputs.features.galaxy_ids.front());
    EXPECT_EQ(file.cluster_labels, rec.cluster_labels);
    const auto eval = evaluate_labels(file.true_labels, file.cluster_labels, rec.k);
    EXPECT_EQ(eval.weighted.f1, rec.weighted.f1);
    EXPECT_EQ(eval.mapping, rec.mapping);
}

TEST(Config, JsonOverlayAndValidation)
{
    ExperimentConfig cfg;
    apply_config_json(nlohmann::json::parse(R"({"methods":["kmeans","ward"],"seeds":[1,2],"threshold":0.25,
        "questions":["bar"],"max_iter":50,"out":"x","workers":2,"format":"tables"})"),
                      cfg);
    EXPECT_EQ(cfg.methods, (std::vector<Method>{Method::KMeans, Method::Agglomerative}));
    EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{1, 2}));
    EXPECT_EQ(cfg.threshold, 0.25);
    EXPECT_EQ(cfg.max_iter, 50);
    EXPECT_EQ(cfg.format, ReportFormat::Tables);
    EXPECT_THROW(apply_config_json(nlohmann::json::parse(R"({"bogus":1})"), cfg), std::invalid_argument);

    ExperimentConfig bad;
    bad.seeds.clear();
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad.methods = {Method::Agglomerative};
    EXPECT_NO_THROW(bad.validate());
    bad.threshold = 2.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    EXPECT_EQ(ExperimentConfig{}.seeds.size(), 10u);
}
