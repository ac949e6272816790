#include "galclust/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "galclust/fcm.hpp"
#include "galclust/kmeans.hpp"
#include "galclust/ward.hpp"

namespace galclust {

namespace {

struct Task {
    std::size_t question;
    Method method;
    std::optional<std::uint64_t> seed;
};

CellRecord run_cell(const QuestionInput& q, const Task& task, const ExperimentConfig& cfg)
{
    CellRecord rec;
    rec.question = q.name;
    rec.method = task.method;
    rec.seed = task.seed;
    rec.k = q.k;
    rec.support = question_support(q.true_labels);
    try {
        if (q.true_labels.empty()) {
            throw std::runtime_error("no eligible galaxies for this question");
        }
        const ClusterRunResult run = run_method(task.method, q.features.data, q.k, task.seed.value_or(0), cfg);
        Evaluation eval = evaluate_labels(q.true_labels, run.labeling.labels, q.k, cfg.permutation_cap);
        rec.objective = run.objective;
        rec.iterations = run.iterations;
        rec.converged = run.converged;
        rec.wall_time = run.wall_time;
        rec.labels_digest = labels_digest(eval.mapped_labels);
        rec.mapping = std::move(eval.mapping);
        rec.confusion = std::move(eval.confusion);
        rec.per_class = std::move(eval.per_class);
        rec.weighted = eval.weighted;
        rec.true_labels = q.true_labels;
        rec.cluster_labels = run.labeling.labels;
        if (cfg.save_labels) {
            rec.galaxy_ids = q.features.galaxy_ids;
        }
        rec.ok = true;
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    return rec;
}

} // namespace

std::string labels_digest(const std::vector<int>& labels)
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const int label : labels) {
        auto value = static_cast<std::uint32_t>(label);
        for (int byte = 0; byte < 4; ++byte) {
            hash ^= value & 0xffU;
            hash *= 0x100000001b3ULL;
            value >>= 8;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

Evaluation evaluate_labels(const std::vector<int>& true_labels, const std::vector<int>& cluster_labels, int k,
                           std::size_t permutation_cap)
{
    Evaluation eval;
    const ConfusionMatrix raw = build_confusion(true_labels, cluster_labels, k);
    const PermutationResult best = best_permutation(raw, permutation_cap);
    eval.mapping = best.mapping;
    eval.diagonal_sum = best.diagonal_sum;
    eval.mapped_labels = apply_mapping(cluster_labels, eval.mapping);
    eval.confusion = build_confusion(true_labels, eval.mapped_labels, k);
    eval.per_class = per_class(eval.confusion);
    eval.weighted = weighted_average(eval.per_class);
    return eval;
}

ClusterRunResult run_method(Method method, const Matrix& x, int k, std::uint64_t seed, const ExperimentConfig& cfg)
{
    using Clock = std::chrono::steady_clock;
    ClusterRunResult run;
    const auto start = Clock::now();
    switch (method) {
    case Method::KMeans:
        run = kmeans(x, k, seed, cfg.max_iter).run;
        break;
    case Method::FuzzyCMeans:
        run = fcm(x, k, cfg.fuzzifier, cfg.epsilon, seed, cfg.max_iter).run;
        break;
    case Method::Agglomerative: {
        const MergeTree tree = agglomerative_ward(x);
        run.labeling = cut_tree(tree, k);
        run.objective = within_cluster_ss(tree, k);
        run.iterations = 0;
        run.converged = true;
        break;
    }
    }
    run.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return run;
}

ExperimentInputs load_inputs(const ExperimentConfig& cfg)
{
    ExperimentInputs inputs;
    inputs.schema = load_schema(cfg.schema_path);
    inputs.votes = load_votes(cfg.votes_path, inputs.schema);
    inputs.features = load_features(cfg.features_path);
    return inputs;
}

ExperimentResults run_experiment(const ExperimentConfig& cfg)
{
    ExperimentConfig resolved = cfg;
    resolved.validate();
    const ExperimentInputs inputs = load_inputs(resolved);
    return run_experiment(resolved, inputs);
}

ExperimentResults run_experiment(const ExperimentConfig& cfg, const ExperimentInputs& inputs)
{
    cfg.validate();
    const QuestionSchema& schema = inputs.schema;

    ExperimentResults results;
    results.config = cfg;
    if (cfg.questions.empty()) {
        for (const auto& q : schema.questions()) {
            results.questions.push_back(q.name);
        }
    } else {
        for (const auto& name : cfg.questions) {
            if (!schema.contains(name)) {
                throw std::invalid_argument("question '" + name + "' is not in the schema");
            }
        }
        // Keep schema order so reports are stable regardless of flag order.
        for (const auto& q : schema.questions()) {
            if (std::find(cfg.questions.begin(), cfg.questions.end(), q.name) != cfg.questions.end()) {
                results.questions.push_back(q.name);
            }
        }
    }

    const auto questions = prepare_questions(cfg, inputs, results.questions);

    std::vector<Task> tasks;
    for (std::size_t q = 0; q < questions.size(); ++q) {
        for (const Method m : cfg.methods) {
            if (is_stochastic(m)) {
                for (const auto seed : cfg.seeds) {
                    tasks.push_back({q, m, seed});
                }
            } else {
                tasks.push_back({q, m, std::nullopt});
            }
        }
    }

    results.records.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
            results.records[i] = run_cell(questions[tasks[i].question], tasks[i], cfg);
        }
    };
    const std::size_t thread_count = std::min(cfg.workers, std::max<std::size_t>(tasks.size(), 1));
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < thread_count; ++t) {
            pool.emplace_back(worker);
        }
    }

    results.summaries = summarize_records(results.records, results.questions, cfg.methods);
    return results;
}

std::vector<QuestionInput> prepare_questions(const ExperimentConfig& cfg, const ExperimentInputs& inputs,
                                             const std::vector<std::string>& question_names)
{
    const QuestionSchema& schema = inputs.schema;
    std::unordered_map<std::string, std::size_t> known;
    for (const auto& g : inputs.votes.galaxies) {
        known.emplace(g.galaxy_id, 0);
    }
    for (std::size_t r = 0; r < inputs.features.n(); ++r) {
        if (!known.contains(inputs.features.galaxy_ids[r])) {
            throw IngestError(cfg.features_path.empty() ? "<features>" : cfg.features_path.string(), r + 1,
                              "galaxy '" + inputs.features.galaxy_ids[r] + "' has no vote record");
        }
    }

    const VoteTable votes = filter_min_classifications(inputs.votes, cfg.min_classifications);
    const HardLabelTable labels = discretize(votes, schema);
    std::unordered_map<std::string, std::size_t> vote_row;
    for (std::size_t i = 0; i < votes.galaxies.size(); ++i) {
        vote_row.emplace(votes.galaxies[i].galaxy_id, i);
    }

    std::vector<QuestionInput> questions;
    for (const auto& name : question_names) {
        const std::size_t qi = schema.index_of(name);
        std::vector<bool> eligible(votes.galaxies.size(), false);
        for (const std::size_t row : eligible_rows(votes, qi, cfg.threshold)) {
            eligible[row] = true;
        }
        QuestionInput data;
        data.name = name;
        data.k = static_cast<int>(schema[qi].options.size());
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < inputs.features.n(); ++r) {
            const auto it = vote_row.find(inputs.features.galaxy_ids[r]);
            if (it == vote_row.end() || !eligible[it->second]) {
                continue;
            }
            const auto& label = labels.labels[it->second][qi];
            if (!label) {
                continue;
            }
            rows.push_back(r);
            data.true_labels.push_back(*label);
        }
        data.features = inputs.features.subset(rows);
        questions.push_back(std::move(data));
    }

    return questions;
}

std::vector<QuestionResult> summarize_records(const std::vector<CellRecord>& records,
                                              const std::vector<std::string>& questions,
                                              const std::vector<Method>& methods)
{
    std::vector<QuestionResult> out;
    for (const auto& question : questions) {
        for (const Method m : methods) {
            QuestionResult qr;
            qr.question = question;
            qr.method = m;
            std::vector<double> p;
            std::vector<double> r;
            std::vector<double> f;
            double time_sum = 0.0;
            for (const auto& rec : records) {
                if (rec.question != question || rec.method != m) {
                    continue;
                }
                if (!rec.ok) {
                    ++qr.failures;
                    continue;
                }
                p.push_back(rec.weighted.precision);
                r.push_back(rec.weighted.recall);
                f.push_back(rec.weighted.f1);
                time_sum += rec.wall_time;
            }
            qr.runs = p.size();
            qr.precision = summarize(p);
            qr.recall = summarize(r);
            qr.f1 = summarize(f);
            qr.mean_wall_time = qr.runs > 0 ? time_sum / static_cast<double>(qr.runs) : 0.0;
            out.push_back(qr);
        }
    }
    return out;
}

} // namespace galclust
