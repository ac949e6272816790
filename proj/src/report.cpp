#include "galclust/report.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "galclust/ingest.hpp"

namespace galclust {

namespace {

enum class Better { Higher, Lower };

std::string format_value(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

nlohmann::json scores_json(const ClassScore& s)
{
    nlohmann::json undefined = nlohmann::json::array();
    if (s.precision_undefined) {
        undefined.push_back("precision");
    }
    if (s.recall_undefined) {
        undefined.push_back("recall");
    }
    if (s.f1_undefined) {
        undefined.push_back("f1");
    }
    return {{"precision", s.precision},
            {"recall", s.recall},
            {"f1", s.f1},
            {"support", s.support},
            {"undefined", undefined}};
}

nlohmann::json seed_json(const CellRecord& rec)
{
    return rec.seed ? nlohmann::json(*rec.seed) : nlohmann::json(nullptr);
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed while writing " + path.string());
    }
}

std::string slug(const std::string& s)
{
    std::string out;
    for (const char c : s) {
        out.push_back((std::isalnum(static_cast<unsigned char>(c)) != 0) ? c : '-');
    }
    return out;
}

// Appends one markdown table. `value_of` returns nullopt for cells without results.
template <typename ValueOf>
void append_table(std::ostringstream& out, const std::string& title, const ExperimentResults& results,
                  ValueOf value_of, Better better, int decimals, bool total_row)
{
    const auto& methods = results.config.methods;
    out << "## " << title << "\n\n| Question |";
    for (const Method m : methods) {
        out << ' ' << method_display_name(m) << " |";
    }
    out << "\n|---|";
    for (std::size_t i = 0; i < methods.size(); ++i) {
        out << "---|";
    }
    out << '\n';

    std::vector<double> totals(methods.size(), 0.0);
    for (const auto& question : results.questions) {
        std::vector<std::optional<double>> row;
        for (const Method m : methods) {
            const auto it = std::find_if(results.summaries.begin(), results.summaries.end(), [&](const auto& s) {
                return s.question == question && s.method == m;
            });
            row.push_back(it == results.summaries.end() ? std::nullopt : value_of(*it));
        }
        std::optional<double> best;
        std::optional<double> worst;
        for (const auto& v : row) {
            if (!v) {
                continue;
            }
            const bool improves = better == Better::Higher ? (!best || *v > *best) : (!best || *v < *best);
            const bool degrades = better == Better::Higher ? (!worst || *v < *worst) : (!worst || *v > *worst);
            if (improves) {
                best = v;
            }
            if (degrades) {
                worst = v;
            }
        }
        const bool rank = best && worst && *best != *worst;
        out << "| " << question << " |";
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (!row[i]) {
                out << " n/a |";
                continue;
            }
            totals[i] += *row[i];
            const std::string text = format_value(*row[i], decimals);
            if (rank && *row[i] == *best) {
                out << " **" << text << "** |";
            } else if (rank && *row[i] == *worst) {
                out << " <u>" << text << "</u> |";
            } else {
                out << ' ' << text << " |";
            }
        }
        out << '\n';
    }
    if (total_row) {
        out << "| **Total Time** |";
        for (const double t : totals) {
            out << ' ' << format_value(t, decimals) << " |";
        }
        out << '\n';
    }
    out << '\n';
}

} // namespace

nlohmann::json structured_report(const ExperimentResults& results)
{
    nlohmann::json records = nlohmann::json::array();
    for (const auto& rec : results.records) {
        nlohmann::json r = {
            {"question", rec.question},
            {"method", std::string(method_key(rec.method))},
            {"seed", seed_json(rec)},
            {"k", rec.k},
            {"support", rec.support},
            {"ok", rec.ok},
        };
        if (!rec.ok) {
            r["error"] = rec.error;
            records.push_back(std::move(r));
            continue;
        }
        nlohmann::json per_class = nlohmann::json::array();
        for (const auto& s : rec.per_class.classes) {
            per_class.push_back(scores_json(s));
        }
        r["objective"] = rec.objective;
        r["iterations"] = rec.iterations;
        r["converged"] = rec.converged;
        r["labels_digest"] = rec.labels_digest;
        r["mapping"] = rec.mapping.mapping;
        r["confusion"] = rec.confusion.rows();
        r["weighted"] = {{"precision", rec.weighted.precision},
                         {"recall", rec.weighted.recall},
                         {"f1", rec.weighted.f1},
                         {"support", rec.weighted.support}};
        r["per_class"] = per_class;
        records.push_back(std::move(r));
    }

    nlohmann::json summaries = nlohmann::json::array();
    for (const auto& s : results.summaries) {
        summaries.push_back({
            {"question", s.question},
            {"method", std::string(method_key(s.method))},
            {"runs", s.runs},
            {"failures", s.failures},
            {"precision", {{"mean", s.precision.mean}, {"std", s.precision.stddev}}},
            {"recall", {{"mean", s.recall.mean}, {"std", s.recall.stddev}}},
            {"f1", {{"mean", s.f1.mean}, {"std", s.f1.stddev}}},
        });
    }

    return {{"config", config_to_json(results.config)},
            {"questions", results.questions},
            {"records", records},
            {"summaries", summaries}};
}

nlohmann::json timing_report(const ExperimentResults& results)
{
    nlohmann::json records = nlohmann::json::array();
    for (const auto& rec : results.records) {
        records.push_back({{"question", rec.question},
                           {"method", std::string(method_key(rec.method))},
                           {"seed", seed_json(rec)},
                           {"wall_time", rec.ok ? nlohmann::json(rec.wall_time) : nlohmann::json(nullptr)}});
    }
    nlohmann::json summaries = nlohmann::json::array();
    for (const auto& s : results.summaries) {
        summaries.push_back({{"question", s.question},
                             {"method", std::string(method_key(s.method))},
                             {"mean_wall_time", s.mean_wall_time}});
    }
    return {{"workers", results.config.workers}, {"records", records}, {"summaries", summaries}};
}

std::string render_tables(const ExperimentResults& results)
{
    std::ostringstream out;
    out << "# Clustering results\n\n"
        << "Best value per row in **bold**, worst <u>underlined</u>. Metrics are support-weighted means over "
        << results.config.seeds.size() << " seeds for the stochastic methods.\n"
        << "Wall times measured with " << results.config.workers
        << " worker(s); co-scheduled runs can inflate them.\n\n";
    const auto runs = [](const QuestionResult& s) { return s.runs > 0; };
    append_table(
        out, "Average Clustering Time (seconds)", results,
        [&](const QuestionResult& s) { return runs(s) ? std::optional(s.mean_wall_time) : std::nullopt; },
        Better::Lower, 3, true);
    append_table(
        out, "Precision", results,
        [&](const QuestionResult& s) { return runs(s) ? std::optional(s.precision.mean) : std::nullopt; },
        Better::Higher, 3, false);
    append_table(
        out, "Recall", results,
        [&](const QuestionResult& s) { return runs(s) ? std::optional(s.recall.mean) : std::nullopt; },
        Better::Higher, 3, false);
    append_table(
        out, "F1-Score", results,
        [&](const QuestionResult& s) { return runs(s) ? std::optional(s.f1.mean) : std::nullopt; },
        Better::Higher, 3, false);
    return out.str();
}

void emit_report(const ExperimentResults& results, const std::filesystem::path& out_dir, ReportFormat format)
{
    if (results.records.empty()) {
        throw std::invalid_argument("emit_report: no results to report");
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());
    }
    if (format == ReportFormat::Structured || format == ReportFormat::Both) {
        write_file(out_dir / "report.json", structured_report(results).dump(2) + "\n");
        write_file(out_dir / "timing.json", timing_report(results).dump(2) + "\n");
    }
    if (format == ReportFormat::Tables || format == ReportFormat::Both) {
        write_file(out_dir / "tables.md", render_tables(results));
    }
    if (results.config.save_labels) {
        const auto dir = out_dir / "labels";
        std::filesystem::create_directories(dir, ec);
        if (ec) {
            throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
        }
        for (const auto& rec : results.records) {
            if (rec.ok) {
                write_labels_file(dir / labels_file_name(rec), rec);
            }
        }
    }
}

std::string labels_file_name(const CellRecord& record)
{
    std::string name = slug(record.question) + "__" + std::string(method_key(record.method));
    if (record.seed) {
        name += "__seed" + std::to_string(*record.seed);
    }
    return name + ".csv";
}

void write_labels_file(const std::filesystem::path& path, const CellRecord& record)
{
    std::ostringstream out;
    out << "galaxy_id,true_label,cluster_label\n";
    for (std::size_t i = 0; i < record.cluster_labels.size(); ++i) {
        const std::string id = i < record.galaxy_ids.size() ? record.galaxy_ids[i] : std::to_string(i);
        out << id << ',' << record.true_labels[i] << ',' << record.cluster_labels[i] << '\n';
    }
    write_file(path, out.str());
}

LabelsFile read_labels_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IngestError(path.string(), 0, "cannot open file for reading");
    }
    LabelsFile out;
    std::string line;
    std::size_t line_no = 0;
    const auto parse_int = [&](std::string_view field, std::size_t row) {
        int value = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty() || value < 0) {
            throw IngestError(path.string(), row, "invalid label '" + std::string(field) + "'");
        }
        return value;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || (line_no == 1 && line.rfind("galaxy_id", 0) == 0)) {
            continue;
        }
        const auto first = line.find(',');
        const auto second = first == std::string::npos ? first : line.find(',', first + 1);
        if (second == std::string::npos || line.find(',', second + 1) != std::string::npos) {
            throw IngestError(path.string(), line_no, "expected three columns");
        }
        const std::string_view view(line);
        out.galaxy_ids.emplace_back(view.substr(0, first));
        out.true_labels.push_back(parse_int(view.substr(first + 1, second - first - 1), line_no));
        out.cluster_labels.push_back(parse_int(view.substr(second + 1), line_no));
    }
    return out;
}

} // namespace galclust
