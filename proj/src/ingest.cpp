#include "galclust/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "galclust/rng.hpp"

namespace galclust {

namespace {

constexpr double kFractionSumTolerance = 1e-6;

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

void split_fields(std::string_view line, std::vector<std::string_view>& fields)
{
    fields.clear();
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            return;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

std::optional<double> parse_double(std::string_view field)
{
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        return std::nullopt;
    }
    return value;
}

std::optional<std::uint64_t> parse_count(std::string_view field)
{
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        return std::nullopt;
    }
    return value;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IngestError(path.string(), 0, "cannot open file for reading");
    }
    return in;
}

void append_double(std::string& out, double value)
{
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    out.append(buffer, ptr);
}

} // namespace

IngestError::IngestError(const std::string& source, std::size_t row, const std::string& what)
    : std::runtime_error(source + (row > 0 ? ":" + std::to_string(row) : std::string{}) + ": " + what),
      source_(source),
      row_(row)
{
}

FeatureMatrix FeatureMatrix::subset(const std::vector<std::size_t>& rows) const
{
    FeatureMatrix out;
    out.galaxy_ids.reserve(rows.size());
    out.data = Matrix(rows.size(), d());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.galaxy_ids.push_back(galaxy_ids.at(rows[i]));
        const auto src = data.row(rows[i]);
        std::copy(src.begin(), src.end(), out.data.row(i).begin());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Features

FeatureMatrix parse_features(std::istream& in, const std::string& source)
{
    std::vector<std::string> ids;
    std::vector<double> values;
    std::unordered_set<std::string> seen;
    std::size_t width = 0;
    bool width_known = false;

    std::string line;
    std::vector<std::string_view> fields;
    std::size_t line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        split_fields(line, fields);
        if (first_content_line) {
            first_content_line = false;
            if (fields.size() >= 2 && !parse_double(fields[1])) {
                continue; // header row
            }
        }
        if (fields.size() < 2) {
            throw IngestError(source, line_no, "row has no feature columns");
        }
        const std::size_t row_width = fields.size() - 1;
        if (!width_known) {
            width = row_width;
            width_known = true;
        } else if (row_width != width) {
            throw IngestError(source, line_no,
                              "ragged row: expected " + std::to_string(width) + " features, found " +
                                  std::to_string(row_width));
        }
        std::string id(fields[0]);
        if (id.empty()) {
            throw IngestError(source, line_no, "empty galaxy id");
        }
        if (!seen.insert(id).second) {
            throw IngestError(source, line_no, "duplicate galaxy id '" + id + "'");
        }
        for (std::size_t c = 1; c < fields.size(); ++c) {
            const auto value = parse_double(fields[c]);
            if (!value) {
                throw IngestError(source, line_no,
                                  "non-numeric value '" + std::string(fields[c]) + "' in column " +
                                      std::to_string(c + 1));
            }
            if (!std::isfinite(*value)) {
                throw IngestError(source, line_no,
                                  "non-finite value '" + std::string(fields[c]) + "' in column " +
                                      std::to_string(c + 1));
            }
            values.push_back(*value);
        }
        ids.push_back(std::move(id));
    }

    FeatureMatrix out;
    out.data = Matrix(ids.size(), width, std::move(values));
    out.galaxy_ids = std::move(ids);
    return out;
}

FeatureMatrix load_features(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return parse_features(in, path.string());
}

void write_features(std::ostream& out, const FeatureMatrix& features)
{
    std::string line;
    for (std::size_t r = 0; r < features.n(); ++r) {
        line = features.galaxy_ids[r];
        for (const double v : features.data.row(r)) {
            line.push_back(',');
            append_double(line, v);
        }
        line.push_back('\n');
        out << line;
    }
}

void write_features(const std::filesystem::path& path, const FeatureMatrix& features)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    write_features(out, features);
}

// ---------------------------------------------------------------------------
// Schema

QuestionSchema::QuestionSchema(std::vector<Question> questions) : questions_(std::move(questions))
{
    std::unordered_set<std::string> names;
    for (const auto& q : questions_) {
        if (!names.insert(q.name).second) {
            throw std::invalid_argument("duplicate question name '" + q.name + "'");
        }
        if (q.options.size() < 2) {
            throw std::invalid_argument("question '" + q.name + "' needs at least two options");
        }
    }
}

std::size_t QuestionSchema::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < questions_.size(); ++i) {
        if (questions_[i].name == name) {
            return i;
        }
    }
    throw std::out_of_range("unknown question '" + std::string(name) + "'");
}

bool QuestionSchema::contains(std::string_view name) const noexcept
{
    return std::any_of(questions_.begin(), questions_.end(),
                       [&](const Question& q) { return q.name == name; });
}

QuestionSchema parse_schema(std::string_view json_text, const std::string& source)
{
    try {
        const auto doc = nlohmann::json::parse(json_text);
        std::vector<Question> questions;
        for (const auto& entry : doc.at("questions")) {
            Question q;
            q.name = entry.at("name").get<std::string>();
            q.options = entry.at("options").get<std::vector<std::string>>();
            questions.push_back(std::move(q));
        }
        return QuestionSchema(std::move(questions));
    } catch (const nlohmann::json::exception& e) {
        throw IngestError(source, 0, std::string("invalid schema: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw IngestError(source, 0, std::string("invalid schema: ") + e.what());
    }
}

QuestionSchema load_schema(const std::filesystem::path& path)
{
    auto in = open_input(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_schema(buffer.str(), path.string());
}

std::string schema_to_json(const QuestionSchema& schema)
{
    nlohmann::json doc;
    doc["questions"] = nlohmann::json::array();
    for (const auto& q : schema.questions()) {
        doc["questions"].push_back({{"name", q.name}, {"options", q.options}});
    }
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Votes

VoteTable parse_votes(std::istream& in, const QuestionSchema& schema, const std::string& source)
{
    std::size_t expected = 2;
    for (const auto& q : schema.questions()) {
        expected += 1 + q.options.size();
    }

    VoteTable table;
    std::unordered_set<std::string> seen;
    std::string line;
    std::vector<std::string_view> fields;
    std::size_t line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        split_fields(line, fields);
        if (first_content_line) {
            first_content_line = false;
            if (fields.size() >= 2 && !parse_count(fields[1])) {
                continue; // header row
            }
        }
        if (fields.size() != expected) {
            throw IngestError(source, line_no,
                              "expected " + std::to_string(expected) + " columns for this schema, found " +
                                  std::to_string(fields.size()));
        }

        GalaxyVotes g;
        g.galaxy_id = std::string(fields[0]);
        if (g.galaxy_id.empty()) {
            throw IngestError(source, line_no, "empty galaxy id");
        }
        if (!seen.insert(g.galaxy_id).second) {
            throw IngestError(source, line_no, "duplicate galaxy id '" + g.galaxy_id + "'");
        }
        const auto total = parse_count(fields[1]);
        if (!total) {
            throw IngestError(source, line_no, "invalid total_classifications '" + std::string(fields[1]) + "'");
        }
        g.total_classifications = *total;

        std::size_t col = 2;
        for (const auto& q : schema.questions()) {
            QuestionVotes qv;
            const auto answered = parse_count(fields[col]);
            if (!answered) {
                throw IngestError(source, line_no,
                                  "invalid answered count '" + std::string(fields[col]) + "' for '" + q.name + "'");
            }
            if (*answered > g.total_classifications) {
                throw IngestError(source, line_no,
                                  "answered count exceeds total classifications for '" + q.name + "'");
            }
            qv.answered_count = *answered;
            ++col;
            double sum = 0.0;
            for (std::size_t o = 0; o < q.options.size(); ++o, ++col) {
                auto value = parse_double(fields[col]);
                // Unanswered questions may carry blank or NaN fractions in survey exports.
                if (qv.answered_count == 0 && (fields[col].empty() || (value && std::isnan(*value)))) {
                    value = 0.0;
                }
                if (!value || !(*value >= 0.0 && *value <= 1.0)) {
                    throw IngestError(source, line_no,
                                      "vote fraction '" + std::string(fields[col]) + "' for '" + q.name +
                                          "' is not in [0,1]");
                }
                qv.fractions.push_back(*value);
                sum += *value;
            }
            if (qv.answered_count > 0 && std::abs(sum - 1.0) > kFractionSumTolerance) {
                throw IngestError(source, line_no, "vote fractions for '" + q.name + "' do not sum to 1");
            }
            g.questions.push_back(std::move(qv));
        }
        table.galaxies.push_back(std::move(g));
    }
    return table;
}

VoteTable load_votes(const std::filesystem::path& path, const QuestionSchema& schema)
{
    auto in = open_input(path);
    return parse_votes(in, schema, path.string());
}

void write_votes(std::ostream& out, const VoteTable& votes, const QuestionSchema& schema)
{
    std::string line = "galaxy_id,total_classifications";
    for (const auto& q : schema.questions()) {
        line += "," + q.name + ":answered";
        for (const auto& o : q.options) {
            line += "," + q.name + ":" + o;
        }
    }
    out << line << '\n';
    for (const auto& g : votes.galaxies) {
        line = g.galaxy_id + "," + std::to_string(g.total_classifications);
        for (const auto& qv : g.questions) {
            line += "," + std::to_string(qv.answered_count);
            for (const double f : qv.fractions) {
                line.push_back(',');
                append_double(line, f);
            }
        }
        out << line << '\n';
    }
}

VoteTable filter_min_classifications(const VoteTable& votes, std::uint64_t min_count)
{
    VoteTable out;
    for (const auto& g : votes.galaxies) {
        if (g.total_classifications >= min_count) {
            out.galaxies.push_back(g);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Split, labels, eligibility

SplitResult split(const std::vector<std::string>& ids, double test_fraction, std::uint64_t seed)
{
    if (ids.empty()) {
        throw std::invalid_argument("split: empty id list");
    }
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("split: test_fraction must lie in (0, 1)");
    }
    const std::size_t n = ids.size();
    // Train size is rounded down and the test set takes the remainder, which
    // reproduces 249,581 -> 199,664 / 49,917 at an 80/20 split.
    const auto train_count = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * (1.0 - test_fraction) + 1e-9));
    const std::size_t test_count = n - train_count;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_index(i + 1));
        std::swap(order[i], order[j]);
    }
    std::vector<bool> in_test(n, false);
    for (std::size_t i = 0; i < test_count; ++i) {
        in_test[order[i]] = true;
    }

    SplitResult result;
    result.train.reserve(train_count);
    result.test.reserve(test_count);
    for (std::size_t i = 0; i < n; ++i) {
        (in_test[i] ? result.test : result.train).push_back(ids[i]);
    }
    return result;
}

HardLabelTable discretize(const VoteTable& votes, const QuestionSchema& schema)
{
    HardLabelTable out;
    out.galaxy_ids.reserve(votes.size());
    out.labels.reserve(votes.size());
    for (const auto& g : votes.galaxies) {
        if (g.questions.size() != schema.size()) {
            throw std::invalid_argument("discretize: galaxy '" + g.galaxy_id + "' has " +
                                        std::to_string(g.questions.size()) + " questions, schema has " +
                                        std::to_string(schema.size()));
        }
        std::vector<std::optional<int>> row;
        row.reserve(schema.size());
        for (std::size_t q = 0; q < schema.size(); ++q) {
            const auto& qv = g.questions[q];
            if (qv.fractions.size() != schema[q].options.size()) {
                throw std::invalid_argument("discretize: option count mismatch for '" + schema[q].name +
                                            "' on galaxy '" + g.galaxy_id + "'");
            }
            if (qv.answered_count == 0) {
                row.emplace_back(std::nullopt);
                continue;
            }
            // max_element returns the first maximum, giving the lowest-index tie-break.
            const auto best = std::max_element(qv.fractions.begin(), qv.fractions.end());
            row.emplace_back(static_cast<int>(best - qv.fractions.begin()));
        }
        out.galaxy_ids.push_back(g.galaxy_id);
        out.labels.push_back(std::move(row));
    }
    return out;
}

std::vector<std::size_t> eligible_rows(const VoteTable& votes, std::size_t question, double threshold)
{
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("eligibility threshold must lie in [0, 1]");
    }
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < votes.galaxies.size(); ++i) {
        const auto& g = votes.galaxies[i];
        if (g.total_classifications == 0) {
            continue;
        }
        const double share = static_cast<double>(g.questions.at(question).answered_count) /
                             static_cast<double>(g.total_classifications);
        if (share >= threshold) {
            rows.push_back(i);
        }
    }
    return rows;
}

std::vector<std::string> eligible_galaxies(const VoteTable& votes, const QuestionSchema& schema,
                                           std::string_view question, double threshold)
{
    std::vector<std::string> ids;
    for (const std::size_t row : eligible_rows(votes, schema.index_of(question), threshold)) {
        ids.push_back(votes.galaxies[row].galaxy_id);
    }
    return ids;
}

} // namespace galclust
