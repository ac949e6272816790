#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "galclust/matrix.hpp"

namespace galclust {

// Raised for malformed input files. Carries the 1-based line number when the
// problem is tied to a specific row (0 otherwise).
class IngestError : public std::runtime_error {
public:
    IngestError(const std::string& source, std::size_t row, const std::string& what);

    const std::string& source() const noexcept { return source_; }
    std::size_t row() const noexcept { return row_; }

private:
    std::string source_;
    std::size_t row_;
};

// n galaxies x d latent features, row order as read from file.
struct FeatureMatrix {
    std::vector<std::string> galaxy_ids;
    Matrix data;

    std::size_t n() const noexcept { return data.rows(); }
    std::size_t d() const noexcept { return data.cols(); }

    // Contiguous copy of the given rows, in the given order.
    FeatureMatrix subset(const std::vector<std::size_t>& rows) const;
};

struct Question {
    std::string name;
    std::vector<std::string> options;
};

class QuestionSchema {
public:
    QuestionSchema() = default;
    explicit QuestionSchema(std::vector<Question> questions);

    const std::vector<Question>& questions() const noexcept { return questions_; }
    std::size_t size() const noexcept { return questions_.size(); }
    const Question& operator[](std::size_t i) const { return questions_[i]; }

    // Index of the named question; throws std::out_of_range if unknown.
    std::size_t index_of(std::string_view name) const;
    bool contains(std::string_view name) const noexcept;

private:
    std::vector<Question> questions_;
};

struct QuestionVotes {
    std::vector<double> fractions;
    std::uint64_t answered_count = 0;
};

struct GalaxyVotes {
    std::string galaxy_id;
    std::uint64_t total_classifications = 0;
    std::vector<QuestionVotes> questions; // aligned with the schema
};

struct VoteTable {
    std::vector<GalaxyVotes> galaxies;

    std::size_t size() const noexcept { return galaxies.size(); }
};

struct HardLabelTable {
    std::vector<std::string> galaxy_ids;
    // labels[galaxy][question]; empty where no volunteer answered.
    std::vector<std::vector<std::optional<int>>> labels;
};

struct SplitResult {
    std::vector<std::string> train;
    std::vector<std::string> test;
};

FeatureMatrix load_features(const std::filesystem::path& path);
FeatureMatrix parse_features(std::istream& in, const std::string& source = "<stream>");
void write_features(std::ostream& out, const FeatureMatrix& features);
void write_features(const std::filesystem::path& path, const FeatureMatrix& features);

QuestionSchema load_schema(const std::filesystem::path& path);
QuestionSchema parse_schema(std::string_view json_text, const std::string& source = "<string>");
std::string schema_to_json(const QuestionSchema& schema);

VoteTable load_votes(const std::filesystem::path& path, const QuestionSchema& schema);
VoteTable parse_votes(std::istream& in, const QuestionSchema& schema, const std::string& source = "<stream>");
void write_votes(std::ostream& out, const VoteTable& votes, const QuestionSchema& schema);

VoteTable filter_min_classifications(const VoteTable& votes, std::uint64_t min_count);

SplitResult split(const std::vector<std::string>& ids, double test_fraction, std::uint64_t seed);

HardLabelTable discretize(const VoteTable& votes, const QuestionSchema& schema);

// Row indices (into votes.galaxies) of galaxies where at least `threshold` of
// the volunteers shown the galaxy answered the question. Galaxies with no
// classifications at all are never eligible.
std::vector<std::size_t> eligible_rows(const VoteTable& votes, std::size_t question, double threshold);
std::vector<std::string> eligible_galaxies(const VoteTable& votes, const QuestionSchema& schema,
                                           std::string_view question, double threshold);

} // namespace galclust
