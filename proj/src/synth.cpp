#include "galclust/synth.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "galclust/rng.hpp"

namespace galclust {

namespace {

constexpr int kCenterAttempts = 10000;

std::string galaxy_id(std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "G%07zu", i);
    return buf;
}

// Centres drawn from N(0, s^2 I) with rejection until pairwise separated.
Matrix place_centers(int k, int d, double separation, Rng& rng)
{
    const auto kk = static_cast<std::size_t>(k);
    const auto dd = static_cast<std::size_t>(d);
    Matrix centers(kk, dd);
    // Scale so that a fresh draw typically clears the separation bound.
    const double scale = separation * std::max(1.0, std::pow(static_cast<double>(k), 1.0 / d)) /
                         std::sqrt(static_cast<double>(d)) * 2.0;
    const double min_sq = separation * separation;
    for (std::size_t c = 0; c < kk; ++c) {
        int attempt = 0;
        while (true) {
            if (++attempt > kCenterAttempts) {
                throw std::runtime_error("synth_blobs: could not place " + std::to_string(k) +
                                         " centres with the requested separation");
            }
            auto center = centers.row(c);
            for (auto& v : center) {
                v = scale * rng.normal();
            }
            bool ok = true;
            for (std::size_t o = 0; o < c && ok; ++o) {
                ok = squared_distance(center, centers.row(o)) >= min_sq;
            }
            if (ok) {
                break;
            }
        }
    }
    return centers;
}

} // namespace

BlobData synth_blobs(int n, int k, int d, double separation, double spread, std::uint64_t seed)
{
    if (k < 1 || n < k) {
        throw std::invalid_argument("synth_blobs: require n >= k >= 1");
    }
    if (d < 1) {
        throw std::invalid_argument("synth_blobs: d must be positive");
    }
    if (!(separation > 0.0) || !(spread > 0.0)) {
        throw std::invalid_argument("synth_blobs: separation and spread must be positive");
    }
    Rng rng(seed);
    const Matrix centers = place_centers(k, d, separation, rng);

    BlobData out;
    const auto nn = static_cast<std::size_t>(n);
    out.features.data = Matrix(nn, static_cast<std::size_t>(d));
    out.features.galaxy_ids.reserve(nn);
    out.labels.reserve(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        const int label = static_cast<int>(i % static_cast<std::size_t>(k));
        const auto center = centers.row(static_cast<std::size_t>(label));
        auto row = out.features.data.row(i);
        for (std::size_t f = 0; f < row.size(); ++f) {
            row[f] = center[f] + spread * rng.normal();
        }
        out.features.galaxy_ids.push_back(galaxy_id(i));
        out.labels.push_back(label);
    }
    return out;
}

QuestionSchema blob_schema(int k)
{
    Question q;
    q.name = "blobs";
    for (int c = 0; c < k; ++c) {
        q.options.push_back("class-" + std::to_string(c));
    }
    return QuestionSchema({q});
}

VoteTable blob_votes(const BlobData& blobs, int k, std::uint64_t voters)
{
    VoteTable votes;
    votes.galaxies.reserve(blobs.labels.size());
    for (std::size_t i = 0; i < blobs.labels.size(); ++i) {
        GalaxyVotes g;
        g.galaxy_id = blobs.features.galaxy_ids[i];
        g.total_classifications = voters;
        QuestionVotes qv;
        qv.answered_count = voters;
        qv.fractions.assign(static_cast<std::size_t>(k), 0.0);
        qv.fractions[static_cast<std::size_t>(blobs.labels[i])] = 1.0;
        g.questions.push_back(std::move(qv));
        votes.galaxies.push_back(std::move(g));
    }
    return votes;
}

SurveyData synth_survey(const QuestionSchema& schema, int n, int dims_per_question, double separation,
                        double spread, std::uint64_t seed)
{
    if (n < 1 || dims_per_question < 1) {
        throw std::invalid_argument("synth_survey: n and dims_per_question must be positive");
    }
    Rng rng(seed);
    const std::size_t q_count = schema.size();
    const auto block = static_cast<std::size_t>(dims_per_question);
    std::vector<Matrix> centers;
    for (const auto& q : schema.questions()) {
        centers.push_back(place_centers(static_cast<int>(q.options.size()), dims_per_question, separation, rng));
    }

    SurveyData out;
    const auto nn = static_cast<std::size_t>(n);
    out.features.data = Matrix(nn, q_count * block);
    for (std::size_t i = 0; i < nn; ++i) {
        GalaxyVotes g;
        g.galaxy_id = galaxy_id(i);
        g.total_classifications = 3 + rng.uniform_index(38);
        auto row = out.features.data.row(i);
        for (std::size_t q = 0; q < q_count; ++q) {
            const std::size_t options = schema[q].options.size();
            const auto cls = static_cast<std::size_t>(rng.uniform_index(options));
            const auto center = centers[q].row(cls);
            for (std::size_t f = 0; f < block; ++f) {
                row[q * block + f] = center[f] + spread * rng.normal();
            }

            QuestionVotes qv;
            qv.answered_count = rng.uniform_index(g.total_classifications + 1);
            qv.fractions.assign(options, 0.0);
            if (qv.answered_count > 0) {
                // Winner takes at least 0.55; the rest share the remainder.
                const double winner = 0.55 + 0.4 * rng.uniform01();
                std::vector<double> rest(options, 0.0);
                double rest_sum = 0.0;
                for (std::size_t o = 0; o < options; ++o) {
                    if (o != cls) {
                        rest[o] = rng.uniform01() + 1e-3;
                        rest_sum += rest[o];
                    }
                }
                for (std::size_t o = 0; o < options; ++o) {
                    qv.fractions[o] = o == cls ? winner : (1.0 - winner) * rest[o] / rest_sum;
                }
            }
            g.questions.push_back(std::move(qv));
        }
        out.features.galaxy_ids.push_back(g.galaxy_id);
        out.votes.galaxies.push_back(std::move(g));
    }
    return out;
}

} // namespace galclust
