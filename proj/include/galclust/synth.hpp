#pragma once

#include <cstdint>
#include <vector>

#include "galclust/ingest.hpp"

namespace galclust {

struct BlobData {
    FeatureMatrix features;
    std::vector<int> labels;
};

// k isotropic Gaussian blobs whose centres are pairwise at least `separation`
// apart, with per-coordinate standard deviation `spread`. Row i belongs to
// blob i % k, so sizes differ by at most one.
BlobData synth_blobs(int n, int k, int d, double separation, double spread, std::uint64_t seed);

// Single-question schema ("blobs", options class-0..class-(k-1)) and a vote
// table where every galaxy was classified by `voters` volunteers who all
// answered and agreed with the blob label.
QuestionSchema blob_schema(int k);
VoteTable blob_votes(const BlobData& blobs, int k, std::uint64_t voters = 40);

struct SurveyData {
    FeatureMatrix features;
    VoteTable votes;
};

// A synthetic survey over an arbitrary schema. Each question owns a block of
// `dims_per_question` feature columns holding a blob draw for the galaxy's
// class on that question; votes carry that class as the plurality answer and
// a random share of answering volunteers, so eligibility filtering bites.
SurveyData synth_survey(const QuestionSchema& schema, int n, int dims_per_question, double separation,
                        double spread, std::uint64_t seed);

} // namespace galclust
