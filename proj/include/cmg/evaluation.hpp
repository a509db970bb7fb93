#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmg/corpus.hpp"
#include "cmg/preprocess.hpp"

namespace cmg {

struct BleuReport {
  double bleu = 0.0;                        // [0, 100]
  std::array<double, 4> precisions = {0, 0, 0, 0};
  double brevity_penalty = 1.0;
  size_t candidate_length = 0;
  size_t reference_length = 0;
};

// Corpus-level BLEU-4: modified (clipped) n-gram precisions summed over all
// pairs, uniform 1/4 weights, brevity penalty exp(1 - r/c) when c <= r.
// Unsmoothed, any p_n = 0 makes the score 0. With smooth set, numerator and
// denominator of p_n gain +1 for n >= 2.
BleuReport bleu_corpus(const std::vector<TokenSeq>& candidates,
                       const std::vector<TokenSeq>& references, bool smooth);

enum class Bucket { small, medium, large };

const char* bucket_name(Bucket bucket);

struct BucketSpec {
  size_t small_max = 49;   // token counts <= this are small
  size_t medium_max = 75;  // token counts <= this (and > small_max) are medium
};

Bucket bucket_assign(const TokenSeq& diff_tokens, const BucketSpec& spec);
Bucket bucket_for_count(size_t token_count, const BucketSpec& spec);

// One model's scores: overall plus per-bucket where the bucket is non-empty.
struct ModelReport {
  std::string model;
  BleuReport overall;
  std::array<std::optional<BleuReport>, 3> by_bucket;  // [small,medium,large]
  std::array<size_t, 3> bucket_counts = {0, 0, 0};
};

// Scores generated messages against the test corpus references, bucketing
// each pair by the raw diff's whitespace token count.
ModelReport evaluate_run(const ParallelCorpus& test_corpus,
                         const std::vector<std::string>& generated,
                         std::string model_name, const BucketSpec& spec,
                         bool smooth);

// Machine-readable report: one JSON object per line, one line per
// model x bucket (bucket "overall" included).
std::string report_jsonl(const std::vector<ModelReport>& reports);

// Human-readable aligned table, rows ordered by descending overall BLEU.
std::string report_table(const std::vector<ModelReport>& reports);

struct ReviewRow {
  Bucket bucket = Bucket::small;
  size_t test_index = 0;
};

struct ReviewSample {
  std::vector<ReviewRow> rows;
  // set when a bucket had fewer rows than requested (all of it was taken)
  std::array<bool, 3> short_bucket = {false, false, false};
};

// Deterministic per-bucket uniform sample of test rows for manual ranking.
ReviewSample sample_for_manual_review(const ParallelCorpus& test_corpus,
                                      size_t per_bucket, uint64_t seed,
                                      const BucketSpec& spec);

// Tab-separated review sheet: bucket, test index, diff, reference, one
// column per model, then blank rank/comments columns. Tabs inside cell text
// become spaces.
std::string review_sheet_tsv(
    const ParallelCorpus& test_corpus, const ReviewSample& sample,
    const std::vector<std::pair<std::string, const std::vector<std::string>*>>&
        model_outputs);

}  // namespace cmg
