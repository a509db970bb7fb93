#include "cmg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "cmg/errors.hpp"
#include "cmg/fileio.hpp"
#include "cmg/rng.hpp"

#include "json.hpp"

namespace cmg {

namespace {

// n-gram key: tokens joined with an unprintable separator. Token text never
// contains 0x1f (whitespace-split input), so the join is collision-free.
std::string ngram_key(const TokenSeq& tokens, size_t start, size_t n) {
  std::string key;
  for (size_t i = 0; i < n; ++i) {
    if (i) key += '\x1f';
    key += tokens[start + i];
  }
  return key;
}

}  // namespace

BleuReport bleu_corpus(const std::vector<TokenSeq>& candidates,
                       const std::vector<TokenSeq>& references, bool smooth) {
  if (candidates.size() != references.size()) {
    throw Error(Err::LengthMismatch,
                strf("%zu candidates vs %zu references", candidates.size(),
                     references.size()));
  }
  if (candidates.empty()) {
    throw Error(Err::EmptyInput, "bleu needs at least one pair");
  }

  BleuReport report;
  std::array<size_t, 4> matched = {0, 0, 0, 0};
  std::array<size_t, 4> total = {0, 0, 0, 0};
  std::unordered_map<std::string, size_t> cand_counts, ref_counts;

  for (size_t i = 0; i < candidates.size(); ++i) {
    const TokenSeq& cand = candidates[i];
    const TokenSeq& ref = references[i];
    report.candidate_length += cand.size();
    report.reference_length += ref.size();
    for (size_t n = 1; n <= 4; ++n) {
      if (cand.size() < n) continue;
      cand_counts.clear();
      ref_counts.clear();
      for (size_t s = 0; s + n <= cand.size(); ++s) {
        ++cand_counts[ngram_key(cand, s, n)];
      }
      for (size_t s = 0; s + n <= ref.size(); ++s) {
        ++ref_counts[ngram_key(ref, s, n)];
      }
      for (const auto& [gram, count] : cand_counts) {
        total[n - 1] += count;
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) {
          matched[n - 1] += std::min(count, it->second);
        }
      }
    }
  }

  bool any_zero = false;
  double log_sum = 0.0;
  for (size_t n = 0; n < 4; ++n) {
    double num = static_cast<double>(matched[n]);
    double den = static_cast<double>(total[n]);
    if (smooth && n >= 1) {
      num += 1.0;
      den += 1.0;
    }
    double p = den > 0.0 ? num / den : 0.0;
    report.precisions[n] = p;
    if (p > 0.0) {
      log_sum += 0.25 * std::log(p);
    } else {
      any_zero = true;
    }
  }

  const double c = static_cast<double>(report.candidate_length);
  const double r = static_cast<double>(report.reference_length);
  if (report.candidate_length == 0) {
    report.brevity_penalty = report.reference_length == 0 ? 1.0 : 0.0;
  } else {
    report.brevity_penalty = c > r ? 1.0 : std::exp(1.0 - r / c);
  }
  report.bleu = any_zero
                    ? 0.0
                    : 100.0 * report.brevity_penalty * std::exp(log_sum);
  return report;
}

const char* bucket_name(Bucket bucket) {
  switch (bucket) {
    case Bucket::small:
      return "small";
    case Bucket::medium:
      return "medium";
    case Bucket::large:
      return "large";
  }
  return "?";
}

Bucket bucket_for_count(size_t token_count, const BucketSpec& spec) {
  if (token_count <= spec.small_max) return Bucket::small;
  if (token_count <= spec.medium_max) return Bucket::medium;
  return Bucket::large;
}

Bucket bucket_assign(const TokenSeq& diff_tokens, const BucketSpec& spec) {
  return bucket_for_count(diff_tokens.size(), spec);
}

ModelReport evaluate_run(const ParallelCorpus& test_corpus,
                         const std::vector<std::string>& generated,
                         std::string model_name, const BucketSpec& spec,
                         bool smooth) {
  if (generated.size() != test_corpus.examples.size()) {
    throw Error(Err::LengthMismatch,
                strf("%zu generated messages vs %zu test examples",
                     generated.size(), test_corpus.examples.size()));
  }

  std::vector<TokenSeq> cands, refs;
  cands.reserve(generated.size());
  refs.reserve(generated.size());
  std::array<std::vector<TokenSeq>, 3> bucket_cands, bucket_refs;

  ModelReport report;
  report.model = std::move(model_name);
  for (size_t i = 0; i < generated.size(); ++i) {
    TokenSeq cand = split_whitespace(generated[i]);
    TokenSeq ref = split_whitespace(test_corpus.examples[i].msg_text);
    size_t b = static_cast<size_t>(bucket_for_count(
        diff_token_count(test_corpus.examples[i].diff_text), spec));
    ++report.bucket_counts[b];
    bucket_cands[b].push_back(cand);
    bucket_refs[b].push_back(ref);
    cands.push_back(std::move(cand));
    refs.push_back(std::move(ref));
  }

  report.overall = bleu_corpus(cands, refs, smooth);
  for (size_t b = 0; b < 3; ++b) {
    if (!bucket_cands[b].empty()) {
      report.by_bucket[b] = bleu_corpus(bucket_cands[b], bucket_refs[b],
                                        smooth);
    }
  }
  return report;
}

namespace {

nlohmann::json bucket_record(const std::string& model, const char* bucket,
                             const BleuReport& r, size_t examples) {
  return nlohmann::json{
      {"model", model},
      {"bucket", bucket},
      {"examples", examples},
      {"bleu", r.bleu},
      {"p1", r.precisions[0]},
      {"p2", r.precisions[1]},
      {"p3", r.precisions[2]},
      {"p4", r.precisions[3]},
      {"bp", r.brevity_penalty},
      {"candidate_length", r.candidate_length},
      {"reference_length", r.reference_length},
  };
}

std::vector<const ModelReport*> by_descending_bleu(
    const std::vector<ModelReport>& reports) {
  std::vector<const ModelReport*> order;
  order.reserve(reports.size());
  for (const ModelReport& r : reports) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const ModelReport* a, const ModelReport* b) {
                     return a->overall.bleu > b->overall.bleu;
                   });
  return order;
}

}  // namespace

std::string report_jsonl(const std::vector<ModelReport>& reports) {
  std::string out;
  for (const ModelReport* r : by_descending_bleu(reports)) {
    size_t test_size =
        r->bucket_counts[0] + r->bucket_counts[1] + r->bucket_counts[2];
    out += bucket_record(r->model, "overall", r->overall, test_size).dump();
    out += '\n';
    for (size_t b = 0; b < 3; ++b) {
      if (r->by_bucket[b]) {
        out += bucket_record(r->model, bucket_name(static_cast<Bucket>(b)),
                             *r->by_bucket[b], r->bucket_counts[b])
                   .dump();
        out += '\n';
      }
    }
  }
  return out;
}

std::string report_table(const std::vector<ModelReport>& reports) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"model", "bucket", "examples", "bleu", "p1", "p2", "p3",
                  "p4", "bp"});
  auto fmt2 = [](double v) { return strf("%.2f", v); };
  auto fmt4 = [](double v) { return strf("%.4f", v); };
  for (const ModelReport* r : by_descending_bleu(reports)) {
    size_t test_size =
        r->bucket_counts[0] + r->bucket_counts[1] + r->bucket_counts[2];
    rows.push_back({r->model, "overall", strf("%zu", test_size),
                    fmt2(r->overall.bleu), fmt4(r->overall.precisions[0]),
                    fmt4(r->overall.precisions[1]),
                    fmt4(r->overall.precisions[2]),
                    fmt4(r->overall.precisions[3]),
                    fmt4(r->overall.brevity_penalty)});
    for (size_t b = 0; b < 3; ++b) {
      if (!r->by_bucket[b]) continue;
      const BleuReport& br = *r->by_bucket[b];
      rows.push_back({r->model, bucket_name(static_cast<Bucket>(b)),
                      strf("%zu", r->bucket_counts[b]), fmt2(br.bleu),
                      fmt4(br.precisions[0]), fmt4(br.precisions[1]),
                      fmt4(br.precisions[2]), fmt4(br.precisions[3]),
                      fmt4(br.brevity_penalty)});
    }
  }

  std::vector<size_t> widths(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  }
  std::string out;
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += "  ";
      out += row[i];
      if (i + 1 < row.size()) {
        out.append(widths[i] - row[i].size(), ' ');
      }
    }
    out += '\n';
  }
  return out;
}

ReviewSample sample_for_manual_review(const ParallelCorpus& test_corpus,
                                      size_t per_bucket, uint64_t seed,
                                      const BucketSpec& spec) {
  if (per_bucket < 1) {
    throw Error(Err::Config, "per-bucket sample size must be at least 1");
  }
  std::array<std::vector<size_t>, 3> members;
  for (size_t i = 0; i < test_corpus.examples.size(); ++i) {
    size_t b = static_cast<size_t>(bucket_for_count(
        diff_token_count(test_corpus.examples[i].diff_text), spec));
    members[b].push_back(i);
  }

  ReviewSample sample;
  DetRng rng(seed);
  for (size_t b = 0; b < 3; ++b) {
    if (members[b].size() < per_bucket) sample.short_bucket[b] = true;
    std::vector<size_t> picks =
        rng.sample_indices(members[b].size(), per_bucket);
    for (size_t p : picks) {
      sample.rows.push_back({static_cast<Bucket>(b), members[b][p]});
    }
  }
  return sample;
}

namespace {

std::string untab(std::string text) {
  std::replace(text.begin(), text.end(), '\t', ' ');
  return text;
}

}  // namespace

std::string review_sheet_tsv(
    const ParallelCorpus& test_corpus, const ReviewSample& sample,
    const std::vector<std::pair<std::string, const std::vector<std::string>*>>&
        model_outputs) {
  for (const auto& [name, outputs] : model_outputs) {
    if (outputs->size() != test_corpus.examples.size()) {
      throw Error(Err::LengthMismatch,
                  strf("model '%s' has %zu outputs for %zu test examples",
                       name.c_str(), outputs->size(),
                       test_corpus.examples.size()));
    }
  }
  std::string out = "bucket\ttest_index\tdiff\treference";
  for (const auto& [name, _] : model_outputs) {
    out += '\t';
    out += untab(name);
  }
  out += "\trank\tcomments\n";
  for (const ReviewRow& row : sample.rows) {
    const Example& ex = test_corpus.examples[row.test_index];
    out += bucket_name(row.bucket);
    out += '\t';
    out += strf("%zu", row.test_index);
    out += '\t';
    out += untab(ex.diff_text);
    out += '\t';
    out += untab(ex.msg_text);
    for (const auto& [_, outputs] : model_outputs) {
      out += '\t';
      out += untab((*outputs)[row.test_index]);
    }
    out += "\t\t\n";
  }
  return out;
}

}  // namespace cmg
