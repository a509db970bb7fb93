#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "cmg/evaluation.hpp"
#include "cmg/preprocess.hpp"
#include "cmg/rng.hpp"
#include "cmg/vectorize.hpp"

namespace testutil {

// Self-deleting temp directory.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

// Brute-force corpus BLEU that materializes every n-gram as an explicit
// token-vector and counts by scanning, sharing no code with the library.
cmg::BleuReport bleu_oracle(const std::vector<cmg::TokenSeq>& candidates,
                            const std::vector<cmg::TokenSeq>& references,
                            bool smooth);

// Brute-force TF-IDF of one document under the pinned formula, evaluated
// directly from the raw training docs (no shared counting code).
std::vector<std::pair<std::string, double>> tfidf_oracle(
    const std::vector<cmg::TokenSeq>& train_docs, const cmg::TokenSeq& doc);

// Random lowercase token from a tiny alphabet (collisions likely, which is
// what the metric oracles need).
std::string random_token(cmg::DetRng& rng, size_t max_len = 3);

cmg::TokenSeq random_tokens(cmg::DetRng& rng, size_t max_len,
                            size_t alphabet = 4);

// Deterministic synthetic git repository with the given number of commits,
// spread over topic-specific files with topic-specific message pools and
// diff sizes spanning all three size buckets. Requires git on PATH.
void build_synthetic_repo(const std::filesystem::path& dir,
                          size_t commit_count, uint64_t seed);

// Runs a binary with arguments, capturing exit code and output.
struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};
CliResult run_cli(const std::string& binary,
                  const std::vector<std::string>& args);

}  // namespace testutil
