#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cmg/config.hpp"
#include "cmg/corpus.hpp"

namespace cmg {

// Names of the artifacts commands drop into output_dir.
namespace artifact {
inline constexpr const char* kVocab = "vocab.txt";
inline constexpr const char* kTfIdf = "tfidf.model";
inline constexpr const char* kIndex = "nn.index";
inline constexpr const char* kLr = "lr.model";
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kSnapshot = "run-config.txt";
inline constexpr const char* kStats = "stats.json";
inline constexpr const char* kGenerated = "generated.msg";
inline constexpr const char* kReportJsonl = "report.jsonl";
inline constexpr const char* kReportTable = "report.txt";
inline constexpr const char* kReviewSheet = "review.tsv";
}  // namespace artifact

// Normalizes all three splits, writes normalized token files, vocab.txt and
// stats.json into output_dir, and prints a summary to log.
void cmd_preprocess(const RunConfig& config, std::ostream& log);

// Fits the configured model on the raw training split and persists it
// (tfidf.model + nn.index, or lr.model) along with a manifest.
void cmd_fit(const RunConfig& config, std::ostream& log);

// One generated message per input diff line, in input order.
std::vector<std::string> generate_messages(
    const RunConfig& config, const std::vector<std::string>& diffs);

// Reads diffs (default: the test split's diff file), generates messages
// with the fitted artifact in output_dir, writes them to output_path or
// returns them for stdout when output_path is empty.
std::vector<std::string> cmd_generate(
    const RunConfig& config, const std::optional<std::string>& input_path,
    const std::optional<std::string>& output_path, std::ostream& log);

// Scores one or more generated-message files against the test split and
// writes report.jsonl + report.txt. Returns the rendered table.
std::string cmd_evaluate(
    const RunConfig& config,
    const std::vector<std::pair<std::string, std::string>>& generated_files,
    std::ostream& log);

// Samples per_bucket test rows per size bucket and writes review.tsv with
// one column per generated-message file.
void cmd_sample_review(
    const RunConfig& config,
    const std::vector<std::pair<std::string, std::string>>& generated_files,
    size_t per_bucket, uint64_t seed, std::ostream& log);

// Mines a git repository into a parallel corpus file pair.
void cmd_mine(const std::filesystem::path& repo,
              const std::filesystem::path& out_diff,
              const std::filesystem::path& out_msg, size_t max_diff_tokens,
              std::ostream& log);

}  // namespace cmg
