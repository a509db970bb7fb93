#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace cmg {

// One diff/message pair. Both sides are single physical lines; embedded
// newlines are carried as the literal token "<nl>".
struct Example {
  std::string diff_text;
  std::string msg_text;
};

struct ParallelCorpus {
  std::string split_name;  // free-form label: train / valid / test / ...
  std::vector<Example> examples;
};

struct CorpusStats {
  size_t example_count = 0;
  // whitespace token count -> number of examples with that count
  std::map<size_t, size_t> diff_token_histogram;
  std::map<size_t, size_t> msg_token_histogram;
};

// Loads a line-aligned <x>.diff / <x>.msg pair. Files must have the same
// line count (LineCountMismatch) and at least one example (EmptyCorpus);
// diffs must be non-empty. Bytes that are not valid UTF-8 are replaced with
// U+FFFD; CR before LF is stripped.
ParallelCorpus load_parallel(const std::filesystem::path& diff_path,
                             const std::filesystem::path& msg_path,
                             std::string split_name);

// Inverse of load_parallel; writes both files atomically.
void write_parallel(const ParallelCorpus& corpus,
                    const std::filesystem::path& diff_path,
                    const std::filesystem::path& msg_path);

CorpusStats corpus_stats(const ParallelCorpus& corpus);

// Whitespace token count of a raw diff line ("<nl>" markers count).
size_t diff_token_count(const std::string& diff_text);

// Walks `git log` of the repository at repo_path (first-parent order is not
// assumed; merges are skipped) and emits one example per commit: the diff
// against the first parent flattened to one line, paired with the commit
// subject. Commits with an empty subject, an empty diff, or a diff above
// max_diff_tokens whitespace tokens are skipped. Throws NotARepository if
// repo_path is not inside a git work tree and GitUnavailable if git cannot
// be spawned.
ParallelCorpus mine_git_repo(const std::filesystem::path& repo_path,
                             size_t max_diff_tokens);

}  // namespace cmg
