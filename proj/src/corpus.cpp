#include "cmg/corpus.hpp"

#include <algorithm>

#include "cmg/errors.hpp"
#include "cmg/fileio.hpp"
#include "cmg/preprocess.hpp"
#include "cmg/subprocess.hpp"

namespace cmg {

namespace fs = std::filesystem;

size_t diff_token_count(const std::string& diff_text) {
  return split_whitespace(diff_text).size();
}

namespace {

bool only_whitespace(const std::string& s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string::npos;
}

}  // namespace

ParallelCorpus load_parallel(const fs::path& diff_path,
                             const fs::path& msg_path,
                             std::string split_name) {
  std::vector<std::string> diffs = read_lines(diff_path);
  std::vector<std::string> msgs = read_lines(msg_path);
  if (diffs.size() != msgs.size()) {
    throw Error(Err::LineCountMismatch,
                strf("%s has %zu lines but %s has %zu", diff_path.c_str(),
                     diffs.size(), msg_path.c_str(), msgs.size()));
  }
  if (diffs.empty()) {
    throw Error(Err::EmptyCorpus,
                strf("no examples in %s / %s", diff_path.c_str(),
                     msg_path.c_str()));
  }
  ParallelCorpus corpus;
  corpus.split_name = std::move(split_name);
  corpus.examples.reserve(diffs.size());
  for (size_t i = 0; i < diffs.size(); ++i) {
    if (only_whitespace(diffs[i])) {
      throw Error(Err::EmptyInput,
                  strf("%s line %zu: diff record is empty", diff_path.c_str(),
                       i + 1));
    }
    corpus.examples.push_back(
        {sanitize_utf8(diffs[i]), sanitize_utf8(msgs[i])});
  }
  return corpus;
}

void write_parallel(const ParallelCorpus& corpus, const fs::path& diff_path,
                    const fs::path& msg_path) {
  std::string diffs, msgs;
  for (const Example& ex : corpus.examples) {
    diffs += ex.diff_text;
    diffs += '\n';
    msgs += ex.msg_text;
    msgs += '\n';
  }
  write_file_atomic(diff_path, diffs);
  write_file_atomic(msg_path, msgs);
}

CorpusStats corpus_stats(const ParallelCorpus& corpus) {
  CorpusStats stats;
  stats.example_count = corpus.examples.size();
  for (const Example& ex : corpus.examples) {
    ++stats.diff_token_histogram[diff_token_count(ex.diff_text)];
    ++stats.msg_token_histogram[split_whitespace(ex.msg_text).size()];
  }
  return stats;
}

namespace {

constexpr char kRecordSep = '\x1e';
constexpr char kFieldSep = '\x1f';

// One git log record: hash \x1f subject \x1f [\n patch].
struct LogRecord {
  std::string subject;
  std::string patch;
};

std::vector<LogRecord> parse_log(const std::string& out) {
  std::vector<LogRecord> records;
  size_t pos = 0;
  while (pos < out.size()) {
    if (out[pos] != kRecordSep) {
      ++pos;  // stray bytes between records (separator newlines)
      continue;
    }
    size_t start = pos + 1;
    size_t end = out.find(kRecordSep, start);
    if (end == std::string::npos) end = out.size();
    std::string record = out.substr(start, end - start);
    pos = end;

    size_t f1 = record.find(kFieldSep);
    if (f1 == std::string::npos) continue;
    size_t f2 = record.find(kFieldSep, f1 + 1);
    if (f2 == std::string::npos) continue;
    LogRecord rec;
    rec.subject = record.substr(f1 + 1, f2 - f1 - 1);
    rec.patch = record.substr(f2 + 1);
    records.push_back(std::move(rec));
  }
  return records;
}

// Flattens a patch to one line: newlines become `<nl>` tokens and all
// whitespace runs collapse to single spaces. Downstream processing is
// token-based, so intra-line whitespace shape carries no information.
std::string flatten_patch(const std::string& patch) {
  std::string marked;
  marked.reserve(patch.size() + patch.size() / 8);
  for (char c : patch) {
    if (c == '\n') {
      marked += " <nl> ";
    } else {
      marked += c;
    }
  }
  TokenSeq tokens = split_whitespace(marked);
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace

ParallelCorpus mine_git_repo(const fs::path& repo_path,
                             size_t max_diff_tokens) {
  const std::string repo = repo_path.string();
  ProcessResult probe;
  try {
    probe = run_process({"git", "-C", repo, "rev-parse", "--git-dir"});
  } catch (const Error& e) {
    throw Error(Err::GitUnavailable,
                strf("cannot spawn git: %s", e.what()));
  }
  if (probe.exit_code == 127) {
    throw Error(Err::GitUnavailable, "git executable not found");
  }
  if (probe.exit_code != 0) {
    throw Error(Err::NotARepository,
                strf("%s is not a git repository", repo.c_str()));
  }

  ProcessResult log;
  try {
    log = run_process({"git", "-C", repo, "-c", "core.quotePath=false",
                       "-c", "color.ui=false", "log", "--topo-order",
                       "--no-merges",
                       "--pretty=format:\x1e%H\x1f%s\x1f", "-p",
                       "--unified=3", "--diff-algorithm=myers", "--no-renames",
                       "--no-textconv", "--no-ext-diff", "--no-color"});
  } catch (const Error& e) {
    throw Error(Err::GitUnavailable, strf("cannot spawn git: %s", e.what()));
  }
  if (log.exit_code != 0) {
    throw Error(Err::NotARepository,
                strf("git log failed in %s: %s", repo.c_str(),
                     log.err.c_str()));
  }

  ParallelCorpus corpus;
  corpus.split_name = "mined";
  for (const LogRecord& rec : parse_log(log.out)) {
    std::string subject = sanitize_utf8(rec.subject);
    // subjects are single lines by construction; drop stray CRs anyway
    subject.erase(std::remove(subject.begin(), subject.end(), '\r'),
                  subject.end());
    if (only_whitespace(subject)) continue;
    std::string diff = flatten_patch(sanitize_utf8(rec.patch));
    if (diff.empty()) continue;
    if (diff_token_count(diff) > max_diff_tokens) continue;
    corpus.examples.push_back({std::move(diff), std::move(subject)});
  }
  return corpus;
}

}  // namespace cmg
