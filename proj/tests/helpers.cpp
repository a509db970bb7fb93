#include "helpers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "cmg/errors.hpp"
#include "cmg/fileio.hpp"
#include "cmg/subprocess.hpp"

namespace testutil {

namespace fs = std::filesystem;

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "cmgtestXXXXXX").string();
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  if (mkdtemp(buf.data()) == nullptr) {
    throw std::runtime_error("mkdtemp failed");
  }
  path_ = buf.data();
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

// All n-grams of tokens as explicit token vectors.
std::vector<cmg::TokenSeq> ngrams_of(const cmg::TokenSeq& tokens, size_t n) {
  std::vector<cmg::TokenSeq> grams;
  if (tokens.size() < n) return grams;
  for (size_t s = 0; s + n <= tokens.size(); ++s) {
    grams.emplace_back(tokens.begin() + static_cast<long>(s),
                       tokens.begin() + static_cast<long>(s + n));
  }
  return grams;
}

size_t count_of(const std::vector<cmg::TokenSeq>& grams,
                const cmg::TokenSeq& gram) {
  size_t count = 0;
  for (const cmg::TokenSeq& g : grams) {
    if (g == gram) ++count;
  }
  return count;
}

}  // namespace

cmg::BleuReport bleu_oracle(const std::vector<cmg::TokenSeq>& candidates,
                            const std::vector<cmg::TokenSeq>& references,
                            bool smooth) {
  cmg::BleuReport report;
  double matched[4] = {0, 0, 0, 0};
  double total[4] = {0, 0, 0, 0};
  for (size_t i = 0; i < candidates.size(); ++i) {
    report.candidate_length += candidates[i].size();
    report.reference_length += references[i].size();
    for (size_t n = 1; n <= 4; ++n) {
      std::vector<cmg::TokenSeq> cand_grams = ngrams_of(candidates[i], n);
      std::vector<cmg::TokenSeq> ref_grams = ngrams_of(references[i], n);
      std::vector<cmg::TokenSeq> seen;
      for (const cmg::TokenSeq& gram : cand_grams) {
        if (count_of(seen, gram) > 0) continue;
        seen.push_back(gram);
        size_t c = count_of(cand_grams, gram);
        size_t r = count_of(ref_grams, gram);
        total[n - 1] += static_cast<double>(c);
        matched[n - 1] += static_cast<double>(std::min(c, r));
      }
    }
  }
  double product = 1.0;
  bool any_zero = false;
  for (size_t n = 0; n < 4; ++n) {
    double num = matched[n] + (smooth && n >= 1 ? 1.0 : 0.0);
    double den = total[n] + (smooth && n >= 1 ? 1.0 : 0.0);
    double p = den > 0.0 ? num / den : 0.0;
    report.precisions[n] = p;
    product *= p;
    if (p <= 0.0) any_zero = true;
  }
  double c = static_cast<double>(report.candidate_length);
  double r = static_cast<double>(report.reference_length);
  if (report.candidate_length == 0) {
    report.brevity_penalty = report.reference_length == 0 ? 1.0 : 0.0;
  } else if (c > r) {
    report.brevity_penalty = 1.0;
  } else {
    report.brevity_penalty = std::exp(1.0 - r / c);
  }
  report.bleu =
      any_zero ? 0.0
               : 100.0 * report.brevity_penalty * std::pow(product, 0.25);
  return report;
}

std::vector<std::pair<std::string, double>> tfidf_oracle(
    const std::vector<cmg::TokenSeq>& train_docs, const cmg::TokenSeq& doc) {
  // distinct training tokens, discovered by scanning
  std::vector<std::string> feature_tokens;
  for (const cmg::TokenSeq& d : train_docs) {
    for (const std::string& tok : d) {
      if (std::find(feature_tokens.begin(), feature_tokens.end(), tok) ==
          feature_tokens.end()) {
        feature_tokens.push_back(tok);
      }
    }
  }
  std::vector<std::pair<std::string, double>> weights;
  for (const std::string& tok : feature_tokens) {
    size_t tf = 0;
    for (const std::string& t : doc) {
      if (t == tok) ++tf;
    }
    if (tf == 0) continue;
    size_t df = 0;
    for (const cmg::TokenSeq& d : train_docs) {
      if (std::find(d.begin(), d.end(), tok) != d.end()) ++df;
    }
    double idf = std::log((1.0 + static_cast<double>(train_docs.size())) /
                          (1.0 + static_cast<double>(df))) +
                 1.0;
    weights.emplace_back(tok, static_cast<double>(tf) * idf);
  }
  double sq = 0.0;
  for (const auto& [tok, w] : weights) sq += w * w;
  if (sq > 0.0) {
    double norm = std::sqrt(sq);
    for (auto& [tok, w] : weights) w /= norm;
  }
  std::sort(weights.begin(), weights.end());
  return weights;
}

std::string random_token(cmg::DetRng& rng, size_t max_len) {
  size_t len = 1 + rng.below(max_len);
  std::string tok;
  for (size_t i = 0; i < len; ++i) {
    tok.push_back(static_cast<char>('a' + rng.below(4)));
  }
  return tok;
}

cmg::TokenSeq random_tokens(cmg::DetRng& rng, size_t max_len,
                            size_t alphabet) {
  cmg::TokenSeq tokens;
  size_t len = rng.below(max_len + 1);
  for (size_t i = 0; i < len; ++i) {
    std::string tok;
    size_t tok_len = 1 + rng.below(2);
    for (size_t k = 0; k < tok_len; ++k) {
      tok.push_back(static_cast<char>('a' + rng.below(alphabet)));
    }
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

namespace {

struct Topic {
  std::string name;
  std::string file;
  std::vector<std::string> ids;       // identifiers for content lines
  std::vector<std::string> messages;  // commit subject pool
  std::vector<std::string> lines;     // current file content
};

std::vector<Topic> make_topics() {
  static const char* kNames[] = {
      "parser", "lexer",  "cache",   "config",  "logger",  "auth",
      "session", "router", "sched",  "metrics", "storage", "network",
      "codec",  "buffer", "queue",   "worker",  "index",   "search",
      "render", "layout", "input",   "audio",   "physics", "shader",
  };
  std::vector<Topic> topics;
  for (const char* name : kNames) {
    Topic t;
    t.name = name;
    t.file = std::string("src/") + name + ".c";
    const char* suffixes[] = {"_state", "_size",  "_limit", "_flags",
                              "_count", "_head",  "_tail",  "_mask",
                              "_step",  "_slot"};
    for (const char* sfx : suffixes) {
      t.ids.push_back(t.name + sfx);
    }
    t.messages = {
        "fix " + t.name + " null check on reload",
        "add " + t.name + " bounds validation pass",
        "refactor " + t.name + " setup into helper",
        "drop stale " + t.name + " state after close",
        "update " + t.name + " limits to safer defaults",
        "make " + t.name + " shutdown idempotent",
    };
    topics.push_back(std::move(t));
  }
  return topics;
}

std::string content_line(const Topic& t, cmg::DetRng& rng) {
  return "    " + t.ids[rng.below(t.ids.size())] + ";";
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

void emit_file_change(std::string& stream, const Topic& t) {
  std::string content = join_lines(t.lines);
  stream += "M 100644 inline " + t.file + "\n";
  stream += cmg::strf("data %zu\n", content.size());
  stream += content;
}

void emit_commit(std::string& stream, const std::string& subject,
                 int64_t timestamp) {
  stream += "commit refs/heads/master\n";
  stream += cmg::strf("author Dev One <dev@example.test> %lld +0000\n",
                      static_cast<long long>(timestamp));
  stream += cmg::strf("committer Dev One <dev@example.test> %lld +0000\n",
                      static_cast<long long>(timestamp));
  stream += cmg::strf("data %zu\n", subject.size() + 1);
  stream += subject;
  stream += '\n';
}

}  // namespace

void build_synthetic_repo(const fs::path& dir, size_t commit_count,
                          uint64_t seed) {
  cmg::DetRng rng(seed);
  std::vector<Topic> topics = make_topics();
  const int64_t base_time = 1600000000;

  // initial file contents
  for (Topic& t : topics) {
    for (size_t i = 0; i < 30; ++i) {
      t.lines.push_back(content_line(t, rng));
    }
  }

  std::string stream;
  emit_commit(stream, "initial import", base_time);
  for (const Topic& t : topics) emit_file_change(stream, t);

  for (size_t c = 1; c < commit_count; ++c) {
    Topic& t = topics[rng.below(topics.size())];

    // size class: ~45% small, ~30% medium, ~25% large
    uint64_t dice = rng.below(100);
    size_t k;
    if (dice < 45) {
      k = 1 + rng.below(2);  // 1-2 changed lines  -> small diff
    } else if (dice < 75) {
      k = 4 + rng.below(2);  // 4-5                -> medium
    } else {
      k = 9 + rng.below(10);  // 9-18              -> large
    }

    bool append = k >= 9 && rng.below(4) == 0 && t.lines.size() < 80;
    if (append) {
      for (size_t i = 0; i < k; ++i) {
        t.lines.push_back(content_line(t, rng));
      }
    } else {
      if (k > t.lines.size()) k = t.lines.size();
      size_t start = rng.below(t.lines.size() - k + 1);
      for (size_t i = 0; i < k; ++i) {
        std::string fresh = content_line(t, rng);
        if (fresh == t.lines[start + i]) {
          // force an actual change
          size_t id = rng.below(t.ids.size());
          fresh = "    " + t.ids[(id + 1) % t.ids.size()] + ";";
          if (fresh == t.lines[start + i]) {
            fresh = "    " + t.ids[(id + 2) % t.ids.size()] + ";";
          }
        }
        t.lines[start + i] = fresh;
      }
    }

    const std::string& subject = t.messages[rng.below(t.messages.size())];
    emit_commit(stream, subject, base_time + static_cast<int64_t>(c));
    emit_file_change(stream, t);
  }

  fs::create_directories(dir);
  fs::path stream_file = dir / "fast-import-stream";
  cmg::write_file_atomic(stream_file, stream);

  auto git = [&](const std::vector<std::string>& args) {
    std::vector<std::string> argv = {"git", "-C", dir.string()};
    argv.insert(argv.end(), args.begin(), args.end());
    cmg::ProcessResult r = cmg::run_process(argv);
    if (r.exit_code != 0) {
      throw std::runtime_error("git failed: " + r.err);
    }
  };
  {
    cmg::ProcessResult r =
        cmg::run_process({"git", "init", "-q", "-b", "master", dir.string()});
    if (r.exit_code != 0) {
      throw std::runtime_error("git init failed: " + r.err);
    }
  }
  {
    std::vector<std::string> argv = {"git", "-C", dir.string(),
                                     "fast-import", "--quiet"};
    cmg::ProcessResult r = cmg::run_process(argv, stream_file.string());
    if (r.exit_code != 0) {
      throw std::runtime_error("git fast-import failed: " + r.err);
    }
  }
  git({"update-ref", "HEAD", "refs/heads/master"});
  fs::remove(stream_file);
}

CliResult run_cli(const std::string& binary,
                  const std::vector<std::string>& args) {
  std::vector<std::string> argv = {binary};
  argv.insert(argv.end(), args.begin(), args.end());
  cmg::ProcessResult r = cmg::run_process(argv);
  return {r.exit_code, r.out, r.err};
}

}  // namespace testutil
