#include "cmg/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>

#include "cmg/classifier.hpp"
#include "cmg/errors.hpp"
#include "cmg/evaluation.hpp"
#include "cmg/fileio.hpp"
#include "cmg/preprocess.hpp"
#include "cmg/retrieval.hpp"
#include "cmg/vectorize.hpp"

#include "json.hpp"

namespace cmg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require(bool ok, const char* what) {
  if (!ok) {
    throw Error(Err::Config, strf("config is missing %s", what));
  }
}

void require_split_paths(const RunConfig& c, bool all_splits) {
  require(!c.train_diff.empty(), "train_diff");
  require(!c.train_msg.empty(), "train_msg");
  if (all_splits) {
    require(!c.valid_diff.empty(), "valid_diff");
    require(!c.valid_msg.empty(), "valid_msg");
  }
}

void require_test_paths(const RunConfig& c) {
  require(!c.test_diff.empty(), "test_diff");
  require(!c.test_msg.empty(), "test_msg");
}

fs::path out_path(const RunConfig& c, const char* name) {
  return fs::path(c.output_dir) / name;
}

void write_snapshot(const RunConfig& c) {
  write_file_atomic(out_path(c, artifact::kSnapshot), serialize(c));
}

int64_t manifest_timestamp() {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    return std::strtoll(epoch, nullptr, 10);
  }
  return static_cast<int64_t>(std::time(nullptr));
}

void write_manifest(const RunConfig& c, const char* command,
                    const std::vector<std::string>& files) {
  json manifest{
      {"command", command},
      {"config", config_fingerprint(c)},
      {"created_unix", manifest_timestamp()},
      {"files", files},
  };
  write_file_atomic(out_path(c, artifact::kManifest),
                    manifest.dump(2) + "\n");
}

std::string join_tokens(const TokenSeq& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<TokenSeq> normalize_all(const ParallelCorpus& corpus,
                                    const PipelineConfig& pipeline,
                                    bool diffs) {
  std::vector<TokenSeq> out;
  out.reserve(corpus.examples.size());
  for (const Example& ex : corpus.examples) {
    out.push_back(normalize(diffs ? ex.diff_text : ex.msg_text, pipeline));
  }
  return out;
}

json histogram_json(const std::map<size_t, size_t>& histogram) {
  json out = json::object();
  for (const auto& [tokens, freq] : histogram) {
    out[strf("%zu", tokens)] = freq;
  }
  return out;
}

struct SplitSummary {
  CorpusStats stats;
  std::array<size_t, 3> buckets = {0, 0, 0};
};

SplitSummary summarize(const ParallelCorpus& corpus) {
  SplitSummary s;
  s.stats = corpus_stats(corpus);
  BucketSpec spec;
  for (const auto& [count, freq] : s.stats.diff_token_histogram) {
    s.buckets[static_cast<size_t>(bucket_for_count(count, spec))] += freq;
  }
  return s;
}

void print_summary(std::ostream& log, const ParallelCorpus& corpus,
                   const SplitSummary& s) {
  size_t min_tokens = 0, max_tokens = 0, median = 0;
  const auto& hist = s.stats.diff_token_histogram;
  if (!hist.empty()) {
    min_tokens = hist.begin()->first;
    max_tokens = hist.rbegin()->first;
    size_t half = (s.stats.example_count + 1) / 2, seen = 0;
    for (const auto& [count, freq] : hist) {
      seen += freq;
      if (seen >= half) {
        median = count;
        break;
      }
    }
  }
  log << strf(
      "%s: %zu examples | diff tokens min/median/max = %zu/%zu/%zu | "
      "buckets small/medium/large = %zu/%zu/%zu\n",
      corpus.split_name.c_str(), s.stats.example_count, min_tokens, median,
      max_tokens, s.buckets[0], s.buckets[1], s.buckets[2]);
}

}  // namespace

void cmd_preprocess(const RunConfig& config, std::ostream& log) {
  validate(config);
  require_split_paths(config, true);
  require_test_paths(config);
  require(!config.output_dir.empty(), "output_dir");

  json stats;
  for (const char* split : {"train", "valid", "test"}) {
    std::string name = split;
    const auto& diff_path = name == "train"   ? config.train_diff
                            : name == "valid" ? config.valid_diff
                                              : config.test_diff;
    const auto& msg_path = name == "train"   ? config.train_msg
                           : name == "valid" ? config.valid_msg
                                             : config.test_msg;
    ParallelCorpus corpus = load_parallel(diff_path, msg_path, name);

    std::string norm_diffs, norm_msgs;
    std::vector<TokenSeq> diff_docs =
        normalize_all(corpus, config.pipeline, true);
    std::vector<TokenSeq> msg_docs =
        normalize_all(corpus, config.pipeline, false);
    for (size_t i = 0; i < corpus.examples.size(); ++i) {
      norm_diffs += join_tokens(diff_docs[i]);
      norm_diffs += '\n';
      norm_msgs += join_tokens(msg_docs[i]);
      norm_msgs += '\n';
    }
    write_file_atomic(out_path(config, (name + ".norm.diff").c_str()),
                      norm_diffs);
    write_file_atomic(out_path(config, (name + ".norm.msg").c_str()),
                      norm_msgs);

    SplitSummary summary = summarize(corpus);
    stats["splits"][name] = {
        {"examples", summary.stats.example_count},
        {"buckets",
         {{"small", summary.buckets[0]},
          {"medium", summary.buckets[1]},
          {"large", summary.buckets[2]}}},
        {"diff_tokens", histogram_json(summary.stats.diff_token_histogram)},
        {"msg_tokens", histogram_json(summary.stats.msg_token_histogram)},
    };
    print_summary(log, corpus, summary);

    if (name == "train") {
      std::optional<size_t> cap;
      if (config.vocab_max_size > 0) cap = config.vocab_max_size;
      Vocabulary vocab = Vocabulary::build(diff_docs, cap);
      vocab.save(out_path(config, artifact::kVocab));
      log << strf("vocabulary: %zu entries (4 reserved)\n", vocab.size());
    }
  }
  write_file_atomic(out_path(config, artifact::kStats),
                    stats.dump(2) + "\n");
  write_snapshot(config);
}

namespace {

// Everything cmd_fit persists and cmd_generate reloads, in one place so the
// two stay in lockstep.
struct FittedModel {
  RunConfig config;
  std::optional<TfIdfModel> tfidf;
  std::optional<EmbeddingTable> embeddings;
  std::optional<NNIndex> index;
  std::optional<LRModel> lr;
  std::optional<LabelCodec> codec;

  SparseVector sparse_query(const TokenSeq& doc) const {
    return tfidf->transform(doc);
  }
  DenseVector dense_query(const TokenSeq& doc) const {
    return embeddings->embed(doc);
  }
};

FittedModel load_fitted(const RunConfig& config) {
  FittedModel m;
  m.config = config;
  if (config.backend == VectorBackend::tfidf) {
    m.tfidf = TfIdfModel::load(out_path(config, artifact::kTfIdf));
  } else {
    m.embeddings = EmbeddingTable::load(config.embedding_path,
                                        config.embedding_format);
  }
  if (config.model == ModelKind::nn) {
    m.index = NNIndex::load(out_path(config, artifact::kIndex));
    if (m.index->backend() != config.backend) {
      throw Error(Err::BackendMismatch,
                  strf("index was built with backend %s but config says %s",
                       backend_name(m.index->backend()),
                       backend_name(config.backend)));
    }
  } else {
    auto [lr, codec] = load_lr(out_path(config, artifact::kLr));
    if (lr.backend != config.backend) {
      throw Error(Err::BackendMismatch,
                  strf("model was trained with backend %s but config says %s",
                       backend_name(lr.backend),
                       backend_name(config.backend)));
    }
    m.lr = std::move(lr);
    m.codec = std::move(codec);
  }
  return m;
}

}  // namespace

void cmd_fit(const RunConfig& config, std::ostream& log) {
  validate(config);
  require_split_paths(config, false);
  require(!config.output_dir.empty(), "output_dir");

  ParallelCorpus train = load_parallel(config.train_diff, config.train_msg,
                                       "train");
  std::vector<TokenSeq> docs = normalize_all(train, config.pipeline, true);
  std::vector<std::string> messages;
  messages.reserve(train.examples.size());
  for (const Example& ex : train.examples) messages.push_back(ex.msg_text);

  std::vector<std::string> files = {artifact::kManifest, artifact::kSnapshot};

  std::vector<SparseVector> sparse;
  std::vector<DenseVector> dense;
  size_t feature_dim = 0;
  if (config.backend == VectorBackend::tfidf) {
    TfIdfModel tfidf = TfIdfModel::fit(docs);
    sparse.reserve(docs.size());
    for (const TokenSeq& doc : docs) sparse.push_back(tfidf.transform(doc));
    feature_dim = tfidf.feature_count();
    tfidf.save(out_path(config, artifact::kTfIdf));
    files.push_back(artifact::kTfIdf);
    log << strf("tf-idf: %zu features over %zu documents\n",
                tfidf.feature_count(), docs.size());
  } else {
    EmbeddingTable table =
        EmbeddingTable::load(config.embedding_path, config.embedding_format);
    dense.reserve(docs.size());
    for (const TokenSeq& doc : docs) dense.push_back(table.embed(doc));
    feature_dim = table.dim();
    log << strf("embeddings: %zu words, dim %zu\n", table.size(),
                table.dim());
  }

  if (config.model == ModelKind::nn) {
    NNIndex index = config.backend == VectorBackend::tfidf
                        ? NNIndex::build(std::move(sparse),
                                         std::move(messages))
                        : NNIndex::build(std::move(dense),
                                         std::move(messages));
    index.save(out_path(config, artifact::kIndex));
    files.push_back(artifact::kIndex);
    log << strf("index: %zu entries\n", index.size());
  } else {
    auto [codec, labels] = LabelCodec::encode_all(messages);
    std::vector<SparseVector> features;
    if (config.backend == VectorBackend::tfidf) {
      features = std::move(sparse);
    } else {
      features.reserve(dense.size());
      for (const DenseVector& v : dense) features.push_back(to_sparse(v));
    }
    LRModel model =
        train_lr(features, labels, feature_dim, codec.class_count(),
                 config.backend, config.train,
                 [&](size_t epoch, double loss) {
                   log << strf("epoch %zu: loss %.6f\n", epoch, loss);
                 });
    save_lr(model, codec, out_path(config, artifact::kLr));
    files.push_back(artifact::kLr);
    log << strf("classifier: %zu classes, %zu features\n",
                codec.class_count(), feature_dim);
  }

  std::sort(files.begin(), files.end());
  write_manifest(config, "fit", files);
  write_snapshot(config);
}

std::vector<std::string> generate_messages(
    const RunConfig& config, const std::vector<std::string>& diffs) {
  FittedModel m = load_fitted(config);
  std::vector<std::string> out;
  out.reserve(diffs.size());
  for (const std::string& diff : diffs) {
    TokenSeq doc = normalize(diff, config.pipeline);
    if (config.model == ModelKind::nn) {
      out.push_back(config.backend == VectorBackend::tfidf
                        ? m.index->generate(m.sparse_query(doc))
                        : m.index->generate(m.dense_query(doc)));
    } else {
      SparseVector x = config.backend == VectorBackend::tfidf
                           ? m.sparse_query(doc)
                           : to_sparse(m.dense_query(doc));
      out.push_back(predict(*m.lr, *m.codec, x));
    }
  }
  return out;
}

std::vector<std::string> cmd_generate(
    const RunConfig& config, const std::optional<std::string>& input_path,
    const std::optional<std::string>& output_path, std::ostream& log) {
  validate(config);
  require(!config.output_dir.empty(), "output_dir");
  std::string in = input_path.value_or(config.test_diff);
  require(!in.empty(), "test_diff (or --input)");

  std::vector<std::string> diffs = read_lines(in);
  std::vector<std::string> generated = generate_messages(config, diffs);

  std::string joined;
  for (const std::string& msg : generated) {
    joined += msg;
    joined += '\n';
  }
  bool to_stdout = output_path && *output_path == "-";
  if (!to_stdout) {
    fs::path out = output_path ? fs::path(*output_path)
                               : out_path(config, artifact::kGenerated);
    write_file_atomic(out, joined);
    write_snapshot(config);
    log << strf("generated %zu messages -> %s\n", generated.size(),
                out.c_str());
  }
  return generated;
}

namespace {

std::vector<std::string> read_generated(const std::string& name,
                                        const std::string& path,
                                        size_t test_size) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.size() != test_size) {
    throw Error(Err::LengthMismatch,
                strf("%s (%s) has %zu lines but the test split has %zu",
                     path.c_str(), name.c_str(), lines.size(), test_size));
  }
  return lines;
}

}  // namespace

std::string cmd_evaluate(
    const RunConfig& config,
    const std::vector<std::pair<std::string, std::string>>& generated_files,
    std::ostream& log) {
  validate(config);
  require_test_paths(config);
  require(!config.output_dir.empty(), "output_dir");
  if (generated_files.empty()) {
    throw Error(Err::Config, "evaluate needs at least one NAME=PATH input");
  }

  ParallelCorpus test = load_parallel(config.test_diff, config.test_msg,
                                      "test");
  BucketSpec spec;
  std::vector<ModelReport> reports;
  reports.reserve(generated_files.size());
  for (const auto& [name, path] : generated_files) {
    std::vector<std::string> generated =
        read_generated(name, path, test.examples.size());
    reports.push_back(
        evaluate_run(test, generated, name, spec, config.bleu_smooth));
  }

  std::string table = report_table(reports);
  write_file_atomic(out_path(config, artifact::kReportJsonl),
                    report_jsonl(reports));
  write_file_atomic(out_path(config, artifact::kReportTable), table);
  write_snapshot(config);
  log << table;
  return table;
}

void cmd_sample_review(
    const RunConfig& config,
    const std::vector<std::pair<std::string, std::string>>& generated_files,
    size_t per_bucket, uint64_t seed, std::ostream& log) {
  validate(config);
  require_test_paths(config);
  require(!config.output_dir.empty(), "output_dir");

  ParallelCorpus test = load_parallel(config.test_diff, config.test_msg,
                                      "test");
  std::vector<std::vector<std::string>> outputs;
  outputs.reserve(generated_files.size());
  for (const auto& [name, path] : generated_files) {
    outputs.push_back(
        read_generated(name, path, test.examples.size()));
  }
  std::vector<std::pair<std::string, const std::vector<std::string>*>> models;
  models.reserve(generated_files.size());
  for (size_t i = 0; i < generated_files.size(); ++i) {
    models.emplace_back(generated_files[i].first, &outputs[i]);
  }

  BucketSpec spec;
  ReviewSample sample =
      sample_for_manual_review(test, per_bucket, seed, spec);
  for (size_t b = 0; b < 3; ++b) {
    if (sample.short_bucket[b]) {
      log << strf("warning: bucket %s has fewer than %zu rows; "
                  "sampled all of it\n",
                  bucket_name(static_cast<Bucket>(b)), per_bucket);
    }
  }
  write_file_atomic(out_path(config, artifact::kReviewSheet),
                    review_sheet_tsv(test, sample, models));
  write_snapshot(config);
  log << strf("review sheet: %zu rows -> %s\n", sample.rows.size(),
              out_path(config, artifact::kReviewSheet).c_str());
}

void cmd_mine(const fs::path& repo, const fs::path& out_diff,
              const fs::path& out_msg, size_t max_diff_tokens,
              std::ostream& log) {
  ParallelCorpus corpus = mine_git_repo(repo, max_diff_tokens);
  write_parallel(corpus, out_diff, out_msg);
  log << strf("mined %zu examples from %s\n", corpus.examples.size(),
              repo.c_str());
}

}  // namespace cmg
