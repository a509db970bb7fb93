#include <string>

#include "cmg/config.hpp"
#include "cmg/errors.hpp"
#include "cmg/fileio.hpp"
#include "doctest.h"
#include "helpers.hpp"

using cmg::Err;
using cmg::Error;
using cmg::RunConfig;

namespace {

std::filesystem::path write_config(const testutil::TempDir& tmp,
                                   const std::string& body) {
  auto path = tmp.file("run.cfg");
  cmg::write_file_atomic(path, body);
  return path;
}

}  // namespace

TEST_CASE("config parses keys, comments, and blank lines") {
  testutil::TempDir tmp;
  auto path = write_config(tmp,
                           "cmg-config-v1\n"
                           "# a comment\n"
                           "\n"
                           "train_diff = data/train.diff\n"
                           "train_msg=data/train.msg\n"
                           "  backend = w2v  \n"
                           "embedding_path = vecs.bin\n"
                           "embedding_format = binary\n"
                           "model = lr\n"
                           "learning_rate = 0.01\n"
                           "epochs = 3\n"
                           "batch_size = 16\n"
                           "seed = 7\n"
                           "optimizer = sgd\n"
                           "stem = false\n"
                           "vocab_max_size = 5000\n"
                           "bleu_smooth = true\n");
  RunConfig cfg = cmg::load_config(path);
  CHECK(cfg.train_diff == "data/train.diff");
  CHECK(cfg.train_msg == "data/train.msg");
  CHECK(cfg.backend == cmg::VectorBackend::embedding);
  CHECK(cfg.embedding_path == "vecs.bin");
  CHECK(cfg.embedding_format == cmg::EmbeddingTable::Format::binary);
  CHECK(cfg.model == cmg::ModelKind::lr);
  CHECK(cfg.train.learning_rate == doctest::Approx(0.01));
  CHECK(cfg.train.epochs == 3);
  CHECK(cfg.train.batch_size == 16);
  CHECK(cfg.train.seed == 7);
  CHECK(cfg.train.optimizer == cmg::TrainConfig::Optimizer::sgd);
  CHECK_FALSE(cfg.pipeline.stem);
  CHECK(cfg.pipeline.lowercase);  // untouched default
  CHECK(cfg.vocab_max_size == 5000);
  CHECK(cfg.bleu_smooth);
}

TEST_CASE("config requires the version tag first") {
  testutil::TempDir tmp;
  auto path = write_config(tmp, "train_diff = x\n");
  try {
    cmg::load_config(path);
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.code() == Err::Config);
  }
  // wrong version string
  auto path2 = write_config(tmp, "cmg-config-v2\n");
  CHECK_THROWS_AS(cmg::load_config(path2), Error);
  // comments may precede the tag
  auto path3 = write_config(tmp, "# leading comment\ncmg-config-v1\n");
  CHECK_NOTHROW(cmg::load_config(path3));
}

TEST_CASE("config rejects unknown keys and malformed values") {
  testutil::TempDir tmp;
  CHECK_THROWS_AS(
      cmg::load_config(write_config(tmp, "cmg-config-v1\nnot_a_key = 1\n")),
      Error);
  CHECK_THROWS_AS(
      cmg::load_config(write_config(tmp, "cmg-config-v1\nepochs = ten\n")),
      Error);
  CHECK_THROWS_AS(
      cmg::load_config(write_config(tmp, "cmg-config-v1\nstem = maybe\n")),
      Error);
  CHECK_THROWS_AS(
      cmg::load_config(write_config(tmp, "cmg-config-v1\nbackend = lsa\n")),
      Error);
  CHECK_THROWS_AS(
      cmg::load_config(write_config(tmp, "cmg-config-v1\nno equals sign\n")),
      Error);
  CHECK_THROWS_AS(cmg::load_config(tmp.file("missing.cfg")), Error);
}

TEST_CASE("overrides reuse the file grammar") {
  testutil::TempDir tmp;
  RunConfig cfg = cmg::load_config(write_config(tmp, "cmg-config-v1\n"));
  cmg::apply_override(cfg, "model=lr");
  cmg::apply_override(cfg, "epochs=42");
  cmg::apply_override(cfg, "output_dir=out/run1");
  CHECK(cfg.model == cmg::ModelKind::lr);
  CHECK(cfg.train.epochs == 42);
  CHECK(cfg.output_dir == "out/run1");
  CHECK_THROWS_AS(cmg::apply_override(cfg, "bogus=1"), Error);
  CHECK_THROWS_AS(cmg::apply_override(cfg, "no-assignment"), Error);
}

TEST_CASE("serialize round-trips to an equal config") {
  testutil::TempDir tmp;
  RunConfig cfg = cmg::load_config(write_config(tmp, "cmg-config-v1\n"));
  cfg.train_diff = "a.diff";
  cfg.train_msg = "a.msg";
  cfg.test_diff = "b.diff";
  cfg.test_msg = "b.msg";
  cfg.backend = cmg::VectorBackend::embedding;
  cfg.embedding_path = "v.txt";
  cfg.model = cmg::ModelKind::lr;
  cfg.train.learning_rate = 0.125;
  cfg.train.epochs = 9;
  cfg.train.seed = 1234;
  cfg.pipeline.remove_stopwords = false;
  cfg.vocab_max_size = 777;
  cfg.bleu_smooth = true;

  std::string text = cmg::serialize(cfg);
  auto path = tmp.file("round.cfg");
  cmg::write_file_atomic(path, text);
  RunConfig back = cmg::load_config(path);
  CHECK(cmg::serialize(back) == text);  // fixed point
  CHECK(back.train_diff == cfg.train_diff);
  CHECK(back.backend == cfg.backend);
  CHECK(back.model == cfg.model);
  CHECK(back.train.learning_rate == cfg.train.learning_rate);
  CHECK(back.train.seed == cfg.train.seed);
  CHECK(back.pipeline.remove_stopwords == cfg.pipeline.remove_stopwords);
  CHECK(back.vocab_max_size == cfg.vocab_max_size);
  CHECK(back.bleu_smooth == cfg.bleu_smooth);
}

TEST_CASE("validate enforces backend/embedding pairing") {
  testutil::TempDir tmp;
  RunConfig cfg = cmg::load_config(write_config(tmp, "cmg-config-v1\n"));
  CHECK_NOTHROW(cmg::validate(cfg));

  RunConfig w2v = cfg;
  w2v.backend = cmg::VectorBackend::embedding;
  CHECK_THROWS_AS(cmg::validate(w2v), Error);  // missing embedding path
  w2v.embedding_path = "vecs.txt";
  CHECK_NOTHROW(cmg::validate(w2v));

  RunConfig tfidf = cfg;
  tfidf.embedding_path = "vecs.txt";  // pointless for tfidf
  CHECK_THROWS_AS(cmg::validate(tfidf), Error);
}

TEST_CASE("fingerprint tracks config content") {
  testutil::TempDir tmp;
  RunConfig a = cmg::load_config(write_config(tmp, "cmg-config-v1\n"));
  RunConfig b = a;
  CHECK(cmg::config_fingerprint(a) == cmg::config_fingerprint(b));
  b.train.seed = 999;
  CHECK(cmg::config_fingerprint(a) != cmg::config_fingerprint(b));
  // 16 hex chars
  std::string fp = cmg::config_fingerprint(a);
  CHECK(fp.size() == 16);
  CHECK(fp.find_first_not_of("0123456789abcdef") == std::string::npos);
}
