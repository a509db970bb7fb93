#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "cmg/classifier.hpp"
#include "cmg/preprocess.hpp"
#include "cmg/retrieval.hpp"
#include "cmg/vectorize.hpp"

namespace cmg {

enum class ModelKind { nn, lr };

// One run = one config. Parsed from a versioned key/value file, overridable
// from the command line, and re-serialized verbatim as the resolved-config
// snapshot every command drops next to its outputs.
struct RunConfig {
  std::string train_diff, train_msg;
  std::string valid_diff, valid_msg;
  std::string test_diff, test_msg;
  std::string output_dir;

  PipelineConfig pipeline;
  size_t vocab_max_size = 0;  // 0 = unlimited

  VectorBackend backend = VectorBackend::tfidf;
  ModelKind model = ModelKind::nn;
  std::string embedding_path;
  EmbeddingTable::Format embedding_format = EmbeddingTable::Format::text;

  TrainConfig train;
  bool bleu_smooth = false;
};

// Reads the key/value config file. First non-blank, non-comment line must be
// the "cmg-config-v1" version tag. Unknown keys are errors.
RunConfig load_config(const std::filesystem::path& path);

// Applies one "key=value" override (same keys as the file).
void apply_override(RunConfig& config, const std::string& assignment);

// Cross-field checks that do not depend on the command: w2v needs an
// embedding path, tfidf must not have one.
void validate(const RunConfig& config);

// Deterministic full serialization; parses back to an equal config.
std::string serialize(const RunConfig& config);

// Hex fingerprint of the serialized config, for manifests.
std::string config_fingerprint(const RunConfig& config);

}  // namespace cmg
