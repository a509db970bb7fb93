#include "cmg/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>

#include "cmg/errors.hpp"
#include "cmg/fileio.hpp"

namespace cmg {

namespace {

constexpr const char* kVersionTag = "cmg-config-v1";

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw Error(Err::Config,
              strf("%s must be true or false, got '%s'", key.c_str(),
                   value.c_str()));
}

uint64_t parse_uint(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (errno != 0 || end == value.c_str() || *end != '\0') {
    throw Error(Err::Config,
                strf("%s must be a non-negative integer, got '%s'",
                     key.c_str(), value.c_str()));
  }
  return v;
}

double parse_real(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') {
    throw Error(Err::Config,
                strf("%s must be a number, got '%s'", key.c_str(),
                     value.c_str()));
  }
  return v;
}

void set_key(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "train_diff") {
    c.train_diff = value;
  } else if (key == "train_msg") {
    c.train_msg = value;
  } else if (key == "valid_diff") {
    c.valid_diff = value;
  } else if (key == "valid_msg") {
    c.valid_msg = value;
  } else if (key == "test_diff") {
    c.test_diff = value;
  } else if (key == "test_msg") {
    c.test_msg = value;
  } else if (key == "output_dir") {
    c.output_dir = value;
  } else if (key == "lowercase") {
    c.pipeline.lowercase = parse_bool(key, value);
  } else if (key == "strip_special_chars") {
    c.pipeline.strip_special_chars = parse_bool(key, value);
  } else if (key == "remove_stopwords") {
    c.pipeline.remove_stopwords = parse_bool(key, value);
  } else if (key == "stem") {
    c.pipeline.stem = parse_bool(key, value);
  } else if (key == "add_sentence_markers") {
    c.pipeline.add_sentence_markers = parse_bool(key, value);
  } else if (key == "pad_length") {
    c.pipeline.pad_length = parse_uint(key, value);
  } else if (key == "vocab_max_size") {
    c.vocab_max_size = parse_uint(key, value);
  } else if (key == "backend") {
    if (value == "tfidf") {
      c.backend = VectorBackend::tfidf;
    } else if (value == "w2v") {
      c.backend = VectorBackend::embedding;
    } else {
      throw Error(Err::Config,
                  strf("backend must be tfidf or w2v, got '%s'",
                       value.c_str()));
    }
  } else if (key == "model") {
    if (value == "nn") {
      c.model = ModelKind::nn;
    } else if (value == "lr") {
      c.model = ModelKind::lr;
    } else {
      throw Error(Err::Config,
                  strf("model must be nn or lr, got '%s'", value.c_str()));
    }
  } else if (key == "embedding_path") {
    c.embedding_path = value;
  } else if (key == "embedding_format") {
    if (value == "text") {
      c.embedding_format = EmbeddingTable::Format::text;
    } else if (value == "binary") {
      c.embedding_format = EmbeddingTable::Format::binary;
    } else {
      throw Error(Err::Config,
                  strf("embedding_format must be text or binary, got '%s'",
                       value.c_str()));
    }
  } else if (key == "learning_rate") {
    c.train.learning_rate = parse_real(key, value);
  } else if (key == "epochs") {
    c.train.epochs = parse_uint(key, value);
  } else if (key == "batch_size") {
    c.train.batch_size = parse_uint(key, value);
  } else if (key == "seed") {
    c.train.seed = parse_uint(key, value);
  } else if (key == "optimizer") {
    if (value == "adam") {
      c.train.optimizer = TrainConfig::Optimizer::adam;
    } else if (value == "sgd") {
      c.train.optimizer = TrainConfig::Optimizer::sgd;
    } else {
      throw Error(Err::Config,
                  strf("optimizer must be adam or sgd, got '%s'",
                       value.c_str()));
    }
  } else if (key == "beta1") {
    c.train.beta1 = parse_real(key, value);
  } else if (key == "beta2") {
    c.train.beta2 = parse_real(key, value);
  } else if (key == "epsilon") {
    c.train.epsilon = parse_real(key, value);
  } else if (key == "l2") {
    c.train.l2 = parse_real(key, value);
  } else if (key == "bleu_smooth") {
    c.bleu_smooth = parse_bool(key, value);
  } else {
    throw Error(Err::Config, strf("unknown config key '%s'", key.c_str()));
  }
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
  std::vector<std::string> lines;
  try {
    lines = read_lines(path);
  } catch (const Error& e) {
    throw Error(Err::Config, e.what());
  }
  RunConfig config;
  bool saw_version = false;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    if (!saw_version) {
      if (line != kVersionTag) {
        throw Error(Err::Config,
                    strf("%s: first line must be '%s'", path.c_str(),
                         kVersionTag));
      }
      saw_version = true;
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Err::Config,
                  strf("%s line %zu: expected 'key = value'", path.c_str(),
                       i + 1));
    }
    set_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  if (!saw_version) {
    throw Error(Err::Config,
                strf("%s: missing '%s' version line", path.c_str(),
                     kVersionTag));
  }
  return config;
}

void apply_override(RunConfig& config, const std::string& assignment) {
  size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw Error(Err::Config,
                strf("override '%s' is not of the form key=value",
                     assignment.c_str()));
  }
  set_key(config, trim(assignment.substr(0, eq)),
          trim(assignment.substr(eq + 1)));
}

void validate(const RunConfig& config) {
  if (config.backend == VectorBackend::embedding &&
      config.embedding_path.empty()) {
    throw Error(Err::Config, "backend w2v requires embedding_path");
  }
  if (config.backend == VectorBackend::tfidf &&
      !config.embedding_path.empty()) {
    throw Error(Err::Config,
                "embedding_path is set but backend is tfidf; remove one");
  }
}

std::string serialize(const RunConfig& c) {
  std::string out = std::string(kVersionTag) + "\n";
  auto put = [&](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  auto put_bool = [&](const char* key, bool v) {
    put(key, v ? "true" : "false");
  };
  put("train_diff", c.train_diff);
  put("train_msg", c.train_msg);
  put("valid_diff", c.valid_diff);
  put("valid_msg", c.valid_msg);
  put("test_diff", c.test_diff);
  put("test_msg", c.test_msg);
  put("output_dir", c.output_dir);
  put_bool("lowercase", c.pipeline.lowercase);
  put_bool("strip_special_chars", c.pipeline.strip_special_chars);
  put_bool("remove_stopwords", c.pipeline.remove_stopwords);
  put_bool("stem", c.pipeline.stem);
  put_bool("add_sentence_markers", c.pipeline.add_sentence_markers);
  put("pad_length", strf("%zu", c.pipeline.pad_length));
  put("vocab_max_size", strf("%zu", c.vocab_max_size));
  put("backend", c.backend == VectorBackend::tfidf ? "tfidf" : "w2v");
  put("model", c.model == ModelKind::nn ? "nn" : "lr");
  put("embedding_path", c.embedding_path);
  put("embedding_format",
      c.embedding_format == EmbeddingTable::Format::text ? "text" : "binary");
  put("learning_rate", format_double(c.train.learning_rate));
  put("epochs", strf("%zu", c.train.epochs));
  put("batch_size", strf("%zu", c.train.batch_size));
  put("seed", strf("%llu", static_cast<unsigned long long>(c.train.seed)));
  put("optimizer",
      c.train.optimizer == TrainConfig::Optimizer::adam ? "adam" : "sgd");
  put("beta1", format_double(c.train.beta1));
  put("beta2", format_double(c.train.beta2));
  put("epsilon", format_double(c.train.epsilon));
  put("l2", format_double(c.train.l2));
  put_bool("bleu_smooth", c.bleu_smooth);
  return out;
}

std::string config_fingerprint(const RunConfig& config) {
  return strf("%016llx",
              static_cast<unsigned long long>(fnv1a(serialize(config))));
}

}  // namespace cmg
