#include "cmg/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "cmg/errors.hpp"
#include "cmg/fileio.hpp"
#include "cmg/rng.hpp"

namespace cmg {

namespace fs = std::filesystem;

LabelCodec LabelCodec::encode(const std::vector<std::string>& train_messages) {
  return encode_all(train_messages).first;
}

std::pair<LabelCodec, std::vector<uint32_t>> LabelCodec::encode_all(
    const std::vector<std::string>& train_messages) {
  if (train_messages.empty()) {
    throw Error(Err::EmptyCorpus, "cannot encode labels of zero messages");
  }
  LabelCodec codec;
  std::vector<uint32_t> labels;
  labels.reserve(train_messages.size());
  for (const std::string& msg : train_messages) {
    auto [it, inserted] =
        codec.ids_.emplace(msg, static_cast<uint32_t>(codec.messages_.size()));
    if (inserted) codec.messages_.push_back(msg);
    labels.push_back(it->second);
  }
  return {std::move(codec), std::move(labels)};
}

LabelCodec LabelCodec::from_messages(std::vector<std::string> distinct) {
  LabelCodec codec;
  codec.messages_ = std::move(distinct);
  for (uint32_t id = 0; id < codec.messages_.size(); ++id) {
    auto [it, inserted] = codec.ids_.emplace(codec.messages_[id], id);
    if (!inserted) {
      throw Error(Err::BadModelFile,
                  strf("duplicate class message '%s'",
                       codec.messages_[id].c_str()));
    }
  }
  return codec;
}

uint32_t LabelCodec::class_of(const std::string& message) const {
  auto it = ids_.find(message);
  if (it == ids_.end()) {
    throw Error(Err::Internal,
                strf("message not in label table: '%s'", message.c_str()));
  }
  return it->second;
}

const std::string& LabelCodec::message_of(uint32_t class_id) const {
  if (class_id >= messages_.size()) {
    throw Error(Err::Internal, strf("class id %u out of range", class_id));
  }
  return messages_[class_id];
}

double LRModel::logit(uint32_t class_id, const SparseVector& x) const {
  const double* row = weights.data() + class_id * feature_dim;
  double z = bias[class_id];
  for (const auto& [j, v] : x.entries) z += row[j] * v;
  return z;
}

uint32_t LRModel::predict_class(const SparseVector& x) const {
  uint32_t best = 0;
  double best_z = logit(0, x);
  for (uint32_t c = 1; c < class_count; ++c) {
    double z = logit(c, x);
    if (z > best_z) {
      best = c;
      best_z = z;
    }
  }
  return best;
}

std::vector<double> softmax(std::vector<double> logits) {
  double max_z = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& z : logits) {
    z = std::exp(z - max_z);
    sum += z;
  }
  for (double& z : logits) z /= sum;
  return logits;
}

LossGrad loss_and_grad(const LRModel& model, const SparseVector& x,
                       uint32_t true_class) {
  if (true_class >= model.class_count) {
    throw Error(Err::Internal,
                strf("class %u out of range (%zu classes)", true_class,
                     model.class_count));
  }
  std::vector<double> logits(model.class_count);
  for (uint32_t c = 0; c < model.class_count; ++c) {
    logits[c] = model.logit(c, x);
  }
  std::vector<double> probs = softmax(std::move(logits));

  LossGrad out;
  out.loss = -std::log(probs[true_class]);
  out.dweights.assign(model.weights.size(), 0.0);
  out.dbias.assign(model.class_count, 0.0);
  for (uint32_t c = 0; c < model.class_count; ++c) {
    double d = probs[c] - (c == true_class ? 1.0 : 0.0);
    out.dbias[c] = d;
    double* row = out.dweights.data() + c * model.feature_dim;
    for (const auto& [j, v] : x.entries) row[j] = d * v;
  }
  return out;
}

LRModel train_lr(const std::vector<SparseVector>& features,
                 const std::vector<uint32_t>& labels, size_t feature_dim,
                 size_t class_count, VectorBackend backend,
                 const TrainConfig& config,
                 const std::function<void(size_t, double)>& on_epoch) {
  if (features.size() != labels.size()) {
    throw Error(Err::LengthMismatch,
                strf("%zu feature vectors vs %zu labels", features.size(),
                     labels.size()));
  }
  if (features.empty()) {
    throw Error(Err::EmptyCorpus, "cannot train on zero examples");
  }
  if (config.epochs < 1 || config.batch_size < 1 ||
      !(config.learning_rate > 0.0)) {
    throw Error(Err::Config,
                "training needs epochs >= 1, batch_size >= 1 and a positive "
                "learning rate");
  }
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= class_count) {
      throw Error(Err::Internal,
                  strf("label %u out of range at row %zu", labels[i], i));
    }
    for (const auto& [j, v] : features[i].entries) {
      (void)v;
      if (j >= feature_dim) {
        throw Error(Err::Internal,
                    strf("feature id %u out of range at row %zu", j, i));
      }
    }
  }

  LRModel model;
  model.backend = backend;
  model.class_count = class_count;
  model.feature_dim = feature_dim;
  model.weights.assign(class_count * feature_dim, 0.0);
  model.bias.assign(class_count, 0.0);

  const bool adam = config.optimizer == TrainConfig::Optimizer::adam;
  std::vector<double> mw, vw, mb, vb;
  if (adam) {
    mw.assign(model.weights.size(), 0.0);
    vw.assign(model.weights.size(), 0.0);
    mb.assign(class_count, 0.0);
    vb.assign(class_count, 0.0);
  }

  // Per-batch scratch gradients; only touched entries are dirtied and
  // zeroed again, so cost scales with batch sparsity, not feature_dim.
  std::vector<double> gw(model.weights.size(), 0.0);
  std::vector<double> gb(class_count, 0.0);
  std::vector<double> logits(class_count);
  std::vector<uint32_t> touched;  // distinct feature ids in this batch

  DetRng rng(config.seed);
  std::vector<size_t> order(features.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  size_t step = 0;  // Adam timestep, shared by all parameters
  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (size_t begin = 0; begin < order.size();
         begin += config.batch_size) {
      const size_t end = std::min(begin + config.batch_size, order.size());
      const double inv_n = 1.0 / static_cast<double>(end - begin);

      touched.clear();
      for (size_t pos = begin; pos < end; ++pos) {
        const SparseVector& x = features[order[pos]];
        const uint32_t y = labels[order[pos]];
        for (uint32_t c = 0; c < class_count; ++c) {
          logits[c] = model.logit(c, x);
        }
        double max_z = *std::max_element(logits.begin(), logits.end());
        double sum = 0.0;
        for (uint32_t c = 0; c < class_count; ++c) {
          logits[c] = std::exp(logits[c] - max_z);
          sum += logits[c];
        }
        epoch_loss += -std::log(logits[y] / sum);
        for (uint32_t c = 0; c < class_count; ++c) {
          const double d = logits[c] / sum - (c == y ? 1.0 : 0.0);
          gb[c] += d * inv_n;
          double* row = gw.data() + c * feature_dim;
          for (const auto& [j, v] : x.entries) {
            row[j] += d * v * inv_n;
          }
        }
        for (const auto& [j, v] : x.entries) {
          (void)v;
          touched.push_back(j);
        }
      }
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()),
                    touched.end());

      ++step;
      const double lr = config.learning_rate;
      if (adam) {
        const double bc1 = 1.0 - std::pow(config.beta1,
                                          static_cast<double>(step));
        const double bc2 = 1.0 - std::pow(config.beta2,
                                          static_cast<double>(step));
        for (uint32_t c = 0; c < class_count; ++c) {
          const size_t base = c * feature_dim;
          for (uint32_t j : touched) {
            const size_t k = base + j;
            double g = gw[k] + config.l2 * model.weights[k];
            mw[k] = config.beta1 * mw[k] + (1.0 - config.beta1) * g;
            vw[k] = config.beta2 * vw[k] + (1.0 - config.beta2) * g * g;
            model.weights[k] -=
                lr * (mw[k] / bc1) / (std::sqrt(vw[k] / bc2) +
                                      config.epsilon);
            gw[k] = 0.0;
          }
          double g = gb[c] + config.l2 * model.bias[c];
          mb[c] = config.beta1 * mb[c] + (1.0 - config.beta1) * g;
          vb[c] = config.beta2 * vb[c] + (1.0 - config.beta2) * g * g;
          model.bias[c] -=
              lr * (mb[c] / bc1) / (std::sqrt(vb[c] / bc2) + config.epsilon);
          gb[c] = 0.0;
        }
      } else {
        for (uint32_t c = 0; c < class_count; ++c) {
          const size_t base = c * feature_dim;
          for (uint32_t j : touched) {
            const size_t k = base + j;
            model.weights[k] -= lr * (gw[k] + config.l2 * model.weights[k]);
            gw[k] = 0.0;
          }
          model.bias[c] -= lr * (gb[c] + config.l2 * model.bias[c]);
          gb[c] = 0.0;
        }
      }
    }
    if (on_epoch) {
      on_epoch(epoch, epoch_loss / static_cast<double>(features.size()));
    }
  }
  return model;
}

const std::string& predict(const LRModel& model, const LabelCodec& codec,
                           const SparseVector& x) {
  return codec.message_of(model.predict_class(x));
}

void save_lr(const LRModel& model, const LabelCodec& codec,
             const fs::path& path) {
  std::string out = "cmg-lrmodel-v1\n";
  out += strf("backend %s\n", backend_name(model.backend));
  out += strf("classes %zu\n", model.class_count);
  out += strf("features %zu\n", model.feature_dim);
  out += "bias";
  for (double b : model.bias) {
    out += ' ';
    out += format_double(b);
  }
  out += '\n';
  for (size_t c = 0; c < model.class_count; ++c) {
    out += 'w';
    const double* row = model.weights.data() + c * model.feature_dim;
    for (size_t j = 0; j < model.feature_dim; ++j) {
      out += ' ';
      out += format_double(row[j]);
    }
    out += '\n';
  }
  for (size_t c = 0; c < model.class_count; ++c) {
    out += "m ";
    out += codec.message_of(static_cast<uint32_t>(c));
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::pair<LRModel, LabelCodec> load_lr(const fs::path& path) {
  std::vector<std::string> lines = read_lines(path);
  auto bad = [&](const char* why) -> Error {
    return Error(Err::BadModelFile,
                 strf("%s is not a valid model file: %s", path.c_str(), why));
  };
  if (lines.size() < 5 || lines[0] != "cmg-lrmodel-v1") {
    throw bad("bad magic line");
  }
  char backend_buf[32] = {0};
  size_t classes = 0, feature_dim = 0;
  if (std::sscanf(lines[1].c_str(), "backend %31s", backend_buf) != 1 ||
      std::sscanf(lines[2].c_str(), "classes %zu", &classes) != 1 ||
      std::sscanf(lines[3].c_str(), "features %zu", &feature_dim) != 1) {
    throw bad("bad header");
  }
  std::string backend = backend_buf;
  if (backend != "tfidf" && backend != "embedding") {
    throw bad("unknown backend");
  }
  if (lines.size() != 5 + 2 * classes) throw bad("wrong line count");

  LRModel model;
  model.backend = backend == "tfidf" ? VectorBackend::tfidf
                                     : VectorBackend::embedding;
  model.class_count = classes;
  model.feature_dim = feature_dim;

  TokenSeq bias_parts = split_whitespace(lines[4]);
  if (bias_parts.size() != classes + 1 || bias_parts[0] != "bias") {
    throw bad("bad bias line");
  }
  model.bias.reserve(classes);
  for (size_t c = 0; c < classes; ++c) {
    model.bias.push_back(parse_double(bias_parts[c + 1]));
  }
  model.weights.reserve(classes * feature_dim);
  for (size_t c = 0; c < classes; ++c) {
    TokenSeq parts = split_whitespace(lines[5 + c]);
    if (parts.size() != feature_dim + 1 || parts[0] != "w") {
      throw bad("bad weight line");
    }
    for (size_t j = 0; j < feature_dim; ++j) {
      model.weights.push_back(parse_double(parts[j + 1]));
    }
  }
  std::vector<std::string> messages;
  messages.reserve(classes);
  for (size_t c = 0; c < classes; ++c) {
    const std::string& line = lines[5 + classes + c];
    if (line.size() < 2 || line[0] != 'm' || line[1] != ' ') {
      throw bad("bad message line");
    }
    messages.push_back(line.substr(2));
  }
  return {std::move(model), LabelCodec::from_messages(std::move(messages))};
}

}  // namespace cmg
