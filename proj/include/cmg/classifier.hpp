#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cmg/retrieval.hpp"
#include "cmg/vectorize.hpp"

namespace cmg {

// Distinct training messages <-> class ids, first occurrence first.
class LabelCodec {
 public:
  static LabelCodec encode(const std::vector<std::string>& train_messages);
  static LabelCodec from_messages(std::vector<std::string> distinct_messages);

  uint32_t class_of(const std::string& message) const;  // must exist
  const std::string& message_of(uint32_t class_id) const;
  size_t class_count() const { return messages_.size(); }

  // Class id of every input message, in input order.
  static std::pair<LabelCodec, std::vector<uint32_t>> encode_all(
      const std::vector<std::string>& train_messages);

 private:
  std::vector<std::string> messages_;
  std::unordered_map<std::string, uint32_t> ids_;
};

// Multinomial logistic regression over sparse feature vectors.
struct LRModel {
  VectorBackend backend = VectorBackend::tfidf;
  size_t class_count = 0;
  size_t feature_dim = 0;
  std::vector<double> weights;  // class-major: weights[c * feature_dim + j]
  std::vector<double> bias;     // class_count entries

  double logit(uint32_t class_id, const SparseVector& x) const;
  // argmax of logits, ties to the lowest class id
  uint32_t predict_class(const SparseVector& x) const;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  size_t epochs = 10;
  size_t batch_size = 64;
  uint64_t seed = 42;
  enum class Optimizer { adam, sgd };
  Optimizer optimizer = Optimizer::adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double l2 = 0.0;
};

// Numerically stable softmax (max-subtraction); entries sum to 1.
std::vector<double> softmax(std::vector<double> logits);

struct LossGrad {
  double loss = 0.0;
  std::vector<double> dweights;  // same layout as LRModel::weights
  std::vector<double> dbias;
};

// Cross-entropy loss and exact analytic gradients for one example.
LossGrad loss_and_grad(const LRModel& model, const SparseVector& x,
                       uint32_t true_class);

// Mini-batch training from zero-initialized parameters. The shuffle order
// is fully determined by config.seed. on_epoch, when given, receives
// (epoch index, mean training loss of that epoch).
LRModel train_lr(const std::vector<SparseVector>& features,
                 const std::vector<uint32_t>& labels, size_t feature_dim,
                 size_t class_count, VectorBackend backend,
                 const TrainConfig& config,
                 const std::function<void(size_t, double)>& on_epoch = {});

// Message of the argmax class.
const std::string& predict(const LRModel& model, const LabelCodec& codec,
                           const SparseVector& x);

void save_lr(const LRModel& model, const LabelCodec& codec,
             const std::filesystem::path& path);
std::pair<LRModel, LabelCodec> load_lr(const std::filesystem::path& path);

}  // namespace cmg
