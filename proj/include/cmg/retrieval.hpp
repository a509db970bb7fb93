#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cmg/vectorize.hpp"

namespace cmg {

// Which vectorizer produced the vectors a model works on. Mixing the two is
// always a caller bug and is rejected loudly.
enum class VectorBackend { tfidf, embedding };

const char* backend_name(VectorBackend backend);

// Cosine similarity; 0 when either vector has zero norm. Dense overload
// requires equal dimensions (DimensionMismatch).
double cosine(const SparseVector& a, const SparseVector& b);
double cosine(const DenseVector& a, const DenseVector& b);

struct Neighbor {
  size_t train_index = 0;
  double similarity = 0.0;
};

// Exact (exhaustive) nearest-neighbor index over the training vectors, each
// paired with its stored commit message. Retrieval order: descending
// similarity, ties by ascending train index — so an all-zero query returns
// index 0.
class NNIndex {
 public:
  static NNIndex build(std::vector<SparseVector> vectors,
                       std::vector<std::string> messages);
  static NNIndex build(std::vector<DenseVector> vectors,
                       std::vector<std::string> messages);

  VectorBackend backend() const { return backend_; }
  size_t size() const { return messages_.size(); }
  const std::string& message(size_t train_index) const;

  // k best neighbors (all of them when k exceeds the index size; k = 0 is
  // an error). Throws BackendMismatch when the query type does not match
  // the stored vectors, EmptyIndex when the index has no entries.
  std::vector<Neighbor> nearest(const SparseVector& query, size_t k = 1) const;
  std::vector<Neighbor> nearest(const DenseVector& query, size_t k = 1) const;

  // The stored message of the single nearest neighbor, verbatim.
  const std::string& generate(const SparseVector& query) const;
  const std::string& generate(const DenseVector& query) const;

  void save(const std::filesystem::path& path) const;
  static NNIndex load(const std::filesystem::path& path);

 private:
  template <class Vec>
  std::vector<Neighbor> nearest_impl(const std::vector<Vec>& vectors,
                                     const Vec& query, size_t k) const;

  VectorBackend backend_ = VectorBackend::tfidf;
  std::vector<SparseVector> sparse_;   // used when backend_ == tfidf
  std::vector<DenseVector> dense_;     // used when backend_ == embedding
  std::vector<std::string> messages_;
};

}  // namespace cmg
