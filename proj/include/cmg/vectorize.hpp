#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cmg/preprocess.hpp"

namespace cmg {

// Sparse vector: (feature id, weight) entries with ascending ids and no
// explicit zeros.
struct SparseVector {
  std::vector<std::pair<uint32_t, double>> entries;

  bool operator==(const SparseVector&) const = default;
};

struct DenseVector {
  std::vector<double> values;

  bool operator==(const DenseVector&) const = default;
};

// TF-IDF with raw term counts and smoothed idf:
//   idf(t) = ln((1 + N) / (1 + df(t))) + 1
// Document vectors are L2-normalized. The feature space is every distinct
// token of the fitted documents, ordered by descending corpus frequency,
// ties by ascending token text.
class TfIdfModel {
 public:
  static TfIdfModel fit(const std::vector<TokenSeq>& docs);

  // Zero vector for documents with no known token; otherwise unit L2 norm.
  SparseVector transform(const TokenSeq& doc) const;

  size_t feature_count() const { return features_.size(); }
  size_t fitted_doc_count() const { return doc_count_; }
  double idf(uint32_t feature_id) const;
  std::optional<uint32_t> feature_id(std::string_view token) const;
  const std::string& feature_token(uint32_t feature_id) const;

  void save(const std::filesystem::path& path) const;
  static TfIdfModel load(const std::filesystem::path& path);

 private:
  size_t doc_count_ = 0;
  std::vector<std::string> features_;       // id -> token
  std::vector<double> idf_;                 // id -> idf
  std::unordered_map<std::string, uint32_t> ids_;
};

// Pretrained word vectors (word2vec-style). Two on-disk layouts:
//   text:   "<count> <dim>\n" then one "word v1 .. vdim" line per entry
//   binary: "<count> <dim>\n" then per entry the word's bytes terminated by
//           0x20 and dim little-endian float32 values; a single trailing
//           0x0A after the vector is tolerated, as is one before the word.
class EmbeddingTable {
 public:
  enum class Format { text, binary };

  static EmbeddingTable load(const std::filesystem::path& path,
                             Format format);

  size_t dim() const { return dim_; }
  size_t size() const { return words_.size(); }
  const std::string& word_at(size_t i) const { return words_[i]; }

  // Vector for the word, or nullptr when absent.
  const float* find(std::string_view word) const;

  // Mean of the vectors of the document's in-vocabulary tokens; the zero
  // vector when none are known.
  DenseVector embed(const TokenSeq& doc) const;

 private:
  size_t dim_ = 0;
  std::vector<std::string> words_;  // insertion order of the file
  std::vector<float> data_;         // words_.size() * dim_ floats
  std::unordered_map<std::string, size_t> index_;
};

double l2_norm(const SparseVector& v);
double l2_norm(const DenseVector& v);

// Dense -> sparse adapter (drops zeros) so one classifier path serves both
// vector backends.
SparseVector to_sparse(const DenseVector& v);

}  // namespace cmg
