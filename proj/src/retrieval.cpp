#include "cmg/retrieval.hpp"

#include <algorithm>

#include "cmg/errors.hpp"
#include "cmg/fileio.hpp"

namespace cmg {

namespace fs = std::filesystem;

const char* backend_name(VectorBackend backend) {
  return backend == VectorBackend::tfidf ? "tfidf" : "embedding";
}

double cosine(const SparseVector& a, const SparseVector& b) {
  double dot = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  double na = l2_norm(a), nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (na * nb);
}

double cosine(const DenseVector& a, const DenseVector& b) {
  if (a.values.size() != b.values.size()) {
    throw Error(Err::DimensionMismatch,
                strf("cosine of %zu-dim and %zu-dim vectors",
                     a.values.size(), b.values.size()));
  }
  double dot = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
  }
  double na = l2_norm(a), nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (na * nb);
}

NNIndex NNIndex::build(std::vector<SparseVector> vectors,
                       std::vector<std::string> messages) {
  if (vectors.size() != messages.size()) {
    throw Error(Err::LengthMismatch,
                strf("%zu vectors vs %zu messages", vectors.size(),
                     messages.size()));
  }
  NNIndex index;
  index.backend_ = VectorBackend::tfidf;
  index.sparse_ = std::move(vectors);
  index.messages_ = std::move(messages);
  return index;
}

NNIndex NNIndex::build(std::vector<DenseVector> vectors,
                       std::vector<std::string> messages) {
  if (vectors.size() != messages.size()) {
    throw Error(Err::LengthMismatch,
                strf("%zu vectors vs %zu messages", vectors.size(),
                     messages.size()));
  }
  for (size_t i = 1; i < vectors.size(); ++i) {
    if (vectors[i].values.size() != vectors[0].values.size()) {
      throw Error(Err::DimensionMismatch,
                  strf("vector %zu has dim %zu, vector 0 has dim %zu", i,
                       vectors[i].values.size(), vectors[0].values.size()));
    }
  }
  NNIndex index;
  index.backend_ = VectorBackend::embedding;
  index.dense_ = std::move(vectors);
  index.messages_ = std::move(messages);
  return index;
}

const std::string& NNIndex::message(size_t train_index) const {
  if (train_index >= messages_.size()) {
    throw Error(Err::Internal,
                strf("train index %zu out of range", train_index));
  }
  return messages_[train_index];
}

template <class Vec>
std::vector<Neighbor> NNIndex::nearest_impl(const std::vector<Vec>& vectors,
                                            const Vec& query,
                                            size_t k) const {
  if (messages_.empty()) {
    throw Error(Err::EmptyIndex, "nearest-neighbor index is empty");
  }
  if (k == 0) {
    throw Error(Err::Config, "k must be at least 1");
  }
  k = std::min(k, vectors.size());
  std::vector<Neighbor> all(vectors.size());
  for (size_t i = 0; i < vectors.size(); ++i) {
    all[i] = {i, cosine(query, vectors[i])};
  }
  auto better = [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.train_index < b.train_index;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<long>(k),
                    all.end(), better);
  all.resize(k);
  return all;
}

std::vector<Neighbor> NNIndex::nearest(const SparseVector& query,
                                       size_t k) const {
  if (backend_ != VectorBackend::tfidf) {
    throw Error(Err::BackendMismatch,
                "sparse query against an embedding-backed index");
  }
  return nearest_impl(sparse_, query, k);
}

std::vector<Neighbor> NNIndex::nearest(const DenseVector& query,
                                       size_t k) const {
  if (backend_ != VectorBackend::embedding) {
    throw Error(Err::BackendMismatch,
                "dense query against a tf-idf-backed index");
  }
  if (!dense_.empty() && query.values.size() != dense_[0].values.size()) {
    throw Error(Err::DimensionMismatch,
                strf("query dim %zu vs index dim %zu", query.values.size(),
                     dense_[0].values.size()));
  }
  return nearest_impl(dense_, query, k);
}

const std::string& NNIndex::generate(const SparseVector& query) const {
  return messages_[nearest(query, 1)[0].train_index];
}

const std::string& NNIndex::generate(const DenseVector& query) const {
  return messages_[nearest(query, 1)[0].train_index];
}

void NNIndex::save(const fs::path& path) const {
  std::string out = "cmg-nnindex-v1\n";
  out += strf("backend %s\n", backend_name(backend_));
  out += strf("entries %zu\n", messages_.size());
  if (backend_ == VectorBackend::embedding) {
    out += strf("dim %zu\n", dense_.empty() ? 0 : dense_[0].values.size());
  }
  for (size_t i = 0; i < messages_.size(); ++i) {
    out += "v";
    if (backend_ == VectorBackend::tfidf) {
      for (const auto& [id, w] : sparse_[i].entries) {
        out += strf(" %u:", id);
        out += format_double(w);
      }
    } else {
      for (double x : dense_[i].values) {
        out += ' ';
        out += format_double(x);
      }
    }
    out += "\nm ";
    out += messages_[i];
    out += '\n';
  }
  write_file_atomic(path, out);
}

NNIndex NNIndex::load(const fs::path& path) {
  std::vector<std::string> lines = read_lines(path);
  auto bad = [&](const char* why) -> Error {
    return Error(Err::BadModelFile,
                 strf("%s is not a valid index file: %s", path.c_str(), why));
  };
  if (lines.size() < 3 || lines[0] != "cmg-nnindex-v1") {
    throw bad("bad magic line");
  }
  char backend_buf[32] = {0};
  size_t entries = 0;
  if (std::sscanf(lines[1].c_str(), "backend %31s", backend_buf) != 1 ||
      std::sscanf(lines[2].c_str(), "entries %zu", &entries) != 1) {
    throw bad("bad backend/entries header");
  }
  std::string backend = backend_buf;
  size_t cursor = 3;
  size_t dim = 0;
  bool is_dense = backend == "embedding";
  if (!is_dense && backend != "tfidf") throw bad("unknown backend");
  if (is_dense) {
    if (cursor >= lines.size() ||
        std::sscanf(lines[cursor].c_str(), "dim %zu", &dim) != 1) {
      throw bad("missing dim header");
    }
    ++cursor;
  }
  if (lines.size() != cursor + 2 * entries) throw bad("wrong line count");

  std::vector<SparseVector> sparse;
  std::vector<DenseVector> dense;
  std::vector<std::string> messages;
  for (size_t e = 0; e < entries; ++e) {
    const std::string& vline = lines[cursor + 2 * e];
    const std::string& mline = lines[cursor + 2 * e + 1];
    if (vline.empty() || vline[0] != 'v') throw bad("expected vector line");
    if (mline.size() < 2 || mline[0] != 'm' || mline[1] != ' ') {
      throw bad("expected message line");
    }
    TokenSeq parts = split_whitespace(vline.substr(1));
    if (is_dense) {
      if (parts.size() != dim) throw bad("vector dimension mismatch");
      DenseVector v;
      v.values.reserve(dim);
      for (const std::string& p : parts) v.values.push_back(parse_double(p));
      dense.push_back(std::move(v));
    } else {
      SparseVector v;
      v.entries.reserve(parts.size());
      for (const std::string& p : parts) {
        unsigned id = 0;
        int consumed = 0;
        if (std::sscanf(p.c_str(), "%u:%n", &id, &consumed) != 1 ||
            consumed <= 0) {
          throw bad("bad sparse entry");
        }
        v.entries.emplace_back(id, parse_double(p.substr(
                                       static_cast<size_t>(consumed))));
      }
      sparse.push_back(std::move(v));
    }
    messages.push_back(mline.substr(2));
  }
  return is_dense ? build(std::move(dense), std::move(messages))
                  : build(std::move(sparse), std::move(messages));
}

}  // namespace cmg
