#include "cmg/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "cmg/errors.hpp"
#include "cmg/fileio.hpp"

namespace cmg {

namespace fs = std::filesystem;

TfIdfModel TfIdfModel::fit(const std::vector<TokenSeq>& docs) {
  if (docs.empty()) {
    throw Error(Err::EmptyCorpus, "cannot fit tf-idf on zero documents");
  }
  std::unordered_map<std::string, size_t> total_counts;
  std::unordered_map<std::string, size_t> doc_freq;
  for (const TokenSeq& doc : docs) {
    std::unordered_map<std::string, size_t> seen;
    for (const std::string& tok : doc) {
      ++total_counts[tok];
      ++seen[tok];
    }
    for (const auto& [tok, _] : seen) ++doc_freq[tok];
  }

  std::vector<std::pair<std::string, size_t>> ordered(total_counts.begin(),
                                                      total_counts.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  TfIdfModel model;
  model.doc_count_ = docs.size();
  model.features_.reserve(ordered.size());
  model.idf_.reserve(ordered.size());
  const double n = static_cast<double>(docs.size());
  for (auto& [tok, _] : ordered) {
    const double df = static_cast<double>(doc_freq.at(tok));
    model.idf_.push_back(std::log((1.0 + n) / (1.0 + df)) + 1.0);
    model.features_.push_back(tok);
  }
  for (uint32_t id = 0; id < model.features_.size(); ++id) {
    model.ids_.emplace(model.features_[id], id);
  }
  return model;
}

SparseVector TfIdfModel::transform(const TokenSeq& doc) const {
  std::unordered_map<uint32_t, size_t> counts;
  for (const std::string& tok : doc) {
    auto it = ids_.find(tok);
    if (it != ids_.end()) ++counts[it->second];
  }
  SparseVector v;
  v.entries.reserve(counts.size());
  for (const auto& [id, count] : counts) {
    v.entries.emplace_back(id, static_cast<double>(count) * idf_[id]);
  }
  std::sort(v.entries.begin(), v.entries.end());
  double norm = l2_norm(v);
  if (norm > 0.0) {
    for (auto& [id, w] : v.entries) w /= norm;
  }
  return v;
}

double TfIdfModel::idf(uint32_t feature_id) const {
  if (feature_id >= idf_.size()) {
    throw Error(Err::Internal, strf("feature id %u out of range", feature_id));
  }
  return idf_[feature_id];
}

std::optional<uint32_t> TfIdfModel::feature_id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& TfIdfModel::feature_token(uint32_t feature_id) const {
  if (feature_id >= features_.size()) {
    throw Error(Err::Internal, strf("feature id %u out of range", feature_id));
  }
  return features_[feature_id];
}

void TfIdfModel::save(const fs::path& path) const {
  std::string out = "cmg-tfidf-v1\n";
  out += strf("docs %zu\n", doc_count_);
  out += strf("features %zu\n", features_.size());
  for (size_t i = 0; i < features_.size(); ++i) {
    out += features_[i];
    out += '\t';
    out += format_double(idf_[i]);
    out += '\n';
  }
  write_file_atomic(path, out);
}

TfIdfModel TfIdfModel::load(const fs::path& path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.size() < 3 || lines[0] != "cmg-tfidf-v1") {
    throw Error(Err::BadModelFile,
                strf("%s is not a tf-idf model file", path.c_str()));
  }
  size_t docs = 0, features = 0;
  if (std::sscanf(lines[1].c_str(), "docs %zu", &docs) != 1 ||
      std::sscanf(lines[2].c_str(), "features %zu", &features) != 1 ||
      lines.size() != 3 + features) {
    throw Error(Err::BadModelFile,
                strf("%s has a malformed tf-idf header", path.c_str()));
  }
  TfIdfModel model;
  model.doc_count_ = docs;
  model.features_.reserve(features);
  model.idf_.reserve(features);
  for (size_t i = 0; i < features; ++i) {
    const std::string& line = lines[3 + i];
    size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(Err::BadModelFile,
                  strf("%s line %zu lacks a tab separator", path.c_str(),
                       4 + i));
    }
    model.features_.push_back(line.substr(0, tab));
    model.idf_.push_back(parse_double(line.substr(tab + 1)));
  }
  for (uint32_t id = 0; id < model.features_.size(); ++id) {
    auto [it, inserted] = model.ids_.emplace(model.features_[id], id);
    if (!inserted) {
      throw Error(Err::BadModelFile,
                  strf("%s repeats feature '%s'", path.c_str(),
                       model.features_[id].c_str()));
    }
  }
  return model;
}

namespace {

struct Header {
  size_t count = 0;
  size_t dim = 0;
  size_t body_offset = 0;  // first byte after the header newline
};

Header parse_header(const std::string& bytes, const fs::path& path) {
  size_t nl = bytes.find('\n');
  if (nl == std::string::npos) {
    throw Error(Err::MalformedHeader,
                strf("%s: no header line", path.c_str()));
  }
  Header h;
  unsigned long long count = 0, dim = 0;
  char extra = 0;
  std::string header = bytes.substr(0, nl);
  if (std::sscanf(header.c_str(), "%llu %llu %c", &count, &dim, &extra) != 2) {
    throw Error(Err::MalformedHeader,
                strf("%s: header '%s' is not '<count> <dim>'", path.c_str(),
                     header.c_str()));
  }
  if (dim == 0) {
    throw Error(Err::DimensionZero,
                strf("%s declares dimension 0", path.c_str()));
  }
  h.count = count;
  h.dim = dim;
  h.body_offset = nl + 1;
  return h;
}

}  // namespace

EmbeddingTable EmbeddingTable::load(const fs::path& path, Format format) {
  std::string bytes = read_file(path);
  Header header = parse_header(bytes, path);

  EmbeddingTable table;
  table.dim_ = header.dim;
  table.words_.reserve(header.count);
  table.data_.reserve(header.count * header.dim);

  auto note_entry = [&](std::string word, const float* values) {
    size_t row = table.words_.size();
    auto [it, inserted] = table.index_.emplace(std::move(word), row);
    if (!inserted) {
      // keep the first occurrence, matching common loader behavior
      return;
    }
    table.words_.push_back(it->first);
    table.data_.insert(table.data_.end(), values, values + table.dim_);
  };

  if (format == Format::text) {
    std::vector<std::string> lines =
        split_lines(bytes.substr(header.body_offset));
    size_t entries_read = 0;
    for (const std::string& line : lines) {
      if (line.empty()) continue;
      if (entries_read == header.count) break;
      TokenSeq parts = split_whitespace(line);
      if (parts.size() != header.dim + 1) {
        throw Error(Err::TruncatedFile,
                    strf("%s: entry %zu has %zu values, expected %zu "
                         "(entries read: %zu)",
                         path.c_str(), entries_read + 1,
                         parts.size() ? parts.size() - 1 : 0, header.dim,
                         entries_read));
      }
      std::vector<float> values(header.dim);
      for (size_t d = 0; d < header.dim; ++d) {
        values[d] = static_cast<float>(parse_double(parts[d + 1]));
      }
      note_entry(parts[0], values.data());
      ++entries_read;
    }
    if (entries_read < header.count) {
      throw Error(Err::TruncatedFile,
                  strf("%s: header promises %zu entries, found %zu",
                       path.c_str(), header.count, entries_read));
    }
  } else {
    size_t pos = header.body_offset;
    const size_t vec_bytes = header.dim * sizeof(float);
    std::vector<float> values(header.dim);
    for (size_t entry = 0; entry < header.count; ++entry) {
      if (pos < bytes.size() && bytes[pos] == '\n') ++pos;
      size_t word_end = pos;
      while (word_end < bytes.size() && bytes[word_end] != ' ') ++word_end;
      if (word_end >= bytes.size() ||
          word_end + 1 + vec_bytes > bytes.size()) {
        throw Error(Err::TruncatedFile,
                    strf("%s: file ends inside entry %zu (entries read: %zu)",
                         path.c_str(), entry + 1, entry));
      }
      std::string word = bytes.substr(pos, word_end - pos);
      std::memcpy(values.data(), bytes.data() + word_end + 1, vec_bytes);
      note_entry(std::move(word), values.data());
      pos = word_end + 1 + vec_bytes;
    }
  }
  return table;
}

const float* EmbeddingTable::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return nullptr;
  return data_.data() + it->second * dim_;
}

DenseVector EmbeddingTable::embed(const TokenSeq& doc) const {
  DenseVector v;
  v.values.assign(dim_, 0.0);
  size_t hits = 0;
  for (const std::string& tok : doc) {
    const float* row = find(tok);
    if (row == nullptr) continue;
    ++hits;
    for (size_t d = 0; d < dim_; ++d) v.values[d] += row[d];
  }
  if (hits > 0) {
    for (double& x : v.values) x /= static_cast<double>(hits);
  }
  return v;
}

double l2_norm(const SparseVector& v) {
  double sq = 0.0;
  for (const auto& [id, w] : v.entries) sq += w * w;
  return std::sqrt(sq);
}

double l2_norm(const DenseVector& v) {
  double sq = 0.0;
  for (double x : v.values) sq += x * x;
  return std::sqrt(sq);
}

SparseVector to_sparse(const DenseVector& v) {
  SparseVector s;
  for (size_t i = 0; i < v.values.size(); ++i) {
    if (v.values[i] != 0.0) {
      s.entries.emplace_back(static_cast<uint32_t>(i), v.values[i]);
    }
  }
  return s;
}

}  // namespace cmg
