#include "cmg/preprocess.hpp"

#include <algorithm>
#include <cctype>

#include "cmg/errors.hpp"
#include "cmg/fileio.hpp"
#include "cmg/stemmer.hpp"

namespace cmg {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_allowed_char(char c) {
  if (c >= 'a' && c <= 'z') return true;
  if (c >= '0' && c <= '9') return true;
  switch (c) {
    case '_':
    case '<':
    case '>':
    case '+':
    case '-':
    case '@':
    case '/':
    case '.':
      return true;
    default:
      return false;
  }
}

}  // namespace

TokenSeq split_whitespace(std::string_view text) {
  TokenSeq tokens;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

TokenSeq normalize(std::string_view text, const PipelineConfig& config) {
  // trim
  size_t begin = 0, end = text.size();
  while (begin < end && is_space(text[begin])) ++begin;
  while (end > begin && is_space(text[end - 1])) --end;
  std::string work(text.substr(begin, end - begin));

  if (config.lowercase) {
    std::transform(work.begin(), work.end(), work.begin(), [](char c) {
      return static_cast<char>(
          std::tolower(static_cast<unsigned char>(c)));
    });
  }

  TokenSeq tokens = split_whitespace(work);

  if (config.strip_special_chars) {
    TokenSeq kept;
    kept.reserve(tokens.size());
    for (std::string& tok : tokens) {
      std::string stripped;
      stripped.reserve(tok.size());
      for (char c : tok) {
        if (is_allowed_char(c)) stripped.push_back(c);
      }
      if (!stripped.empty()) kept.push_back(std::move(stripped));
    }
    tokens = std::move(kept);
  }

  if (config.remove_stopwords) {
    TokenSeq kept;
    kept.reserve(tokens.size());
    for (std::string& tok : tokens) {
      if (!is_stopword(tok)) kept.push_back(std::move(tok));
    }
    tokens = std::move(kept);
  }

  if (config.stem) {
    for (std::string& tok : tokens) tok = porter_stem(tok);
  }

  return tokens;
}

Vocabulary Vocabulary::build(const std::vector<TokenSeq>& docs,
                             std::optional<size_t> max_size) {
  if (max_size && *max_size < 5) {
    throw Error(Err::VocabTooSmall,
                strf("vocabulary cap %zu leaves no room for real tokens "
                     "(4 ids are reserved)",
                     *max_size));
  }
  std::unordered_map<std::string, size_t> counts;
  for (const TokenSeq& doc : docs) {
    for (const std::string& tok : doc) ++counts[tok];
  }
  std::vector<std::pair<std::string, size_t>> ordered(counts.begin(),
                                                      counts.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab;
  vocab.tokens_ = {"<PAD>", "<s>", "</s>", "<UNK>"};
  size_t limit = max_size ? *max_size : ordered.size() + 4;
  for (auto& [tok, count] : ordered) {
    if (vocab.tokens_.size() >= limit) break;
    vocab.tokens_.push_back(tok);
  }
  for (uint32_t id = 0; id < vocab.tokens_.size(); ++id) {
    vocab.ids_.emplace(vocab.tokens_[id], id);
  }
  return vocab;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < 4) {
    throw Error(Err::VocabTooSmall,
                strf("token list has %zu entries; the 4 specials are "
                     "mandatory",
                     tokens.size()));
  }
  Vocabulary vocab;
  vocab.tokens_ = std::move(tokens);
  for (uint32_t id = 0; id < vocab.tokens_.size(); ++id) {
    auto [it, inserted] = vocab.ids_.emplace(vocab.tokens_[id], id);
    if (!inserted) {
      throw Error(Err::BadModelFile,
                  strf("duplicate vocabulary token '%s'",
                       vocab.tokens_[id].c_str()));
    }
  }
  return vocab;
}

uint32_t Vocabulary::id_of(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return ids_.count(std::string(token)) > 0;
}

const std::string& Vocabulary::token_of(uint32_t id) const {
  if (id >= tokens_.size()) {
    throw Error(Err::Internal, strf("vocabulary id %u out of range", id));
  }
  return tokens_[id];
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::string out;
  for (const std::string& tok : tokens_) {
    out += tok;
    out += '\n';
  }
  write_file_atomic(path, out);
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  return from_tokens(read_lines(path));
}

std::vector<uint32_t> encode(const TokenSeq& tokens, const Vocabulary& vocab,
                             bool mark_sentence) {
  std::vector<uint32_t> ids;
  ids.reserve(tokens.size() + (mark_sentence ? 2 : 0));
  if (mark_sentence) ids.push_back(Vocabulary::kBos);
  for (const std::string& tok : tokens) ids.push_back(vocab.id_of(tok));
  if (mark_sentence) ids.push_back(Vocabulary::kEos);
  return ids;
}

std::vector<uint32_t> pad_or_trim(std::vector<uint32_t> ids,
                                  size_t target_len) {
  if (target_len == 0) {
    throw Error(Err::Config, "pad length must be positive");
  }
  ids.resize(target_len, Vocabulary::kPad);
  return ids;
}

}  // namespace cmg
