#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cmg {

using TokenSeq = std::vector<std::string>;

// Switches for the token normalization chain. Order is fixed:
// trim -> lowercase -> whitespace split -> special-char strip ->
// stopword removal -> stemming.
struct PipelineConfig {
  bool lowercase = true;
  bool strip_special_chars = true;
  bool remove_stopwords = true;
  bool stem = true;
  bool add_sentence_markers = false;  // consumed by encode()
  size_t pad_length = 100;            // consumed by pad_or_trim()
};

// Applies the normalization chain to one raw text. Tokens that become empty
// after stripping are dropped. The allowed character set when stripping is
// [a-z0-9_<>+-@/.].
TokenSeq normalize(std::string_view text, const PipelineConfig& config);

// The fixed English stopword list the pipeline uses (127 words).
const std::vector<std::string>& stopword_list();
bool is_stopword(std::string_view token);

// Token <-> id table. Ids 0..3 are reserved specials; the rest are assigned
// by descending corpus frequency, ties broken by ascending token text.
class Vocabulary {
 public:
  static constexpr uint32_t kPad = 0;
  static constexpr uint32_t kBos = 1;
  static constexpr uint32_t kEos = 2;
  static constexpr uint32_t kUnk = 3;

  // max_size, when set, caps the total entry count including the four
  // specials; a cap below 5 cannot hold any real token.
  static Vocabulary build(const std::vector<TokenSeq>& docs,
                          std::optional<size_t> max_size = std::nullopt);

  // Rebuilds from an explicit id-ordered token list (for loading).
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  uint32_t id_of(std::string_view token) const;  // kUnk when absent
  bool contains(std::string_view token) const;
  const std::string& token_of(uint32_t id) const;
  size_t size() const { return tokens_.size(); }

  // One token per line, line number = id.
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, uint32_t> ids_;
};

// Token sequence to id sequence; unknown tokens map to kUnk. When
// mark_sentence is set the sequence is wrapped in kBos/kEos.
std::vector<uint32_t> encode(const TokenSeq& tokens, const Vocabulary& vocab,
                             bool mark_sentence);

// Right-pads with kPad or truncates to exactly target_len ids.
std::vector<uint32_t> pad_or_trim(std::vector<uint32_t> ids,
                                  size_t target_len);

// Whitespace-run split with no other processing; the basis for diff-size
// bucketing and BLEU tokenization.
TokenSeq split_whitespace(std::string_view text);

}  // namespace cmg
