#include <array>
#include <string_view>
#include <unordered_set>

#include "cmg/preprocess.hpp"

namespace cmg {
namespace {

// Classic 127-word English stopword list. data/stopwords.txt ships the same
// list for reference; this embedded copy is the one the pipeline consults.
constexpr std::array<std::string_view, 127> kStopwords = {
    "i",          "me",        "my",       "myself",  "we",      "our",
    "ours",       "ourselves", "you",      "your",    "yours",   "yourself",
    "yourselves", "he",        "him",      "his",     "himself", "she",
    "her",        "hers",      "herself",  "it",      "its",     "itself",
    "they",       "them",      "their",    "theirs",  "themselves", "what",
    "which",      "who",       "whom",     "this",    "that",    "these",
    "those",      "am",        "is",       "are",     "was",     "were",
    "be",         "been",      "being",    "have",    "has",     "had",
    "having",     "do",        "does",     "did",     "doing",   "a",
    "an",         "the",       "and",      "but",     "if",      "or",
    "because",    "as",        "until",    "while",   "of",      "at",
    "by",         "for",       "with",     "about",   "against", "between",
    "into",       "through",   "during",   "before",  "after",   "above",
    "below",      "to",        "from",     "up",      "down",    "in",
    "out",        "on",        "off",      "over",    "under",   "again",
    "further",    "then",      "once",     "here",    "there",   "when",
    "where",      "why",       "how",      "all",     "any",     "both",
    "each",       "few",       "more",     "most",    "other",   "some",
    "such",       "no",        "nor",      "not",     "only",    "own",
    "same",       "so",        "than",     "too",     "very",    "s",
    "t",          "can",       "will",     "just",    "don",     "should",
    "now",
};

}  // namespace

const std::vector<std::string>& stopword_list() {
  static const std::vector<std::string> list(kStopwords.begin(),
                                             kStopwords.end());
  return list;
}

bool is_stopword(std::string_view token) {
  static const std::unordered_set<std::string_view> set(kStopwords.begin(),
                                                        kStopwords.end());
  return set.count(token) > 0;
}

}  // namespace cmg
