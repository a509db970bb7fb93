#include "cmg/stemmer.hpp"

#include <array>
#include <utility>

namespace cmg {
namespace {

bool is_vowel_letter(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// y is a consonant at position 0 or after a vowel, else a vowel.
bool is_cons(const std::string& w, size_t i) {
  char c = w[i];
  if (is_vowel_letter(c)) return false;
  if (c == 'y') return i == 0 ? true : !is_cons(w, i - 1);
  return true;
}

// m in the [C](VC)^m[V] decomposition.
int measure(const std::string& w) {
  int m = 0;
  size_t i = 0;
  const size_t n = w.size();
  while (i < n && is_cons(w, i)) ++i;
  while (i < n) {
    while (i < n && !is_cons(w, i)) ++i;
    if (i >= n) break;
    ++m;
    while (i < n && is_cons(w, i)) ++i;
  }
  return m;
}

bool contains_vowel(const std::string& w) {
  for (size_t i = 0; i < w.size(); ++i) {
    if (!is_cons(w, i)) return true;
  }
  return false;
}

bool ends_double_cons(const std::string& w) {
  size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_cons(w, n - 1) &&
         is_cons(w, n - 2);
}

// *o condition: stem ends cvc where the final c is not w, x or y.
bool ends_cvc(const std::string& w) {
  size_t n = w.size();
  if (n < 3) return false;
  char last = w[n - 1];
  return is_cons(w, n - 3) && !is_cons(w, n - 2) && is_cons(w, n - 1) &&
         last != 'w' && last != 'x' && last != 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void step1a(std::string& w) {
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.resize(w.size() - 2);  // ies -> i
  } else if (ends_with(w, "ss")) {
    // keep
  } else if (ends_with(w, "s")) {
    w.resize(w.size() - 1);
  }
}

void step1b(std::string& w) {
  if (ends_with(w, "eed")) {
    std::string stem = w.substr(0, w.size() - 3);
    if (measure(stem) > 0) w.resize(w.size() - 1);  // eed -> ee
    return;
  }
  bool fired = false;
  if (ends_with(w, "ed") && contains_vowel(w.substr(0, w.size() - 2))) {
    w.resize(w.size() - 2);
    fired = true;
  } else if (ends_with(w, "ing") &&
             contains_vowel(w.substr(0, w.size() - 3))) {
    w.resize(w.size() - 3);
    fired = true;
  }
  if (!fired) return;
  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w.push_back('e');
  } else if (ends_double_cons(w)) {
    char last = w.back();
    if (last != 'l' && last != 's' && last != 'z') w.pop_back();
  } else if (measure(w) == 1 && ends_cvc(w)) {
    w.push_back('e');
  }
}

void step1c(std::string& w) {
  if (ends_with(w, "y") && contains_vowel(w.substr(0, w.size() - 1))) {
    w.back() = 'i';
  }
}

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

constexpr std::array<Rule, 20> kStep2 = {{
    {"ational", "ate"}, {"tional", "tion"},  {"enci", "ence"},
    {"anci", "ance"},   {"izer", "ize"},     {"abli", "able"},
    {"alli", "al"},     {"entli", "ent"},    {"eli", "e"},
    {"ousli", "ous"},   {"ization", "ize"},  {"ation", "ate"},
    {"ator", "ate"},    {"alism", "al"},     {"iveness", "ive"},
    {"fulness", "ful"}, {"ousness", "ous"},  {"aliti", "al"},
    {"iviti", "ive"},   {"biliti", "ble"},
}};

constexpr std::array<Rule, 7> kStep3 = {{
    {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
    {"ical", "ic"},  {"ful", ""},   {"ness", ""},
}};

// Longest matching suffix in the table wins; the rule fires only if the
// remaining stem has m > 0, and a non-firing longest match ends the step.
template <size_t N>
void step_rewrite(std::string& w, const std::array<Rule, N>& table) {
  const Rule* best = nullptr;
  for (const Rule& r : table) {
    if (ends_with(w, r.suffix) &&
        (best == nullptr || r.suffix.size() > best->suffix.size())) {
      best = &r;
    }
  }
  if (best == nullptr) return;
  std::string stem = w.substr(0, w.size() - best->suffix.size());
  if (measure(stem) > 0) {
    w = stem;
    w.append(best->replacement);
  }
}

constexpr std::array<std::string_view, 19> kStep4 = {
    "al",    "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement",
    "ment",  "ent",  "ion",  "ou",  "ism", "ate",  "iti",  "ous", "ive",
    "ize",
};

void step4(std::string& w) {
  std::string_view best;
  for (std::string_view s : kStep4) {
    if (ends_with(w, s) && s.size() > best.size()) best = s;
  }
  if (best.empty()) return;
  std::string stem = w.substr(0, w.size() - best.size());
  if (best == "ion") {
    // (m>1 and (*s or *t)) ION ->
    if (measure(stem) > 1 && !stem.empty() &&
        (stem.back() == 's' || stem.back() == 't')) {
      w = stem;
    }
    return;
  }
  if (measure(stem) > 1) w = stem;
}

void step5a(std::string& w) {
  if (!ends_with(w, "e")) return;
  std::string stem = w.substr(0, w.size() - 1);
  int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) w = stem;
}

void step5b(std::string& w) {
  if (measure(w) > 1 && ends_double_cons(w) && w.back() == 'l') {
    w.pop_back();
  }
}

}  // namespace

std::string porter_stem(std::string_view word) {
  std::string w(word);
  step1a(w);
  step1b(w);
  step1c(w);
  step_rewrite(w, kStep2);
  step_rewrite(w, kStep3);
  step4(w);
  step5a(w);
  step5b(w);
  return w;
}

}  // namespace cmg
