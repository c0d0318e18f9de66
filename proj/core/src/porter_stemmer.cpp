#include "zsbench/porter_stemmer.hpp"

#include <algorithm>
#include <functional>
#include <initializer_list>

namespace zsbench {
namespace {

bool is_consonant(std::string_view w, std::size_t i) {
  switch (w[i]) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// m in [C](VC)^m[V]
int measure(std::string_view w) {
  int m = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const bool vowel = !is_consonant(w, i);
    if (prev_vowel && !vowel) ++m;
    prev_vowel = vowel;
  }
  return m;
}

bool contains_vowel(std::string_view w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!is_consonant(w, i)) return true;
  }
  return false;
}

bool ends_double_consonant(std::string_view w) {
  const std::size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: stem ends cvc where the final c is not w, x or y.
bool ends_cvc(std::string_view w) {
  const std::size_t n = w.size();
  return n >= 3 && is_consonant(w, n - 3) && !is_consonant(w, n - 2) && is_consonant(w, n - 1) &&
         w[n - 1] != 'w' && w[n - 1] != 'x' && w[n - 1] != 'y';
}

using Condition = std::function<bool(std::string_view stem)>;

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  Condition condition;
};

// The first rule whose suffix matches decides; a failed condition leaves the
// word unchanged rather than falling through to shorter suffixes.
std::string apply_rules(const std::string& word, std::initializer_list<Rule> rules) {
  for (const auto& rule : rules) {
    if (!word.ends_with(rule.suffix)) continue;
    const std::string_view stem = std::string_view(word).substr(0, word.size() - rule.suffix.size());
    if (!rule.condition || rule.condition(stem)) {
      return std::string(stem) + std::string(rule.replacement);
    }
    return word;
  }
  return word;
}

const Condition kMeasurePositive = [](std::string_view s) { return measure(s) > 0; };
const Condition kMeasureAboveOne = [](std::string_view s) { return measure(s) > 1; };

std::string step1a(const std::string& w) {
  return apply_rules(w, {{"sses", "ss", {}}, {"ies", "i", {}}, {"ss", "ss", {}}, {"s", "", {}}});
}

std::string step1b(const std::string& w) {
  if (w.ends_with("eed")) {
    const std::string_view stem = std::string_view(w).substr(0, w.size() - 3);
    return measure(stem) > 0 ? std::string(stem) + "ee" : w;
  }
  std::string stem;
  bool stripped = false;
  for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
    if (w.ends_with(suffix)) {
      std::string_view candidate = std::string_view(w).substr(0, w.size() - suffix.size());
      if (contains_vowel(candidate)) {
        stem = std::string(candidate);
        stripped = true;
        break;
      }
    }
  }
  if (!stripped) return w;

  if (stem.ends_with("at") || stem.ends_with("bl") || stem.ends_with("iz")) return stem + "e";
  if (ends_double_consonant(stem)) {
    const char last = stem.back();
    if (last != 'l' && last != 's' && last != 'z') stem.pop_back();
    return stem;
  }
  if (measure(stem) == 1 && ends_cvc(stem)) return stem + "e";
  return stem;
}

std::string step1c(const std::string& w) {
  return apply_rules(w, {{"y", "i", [](std::string_view s) { return contains_vowel(s); }}});
}

std::string step2(const std::string& w) {
  return apply_rules(w, {
                            {"ational", "ate", kMeasurePositive},
                            {"tional", "tion", kMeasurePositive},
                            {"enci", "ence", kMeasurePositive},
                            {"anci", "ance", kMeasurePositive},
                            {"izer", "ize", kMeasurePositive},
                            {"abli", "able", kMeasurePositive},
                            {"alli", "al", kMeasurePositive},
                            {"entli", "ent", kMeasurePositive},
                            {"eli", "e", kMeasurePositive},
                            {"ousli", "ous", kMeasurePositive},
                            {"ization", "ize", kMeasurePositive},
                            {"ation", "ate", kMeasurePositive},
                            {"ator", "ate", kMeasurePositive},
                            {"alism", "al", kMeasurePositive},
                            {"iveness", "ive", kMeasurePositive},
                            {"fulness", "ful", kMeasurePositive},
                            {"ousness", "ous", kMeasurePositive},
                            {"aliti", "al", kMeasurePositive},
                            {"iviti", "ive", kMeasurePositive},
                            {"biliti", "ble", kMeasurePositive},
                        });
}

std::string step3(const std::string& w) {
  return apply_rules(w, {
                            {"icate", "ic", kMeasurePositive},
                            {"ative", "", kMeasurePositive},
                            {"alize", "al", kMeasurePositive},
                            {"iciti", "ic", kMeasurePositive},
                            {"ical", "ic", kMeasurePositive},
                            {"ful", "", kMeasurePositive},
                            {"ness", "", kMeasurePositive},
                        });
}

std::string step4(const std::string& w) {
  const Condition ion = [](std::string_view s) {
    return measure(s) > 1 && !s.empty() && (s.back() == 's' || s.back() == 't');
  };
  return apply_rules(w, {
                            {"al", "", kMeasureAboveOne},    {"ance", "", kMeasureAboveOne},
                            {"ence", "", kMeasureAboveOne},  {"er", "", kMeasureAboveOne},
                            {"ic", "", kMeasureAboveOne},    {"able", "", kMeasureAboveOne},
                            {"ible", "", kMeasureAboveOne},  {"ant", "", kMeasureAboveOne},
                            {"ement", "", kMeasureAboveOne}, {"ment", "", kMeasureAboveOne},
                            {"ent", "", kMeasureAboveOne},   {"ion", "", ion},
                            {"ou", "", kMeasureAboveOne},    {"ism", "", kMeasureAboveOne},
                            {"ate", "", kMeasureAboveOne},   {"iti", "", kMeasureAboveOne},
                            {"ous", "", kMeasureAboveOne},   {"ive", "", kMeasureAboveOne},
                            {"ize", "", kMeasureAboveOne},
                        });
}

std::string step5a(const std::string& w) {
  if (!w.ends_with('e')) return w;
  const std::string_view stem = std::string_view(w).substr(0, w.size() - 1);
  const int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) return std::string(stem);
  return w;
}

std::string step5b(const std::string& w) {
  if (w.ends_with("ll") && measure(std::string_view(w).substr(0, w.size() - 1)) > 1) {
    return w.substr(0, w.size() - 1);
  }
  return w;
}

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.empty() ||
      !std::all_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; })) {
    return std::string(word);
  }
  std::string w(word);
  w = step1a(w);
  w = step1b(w);
  w = step1c(w);
  w = step2(w);
  w = step3(w);
  w = step4(w);
  w = step5a(w);
  w = step5b(w);
  return w;
}

}  // namespace zsbench
