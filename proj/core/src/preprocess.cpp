#include "zsbench/preprocess.hpp"

#include "zsbench/errors.hpp"
#include "zsbench/porter_stemmer.hpp"
#include "zsbench/util.hpp"

namespace zsbench {

CleaningPolicy CleaningPolicy::identity() {
  return {false, false, false, false, false, false, false, false};
}

CleaningPolicy CleaningPolicy::tweet_cleaning() {
  CleaningPolicy p = identity();
  p.remove_urls = true;
  p.remove_html_tags = true;
  p.remove_digits = true;
  p.remove_hashtags = true;
  p.remove_mentions = true;
  p.remove_stopwords = true;
  return p;
}

namespace {

constexpr std::pair<const char*, bool CleaningPolicy::*> kPolicyFields[] = {
    {"remove_urls", &CleaningPolicy::remove_urls},
    {"remove_html_tags", &CleaningPolicy::remove_html_tags},
    {"remove_digits", &CleaningPolicy::remove_digits},
    {"remove_hashtags", &CleaningPolicy::remove_hashtags},
    {"remove_mentions", &CleaningPolicy::remove_mentions},
    {"remove_punctuation", &CleaningPolicy::remove_punctuation},
    {"remove_stopwords", &CleaningPolicy::remove_stopwords},
    {"apply_stemming", &CleaningPolicy::apply_stemming},
};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ascii_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
         (c >= '{' && c <= '~');
}

bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (s.size() - pos < prefix.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    char c = s[pos + k];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[k]) return false;
  }
  return true;
}

// Length of a URL starting at pos, or 0. Scheme-prefixed, www. and t.co
// shortlinks; the URL runs to the next whitespace.
std::size_t url_length(std::string_view s, std::size_t pos) {
  if (pos > 0 && is_word_char(s[pos - 1])) return 0;
  if (!(starts_with_ci(s, pos, "http://") || starts_with_ci(s, pos, "https://") ||
        starts_with_ci(s, pos, "www.") || starts_with_ci(s, pos, "t.co/"))) {
    return 0;
  }
  std::size_t end = pos;
  while (end < s.size() && !is_space(s[end])) ++end;
  return end - pos;
}

// <tag ...>, </tag>, <!-- ... > : '<' followed by a letter, '/' or '!', up to
// the next '>' with no '<' in between.
std::size_t html_tag_length(std::string_view s, std::size_t pos) {
  if (s[pos] != '<' || pos + 1 >= s.size()) return 0;
  const char next = s[pos + 1];
  if (!is_alpha(next) && next != '/' && next != '!') return 0;
  for (std::size_t end = pos + 1; end < s.size(); ++end) {
    if (s[end] == '>') return end - pos + 1;
    if (s[end] == '<') return 0;
  }
  return 0;
}

// sigil followed by \w+
std::size_t tagged_word_length(std::string_view s, std::size_t pos, char sigil) {
  if (s[pos] != sigil) return 0;
  std::size_t end = pos + 1;
  while (end < s.size() && is_word_char(s[end])) ++end;
  return end - pos > 1 ? end - pos : 0;
}

template <typename Match>
std::string replace_with_space(std::string_view s, Match match) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const std::size_t n = match(s, i);
    if (n > 0) {
      out += ' ';
      i += n;
    } else {
      out += s[i++];
    }
  }
  return out;
}

template <typename Pred>
std::string drop_chars(std::string_view s, Pred pred) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (!pred(c)) out += c;
  }
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

std::string clean_once(std::string_view text, const CleaningPolicy& p) {
  std::string s(text);
  if (p.remove_urls) s = replace_with_space(s, url_length);
  if (p.remove_html_tags) s = replace_with_space(s, html_tag_length);
  if (p.remove_mentions) {
    s = replace_with_space(s, [](std::string_view v, std::size_t i) { return tagged_word_length(v, i, '@'); });
  }
  if (p.remove_hashtags) {
    s = replace_with_space(s, [](std::string_view v, std::size_t i) { return tagged_word_length(v, i, '#'); });
  }
  if (p.remove_digits) s = drop_chars(s, is_digit);
  if (p.remove_punctuation) s = drop_chars(s, is_ascii_punct);
  return collapse_whitespace(ascii_lower(s));
}

}  // namespace

void to_json(nlohmann::json& j, const CleaningPolicy& p) {
  j = nlohmann::json::object();
  for (const auto& [name, field] : kPolicyFields) j[name] = p.*field;
}

void from_json(const nlohmann::json& j, CleaningPolicy& p) {
  if (!j.is_object()) throw Error("cleaning policy must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& [name, field] : kPolicyFields) {
      if (key == name) {
        if (!value.is_boolean()) throw Error("cleaning policy flag '" + key + "' must be a boolean");
        p.*field = value.get<bool>();
        known = true;
      }
    }
    if (!known) throw Error("unknown cleaning policy flag '" + key + "'");
  }
}

std::string clean_text(std::string_view text, const CleaningPolicy& policy) {
  std::string current = clean_once(text, policy);
  // Removing one construct can expose another (e.g. digits inside "ww1w.");
  // iterate to a fixed point. Each changing pass strictly shortens the text.
  for (int guard = 0; guard < 64; ++guard) {
    std::string next = clean_once(current, policy);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

std::vector<std::string> normalize_tokens(std::string_view text, const CleaningPolicy& policy,
                                          const StopWords& stopwords) {
  std::vector<std::string> tokens;
  const std::string lowered = ascii_lower(text);
  std::size_t i = 0;
  while (i < lowered.size()) {
    while (i < lowered.size() && is_space(lowered[i])) ++i;
    std::size_t end = i;
    while (end < lowered.size() && !is_space(lowered[end])) ++end;
    if (end > i) {
      std::string token = lowered.substr(i, end - i);
      if (!(policy.remove_stopwords && stopwords.contains(token))) {
        if (policy.apply_stemming) token = porter_stem(token);
        if (!token.empty()) tokens.push_back(std::move(token));
      }
    }
    i = end;
  }
  return tokens;
}

std::string clean_for_display(std::string_view text, const CleaningPolicy& policy,
                              const StopWords& stopwords) {
  std::string out;
  for (const auto& token : normalize_tokens(clean_text(text, policy), policy, stopwords)) {
    if (!out.empty()) out += ' ';
    out += token;
  }
  return out;
}

PreprocessedCorpus preprocess_corpus(const LabeledCorpus& corpus, const CleaningPolicy& policy,
                                     const StopWords& stopwords) {
  PreprocessedCorpus out;
  out.documents.reserve(corpus.size());
  for (const auto& doc : corpus.documents) {
    CleanedDocument cleaned{doc.id, normalize_tokens(clean_text(doc.text, policy), policy, stopwords)};
    if (cleaned.tokens.empty()) ++out.empty_documents;
    out.documents.push_back(std::move(cleaned));
  }
  return out;
}

}  // namespace zsbench
