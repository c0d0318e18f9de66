#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "zsbench/dataset.hpp"

namespace zsbench {

/// Which noise-removal steps apply. Lowercasing always applies.
struct CleaningPolicy {
  bool remove_urls = true;
  bool remove_html_tags = true;
  bool remove_digits = true;
  bool remove_hashtags = true;
  bool remove_mentions = true;
  bool remove_punctuation = true;
  bool remove_stopwords = true;
  bool apply_stemming = true;

  /// Every flag off: lowercase whitespace tokenization only.
  static CleaningPolicy identity();
  /// The tweet-cleaning variant: urls, html tags, digits, hashtags, mentions
  /// and stop words removed; punctuation and stemming left alone.
  static CleaningPolicy tweet_cleaning();

  friend bool operator==(const CleaningPolicy&, const CleaningPolicy&) = default;
};

void to_json(nlohmann::json& j, const CleaningPolicy& p);
/// Missing keys keep their defaults; unknown keys are rejected.
void from_json(const nlohmann::json& j, CleaningPolicy& p);

class StopWords {
 public:
  /// Parses one word per line; blank lines and '#' comments are skipped.
  static StopWords parse(std::string_view text);
  static StopWords load(const std::string& path);

  bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

/// The bundled English list (resources/stopwords_en.txt).
const StopWords& default_stopwords();

/// Removes noise in a fixed order: URLs, HTML tags, mentions, hashtags,
/// digits, punctuation, then lowercases and collapses whitespace. The pass is
/// repeated until the text stops changing, so the result is idempotent.
std::string clean_text(std::string_view text, const CleaningPolicy& policy);

/// Whitespace tokenization of lowercased text, then optional stop-word
/// removal and Porter stemming.
std::vector<std::string> normalize_tokens(std::string_view text, const CleaningPolicy& policy,
                                          const StopWords& stopwords = default_stopwords());

/// Convenience: the space-joined tokens of normalize_tokens(clean_text(text)).
std::string clean_for_display(std::string_view text, const CleaningPolicy& policy,
                              const StopWords& stopwords = default_stopwords());

struct CleanedDocument {
  std::uint64_t id = 0;
  std::vector<std::string> tokens;
};

struct PreprocessedCorpus {
  std::vector<CleanedDocument> documents;
  /// Documents that ended up with no tokens (kept, but counted here).
  std::size_t empty_documents = 0;
};

PreprocessedCorpus preprocess_corpus(const LabeledCorpus& corpus, const CleaningPolicy& policy,
                                     const StopWords& stopwords = default_stopwords());

}  // namespace zsbench
