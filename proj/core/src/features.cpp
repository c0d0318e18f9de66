#include "zsbench/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "zsbench/errors.hpp"

namespace zsbench {

FeatureVector::FeatureVector(std::size_t dimension, std::vector<SparseEntry> entries)
    : dimension_(dimension), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].index >= dimension_) throw std::invalid_argument("feature index out of range");
    if (i > 0 && entries_[i].index == entries_[i - 1].index) {
      throw std::invalid_argument("duplicate feature index");
    }
  }
}

double FeatureVector::at(std::uint32_t index) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                                   [](const SparseEntry& e, std::uint32_t i) { return e.index < i; });
  return it != entries_.end() && it->index == index ? it->weight : 0.0;
}

double FeatureVector::dot(const FeatureVector& other) const {
  double sum = 0.0;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() && b != other.entries_.end()) {
    if (a->index < b->index) {
      ++a;
    } else if (b->index < a->index) {
      ++b;
    } else {
      sum += a->weight * b->weight;
      ++a;
      ++b;
    }
  }
  return sum;
}

double FeatureVector::norm() const {
  double sq = 0.0;
  for (const auto& e : entries_) sq += e.weight * e.weight;
  return std::sqrt(sq);
}

void to_json(nlohmann::json& j, const VectorizerParams& p) {
  j = {{"min_df", p.min_df}, {"max_ngram", p.max_ngram}, {"l2_normalize", p.l2_normalize}};
}

void from_json(const nlohmann::json& j, VectorizerParams& p) {
  for (const auto& [key, value] : j.items()) {
    if (key == "min_df") {
      p.min_df = value.get<std::size_t>();
    } else if (key == "max_ngram") {
      p.max_ngram = value.get<std::size_t>();
    } else if (key == "l2_normalize") {
      p.l2_normalize = value.get<bool>();
    } else {
      throw Error("unknown vectorizer parameter '" + key + "'");
    }
  }
  if (p.min_df < 1) throw Error("min_df must be positive");
  if (p.max_ngram < 1) throw Error("max_ngram must be positive");
}

std::int64_t Vocabulary::index_of(const std::string& term) const {
  const auto it = index_.find(term);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::vector<std::string> TfidfVectorizer::terms_of(const CleanedDocument& doc) const {
  std::vector<std::string> terms(doc.tokens);
  for (std::size_t n = 2; n <= params_.max_ngram; ++n) {
    for (std::size_t i = 0; i + n <= doc.tokens.size(); ++i) {
      std::string gram = doc.tokens[i];
      for (std::size_t k = 1; k < n; ++k) gram += ' ' + doc.tokens[i + k];
      terms.push_back(std::move(gram));
    }
  }
  return terms;
}

TfidfVectorizer TfidfVectorizer::fit(std::span<const CleanedDocument> train_docs,
                                     const VectorizerParams& params) {
  if (train_docs.empty()) throw TrainingError("cannot fit vectorizer: empty training set");
  if (params.min_df < 1 || params.max_ngram < 1) {
    throw TrainingError("cannot fit vectorizer: min_df and max_ngram must be positive");
  }
  TfidfVectorizer v;
  v.params_ = params;

  std::map<std::string, std::size_t> df;
  bool any_tokens = false;
  for (const auto& doc : train_docs) {
    if (!doc.tokens.empty()) any_tokens = true;
    const auto terms = v.terms_of(doc);
    const std::unordered_set<std::string> unique(terms.begin(), terms.end());
    for (const auto& t : unique) ++df[t];
  }
  if (!any_tokens) throw TrainingError("cannot fit vectorizer: all training documents are empty");

  const std::size_t n = train_docs.size();
  for (const auto& [term, count] : df) {
    if (count < params.min_df) continue;
    v.vocab_.index_.emplace(term, static_cast<std::uint32_t>(v.vocab_.terms_.size()));
    v.vocab_.terms_.push_back(term);
    v.vocab_.df_.push_back(count);
    v.idf_.push_back(std::log((1.0 + static_cast<double>(n)) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  if (v.vocab_.terms_.empty()) {
    throw TrainingError("cannot fit vectorizer: all terms pruned by min_df=" +
                        std::to_string(params.min_df));
  }
  v.vocab_.doc_count_ = n;
  return v;
}

FeatureVector TfidfVectorizer::transform(const CleanedDocument& doc) const {
  std::map<std::uint32_t, double> counts;
  for (const auto& term : terms_of(doc)) {
    const auto it = vocab_.index_.find(term);
    if (it != vocab_.index_.end()) counts[it->second] += 1.0;
  }
  std::vector<SparseEntry> entries;
  entries.reserve(counts.size());
  double sq = 0.0;
  for (const auto& [index, count] : counts) {
    const double w = count * idf_[index];
    entries.push_back({index, w});
    sq += w * w;
  }
  if (params_.l2_normalize && sq > 0.0) {
    const double norm = std::sqrt(sq);
    for (auto& e : entries) e.weight /= norm;
  }
  return FeatureVector(vocab_.size(), std::move(entries));
}

std::vector<FeatureVector> TfidfVectorizer::transform(std::span<const CleanedDocument> docs) const {
  std::vector<FeatureVector> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(transform(d));
  return out;
}

nlohmann::json TfidfVectorizer::to_json() const {
  return {{"params", params_},
          {"corpus_doc_count", vocab_.doc_count_},
          {"terms", vocab_.terms_},
          {"df", vocab_.df_},
          {"idf", idf_}};
}

TfidfVectorizer TfidfVectorizer::from_json(const nlohmann::json& j) {
  TfidfVectorizer v;
  v.params_ = j.at("params").get<VectorizerParams>();
  v.vocab_.doc_count_ = j.at("corpus_doc_count").get<std::size_t>();
  v.vocab_.terms_ = j.at("terms").get<std::vector<std::string>>();
  v.vocab_.df_ = j.at("df").get<std::vector<std::size_t>>();
  v.idf_ = j.at("idf").get<std::vector<double>>();
  if (v.vocab_.df_.size() != v.vocab_.terms_.size() || v.idf_.size() != v.vocab_.terms_.size()) {
    throw Error("vectorizer document is inconsistent");
  }
  for (std::size_t i = 0; i < v.vocab_.terms_.size(); ++i) {
    v.vocab_.index_.emplace(v.vocab_.terms_[i], static_cast<std::uint32_t>(i));
  }
  return v;
}

}  // namespace zsbench
