#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "zsbench/preprocess.hpp"

namespace zsbench {

struct SparseEntry {
  std::uint32_t index = 0;
  double weight = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Sparse vector with strictly increasing indices and a fixed dimension.
class FeatureVector {
 public:
  FeatureVector() = default;
  explicit FeatureVector(std::size_t dimension) : dimension_(dimension) {}
  /// Entries are sorted and validated; throws std::invalid_argument on
  /// duplicate or out-of-range indices.
  FeatureVector(std::size_t dimension, std::vector<SparseEntry> entries);

  std::size_t dimension() const noexcept { return dimension_; }
  std::span<const SparseEntry> entries() const noexcept { return entries_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  bool is_zero() const noexcept { return entries_.empty(); }

  /// Weight at `index`, 0 when absent. Binary search.
  double at(std::uint32_t index) const;
  double dot(const FeatureVector& other) const;
  double norm() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<SparseEntry> entries_;
};

struct VectorizerParams {
  std::size_t min_df = 2;
  /// Longest n-gram emitted (1 = unigrams only).
  std::size_t max_ngram = 1;
  bool l2_normalize = true;

  friend bool operator==(const VectorizerParams&, const VectorizerParams&) = default;
};

void to_json(nlohmann::json& j, const VectorizerParams& p);
void from_json(const nlohmann::json& j, VectorizerParams& p);

/// Term index and document frequencies. Terms are indexed in lexicographic order.
class Vocabulary {
 public:
  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::size_t>& document_frequencies() const noexcept { return df_; }
  std::size_t corpus_doc_count() const noexcept { return doc_count_; }
  /// -1 when the term is out of vocabulary.
  std::int64_t index_of(const std::string& term) const;

 private:
  friend class TfidfVectorizer;
  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::size_t doc_count_ = 0;
};

/// TF-IDF with smoothed idf(t) = ln((1 + N) / (1 + df(t))) + 1, raw term counts,
/// and optional L2 normalization. Immutable once fitted.
class TfidfVectorizer {
 public:
  /// Builds the vocabulary from training documents only. Throws TrainingError
  /// when the training set is empty, every document is empty, or min_df
  /// prunes every term.
  static TfidfVectorizer fit(std::span<const CleanedDocument> train_docs,
                             const VectorizerParams& params = {});

  FeatureVector transform(const CleanedDocument& doc) const;
  std::vector<FeatureVector> transform(std::span<const CleanedDocument> docs) const;

  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  const std::vector<double>& idf() const noexcept { return idf_; }
  const VectorizerParams& params() const noexcept { return params_; }
  std::size_t dimension() const noexcept { return vocab_.size(); }

  nlohmann::json to_json() const;
  static TfidfVectorizer from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> terms_of(const CleanedDocument& doc) const;

  Vocabulary vocab_;
  std::vector<double> idf_;
  VectorizerParams params_;
};

}  // namespace zsbench
