#include <algorithm>
#include <numeric>

#include "zsbench/baselines.hpp"
#include "zsbench/errors.hpp"

namespace zsbench {

KnnModel train_knn(const TrainingSet& data, std::size_t k) {
  data.validate();
  if (k == 0 || k % 2 == 0) throw TrainingError("KNN k must be a positive odd integer");
  if (k > data.size()) {
    throw TrainingError("KNN k=" + std::to_string(k) + " exceeds training size " +
                        std::to_string(data.size()));
  }
  KnnModel m;
  m.k_ = k;
  m.num_classes_ = data.num_classes;
  m.dimension_ = data.dimension;
  m.vectors_.assign(data.features.begin(), data.features.end());
  m.labels_.assign(data.labels.begin(), data.labels.end());
  m.norms_.reserve(m.vectors_.size());
  for (const auto& v : m.vectors_) m.norms_.push_back(v.norm());
  return m;
}

void KnnModel::predict_proba(const FeatureVector& x, std::span<double> out) const {
  const double xn = x.norm();
  std::vector<std::pair<double, std::size_t>> sims;
  sims.reserve(vectors_.size());
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    const double denom = xn * norms_[i];
    sims.emplace_back(denom > 0.0 ? x.dot(vectors_[i]) / denom : 0.0, i);
  }
  std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k_), sims.end(),
                    [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first > b.first : a.second < b.second;
                    });
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < k_; ++j) out[labels_[sims[j].second]] += 1.0;
  for (double& v : out) v /= static_cast<double>(k_);
}

nlohmann::json KnnModel::to_json() const {
  nlohmann::json vectors = nlohmann::json::array();
  for (const auto& v : vectors_) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : v.entries()) entries.push_back({e.index, e.weight});
    vectors.push_back(std::move(entries));
  }
  return {{"kind", kind()}, {"k", k_}, {"metric", "cosine"}, {"labels", labels_}, {"vectors", vectors}};
}

}  // namespace zsbench
