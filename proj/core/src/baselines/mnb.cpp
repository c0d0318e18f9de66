#include <cmath>

#include "zsbench/baselines.hpp"
#include "zsbench/errors.hpp"

namespace zsbench {

MnbModel train_mnb(const TrainingSet& data, double alpha) {
  data.validate();
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw TrainingError("MNB alpha must be positive");
  const std::size_t k = data.num_classes;
  const std::size_t v = data.dimension;

  std::vector<double> class_docs(k, 0.0);
  std::vector<double> term_mass(k * v, 0.0);
  std::vector<double> class_mass(k, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const LabelId c = data.labels[i];
    class_docs[c] += 1.0;
    for (const auto& e : data.features[i].entries()) {
      term_mass[c * v + e.index] += e.weight;
      class_mass[c] += e.weight;
    }
  }

  MnbModel m;
  m.alpha_ = alpha;
  m.dimension_ = v;
  m.log_prior_.resize(k);
  m.log_likelihood_.resize(k * v);
  const double n = static_cast<double>(data.size());
  for (std::size_t c = 0; c < k; ++c) {
    if (class_docs[c] == 0.0) {
      throw TrainingError("MNB: class " + std::to_string(c) + " is absent from the training set");
    }
    m.log_prior_[c] = std::log(class_docs[c] / n);
    const double denom = std::log(class_mass[c] + alpha * static_cast<double>(v));
    for (std::size_t t = 0; t < v; ++t) {
      m.log_likelihood_[c * v + t] = std::log(term_mass[c * v + t] + alpha) - denom;
    }
  }
  return m;
}

void MnbModel::predict_proba(const FeatureVector& x, std::span<double> out) const {
  const std::size_t k = log_prior_.size();
  double max_log = -INFINITY;
  for (std::size_t c = 0; c < k; ++c) {
    double s = log_prior_[c];
    for (const auto& e : x.entries()) s += e.weight * log_likelihood_[c * dimension_ + e.index];
    out[c] = s;
    max_log = std::max(max_log, s);
  }
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    out[c] = std::exp(out[c] - max_log);
    total += out[c];
  }
  for (std::size_t c = 0; c < k; ++c) out[c] /= total;
}

nlohmann::json MnbModel::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t c = 0; c < log_prior_.size(); ++c) {
    rows.push_back(std::vector<double>(log_likelihood_.begin() + static_cast<std::ptrdiff_t>(c * dimension_),
                                       log_likelihood_.begin() + static_cast<std::ptrdiff_t>((c + 1) * dimension_)));
  }
  return {{"kind", kind()}, {"alpha", alpha_}, {"log_prior", log_prior_}, {"log_likelihood", rows}};
}

}  // namespace zsbench
