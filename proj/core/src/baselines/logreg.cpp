#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "zsbench/baselines.hpp"
#include "zsbench/errors.hpp"

namespace zsbench {
namespace {

void logits(const LinearModelParams& p, const FeatureVector& x, std::span<double> z) {
  for (std::size_t c = 0; c < p.num_classes; ++c) {
    double s = p.bias[c];
    const double* row = p.weights.data() + c * p.dimension;
    for (const auto& e : x.entries()) s += row[e.index] * e.weight;
    z[c] = s;
  }
}

// In-place softmax; returns log-sum-exp of the inputs.
double softmax(std::span<double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    total += v;
  }
  for (double& v : z) v /= total;
  return m + std::log(total);
}

double l2_term(const LinearModelParams& p, double l2_lambda) {
  if (l2_lambda == 0.0) return 0.0;
  double sq = 0.0;
  for (double w : p.weights) sq += w * w;
  return 0.5 * l2_lambda * sq;
}

// Mean-loss gradient over `rows`, accumulated into `grad` (zeroed here).
void accumulate_gradient(const LinearModelParams& p, const TrainingSet& data,
                         std::span<const std::size_t> rows, double l2_lambda,
                         LinearModelParams& grad) {
  std::fill(grad.weights.begin(), grad.weights.end(), 0.0);
  std::fill(grad.bias.begin(), grad.bias.end(), 0.0);
  std::vector<double> prob(p.num_classes);
  const double scale = 1.0 / static_cast<double>(rows.size());
  for (std::size_t i : rows) {
    const auto& x = data.features[i];
    logits(p, x, prob);
    softmax(prob);
    prob[data.labels[i]] -= 1.0;
    for (std::size_t c = 0; c < p.num_classes; ++c) {
      const double g = prob[c] * scale;
      grad.bias[c] += g;
      double* row = grad.weights.data() + c * p.dimension;
      for (const auto& e : x.entries()) row[e.index] += g * e.weight;
    }
  }
  if (l2_lambda != 0.0) {
    for (std::size_t j = 0; j < grad.weights.size(); ++j) grad.weights[j] += l2_lambda * p.weights[j];
  }
}

}  // namespace

LinearModelParams LinearModelParams::zeros(std::size_t k, std::size_t v) {
  return {k, v, std::vector<double>(k * v, 0.0), std::vector<double>(k, 0.0)};
}

double logreg_loss(const LinearModelParams& params, const TrainingSet& data, double l2_lambda) {
  std::vector<double> z(params.num_classes);
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    logits(params, data.features[i], z);
    const double zy = z[data.labels[i]];
    total += softmax(z) - zy;
  }
  return total / static_cast<double>(data.size()) + l2_term(params, l2_lambda);
}

LinearModelParams logreg_gradient(const LinearModelParams& params, const TrainingSet& data,
                                  double l2_lambda) {
  LinearModelParams grad = LinearModelParams::zeros(params.num_classes, params.dimension);
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  accumulate_gradient(params, data, rows, l2_lambda, grad);
  return grad;
}

LogRegModel train_logreg(const TrainingSet& data, const LogRegHyper& hyper) {
  data.validate();
  if (!(hyper.learning_rate > 0.0)) throw TrainingError("learning_rate must be positive");
  if (hyper.l2_lambda < 0.0) throw TrainingError("l2_lambda must be non-negative");

  LinearModelParams params = LinearModelParams::zeros(data.num_classes, data.dimension);
  LinearModelParams grad = LinearModelParams::zeros(data.num_classes, data.dimension);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(hyper.seed);
  const std::size_t batch =
      hyper.batch_size == 0 ? data.size() : std::min(hyper.batch_size, data.size());

  std::vector<double> history;
  history.reserve(hyper.epochs + 1);
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    const double loss = logreg_loss(params, data, hyper.l2_lambda);
    if (!std::isfinite(loss)) {
      throw TrainingError("logistic regression diverged at epoch " + std::to_string(epoch));
    }
    history.push_back(loss);
    if (hyper.batch_size != 0) {
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    }
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t len = std::min(batch, order.size() - start);
      accumulate_gradient(params, data, std::span(order).subspan(start, len), hyper.l2_lambda, grad);
      for (std::size_t j = 0; j < params.weights.size(); ++j) {
        params.weights[j] -= hyper.learning_rate * grad.weights[j];
      }
      for (std::size_t c = 0; c < params.bias.size(); ++c) {
        params.bias[c] -= hyper.learning_rate * grad.bias[c];
      }
    }
  }
  const double final_loss = logreg_loss(params, data, hyper.l2_lambda);
  if (!std::isfinite(final_loss)) {
    throw TrainingError("logistic regression diverged at epoch " + std::to_string(hyper.epochs));
  }
  history.push_back(final_loss);
  return LogRegModel(std::move(params), std::move(history));
}

void LogRegModel::predict_proba(const FeatureVector& x, std::span<double> out) const {
  logits(params_, x, out);
  softmax(out);
}

nlohmann::json LogRegModel::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t c = 0; c < params_.num_classes; ++c) {
    rows.push_back(std::vector<double>(
        params_.weights.begin() + static_cast<std::ptrdiff_t>(c * params_.dimension),
        params_.weights.begin() + static_cast<std::ptrdiff_t>((c + 1) * params_.dimension)));
  }
  return {{"kind", kind()}, {"weights", rows}, {"bias", params_.bias}, {"loss_history", loss_history_}};
}

}  // namespace zsbench
