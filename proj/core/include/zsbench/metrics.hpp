#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "zsbench/baselines.hpp"
#include "zsbench/dataset.hpp"

namespace zsbench {

/// K x K counts: rows are true labels, columns predicted labels, schema order.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t k) : k_(k), counts_(k * k, 0) {}
  ConfusionMatrix(std::size_t k, std::vector<std::size_t> counts);

  std::size_t classes() const noexcept { return k_; }
  std::size_t at(std::size_t truth, std::size_t pred) const { return counts_[truth * k_ + pred]; }
  std::size_t& at(std::size_t truth, std::size_t pred) { return counts_[truth * k_ + pred]; }
  std::size_t total() const noexcept;
  std::size_t trace() const noexcept;
  std::size_t row_sum(std::size_t truth) const;
  std::size_t col_sum(std::size_t pred) const;
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<std::size_t> counts_;
};

ConfusionMatrix confusion_matrix(std::span<const LabelId> truth, std::span<const LabelId> pred,
                                 std::size_t num_classes);
/// Label-name variant: names must be exact schema labels.
ConfusionMatrix confusion_matrix(std::span<const std::string> truth, std::span<const std::string> pred,
                                 const LabelSchema& schema);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

/// 0/0 resolves to 0 for precision, recall and F1.
std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm);
double accuracy(const ConfusionMatrix& cm);
double macro_f1(const ConfusionMatrix& cm);
/// Multi-class MCC (covariance form); 0 when the denominator vanishes.
double mcc(const ConfusionMatrix& cm);

/// Mann-Whitney AUC of positive vs negative scores, ties counted 0.5, via
/// average ranks. Requires both sides non-empty.
double binary_auc(std::span<const double> positive, std::span<const double> negative);

struct AucResult {
  double value = 0.0;
  std::vector<LabelId> included;
  /// Classes with no positive or no negative example.
  std::vector<LabelId> skipped;
};

/// One-vs-rest macro AUC. Throws MetricError when every class is skipped.
AucResult auc_ovr_macro(std::span<const LabelId> truth, std::span<const ScoredPrediction> scores,
                        std::size_t num_classes);

struct EvalReport {
  double acc = 0.0;
  double macro_f1 = 0.0;
  double mcc = 0.0;
  std::optional<double> auc;
  ConfusionMatrix confusion;
  std::vector<ClassMetrics> per_class;
  std::size_t n_invalid_predictions = 0;
  std::vector<LabelId> auc_skipped_classes;
};

/// Builds the full report. `label_only` predictors (LLMs) get no AUC.
EvalReport evaluate(std::span<const LabelId> truth, std::span<const ScoredPrediction> predictions,
                    std::size_t num_classes, bool label_only);

nlohmann::json to_json(const EvalReport& report, const LabelSchema& schema);
EvalReport eval_report_from_json(const nlohmann::json& j);

struct RunAggregate {
  std::string metric;
  std::vector<double> values;
  double mean = 0.0;
  /// Sample (n-1) standard deviation; absent for a single run.
  std::optional<double> stddev;

  /// "0.5413±0.0099", or "0.5413" when there is no spread to report.
  std::string format(int decimals = 4) const;
};

RunAggregate aggregate_runs(std::string metric, std::span<const double> values);

nlohmann::json to_json(const RunAggregate& agg);
RunAggregate run_aggregate_from_json(const nlohmann::json& j);

/// Fixed-point rendering used by every report ("0.4333").
std::string format_fixed(double value, int decimals = 4);

}  // namespace zsbench
