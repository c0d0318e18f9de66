#include "zsbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "zsbench/errors.hpp"

namespace zsbench {

ConfusionMatrix::ConfusionMatrix(std::size_t k, std::vector<std::size_t> counts)
    : k_(k), counts_(std::move(counts)) {
  if (counts_.size() != k_ * k_) throw MetricError("confusion matrix needs K*K counts");
}

std::size_t ConfusionMatrix::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
}

std::size_t ConfusionMatrix::trace() const noexcept {
  std::size_t t = 0;
  for (std::size_t i = 0; i < k_; ++i) t += at(i, i);
  return t;
}

std::size_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::size_t s = 0;
  for (std::size_t j = 0; j < k_; ++j) s += at(truth, j);
  return s;
}

std::size_t ConfusionMatrix::col_sum(std::size_t pred) const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < k_; ++i) s += at(i, pred);
  return s;
}

ConfusionMatrix confusion_matrix(std::span<const LabelId> truth, std::span<const LabelId> pred,
                                 std::size_t num_classes) {
  if (truth.size() != pred.size()) {
    throw MetricError("length mismatch: " + std::to_string(truth.size()) + " truths vs " +
                      std::to_string(pred.size()) + " predictions");
  }
  ConfusionMatrix cm(num_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= num_classes || pred[i] >= num_classes) {
      throw MetricError("unknown label at position " + std::to_string(i));
    }
    ++cm.at(truth[i], pred[i]);
  }
  return cm;
}

ConfusionMatrix confusion_matrix(std::span<const std::string> truth, std::span<const std::string> pred,
                                 const LabelSchema& schema) {
  if (truth.size() != pred.size()) throw MetricError("length mismatch between truth and predictions");
  const auto ids = [&](std::span<const std::string> names) {
    std::vector<LabelId> out;
    out.reserve(names.size());
    for (const auto& n : names) {
      const auto id = schema.find_exact(n);
      if (!id) throw MetricError("unknown label '" + n + "'");
      out.push_back(*id);
    }
    return out;
  };
  const auto t = ids(truth);
  const auto p = ids(pred);
  return confusion_matrix(t, p, schema.size());
}

namespace {

void require_nonempty(const ConfusionMatrix& cm) {
  if (cm.classes() == 0 || cm.total() == 0) throw MetricError("empty confusion matrix");
}

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm) {
  std::vector<ClassMetrics> out(cm.classes());
  for (std::size_t c = 0; c < cm.classes(); ++c) {
    const double tp = static_cast<double>(cm.at(c, c));
    const double predicted = static_cast<double>(cm.col_sum(c));
    const double actual = static_cast<double>(cm.row_sum(c));
    auto& m = out[c];
    m.precision = ratio(tp, predicted);
    m.recall = ratio(tp, actual);
    m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
    m.support = cm.row_sum(c);
  }
  return out;
}

double accuracy(const ConfusionMatrix& cm) {
  require_nonempty(cm);
  return static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
}

double macro_f1(const ConfusionMatrix& cm) {
  require_nonempty(cm);
  const auto per_class = per_class_metrics(cm);
  double sum = 0.0;
  for (const auto& m : per_class) sum += m.f1;
  return sum / static_cast<double>(per_class.size());
}

double mcc(const ConfusionMatrix& cm) {
  require_nonempty(cm);
  const double s = static_cast<double>(cm.total());
  const double c = static_cast<double>(cm.trace());
  double pt = 0.0;
  double pp = 0.0;
  double tt = 0.0;
  for (std::size_t k = 0; k < cm.classes(); ++k) {
    const double p = static_cast<double>(cm.col_sum(k));
    const double t = static_cast<double>(cm.row_sum(k));
    pt += p * t;
    pp += p * p;
    tt += t * t;
  }
  const double den = std::sqrt(s * s - pp) * std::sqrt(s * s - tt);
  if (den == 0.0) return 0.0;
  return std::clamp((c * s - pt) / den, -1.0, 1.0);
}

double binary_auc(std::span<const double> positive, std::span<const double> negative) {
  if (positive.empty() || negative.empty()) throw MetricError("AUC needs positives and negatives");
  std::vector<std::pair<double, bool>> all;
  all.reserve(positive.size() + negative.size());
  for (double v : positive) all.emplace_back(v, true);
  for (double v : negative) all.emplace_back(v, false);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  // Sum of positive ranks with ties given their average rank (1-based).
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    std::size_t pos_in_group = 0;
    while (j < all.size() && all[j].first == all[i].first) {
      if (all[j].second) ++pos_in_group;
      ++j;
    }
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    rank_sum += avg_rank * static_cast<double>(pos_in_group);
    i = j;
  }
  const double np = static_cast<double>(positive.size());
  const double nn = static_cast<double>(negative.size());
  const double u = rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * nn);
}

AucResult auc_ovr_macro(std::span<const LabelId> truth, std::span<const ScoredPrediction> scores,
                        std::size_t num_classes) {
  if (truth.size() != scores.size()) throw MetricError("length mismatch between truth and scores");
  AucResult result;
  double sum = 0.0;
  std::vector<double> pos;
  std::vector<double> neg;
  for (LabelId c = 0; c < num_classes; ++c) {
    pos.clear();
    neg.clear();
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (scores[i].scores.size() != num_classes) throw MetricError("score vector has wrong length");
      (truth[i] == c ? pos : neg).push_back(scores[i].scores[c]);
    }
    if (pos.empty() || neg.empty()) {
      result.skipped.push_back(c);
      continue;
    }
    sum += binary_auc(pos, neg);
    result.included.push_back(c);
  }
  if (result.included.empty()) throw MetricError("AUC undefined: every class was skipped");
  result.value = sum / static_cast<double>(result.included.size());
  return result;
}

EvalReport evaluate(std::span<const LabelId> truth, std::span<const ScoredPrediction> predictions,
                    std::size_t num_classes, bool label_only) {
  std::vector<LabelId> pred;
  pred.reserve(predictions.size());
  EvalReport r;
  for (const auto& p : predictions) {
    pred.push_back(p.label);
    if (!p.valid) ++r.n_invalid_predictions;
  }
  r.confusion = confusion_matrix(truth, pred, num_classes);
  r.acc = accuracy(r.confusion);
  r.macro_f1 = macro_f1(r.confusion);
  r.mcc = mcc(r.confusion);
  r.per_class = per_class_metrics(r.confusion);
  if (!label_only) {
    try {
      const auto auc = auc_ovr_macro(truth, predictions, num_classes);
      r.auc = auc.value;
      r.auc_skipped_classes = auc.skipped;
    } catch (const MetricError&) {
      // Single-class test set: AUC stays absent.
    }
  }
  return r;
}

nlohmann::json to_json(const EvalReport& r, const LabelSchema& schema) {
  nlohmann::json per_class = nlohmann::json::object();
  for (std::size_t c = 0; c < r.per_class.size(); ++c) {
    const auto& m = r.per_class[c];
    per_class[schema.name(c)] = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
  }
  nlohmann::json matrix = nlohmann::json::array();
  for (std::size_t i = 0; i < r.confusion.classes(); ++i) {
    std::vector<std::size_t> row;
    for (std::size_t j = 0; j < r.confusion.classes(); ++j) row.push_back(r.confusion.at(i, j));
    matrix.push_back(row);
  }
  return {{"acc", r.acc},
          {"f1", r.macro_f1},
          {"mcc", r.mcc},
          {"auc", r.auc ? nlohmann::json(*r.auc) : nlohmann::json(nullptr)},
          {"confusion", matrix},
          {"labels", schema.labels()},
          {"per_class", per_class},
          {"n_invalid_predictions", r.n_invalid_predictions},
          {"auc_skipped_classes", r.auc_skipped_classes}};
}

EvalReport eval_report_from_json(const nlohmann::json& j) {
  EvalReport r;
  r.acc = j.at("acc").get<double>();
  r.macro_f1 = j.at("f1").get<double>();
  r.mcc = j.at("mcc").get<double>();
  if (!j.at("auc").is_null()) r.auc = j.at("auc").get<double>();
  const auto labels = j.at("labels").get<std::vector<std::string>>();
  const auto& matrix = j.at("confusion");
  r.confusion = ConfusionMatrix(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t k = 0; k < labels.size(); ++k) r.confusion.at(i, k) = matrix.at(i).at(k).get<std::size_t>();
  }
  for (const auto& name : labels) {
    const auto& m = j.at("per_class").at(name);
    r.per_class.push_back({m.at("precision").get<double>(), m.at("recall").get<double>(),
                           m.at("f1").get<double>(), m.at("support").get<std::size_t>()});
  }
  r.n_invalid_predictions = j.at("n_invalid_predictions").get<std::size_t>();
  r.auc_skipped_classes = j.value("auc_skipped_classes", std::vector<LabelId>{});
  return r;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string RunAggregate::format(int decimals) const {
  std::string out = format_fixed(mean, decimals);
  if (stddev) out += "±" + format_fixed(*stddev, decimals);
  return out;
}

RunAggregate aggregate_runs(std::string metric, std::span<const double> values) {
  if (values.empty()) throw MetricError("cannot aggregate an empty list of runs");
  RunAggregate agg;
  agg.metric = std::move(metric);
  agg.values.assign(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  // Shifted by the first value so constant runs give an exact mean and zero spread.
  const double shift = values.front();
  double offset = 0.0;
  for (double v : values) offset += v - shift;
  agg.mean = shift + offset / n;
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
    agg.stddev = std::sqrt(ss / (n - 1.0));
  }
  return agg;
}

nlohmann::json to_json(const RunAggregate& agg) {
  return {{"metric", agg.metric},
          {"values", agg.values},
          {"mean", agg.mean},
          {"std", agg.stddev ? nlohmann::json(*agg.stddev) : nlohmann::json(nullptr)},
          {"formatted", agg.format()}};
}

RunAggregate run_aggregate_from_json(const nlohmann::json& j) {
  RunAggregate agg;
  agg.metric = j.at("metric").get<std::string>();
  agg.values = j.at("values").get<std::vector<double>>();
  agg.mean = j.at("mean").get<double>();
  if (!j.at("std").is_null()) agg.stddev = j.at("std").get<double>();
  return agg;
}

}  // namespace zsbench
