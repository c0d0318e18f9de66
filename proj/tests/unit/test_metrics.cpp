#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "zsbench/errors.hpp"
#include "zsbench/metrics.hpp"

using namespace zsbench;

namespace {

ScoredPrediction scored(std::vector<double> s) {
  ScoredPrediction p;
  p.label = argmax_first(s);
  p.scores = std::move(s);
  return p;
}

double brute_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double wins = 0.0;
  for (double p : pos) {
    for (double n : neg) wins += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
  }
  return wins / (static_cast<double>(pos.size()) * neg.size());
}

}  // namespace

TEST_CASE("confusion matrix counts") {
  const std::vector<LabelId> truth = {0, 0, 1}, pred = {0, 1, 1};
  const auto cm = confusion_matrix(truth, pred, 2);
  CHECK(cm == ConfusionMatrix(2, {1, 1, 0, 1}));
  CHECK(confusion_matrix(truth, truth, 2) == ConfusionMatrix(2, {2, 0, 0, 1}));

  const LabelSchema s("t", {"a", "b"});
  const std::vector<std::string> tn = {"a", "a", "b"}, pn = {"a", "b", "b"};
  CHECK(confusion_matrix(tn, pn, s) == cm);
  const std::vector<std::string> bad = {"a", "c", "b"};
  CHECK_THROWS_AS(confusion_matrix(tn, bad, s), MetricError);
  const std::vector<LabelId> short_pred = {0};
  CHECK_THROWS_AS(confusion_matrix(truth, short_pred, 2), MetricError);
}

TEST_CASE("all-negative predictor on a 65/24/61 test set") {
  std::vector<LabelId> truth;
  truth.insert(truth.end(), 65, 0);
  truth.insert(truth.end(), 24, 1);
  truth.insert(truth.end(), 61, 2);
  const std::vector<LabelId> pred(150, 0);
  CHECK(accuracy(confusion_matrix(truth, pred, 3)) == doctest::Approx(65.0 / 150.0).epsilon(1e-15));
}

TEST_CASE("hand-computed macro F1") {
  const ConfusionMatrix cm(2, {1, 1, 0, 2});
  const auto pc = per_class_metrics(cm);
  CHECK(pc[0].precision == 1.0);
  CHECK(pc[0].recall == 0.5);
  CHECK(pc[0].f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(pc[1].precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(pc[1].recall == 1.0);
  CHECK(pc[1].f1 == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(std::abs(macro_f1(cm) - 11.0 / 15.0) < 1e-9);
}

TEST_CASE("perfect and symmetric matrices") {
  const ConfusionMatrix diag(3, {4, 0, 0, 0, 2, 0, 0, 0, 7});
  CHECK(accuracy(diag) == 1.0);
  CHECK(macro_f1(diag) == 1.0);
  CHECK(mcc(diag) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mcc(ConfusionMatrix(2, {1, 1, 1, 1})) == 0.0);
  // zero denominator: every prediction in one column
  CHECK(mcc(ConfusionMatrix(2, {3, 0, 2, 0})) == 0.0);
  CHECK_THROWS_AS(accuracy(ConfusionMatrix(2)), MetricError);
}

TEST_CASE("binary MCC agrees with the textbook formula") {
  // TP=5 FN=2 FP=1 TN=7 with class 0 as positive
  const ConfusionMatrix cm(2, {5, 2, 1, 7});
  const double tp = 5, fn = 2, fp = 1, tn = 7;
  const double expected = (tp * tn - fp * fn) / std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
  CHECK(std::abs(mcc(cm) - expected) < 1e-12);
}

TEST_CASE("0/0 conventions in per-class metrics") {
  const ConfusionMatrix cm(3, {2, 1, 0, 1, 2, 0, 0, 0, 0});
  const auto pc = per_class_metrics(cm);
  CHECK(pc[2].precision == 0.0);
  CHECK(pc[2].recall == 0.0);
  CHECK(pc[2].f1 == 0.0);
}

TEST_CASE("AUC examples") {
  const std::vector<double> pos = {0.9, 0.6}, neg = {0.7, 0.2};
  CHECK(binary_auc(pos, neg) == 0.75);
  const std::vector<double> hi = {0.8, 0.9}, lo = {0.1, 0.2};
  CHECK(binary_auc(hi, lo) == 1.0);
  const std::vector<double> same = {0.5, 0.5, 0.5};
  CHECK(binary_auc(same, same) == 0.5);
}

TEST_CASE("one-vs-rest AUC skips single-sided classes") {
  const std::vector<LabelId> truth = {0, 0, 1, 1};
  std::vector<ScoredPrediction> s = {scored({0.9, 0.1, 0.0}), scored({0.6, 0.4, 0.0}), scored({0.3, 0.7, 0.0}),
                                     scored({0.2, 0.8, 0.0})};
  const auto r = auc_ovr_macro(truth, s, 3);
  CHECK(r.value == 1.0);
  CHECK(r.skipped == std::vector<LabelId>{2});
  const std::vector<LabelId> one_class = {0, 0, 0, 0};
  CHECK_THROWS_AS(auc_ovr_macro(one_class, s, 3), MetricError);
}

TEST_CASE("property: Mann-Whitney equals pair counting") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + rng() % 49;
    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = static_cast<double>(rng() % 10) / 10.0;  // coarse grid forces ties
      (rng() % 2 ? pos : neg).push_back(s);
    }
    if (pos.empty() || neg.empty()) continue;
    REQUIRE(std::abs(binary_auc(pos, neg) - brute_auc(pos, neg)) <= 1e-12);
  }
}

TEST_CASE("property: ranges and permutation invariance") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 300; ++t) {
    const std::size_t k = 2 + rng() % 4, n = k + rng() % 60;
    std::vector<LabelId> truth, pred;
    std::vector<ScoredPrediction> scores;
    for (std::size_t i = 0; i < n; ++i) {
      truth.push_back(i < k ? i : rng() % k);
      std::vector<double> s(k);
      double sum = 0;
      for (auto& x : s) sum += (x = static_cast<double>(rng() % 100) + 1);
      for (auto& x : s) x /= sum;
      scores.push_back(scored(s));
      pred.push_back(rng() % 3 == 0 ? truth.back() : scores.back().label);
    }
    const auto cm = confusion_matrix(truth, pred, k);
    const double a = accuracy(cm), f = macro_f1(cm), m = mcc(cm);
    REQUIRE(a >= 0.0);
    REQUIRE(a <= 1.0);
    REQUIRE(f >= 0.0);
    REQUIRE(f <= 1.0);
    REQUIRE(m >= -1.0);
    REQUIRE(m <= 1.0);
    const double auc = auc_ovr_macro(truth, scores, k).value;
    REQUIRE(auc >= 0.0);
    REQUIRE(auc <= 1.0);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<LabelId> t2, p2;
    std::vector<ScoredPrediction> s2;
    for (auto i : perm) {
      t2.push_back(truth[i]);
      p2.push_back(pred[i]);
      s2.push_back(scores[i]);
    }
    const auto cm2 = confusion_matrix(t2, p2, k);
    REQUIRE(cm2 == cm);
    REQUIRE(std::abs(auc_ovr_macro(t2, s2, k).value - auc) <= 1e-12);
  }
}

TEST_CASE("evaluate: label-only predictors have no AUC") {
  const std::vector<LabelId> truth = {0, 1, 1};
  std::vector<ScoredPrediction> preds = {scored({1, 0}), scored({0, 1}), scored({1, 0})};
  preds[2].valid = false;
  const auto r = evaluate(truth, preds, 2, true);
  CHECK_FALSE(r.auc.has_value());
  CHECK(r.acc == doctest::Approx(2.0 / 3.0));
  CHECK(r.n_invalid_predictions == 1);
  const auto s = evaluate(truth, preds, 2, false);
  CHECK(s.auc.has_value());

  const LabelSchema schema("t", {"a", "b"});
  const auto back = eval_report_from_json(to_json(r, schema));
  CHECK(back.acc == r.acc);
  CHECK(back.confusion == r.confusion);
  CHECK_FALSE(back.auc.has_value());
}

TEST_CASE("aggregate_runs") {
  const std::vector<double> constant = {0.55, 0.55, 0.55};
  const auto c = aggregate_runs("acc", constant);
  CHECK(c.mean == 0.55);
  CHECK(c.stddev == 0.0);

  const std::vector<double> two = {0.52, 0.56};
  const auto t = aggregate_runs("acc", two);
  CHECK(t.mean == doctest::Approx(0.54).epsilon(1e-12));
  CHECK(std::abs(*t.stddev - 0.028284271247461926) < 1e-12);

  const std::vector<double> one = {0.5};
  CHECK_FALSE(aggregate_runs("acc", one).stddev.has_value());
  CHECK(aggregate_runs("acc", one).format() == "0.5000");
  CHECK_THROWS_AS(aggregate_runs("acc", std::vector<double>{}), MetricError);

  const auto back = run_aggregate_from_json(to_json(t));
  CHECK(back.values == t.values);
  CHECK(back.mean == t.mean);
}

TEST_CASE("mean plus-minus std formatting") {
  // five runs around 0.5413 (sample std 0.010948)
  const std::vector<double> runs = {0.5333, 0.5467, 0.5533, 0.5267, 0.5467};
  const auto a = aggregate_runs("acc", runs);
  CHECK(a.format() == "0.5413±0.0109");
  RunAggregate fixed;
  fixed.mean = 0.54134;
  fixed.stddev = 0.00994;
  CHECK(fixed.format() == "0.5413±0.0099");
  CHECK(format_fixed(65.0 / 150.0) == "0.4333");
}
