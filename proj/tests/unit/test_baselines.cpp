#include <doctest.h>

#include <cmath>
#include <random>

#include "zsbench/baselines.hpp"
#include "zsbench/errors.hpp"

using namespace zsbench;

namespace {

struct Data {
  std::vector<FeatureVector> x;
  std::vector<LabelId> y;
  std::size_t k = 2;
  std::size_t v = 0;
  TrainingSet set() const { return TrainingSet{x, y, k, v}; }
};

FeatureVector dense(const std::vector<double>& w) {
  std::vector<SparseEntry> e;
  for (std::uint32_t i = 0; i < w.size(); ++i) {
    if (w[i] != 0.0) e.push_back({i, w[i]});
  }
  return FeatureVector(w.size(), std::move(e));
}

Data make_random_set(std::mt19937_64& rng, std::size_t n, std::size_t v, std::size_t k, double density = 0.4) {
  Data d;
  d.k = k;
  d.v = v;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> w(v, 0.0);
    for (auto& x : w) {
      if (u(rng) < density) x = std::round(u(rng) * 4.0) / 4.0;
    }
    d.x.push_back(dense(w));
    d.y.push_back(i < k ? i : rng() % k);  // every class present
  }
  return d;
}

void check_distribution(const ScoredPrediction& p, std::size_t k) {
  REQUIRE(p.scores.size() == k);
  double sum = 0.0;
  for (double s : p.scores) {
    REQUIRE(s >= 0.0);
    sum += s;
  }
  REQUIRE(std::abs(sum - 1.0) <= 1e-9);
  REQUIRE(p.label == argmax_first(p.scores));
}

// Terms: 0 = hello, 1 = win, 2 = prize (unused in training).
Data spam_ham() {
  Data d;
  d.k = 2;  // 0 = spam, 1 = ham
  d.v = 3;
  d.x = {dense({0, 2, 0}), dense({1, 0, 0})};
  d.y = {0, 1};
  return d;
}

}  // namespace

TEST_CASE("argmax ties go to schema order") {
  const std::vector<double> s = {0.25, 0.5, 0.5};
  CHECK(argmax_first(s) == 1);
}

TEST_CASE("MNB hand example") {
  const auto d = spam_ham();
  const auto m = train_mnb(d.set(), 1.0);
  CHECK(std::exp(m.log_likelihood(0, 1)) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(std::exp(m.log_likelihood(1, 1)) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::exp(m.log_prior()[0]) == doctest::Approx(0.5));

  // Input ["win"]: P(spam|x) = 0.5*0.6 / (0.5*0.6 + 0.5*0.25)
  const auto p = predict_scores(m, dense({0, 1, 0}));
  CHECK(p.scores[0] == doctest::Approx(0.6 / 0.85).epsilon(1e-12));
  CHECK(p.label == 0);
}

TEST_CASE("MNB smoothing limit and errors") {
  const auto d = spam_ham();
  const auto m = train_mnb(d.set(), 1e9);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t t = 0; t < 3; ++t) CHECK(std::abs(std::exp(m.log_likelihood(c, t)) - 1.0 / 3.0) < 1e-3);
  }
  Data single = d;
  single.y = {0, 0};
  CHECK_THROWS_AS(train_mnb(single.set(), 1.0), TrainingError);
  CHECK_THROWS_AS(train_mnb(d.set(), 0.0), TrainingError);
}

TEST_CASE("LR: zero weights give the uniform distribution") {
  const auto d = spam_ham();
  LogRegHyper h;
  h.epochs = 0;
  const auto m = train_logreg(d.set(), h);
  const auto p = predict_scores(m, dense({3, 1, 0}));
  CHECK(p.scores[0] == doctest::Approx(0.5));
  CHECK(p.scores[1] == doctest::Approx(0.5));
  const LogRegModel zero(LinearModelParams::zeros(3, 4));
  const auto q = predict_scores(zero, FeatureVector(4));
  for (double s : q.scores) CHECK(s == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("LR: loss strictly decreases on a separable toy set") {
  Data d;
  d.k = 2;
  d.v = 2;
  d.x = {dense({1, 0}), dense({0.9, 0.1}), dense({0, 1}), dense({0.1, 0.9})};
  d.y = {0, 0, 1, 1};
  LogRegHyper h;
  h.epochs = 100;
  const auto m = train_logreg(d.set(), h);
  const auto& loss = m.loss_history();
  REQUIRE(loss.size() == 101);
  for (std::size_t i = 1; i < loss.size(); ++i) CHECK(loss[i] < loss[i - 1]);
  for (std::size_t i = 0; i < 4; ++i) CHECK(predict_scores(m, d.x[i]).label == d.y[i]);
}

TEST_CASE("LR: one-hot features follow the class-conditional majority") {
  // Enumerate label assignments of 2 one-hot feature groups with 3 samples each;
  // ties excluded so the majority is well defined.
  int checked = 0;
  for (unsigned mask = 0; mask < 64; ++mask) {
    Data d;
    d.k = 2;
    d.v = 2;
    int ones[2] = {0, 0};
    for (unsigned i = 0; i < 6; ++i) {
      const std::uint32_t f = i / 3;
      d.x.push_back(FeatureVector(2, {{f, 1.0}}));
      const LabelId y = (mask >> i) & 1u;
      d.y.push_back(y);
      ones[f] += static_cast<int>(y);
    }
    if (ones[0] + ones[1] == 0 || ones[0] + ones[1] == 6) continue;
    LogRegHyper h;
    h.l2_lambda = 0.0;
    h.learning_rate = 1.0;
    h.epochs = 500;
    const auto m = train_logreg(d.set(), h);
    for (std::uint32_t f = 0; f < 2; ++f) {
      const LabelId majority = ones[f] >= 2 ? 1 : 0;
      CHECK(predict_scores(m, FeatureVector(2, {{f, 1.0}})).label == majority);
    }
    ++checked;
  }
  CHECK(checked == 62);
}

TEST_CASE("LR: gradient matches finite differences") {
  std::mt19937_64 rng(17);
  const auto d = make_random_set(rng, 30, 10, 3, 0.5);
  std::normal_distribution<double> g(0.0, 0.3);
  auto params = LinearModelParams::zeros(3, 10);
  for (auto& w : params.weights) w = g(rng);
  for (auto& b : params.bias) b = g(rng);
  const double lambda = 0.01;
  const auto grad = logreg_gradient(params, d.set(), lambda);
  const double eps = 1e-5;
  for (std::size_t i = 0; i < params.weights.size(); ++i) {
    auto p = params, m = params;
    p.weights[i] += eps;
    m.weights[i] -= eps;
    const double fd = (logreg_loss(p, d.set(), lambda) - logreg_loss(m, d.set(), lambda)) / (2 * eps);
    CHECK(std::abs(fd - grad.weights[i]) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("LR: divergence names the epoch") {
  Data d;
  d.k = 2;
  d.v = 1;
  d.x = {dense({1e200}), dense({-1e200})};
  d.y = {0, 1};
  LogRegHyper h;
  h.learning_rate = 1e200;
  h.epochs = 10;
  try {
    train_logreg(d.set(), h);
    FAIL("expected divergence");
  } catch (const TrainingError& e) {
    CHECK(std::string(e.what()).find("epoch") != std::string::npos);
  }
}

TEST_CASE("KNN examples") {
  Data d;
  d.k = 2;
  d.v = 2;
  d.x = {dense({1, 0}), dense({0.9, 0.2}), dense({0, 1}), dense({0.2, 1})};
  d.y = {0, 0, 1, 1};
  const auto k1 = train_knn(d.set(), 1);
  for (std::size_t i = 0; i < 4; ++i) CHECK(predict_scores(k1, d.x[i]).label == d.y[i]);

  Data v;
  v.k = 2;
  v.v = 2;
  v.x = {dense({1, 0}), dense({1, 0.1}), dense({0, 1}), dense({0.1, 1})};
  v.y = {0, 0, 1, 1};
  const auto k3 = train_knn(v.set(), 3);
  const auto p = predict_scores(k3, dense({1, 0.05}));
  CHECK(p.scores[0] == doctest::Approx(2.0 / 3.0));
  CHECK(p.scores[1] == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(train_knn(d.set(), 5), TrainingError);
  CHECK_THROWS_AS(train_knn(d.set(), 2), TrainingError);
}

TEST_CASE("DT: pure input is a single leaf") {
  Data d;
  d.k = 2;
  d.v = 2;
  d.x = {dense({1, 0}), dense({0, 1}), dense({1, 1})};
  d.y = {1, 1, 1};
  const auto t = train_dt(d.set());
  CHECK(t.depth() == 0);
  CHECK(t.leaf_count() == 1);
  CHECK(predict_scores(t, dense({0, 0})).scores[1] == 1.0);
  TreeParams bad;
  bad.max_depth = 0;
  CHECK_THROWS_AS(train_dt(d.set(), bad), TrainingError);
}

TEST_CASE("DT: leaf frequencies sum to the samples reaching them") {
  std::mt19937_64 rng(3);
  const auto d = make_random_set(rng, 80, 12, 3);
  const auto t = train_dt(d.set());
  const auto& nodes = t.nodes();
  double leaf_total = 0.0;
  for (const auto& n : nodes) {
    if (n.feature < 0) {
      for (double c : n.class_counts) leaf_total += c;
    } else {
      double here = 0.0, below = 0.0;
      for (double c : n.class_counts) here += c;
      for (double c : nodes[n.left].class_counts) below += c;
      for (double c : nodes[n.right].class_counts) below += c;
      CHECK(here == below);
    }
  }
  CHECK(leaf_total == 80.0);
  // Fully grown on distinct rows: training accuracy is perfect unless rows collide.
  std::size_t correct = 0;
  for (std::size_t i = 0; i < d.x.size(); ++i) correct += predict_scores(t, d.x[i]).label == d.y[i];
  CHECK(correct >= 70);
}

TEST_CASE("RF with one tree and no bootstrap equals the tree") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = make_random_set(rng, 20 + rng() % 40, 4 + rng() % 10, 2 + rng() % 3);
    ForestParams fp;
    fp.n_trees = 1;
    fp.bootstrap = false;
    fp.feature_subsample = FeatureSubsample::all;
    fp.seed = rng();
    const auto forest = train_rf(d.set(), fp);
    const auto tree = train_dt(d.set(), TreeParams{fp.max_depth, fp.min_leaf});
    const auto probe = make_random_set(rng, 30, d.v, d.k);
    for (const auto& x : probe.x) {
      REQUIRE(predict_scores(forest, x).scores == predict_scores(tree, x).scores);
    }
  }
}

TEST_CASE("RF is deterministic and independent of thread count") {
  std::mt19937_64 rng(8);
  const auto d = make_random_set(rng, 60, 15, 3);
  ForestParams fp;
  fp.n_trees = 25;
  fp.seed = 1234;
  const auto a = train_rf(d.set(), fp);
  fp.threads = 4;
  const auto b = train_rf(d.set(), fp);
  CHECK(a.to_json() == b.to_json());
  fp.seed = 99;
  CHECK(train_rf(d.set(), fp).to_json() != a.to_json());
}

TEST_CASE("property: every model emits a distribution, zero vector included") {
  std::mt19937_64 rng(21);
  const auto d = make_random_set(rng, 40, 8, 3);
  ForestParams fp;
  fp.n_trees = 10;
  std::vector<std::unique_ptr<Classifier>> models;
  models.push_back(std::make_unique<MnbModel>(train_mnb(d.set())));
  models.push_back(std::make_unique<LogRegModel>(train_logreg(d.set())));
  models.push_back(std::make_unique<KnnModel>(train_knn(d.set(), 3)));
  models.push_back(std::make_unique<TreeModel>(train_dt(d.set())));
  models.push_back(std::make_unique<ForestModel>(train_rf(d.set(), fp)));
  const auto probe = make_random_set(rng, 50, 8, 3);
  for (const auto& m : models) {
    check_distribution(predict_scores(*m, FeatureVector(8)), 3);
    for (const auto& x : probe.x) check_distribution(predict_scores(*m, x), 3);
    CHECK_THROWS_AS(predict_scores(*m, FeatureVector(9)), TrainingError);
  }
}

TEST_CASE("training is byte-for-byte deterministic") {
  std::mt19937_64 rng(4);
  const auto d = make_random_set(rng, 50, 10, 3);
  CHECK(train_mnb(d.set()).to_json().dump() == train_mnb(d.set()).to_json().dump());
  CHECK(train_logreg(d.set()).to_json().dump() == train_logreg(d.set()).to_json().dump());
  CHECK(train_dt(d.set()).to_json().dump() == train_dt(d.set()).to_json().dump());
  LogRegHyper mb;
  mb.batch_size = 7;
  mb.seed = 5;
  CHECK(train_logreg(d.set(), mb).to_json().dump() == train_logreg(d.set(), mb).to_json().dump());
}

TEST_CASE("training set validation") {
  auto d = spam_ham();
  d.y = {0};
  CHECK_THROWS_AS(d.set().validate(), TrainingError);
  d = spam_ham();
  d.y = {0, 5};
  CHECK_THROWS_AS(d.set().validate(), TrainingError);
}
