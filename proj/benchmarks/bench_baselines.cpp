#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "zsbench/baselines.hpp"
#include "zsbench/features.hpp"
#include "zsbench/preprocess.hpp"

using namespace zsbench;

namespace {

struct Prepared {
  std::vector<FeatureVector> x;
  std::vector<LabelId> y;
  std::size_t dimension = 0;

  TrainingSet data() const { return {x, y, 3, dimension}; }
};

const Prepared& prepared() {
  static const Prepared p = [] {
    const auto& corpus = bench::tweets();
    const auto cleaned = preprocess_corpus(corpus, CleaningPolicy{});
    const auto vectorizer = TfidfVectorizer::fit(cleaned.documents);
    Prepared out;
    out.x = vectorizer.transform(cleaned.documents);
    for (const auto& d : corpus.documents) out.y.push_back(*d.gold);
    out.dimension = vectorizer.dimension();
    return out;
  }();
  return p;
}

}  // namespace

static void BM_TrainMnb(benchmark::State& state) {
  const auto data = prepared().data();
  for (auto _ : state) benchmark::DoNotOptimize(train_mnb(data));
}
BENCHMARK(BM_TrainMnb);

static void BM_TrainLogReg(benchmark::State& state) {
  const auto data = prepared().data();
  LogRegHyper h;
  h.epochs = 50;
  for (auto _ : state) benchmark::DoNotOptimize(train_logreg(data, h));
}
BENCHMARK(BM_TrainLogReg)->Unit(benchmark::kMillisecond);

static void BM_TrainTree(benchmark::State& state) {
  const auto data = prepared().data();
  for (auto _ : state) benchmark::DoNotOptimize(train_dt(data));
}
BENCHMARK(BM_TrainTree)->Unit(benchmark::kMillisecond);

static void BM_TrainForest(benchmark::State& state) {
  const auto data = prepared().data();
  ForestParams p;
  p.n_trees = 50;
  p.threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(train_rf(data, p));
}
BENCHMARK(BM_TrainForest)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_KnnPredict(benchmark::State& state) {
  const auto& p = prepared();
  const auto model = train_knn(p.data(), 5);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(predict_scores(model, p.x[i++ % p.x.size()]));
}
BENCHMARK(BM_KnnPredict);
