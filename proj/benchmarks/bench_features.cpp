#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "zsbench/features.hpp"
#include "zsbench/preprocess.hpp"

using namespace zsbench;

namespace {

const PreprocessedCorpus& cleaned() {
  static const PreprocessedCorpus c = preprocess_corpus(bench::tweets(), CleaningPolicy{});
  return c;
}

}  // namespace

static void BM_TfidfFit(benchmark::State& state) {
  const auto& docs = cleaned().documents;
  for (auto _ : state) benchmark::DoNotOptimize(TfidfVectorizer::fit(docs));
}
BENCHMARK(BM_TfidfFit);

static void BM_TfidfTransform(benchmark::State& state) {
  const auto& docs = cleaned().documents;
  const auto vectorizer = TfidfVectorizer::fit(docs);
  for (auto _ : state) benchmark::DoNotOptimize(vectorizer.transform(docs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs.size()));
}
BENCHMARK(BM_TfidfTransform);
