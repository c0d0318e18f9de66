#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "zsbench/porter_stemmer.hpp"
#include "zsbench/preprocess.hpp"

using namespace zsbench;

static void BM_CleanText(benchmark::State& state) {
  const auto& docs = bench::tweets().documents;
  const auto policy = CleaningPolicy{};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(clean_text(docs[i++ % docs.size()].text, policy));
  }
}
BENCHMARK(BM_CleanText);

static void BM_PreprocessCorpus(benchmark::State& state) {
  const auto& corpus = bench::tweets();
  for (auto _ : state) {
    benchmark::DoNotOptimize(preprocess_corpus(corpus, CleaningPolicy{}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.size()));
}
BENCHMARK(BM_PreprocessCorpus);

static void BM_PorterStem(benchmark::State& state) {
  const char* words[] = {"generalizations", "running", "happiness", "conditional", "electricity", "tweets"};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(porter_stem(words[i++ % 6]));
}
BENCHMARK(BM_PorterStem);
