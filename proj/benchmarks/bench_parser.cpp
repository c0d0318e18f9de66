#include <benchmark/benchmark.h>

#include "zsbench/llm/response_parser.hpp"

using namespace zsbench;
using namespace zsbench::llm;

namespace {

const LabelSchema& schema() {
  static const LabelSchema s("e-commerce", {"Household", "Books", "Clothing & Accessories", "Electronics"});
  return s;
}

std::string batch_response(bool loose) {
  const char* labels[] = {"Household", "Books", "Clothing & Accessories", "Electronics"};
  std::string out = "Here are the categories:\n{";
  for (int i = 1; i <= 25; ++i) {
    if (i > 1) out += ", ";
    out += loose ? std::to_string(i) + ": " + labels[i % 4] : "\"" + std::to_string(i) + "\": \"" + labels[i % 4] + "\"";
  }
  return out + "}\nLet me know if you need anything else.";
}

}  // namespace

static void BM_ParseResponse(benchmark::State& state) {
  const std::string raw = batch_response(state.range(0) != 0);
  std::vector<int> batch;
  for (int i = 1; i <= 25; ++i) batch.push_back(i);
  for (auto _ : state) benchmark::DoNotOptimize(parse_response(raw, batch, schema()));
}
BENCHMARK(BM_ParseResponse)->Arg(0)->Arg(1);
