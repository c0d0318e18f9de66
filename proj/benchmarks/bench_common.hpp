#pragma once

#include "zsbench/dataset.hpp"

namespace zsbench::bench {

inline const LabeledCorpus& tweets() {
  static const LabeledCorpus corpus =
      load_corpus(ZSBENCH_BENCH_DATA_DIR "/tweets_600.csv", CorpusFormat::csv, "text", "label",
                  LabelSchema("tweet sentiment", {"negative", "neutral", "positive"}));
  return corpus;
}

}  // namespace zsbench::bench
