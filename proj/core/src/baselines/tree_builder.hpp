#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "zsbench/baselines.hpp"

namespace zsbench {

/// Grows one Gini tree. With `features_per_split` set, each split considers a
/// random subset of the features that vary inside the node, drawn from `rng`.
class TreeBuilder {
 public:
  TreeBuilder(const TrainingSet& data, const TreeParams& params,
              std::optional<std::size_t> features_per_split = std::nullopt,
              std::mt19937_64* rng = nullptr);

  /// `rows` may repeat indices (bootstrap samples count once per occurrence).
  TreeModel build(std::vector<std::size_t> rows);

 private:
  struct Split {
    std::int32_t feature = -1;
    double threshold = 0.0;
    double score = 0.0;
  };
  struct Cell {
    std::uint32_t feature;
    double value;
    LabelId label;
  };

  std::int32_t grow(std::vector<std::size_t>& rows, std::size_t depth, TreeModel& tree);
  std::optional<Split> best_split(const std::vector<std::size_t>& rows,
                                  const std::vector<double>& counts);
  void scan_feature(std::span<const Cell> cells, std::size_t n, const std::vector<double>& counts,
                    Split& best, bool& found) const;

  const TrainingSet& data_;
  TreeParams params_;
  std::optional<std::size_t> features_per_split_;
  std::mt19937_64* rng_;
};

}  // namespace zsbench
