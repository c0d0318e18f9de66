#include <algorithm>
#include <cmath>

#include "tree_builder.hpp"
#include "zsbench/errors.hpp"

namespace zsbench {
namespace {

// Sum over children of n_child * gini(child), written as n - sum(c^2)/n.
double weighted_gini(std::span<const double> counts, double n) {
  if (n <= 0.0) return 0.0;
  double sq = 0.0;
  for (double c : counts) sq += c * c;
  return n - sq / n;
}

}  // namespace

TreeBuilder::TreeBuilder(const TrainingSet& data, const TreeParams& params,
                         std::optional<std::size_t> features_per_split, std::mt19937_64* rng)
    : data_(data), params_(params), features_per_split_(features_per_split), rng_(rng) {
  if (params_.max_depth < 1) throw TrainingError("max_depth must be at least 1");
  if (params_.min_leaf < 1) throw TrainingError("min_leaf must be at least 1");
  if (features_per_split_ && (*features_per_split_ == 0 || rng_ == nullptr)) {
    throw TrainingError("feature subsampling needs a positive subset size and an RNG");
  }
}

TreeModel TreeBuilder::build(std::vector<std::size_t> rows) {
  TreeModel tree;
  tree.num_classes_ = data_.num_classes;
  tree.dimension_ = data_.dimension;
  grow(rows, 0, tree);
  return tree;
}

std::int32_t TreeBuilder::grow(std::vector<std::size_t>& rows, std::size_t depth, TreeModel& tree) {
  std::vector<double> counts(data_.num_classes, 0.0);
  for (std::size_t r : rows) counts[data_.labels[r]] += 1.0;

  const auto index = static_cast<std::int32_t>(tree.nodes_.size());
  tree.nodes_.push_back({-1, 0.0, -1, -1, counts});

  const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;
  if (pure || depth >= params_.max_depth || rows.size() < 2 * params_.min_leaf) return index;

  const auto split = best_split(rows, counts);
  if (!split) return index;

  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  for (std::size_t r : rows) {
    const double v = data_.features[r].at(static_cast<std::uint32_t>(split->feature));
    (v <= split->threshold ? left : right).push_back(r);
  }
  rows.clear();
  rows.shrink_to_fit();

  tree.nodes_[index].feature = split->feature;
  tree.nodes_[index].threshold = split->threshold;
  const std::int32_t l = grow(left, depth + 1, tree);
  tree.nodes_[index].left = l;
  const std::int32_t r = grow(right, depth + 1, tree);
  tree.nodes_[index].right = r;
  return index;
}

std::optional<TreeBuilder::Split> TreeBuilder::best_split(const std::vector<std::size_t>& rows,
                                                          const std::vector<double>& counts) {
  std::vector<Cell> cells;
  for (std::size_t r : rows) {
    for (const auto& e : data_.features[r].entries()) {
      if (e.weight != 0.0) cells.push_back({e.index, e.weight, data_.labels[r]});
    }
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return a.feature != b.feature ? a.feature < b.feature : a.value < b.value;
  });

  // [begin, end) ranges of cells per feature, in feature order.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < cells.size();) {
    std::size_t j = i;
    while (j < cells.size() && cells[j].feature == cells[i].feature) ++j;
    groups.emplace_back(i, j);
    i = j;
  }

  if (features_per_split_ && *features_per_split_ < groups.size()) {
    const std::size_t m = *features_per_split_;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + static_cast<std::size_t>((*rng_)() % (groups.size() - i));
      std::swap(groups[i], groups[j]);
    }
    groups.resize(m);
    std::sort(groups.begin(), groups.end());
  }

  const double n = static_cast<double>(rows.size());
  const double parent = weighted_gini(counts, n);
  Split best;
  best.score = parent - 1e-12 * std::max(1.0, n);
  bool found = false;
  for (const auto& [b, e] : groups) {
    scan_feature(std::span(cells).subspan(b, e - b), rows.size(), counts, best, found);
  }
  if (!found) return std::nullopt;
  return best;
}

void TreeBuilder::scan_feature(std::span<const Cell> cells, std::size_t n,
                               const std::vector<double>& counts, Split& best, bool& found) const {
  const std::size_t k = counts.size();
  // Implicit zeros: samples of this node with no entry for the feature.
  std::vector<double> zero_counts(counts);
  for (const auto& c : cells) zero_counts[c.label] -= 1.0;
  const double zeros = static_cast<double>(n - cells.size());

  std::vector<double> left(k, 0.0);
  std::vector<double> right(k, 0.0);
  double left_n = 0.0;
  const double total = static_cast<double>(n);
  const double min_leaf = static_cast<double>(params_.min_leaf);

  // Values in ascending order with the zero block merged at its position.
  const auto first_positive = std::find_if(cells.begin(), cells.end(), [](const Cell& c) { return c.value > 0.0; });
  const std::size_t zero_pos = static_cast<std::size_t>(first_positive - cells.begin());
  const std::size_t steps = cells.size() + (zeros > 0.0 ? 1 : 0);

  const auto value_at = [&](std::size_t step) -> double {
    if (zeros > 0.0) {
      if (step == zero_pos) return 0.0;
      if (step > zero_pos) return cells[step - 1].value;
    }
    return cells[step].value;
  };

  for (std::size_t step = 0; step < steps; ++step) {
    if (zeros > 0.0 && step == zero_pos) {
      for (std::size_t c = 0; c < k; ++c) left[c] += zero_counts[c];
      left_n += zeros;
    } else {
      const Cell& cell = cells[zeros > 0.0 && step > zero_pos ? step - 1 : step];
      left[cell.label] += 1.0;
      left_n += 1.0;
    }
    if (step + 1 == steps) break;
    const double here = value_at(step);
    const double next = value_at(step + 1);
    if (next == here) continue;
    const double right_n = total - left_n;
    if (left_n < min_leaf || right_n < min_leaf) continue;
    for (std::size_t c = 0; c < k; ++c) right[c] = counts[c] - left[c];
    const double score = weighted_gini(left, left_n) + weighted_gini(right, right_n);
    if (score < best.score) {
      double threshold = here + (next - here) / 2.0;
      if (!(threshold < next)) threshold = here;
      best = {static_cast<std::int32_t>(cells.front().feature), threshold, score};
      found = true;
    }
  }
}

TreeModel train_dt(const TrainingSet& data, const TreeParams& params) {
  data.validate();
  TreeBuilder builder(data, params);
  std::vector<std::size_t> rows(data.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return builder.build(std::move(rows));
}

void TreeModel::predict_proba(const FeatureVector& x, std::span<double> out) const {
  std::int32_t i = 0;
  while (nodes_[i].feature >= 0) {
    const Node& node = nodes_[i];
    i = x.at(static_cast<std::uint32_t>(node.feature)) <= node.threshold ? node.left : node.right;
  }
  const auto& counts = nodes_[i].class_counts;
  double total = 0.0;
  for (double c : counts) total += c;
  for (std::size_t c = 0; c < counts.size(); ++c) out[c] = counts[c] / total;
}

std::size_t TreeModel::depth() const noexcept {
  std::size_t deepest = 0;
  std::vector<std::pair<std::int32_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (nodes_[i].feature >= 0) {
      stack.emplace_back(nodes_[i].left, d + 1);
      stack.emplace_back(nodes_[i].right, d + 1);
    }
  }
  return deepest;
}

std::size_t TreeModel::leaf_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

nlohmann::json TreeModel::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_) {
    if (n.feature < 0) {
      nodes.push_back({{"leaf", n.class_counts}});
    } else {
      nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right}});
    }
  }
  return {{"kind", kind()}, {"num_classes", num_classes_}, {"nodes", nodes}};
}

}  // namespace zsbench
