#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "tree_builder.hpp"
#include "zsbench/errors.hpp"
#include "zsbench/util.hpp"

namespace zsbench {

ForestModel train_rf(const TrainingSet& data, const ForestParams& params) {
  data.validate();
  if (params.n_trees < 1) throw TrainingError("n_trees must be at least 1");
  const TreeParams tree_params{params.max_depth, params.min_leaf};
  std::optional<std::size_t> per_split;
  if (params.feature_subsample == FeatureSubsample::sqrt) {
    per_split = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::sqrt(static_cast<double>(data.dimension))));
  }
  // Validates tree parameters before any thread starts.
  TreeBuilder(data, tree_params, std::nullopt, nullptr);

  ForestModel forest;
  forest.num_classes_ = data.num_classes;
  forest.dimension_ = data.dimension;
  forest.seed_ = params.seed;
  forest.trees_.resize(params.n_trees);

  const auto grow_tree = [&](std::size_t t) {
    std::mt19937_64 rng(splitmix64(params.seed ^ splitmix64(t + 0x5eedULL)));
    std::vector<std::size_t> rows(data.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i] = params.bootstrap ? static_cast<std::size_t>(rng() % data.size()) : i;
    }
    TreeBuilder builder(data, tree_params, per_split, per_split ? &rng : nullptr);
    forest.trees_[t] = builder.build(std::move(rows));
  };

  const std::size_t workers = std::min(std::max<std::size_t>(1, params.threads), params.n_trees);
  if (workers == 1) {
    for (std::size_t t = 0; t < params.n_trees; ++t) grow_tree(t);
    return forest;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t t = next++; t < params.n_trees; t = next++) {
        try {
          grow_tree(t);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return forest;
}

void ForestModel::predict_proba(const FeatureVector& x, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> tree_out(num_classes_);
  for (const auto& tree : trees_) {
    tree.predict_proba(x, tree_out);
    for (std::size_t c = 0; c < num_classes_; ++c) out[c] += tree_out[c];
  }
  for (double& v : out) v /= static_cast<double>(trees_.size());
}

nlohmann::json ForestModel::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  return {{"kind", kind()}, {"seed", seed_}, {"trees", trees}};
}

}  // namespace zsbench
