#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "zsbench/dataset.hpp"
#include "zsbench/features.hpp"

namespace zsbench {

/// Per-label probabilities for one document plus the argmax label.
struct ScoredPrediction {
  std::uint64_t doc_id = 0;
  std::vector<double> scores;
  LabelId label = 0;
  /// False when the label is a fallback for an unusable predictor output.
  bool valid = true;
};

/// First index of the maximum; ties resolve to schema order.
LabelId argmax_first(std::span<const double> scores);

/// Labeled training data. Both spans must outlive any training call.
struct TrainingSet {
  std::span<const FeatureVector> features;
  std::span<const LabelId> labels;
  std::size_t num_classes = 0;
  std::size_t dimension = 0;

  std::size_t size() const noexcept { return features.size(); }
  /// Throws TrainingError on shape problems (sizes, label range, dimension).
  void validate() const;
};

/// Uniform prediction interface over every baseline model. Trained models are
/// immutable and safe for concurrent prediction.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::string_view kind() const noexcept = 0;
  virtual std::size_t num_classes() const noexcept = 0;
  virtual std::size_t dimension() const noexcept = 0;
  virtual nlohmann::json to_json() const = 0;

  /// Writes a probability distribution over classes into `out`.
  virtual void predict_proba(const FeatureVector& x, std::span<double> out) const = 0;
};

/// Throws TrainingError when the feature dimension does not match the model.
ScoredPrediction predict_scores(const Classifier& model, const FeatureVector& x,
                                std::uint64_t doc_id = 0);

// Multinomial naive Bayes ---------------------------------------------------

class MnbModel final : public Classifier {
 public:
  std::string_view kind() const noexcept override { return "mnb"; }
  std::size_t num_classes() const noexcept override { return log_prior_.size(); }
  std::size_t dimension() const noexcept override { return dimension_; }
  nlohmann::json to_json() const override;
  void predict_proba(const FeatureVector& x, std::span<double> out) const override;

  double alpha() const noexcept { return alpha_; }
  const std::vector<double>& log_prior() const noexcept { return log_prior_; }
  /// log P(term | class), row-major K x V.
  double log_likelihood(std::size_t label, std::size_t term) const {
    return log_likelihood_[label * dimension_ + term];
  }

 private:
  friend MnbModel train_mnb(const TrainingSet&, double);
  double alpha_ = 1.0;
  std::size_t dimension_ = 0;
  std::vector<double> log_prior_;
  std::vector<double> log_likelihood_;
};

/// prior(c) = n_c / N; P(t|c) = (sum of t's weight in c + alpha) / (total weight in c + alpha V).
MnbModel train_mnb(const TrainingSet& data, double alpha = 1.0);

// Softmax (multinomial logistic) regression -----------------------------------

/// W is K x V row-major, bias has K entries.
struct LinearModelParams {
  std::size_t num_classes = 0;
  std::size_t dimension = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  static LinearModelParams zeros(std::size_t k, std::size_t v);
  double& w(std::size_t c, std::size_t t) { return weights[c * dimension + t]; }
  double w(std::size_t c, std::size_t t) const { return weights[c * dimension + t]; }
};

struct LogRegHyper {
  double learning_rate = 0.1;
  double l2_lambda = 1e-4;
  std::size_t epochs = 200;
  /// 0 means full-batch gradient descent; otherwise shuffled minibatches.
  std::size_t batch_size = 0;
  std::uint64_t seed = 0;
};

/// Mean cross-entropy plus (l2_lambda / 2) * ||W||^2 (bias unregularized).
double logreg_loss(const LinearModelParams& params, const TrainingSet& data, double l2_lambda);
/// Analytic gradient of logreg_loss, same shape as `params`.
LinearModelParams logreg_gradient(const LinearModelParams& params, const TrainingSet& data,
                                  double l2_lambda);

class LogRegModel final : public Classifier {
 public:
  explicit LogRegModel(LinearModelParams params, std::vector<double> loss_history = {})
      : params_(std::move(params)), loss_history_(std::move(loss_history)) {}

  std::string_view kind() const noexcept override { return "logreg"; }
  std::size_t num_classes() const noexcept override { return params_.num_classes; }
  std::size_t dimension() const noexcept override { return params_.dimension; }
  nlohmann::json to_json() const override;
  void predict_proba(const FeatureVector& x, std::span<double> out) const override;

  const LinearModelParams& params() const noexcept { return params_; }
  /// Training loss before each epoch's update, then the final loss.
  const std::vector<double>& loss_history() const noexcept { return loss_history_; }

 private:
  LinearModelParams params_;
  std::vector<double> loss_history_;
};

/// Throws TrainingError naming the epoch if the loss becomes non-finite.
LogRegModel train_logreg(const TrainingSet& data, const LogRegHyper& hyper = {});

// k-nearest neighbours ----------------------------------------------------------

class KnnModel final : public Classifier {
 public:
  std::string_view kind() const noexcept override { return "knn"; }
  std::size_t num_classes() const noexcept override { return num_classes_; }
  std::size_t dimension() const noexcept override { return dimension_; }
  nlohmann::json to_json() const override;
  /// Vote fractions among the k most cosine-similar training vectors
  /// (similarity ties broken by training order).
  void predict_proba(const FeatureVector& x, std::span<double> out) const override;

  std::size_t k() const noexcept { return k_; }

 private:
  friend KnnModel train_knn(const TrainingSet&, std::size_t);
  std::size_t k_ = 5;
  std::size_t num_classes_ = 0;
  std::size_t dimension_ = 0;
  std::vector<FeatureVector> vectors_;
  std::vector<double> norms_;
  std::vector<LabelId> labels_;
};

/// k must be odd, positive and at most the training size.
KnnModel train_knn(const TrainingSet& data, std::size_t k = 5);

// Decision tree / random forest ------------------------------------------------

struct TreeParams {
  std::size_t max_depth = 32;
  std::size_t min_leaf = 1;
};

/// Binary CART tree over sparse features: x[feature] <= threshold goes left.
class TreeModel final : public Classifier {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    /// Training samples per class that reached this node.
    std::vector<double> class_counts;
  };

  std::string_view kind() const noexcept override { return "dt"; }
  std::size_t num_classes() const noexcept override { return num_classes_; }
  std::size_t dimension() const noexcept override { return dimension_; }
  nlohmann::json to_json() const override;
  void predict_proba(const FeatureVector& x, std::span<double> out) const override;

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t depth() const noexcept;
  std::size_t leaf_count() const noexcept;

 private:
  friend class TreeBuilder;
  std::size_t num_classes_ = 0;
  std::size_t dimension_ = 0;
  std::vector<Node> nodes_;
};

/// Greedy Gini-impurity growth with midpoint thresholds. Throws on max_depth < 1.
TreeModel train_dt(const TrainingSet& data, const TreeParams& params = {});

enum class FeatureSubsample { sqrt, all };

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t max_depth = 32;
  std::size_t min_leaf = 1;
  FeatureSubsample feature_subsample = FeatureSubsample::sqrt;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  /// Worker threads for tree growth; results do not depend on this.
  std::size_t threads = 1;
};

class ForestModel final : public Classifier {
 public:
  std::string_view kind() const noexcept override { return "rf"; }
  std::size_t num_classes() const noexcept override { return num_classes_; }
  std::size_t dimension() const noexcept override { return dimension_; }
  nlohmann::json to_json() const override;
  /// Mean of the trees' leaf distributions.
  void predict_proba(const FeatureVector& x, std::span<double> out) const override;

  const std::vector<TreeModel>& trees() const noexcept { return trees_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  friend ForestModel train_rf(const TrainingSet&, const ForestParams&);
  std::size_t num_classes_ = 0;
  std::size_t dimension_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<TreeModel> trees_;
};

/// Each tree draws its bootstrap rows and per-split feature subsets from an
/// RNG seeded by (seed, tree index).
ForestModel train_rf(const TrainingSet& data, const ForestParams& params = {});

}  // namespace zsbench
