#include <algorithm>

#include "zsbench/baselines.hpp"
#include "zsbench/errors.hpp"

namespace zsbench {

LabelId argmax_first(std::span<const double> scores) {
  LabelId best = 0;
  for (LabelId i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

void TrainingSet::validate() const {
  if (features.size() != labels.size()) {
    throw TrainingError("training set has " + std::to_string(features.size()) + " vectors but " +
                        std::to_string(labels.size()) + " labels");
  }
  if (features.empty()) throw TrainingError("empty training set");
  if (num_classes < 2) throw TrainingError("training needs at least 2 classes");
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (labels[i] >= num_classes) throw TrainingError("label out of range at sample " + std::to_string(i));
    if (features[i].dimension() != dimension) {
      throw TrainingError("sample " + std::to_string(i) + " has dimension " +
                          std::to_string(features[i].dimension()) + ", expected " +
                          std::to_string(dimension));
    }
  }
}

ScoredPrediction predict_scores(const Classifier& model, const FeatureVector& x,
                                std::uint64_t doc_id) {
  if (x.dimension() != model.dimension()) {
    throw TrainingError("dimension mismatch: model expects " + std::to_string(model.dimension()) +
                        ", got " + std::to_string(x.dimension()));
  }
  ScoredPrediction p;
  p.doc_id = doc_id;
  p.scores.assign(model.num_classes(), 0.0);
  model.predict_proba(x, p.scores);
  p.label = argmax_first(p.scores);
  return p;
}

}  // namespace zsbench
