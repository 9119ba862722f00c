// Copyright 2026 The Finetype Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FINETYPE_MODELS_H_
#define FINETYPE_MODELS_H_

#include <string_view>
#include <vector>

#include "finetype/features.h"
#include "finetype/optimizer.h"
#include "finetype/taxonomy.h"

namespace finetype {

// Which instances serve as negatives for a label's binary classifier.
enum class NegativeStrategy {
  kAll,      // every instance that is not positive
  kSibling,  // non-positives carrying a sibling of the label (or below one)
  kDepth,    // non-positives carrying another label at the label's depth
};

std::string_view NegativeStrategyName(NegativeStrategy strategy);
NegativeStrategy ParseNegativeStrategy(std::string_view name);

struct TrainingInstance {
  SparseFeatureVector x;
  LabelSet labels;  // ancestor-closed
};

// Bias given to labels that cannot be trained; sigmoid(-20) ~ 2e-9.
inline constexpr double kDegenerateBias = -20.0;

struct BinaryModel {
  std::vector<double> weights;  // one per dictionary feature
  double bias = 0;

  double Score(const SparseFeatureVector &x) const;
  double Probability(const SparseFeatureVector &x) const;
};

struct SoftmaxModel {
  int num_features = 0;
  int num_classes = 0;
  std::vector<double> weights;  // row-major by class
  std::vector<double> biases;

  std::vector<double> Probabilities(const SparseFeatureVector &x) const;
};

struct TrainOptions {
  double l2 = 1.0;
  OptimizerOptions optimizer;
  int threads = 1;  // local models train in parallel across labels
};

// Indices of instances whose label set contains `label`.
std::vector<int> PositivesFor(LabelId label,
                              const std::vector<TrainingInstance> &instances);
// Indices of non-positive instances selected by `strategy`.
std::vector<int> NegativesFor(LabelId label, NegativeStrategy strategy,
                              const std::vector<TrainingInstance> &instances,
                              const Taxonomy &tax);

// Minimizes the L2-regularized logistic loss from zero initialization.
// Throws Error("degenerate label") when either side is empty.
BinaryModel TrainBinaryLogistic(
    const std::vector<const SparseFeatureVector *> &positives,
    const std::vector<const SparseFeatureVector *> &negatives,
    int num_features, double l2, const OptimizerOptions &options = {});

// Softmax regression over `num_classes` classes from zero initialization.
// Classes without examples are left out of the optimization and receive a
// bias kDegenerateBias below the smallest trained bias.
SoftmaxModel TrainSoftmax(const std::vector<const SparseFeatureVector *> &xs,
                          const std::vector<int> &labels, int num_features,
                          int num_classes, double l2,
                          const OptimizerOptions &options = {});

struct LocalModelSet {
  NegativeStrategy strategy = NegativeStrategy::kDepth;
  double l2 = 1.0;
  int num_features = 0;
  std::vector<BinaryModel> models;  // indexed by LabelId
  // Labels without positives; their model predicts ~0.
  std::vector<LabelId> degenerate;
  // Labels whose strategy produced no negatives; trained against all
  // non-positives instead (or given a constant ~1 model if there are none).
  std::vector<LabelId> fallback;
};

LocalModelSet TrainLocal(const std::vector<TrainingInstance> &instances,
                         const Taxonomy &tax, NegativeStrategy strategy,
                         int num_features, const TrainOptions &options = {});

struct SingleLabelInstance {
  const SparseFeatureVector *x = nullptr;
  LabelId label = kNoLabel;
};

// One single-label instance per (instance, label) pair.
std::vector<SingleLabelInstance> ExpandMultilabel(
    const std::vector<TrainingInstance> &instances);

struct FlatModel {
  double l2 = 1.0;
  SoftmaxModel softmax;  // one class per LabelId
  std::vector<LabelId> absent;  // labels with no training example
};

FlatModel TrainFlat(const std::vector<TrainingInstance> &instances,
                    const Taxonomy &tax, int num_features,
                    const TrainOptions &options = {});

// Per-label probabilities indexed by LabelId: independent sigmoids for the
// local models, a softmax over all labels for the flat model.
std::vector<double> PredictProbabilities(const LocalModelSet &model,
                                         const SparseFeatureVector &x);
std::vector<double> PredictProbabilities(const FlatModel &model,
                                         const SparseFeatureVector &x);

}  // namespace finetype

#endif  // FINETYPE_MODELS_H_
