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

#ifndef FINETYPE_INFERENCE_H_
#define FINETYPE_INFERENCE_H_

#include <span>
#include <string_view>
#include <vector>

#include "finetype/taxonomy.h"

namespace finetype {

enum class InferenceStrategy { kIndependent, kConditional, kMarginal };

std::string_view InferenceStrategyName(InferenceStrategy strategy);
InferenceStrategy ParseInferenceStrategy(std::string_view name);

struct Prediction {
  LabelSet assigned;
  std::vector<double> refined;  // indexed by LabelId
};

// Labels whose refined probability is strictly above `threshold`.
LabelSet AssignAbove(std::span<const double> refined, double threshold);

// Thresholds the raw probabilities; the result need not be a path.
Prediction InferIndependent(std::span<const double> probs, double threshold);

// refined(t) = product of p over t and its ancestors.
Prediction InferConditional(std::span<const double> probs, const Taxonomy &tax,
                            double threshold);

struct MarginalOptions {
  // Also score the root-only configuration (no labels at all).
  bool include_empty = false;
  // Score a configuration by the product of its active label probabilities
  // only, instead of the Bernoulli product over all labels.
  bool active_only = false;
};

// Scores every root-to-node configuration c by
//   prod_{t in c} p(t) * prod_{t not in c} (1 - p(t)),
// normalizes, and sets refined(t) to the total mass of the configurations
// containing t. Throws Error("all configurations impossible") if every
// configuration has zero probability.
Prediction InferMarginal(std::span<const double> probs, const Taxonomy &tax,
                         double threshold, const MarginalOptions &options = {});

Prediction Infer(InferenceStrategy strategy, std::span<const double> probs,
                 const Taxonomy &tax, double threshold);

}  // namespace finetype

#endif  // FINETYPE_INFERENCE_H_
