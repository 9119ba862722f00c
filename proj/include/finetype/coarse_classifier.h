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

#ifndef FINETYPE_COARSE_CLASSIFIER_H_
#define FINETYPE_COARSE_CLASSIFIER_H_

#include <vector>

#include "finetype/features.h"
#include "finetype/models.h"
#include "finetype/pruning.h"

namespace finetype {

// Four-way softmax over person, location, organization, other (in that
// order). Carries its own frozen feature dictionary.
struct CoarseModel {
  FeatureDictionary dictionary;
  SoftmaxModel softmax;
};

struct CoarseInstance {
  SparseFeatureVector x;
  int label = 0;  // index into kCoarseTypes
};

// Throws Error if some class has no instance, or on a non-finite loss.
// Consumes `dictionary` (it is frozen and moved into the model).
CoarseModel TrainCoarse(const std::vector<CoarseInstance> &instances,
                        FeatureDictionary dictionary, double l2 = 1.0,
                        const OptimizerOptions &options = {});

// Distribution over the four classes; sums to 1.
CoarseDistribution PredictCoarse(const CoarseModel &model,
                                 const SparseFeatureVector &x);

// Index of the coarse class for a depth-1 label path, or -1.
int CoarseIndex(std::string_view root_path);

}  // namespace finetype

#endif  // FINETYPE_COARSE_CLASSIFIER_H_
