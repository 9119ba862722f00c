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

#include "finetype/coarse_classifier.h"

#include "finetype/error.h"

namespace finetype {

int CoarseIndex(std::string_view root_path) {
  for (size_t i = 0; i < kCoarseTypes.size(); ++i) {
    if (kCoarseTypes[i] == root_path) return static_cast<int>(i);
  }
  return -1;
}

CoarseModel TrainCoarse(const std::vector<CoarseInstance> &instances,
                        FeatureDictionary dictionary, double l2,
                        const OptimizerOptions &options) {
  std::array<int, 4> counts{};
  std::vector<const SparseFeatureVector *> xs;
  std::vector<int> ys;
  for (const CoarseInstance &inst : instances) {
    if (inst.label < 0 || inst.label >= 4) {
      throw Error("coarse label out of range");
    }
    ++counts[inst.label];
    xs.push_back(&inst.x);
    ys.push_back(inst.label);
  }
  for (int k = 0; k < 4; ++k) {
    if (counts[k] == 0) {
      throw Error("coarse training data has no instance of class '" +
                  std::string(kCoarseTypes[k]) + "'");
    }
  }
  CoarseModel model;
  dictionary.Freeze();
  const int num_features = dictionary.size();
  model.dictionary = std::move(dictionary);
  model.softmax = TrainSoftmax(xs, ys, num_features, 4, l2, options);
  return model;
}

CoarseDistribution PredictCoarse(const CoarseModel &model,
                                 const SparseFeatureVector &x) {
  std::vector<double> p = model.softmax.Probabilities(x);
  if (p.size() != 4) throw Error("coarse model must have four classes");
  return {p[0], p[1], p[2], p[3]};
}

}  // namespace finetype
