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

#ifndef FINETYPE_MODEL_IO_H_
#define FINETYPE_MODEL_IO_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finetype/coarse_classifier.h"
#include "finetype/features.h"
#include "finetype/models.h"
#include "finetype/taxonomy.h"
#include "finetype/topic_model.h"

namespace finetype {

inline constexpr int kModelFormatVersion = 1;

enum class ModelKind { kLocal, kFlat, kCoarse };

std::string_view ModelKindName(ModelKind kind);
ModelKind ParseModelKind(std::string_view name);

// Everything a trained tagger needs at prediction time. The byte layout is
// documented in docs/model-format.md.
struct ModelFile {
  ModelKind kind = ModelKind::kLocal;
  uint64_t taxonomy_fingerprint = 0;
  std::map<std::string, std::string> metadata;
  FeatureDictionary dictionary;
  std::vector<std::string> classes;  // label paths, or coarse class names
  LocalModelSet local;               // kLocal
  SoftmaxModel softmax;              // kFlat and kCoarse
  std::optional<TopicModel> topic_model;
};

void WriteModel(std::ostream &out, const ModelFile &model);
void WriteModelFile(const std::string &filename, const ModelFile &model);

// Throws Error on a malformed file, an unsupported version, or (when `tax`
// is given and the model is not coarse) a taxonomy fingerprint mismatch.
ModelFile ReadModel(std::istream &in, const Taxonomy *tax);
ModelFile ReadModelFile(const std::string &filename, const Taxonomy *tax);

// Fingerprint recorded in coarse model files.
uint64_t CoarseFingerprint();

ModelFile FromCoarse(const CoarseModel &model);
CoarseModel ToCoarse(ModelFile model);

// Per-label probabilities of a local or flat model file.
std::vector<double> PredictLabelProbabilities(const ModelFile &model,
                                              const SparseFeatureVector &x);

}  // namespace finetype

#endif  // FINETYPE_MODEL_IO_H_
