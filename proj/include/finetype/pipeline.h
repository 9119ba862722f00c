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

#ifndef FINETYPE_PIPELINE_H_
#define FINETYPE_PIPELINE_H_

#include <map>
#include <string>
#include <vector>

#include "finetype/coarse_classifier.h"
#include "finetype/corpus.h"
#include "finetype/evaluation.h"
#include "finetype/features.h"
#include "finetype/inference.h"
#include "finetype/model_io.h"
#include "finetype/models.h"
#include "finetype/pruning.h"
#include "finetype/taxonomy.h"
#include "finetype/topic_model.h"

namespace finetype {

struct FeatureResources {
  ClusterMap clusters;
  const TopicModel *topic_model = nullptr;
  FeatureOptions options;
};

// "document:mention", the id used in prediction files and reports.
std::string QualifiedId(const Document &doc, const Mention &mention);

std::vector<std::string> MentionFeatures(const Mention &mention,
                                         const Document &doc,
                                         const FeatureResources &resources);

std::vector<Document> FilterSplit(const std::vector<Document> &docs,
                                  Split split);

struct PrunedCorpus {
  std::vector<Document> documents;  // gold_labels hold the pruned labels
  PruningStats stats;
};

// Maps every mention's raw types through `mapping`, prunes the result
// document by document and keeps the mentions whose label set survives.
// `coarse` is required when coarse pruning is enabled.
PrunedCorpus PruneCorpus(const std::vector<Document> &docs,
                         const TypeMapping &mapping, const Taxonomy &tax,
                         const PruningConfig &config,
                         const CoarseModel *coarse,
                         const FeatureResources &resources);

// Removal statistics laid out as one table row per heuristic.
std::string FormatPruningStats(const PruningStats &stats);

// Coarse training data: mentions whose gold labels have a single root.
CoarseModel TrainCoarseFromCorpus(const std::vector<Document> &docs,
                                  const Taxonomy &tax,
                                  const FeatureResources &resources,
                                  const TrainOptions &options = {});

struct TaggerConfig {
  ModelKind kind = ModelKind::kLocal;  // kLocal or kFlat
  NegativeStrategy negatives = NegativeStrategy::kDepth;
  TrainOptions train;
};

// Trains on the mentions that carry gold labels. The topic model in
// `resources`, if any, is stored in the returned file.
ModelFile TrainTagger(const std::vector<Document> &docs, const Taxonomy &tax,
                      const FeatureResources &resources,
                      const TaggerConfig &config);

// Per-label probabilities for every mention, keyed like QualifiedId.
struct ScoredMention {
  std::string id;
  MentionKind kind = MentionKind::kNamed;
  std::vector<double> probabilities;
};

std::vector<ScoredMention> ScoreCorpus(const ModelFile &model,
                                       const std::vector<Document> &docs,
                                       const FeatureResources &resources);

std::vector<PredictedMention> InferAll(const std::vector<ScoredMention> &scored,
                                       const Taxonomy &tax,
                                       InferenceStrategy strategy,
                                       double threshold);

// Mentions with gold labels, in corpus order.
std::vector<GoldMention> GoldMentions(const std::vector<Document> &docs);

// Predictions reordered to match `gold`; throws if one is missing.
std::vector<PredictedMention> AlignPredictions(
    const std::vector<PredictedMention> &preds,
    const std::vector<GoldMention> &gold);

// One JSON object per line: {"id", "labels", "refined"}.
void WritePredictions(std::ostream &out,
                      const std::vector<PredictedMention> &preds,
                      const Taxonomy &tax);
std::vector<PredictedMention> ReadPredictions(std::istream &in,
                                              const Taxonomy &tax);

}  // namespace finetype

#endif  // FINETYPE_PIPELINE_H_
