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

#ifndef FINETYPE_SYNTHETIC_H_
#define FINETYPE_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "finetype/corpus.h"
#include "finetype/features.h"
#include "finetype/taxonomy.h"

namespace finetype {

// Generator for a distantly supervised corpus with known clean labels.
//
// Entities have a primary type and, for a fraction of them, one or two
// more: a sibling, a type under another root, or an unrelated type. Each
// document is about two focus types and uses every entity in one of its
// types. A mention's context cues that type, one of its ancestors, or
// nothing, and its gold labels are the closure of the cued label (the root
// when nothing is cued). Focus types are cued far more often than others.
// Training documents carry only the knowledge-base types of each entity, so
// their labels include types the context does not support. A separate
// corpus with fresh entities and context-derived labels supervises the
// coarse classifier.
struct SyntheticOptions {
  uint64_t seed = 20131;
  int train_documents = 1000;
  int dev_documents = 300;
  int test_documents = 500;
  int coarse_documents = 1200;
  int entities_per_type = 8;
  int coarse_entities_per_type = 40;
  // Share of dev and test entities that never occur in training.
  double unseen_share = 0.5;
  double spurious_rate = 0.4;
  // Chance that an entity with a second type also gets a third.
  double extra_spurious_rate = 0.0;
  // Chance that an entity's knowledge-base types name only the parent of
  // its primary type, as happens with incompletely typed entries.
  double incomplete_rate = 0.6;
  // Share of a document's entities drawn from its focus types.
  double focus_share = 0.7;
  // Chance that a mention's context cues its type (or an ancestor of it),
  // for the types a document is about and for the others.
  double focus_cue_rate = 0.97;
  double cue_rate = 0.15;
  // Chance that an otherwise uninformative context still cues the root.
  double root_cue_rate = 0.7;
  // Chance that a cued context of an entity with two types only cues what
  // the types share.
  double shared_context_rate = 0.9;
  // Chance that a cued named subject is also preceded by a title cue.
  double title_rate = 0.5;
  // Also write context-derived gold labels on training documents, for
  // measuring what noise-free supervision would achieve.
  bool gold_on_train = false;
};

struct SyntheticData {
  std::vector<Document> corpus;         // train, dev and test splits
  std::vector<Document> coarse_corpus;  // clean labels, train split
  std::vector<std::pair<std::string, std::string>> mapping;  // raw -> path
  std::vector<std::pair<std::string, std::string>> clusters;  // word -> id
  int entities = 0;
  int spurious_entities = 0;
};

SyntheticData GenerateSynthetic(const Taxonomy &tax,
                                const SyntheticOptions &options = {});

TypeMapping SyntheticMapping(const SyntheticData &data, const Taxonomy &tax);
ClusterMap SyntheticClusters(const SyntheticData &data);

// Writes corpus.jsonl, coarse.jsonl, mapping.tsv and clusters.tsv into
// `directory`, which must exist.
void WriteSynthetic(const SyntheticData &data, const Taxonomy &tax,
                    const std::string &directory);

}  // namespace finetype

#endif  // FINETYPE_SYNTHETIC_H_
