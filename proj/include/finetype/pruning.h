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

#ifndef FINETYPE_PRUNING_H_
#define FINETYPE_PRUNING_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finetype/taxonomy.h"

namespace finetype {

// The four coarse classes in their fixed order. Index i of a
// CoarseDistribution is the probability of kCoarseTypes[i].
inline constexpr std::array<std::string_view, 4> kCoarseTypes = {
    "person", "location", "organization", "other"};
using CoarseDistribution = std::array<double, 4>;

// Index of the most probable class; ties go to the earlier class.
int CoarseArgmax(const CoarseDistribution &dist);

struct PruningConfig {
  bool enable_sibling = false;
  bool enable_coarse = false;
  bool enable_min_count = false;
  int min_count = 2;

  // Throws Error when min_count < 1.
  void Validate() const;
};

// Removes conflicting siblings. Whenever a label has two or more children
// in the set, those children and everything below them are dropped, leaving
// the parent. Depth-1 labels are never pruned against each other. Applied
// until no conflict remains.
LabelSet PruneSibling(const LabelSet &labels, const Taxonomy &tax);

// Keeps only the labels under the argmax coarse type.
LabelSet PruneCoarse(const LabelSet &labels, const CoarseDistribution &coarse,
                     const Taxonomy &tax);

// Drops labels that occur in fewer than `k` of the document's mention label
// sets, along with their descendants.
std::vector<LabelSet> PruneMinCount(const std::vector<LabelSet> &doc_labels,
                                    int k, const Taxonomy &tax);

struct PruningStats {
  long mentions = 0;
  long instances_before = 0;  // mentions with a non-empty mapped set
  long instances_after = 0;   // mentions with a non-empty pruned set
  long labels_before = 0;
  long removed_sibling = 0;
  long removed_coarse = 0;
  long removed_min_count = 0;
  long labels_after = 0;

  PruningStats &operator+=(const PruningStats &other);
};

struct PruningResult {
  std::vector<LabelSet> labels;
  PruningStats stats;
};

// Runs the enabled heuristics over one document's mapped label sets in the
// fixed order Sibling, Coarse, Min-count. `coarse` holds one distribution
// per mention and may be empty when coarse pruning is disabled.
PruningResult ApplyPruning(const std::vector<LabelSet> &mapped,
                           const PruningConfig &config, const Taxonomy &tax,
                           std::span<const CoarseDistribution> coarse);

}  // namespace finetype

#endif  // FINETYPE_PRUNING_H_
