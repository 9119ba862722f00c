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

#include "finetype/pruning.h"

#include <map>

#include "finetype/error.h"

namespace finetype {

namespace {

long TotalSize(const std::vector<LabelSet> &sets) {
  long total = 0;
  for (const LabelSet &s : sets) total += static_cast<long>(s.size());
  return total;
}

}  // namespace

int CoarseArgmax(const CoarseDistribution &dist) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(dist.size()); ++i) {
    if (dist[i] > dist[best]) best = i;
  }
  return best;
}

void PruningConfig::Validate() const {
  if (min_count < 1) {
    throw Error("min_count must be at least 1, got " +
                std::to_string(min_count));
  }
}

LabelSet PruneSibling(const LabelSet &labels, const Taxonomy &tax) {
  LabelSet current = labels;
  while (true) {
    std::map<LabelId, int> present_children;
    for (LabelId id : current) {
      LabelId parent = tax.parent(id);
      if (parent != kNoLabel) ++present_children[parent];
    }
    LabelSet doomed;
    for (LabelId id : current) {
      LabelId parent = tax.parent(id);
      if (parent == kNoLabel || present_children[parent] < 2) continue;
      for (LabelId d : tax.Subtree(id)) doomed.insert(d);
    }
    if (doomed.empty()) return current;
    for (LabelId d : doomed) current.erase(d);
  }
}

LabelSet PruneCoarse(const LabelSet &labels, const CoarseDistribution &coarse,
                     const Taxonomy &tax) {
  const std::string_view winner = kCoarseTypes[CoarseArgmax(coarse)];
  LabelSet out;
  for (LabelId id : labels) {
    if (tax.path(tax.root_of(id)) == winner) out.insert(id);
  }
  return out;
}

std::vector<LabelSet> PruneMinCount(const std::vector<LabelSet> &doc_labels,
                                    int k, const Taxonomy &tax) {
  if (k < 1) throw Error("min_count must be at least 1");
  std::map<LabelId, int> support;
  for (const LabelSet &s : doc_labels) {
    for (LabelId id : s) ++support[id];
  }
  std::vector<LabelSet> out;
  out.reserve(doc_labels.size());
  for (const LabelSet &s : doc_labels) {
    LabelSet kept;
    for (LabelId id : s) {
      bool keep = support[id] >= k;
      // Closure repair: a label survives only if its ancestors do.
      for (LabelId a = tax.parent(id); keep && a != kNoLabel;
           a = tax.parent(a)) {
        if (s.count(a) && support[a] < k) keep = false;
      }
      if (keep) kept.insert(id);
    }
    out.push_back(std::move(kept));
  }
  return out;
}

PruningStats &PruningStats::operator+=(const PruningStats &other) {
  mentions += other.mentions;
  instances_before += other.instances_before;
  instances_after += other.instances_after;
  labels_before += other.labels_before;
  removed_sibling += other.removed_sibling;
  removed_coarse += other.removed_coarse;
  removed_min_count += other.removed_min_count;
  labels_after += other.labels_after;
  return *this;
}

PruningResult ApplyPruning(const std::vector<LabelSet> &mapped,
                           const PruningConfig &config, const Taxonomy &tax,
                           std::span<const CoarseDistribution> coarse) {
  config.Validate();
  if (config.enable_coarse && coarse.size() != mapped.size()) {
    throw Error("coarse pruning needs one coarse distribution per mention");
  }
  PruningResult result;
  PruningStats &stats = result.stats;
  stats.mentions = static_cast<long>(mapped.size());
  for (const LabelSet &s : mapped) {
    if (!s.empty()) ++stats.instances_before;
  }
  stats.labels_before = TotalSize(mapped);

  std::vector<LabelSet> sets = mapped;
  if (config.enable_sibling) {
    for (LabelSet &s : sets) s = PruneSibling(s, tax);
    stats.removed_sibling = stats.labels_before - TotalSize(sets);
  }
  if (config.enable_coarse) {
    const long before = TotalSize(sets);
    for (size_t i = 0; i < sets.size(); ++i) {
      sets[i] = PruneCoarse(sets[i], coarse[i], tax);
    }
    stats.removed_coarse = before - TotalSize(sets);
  }
  if (config.enable_min_count) {
    const long before = TotalSize(sets);
    sets = PruneMinCount(sets, config.min_count, tax);
    stats.removed_min_count = before - TotalSize(sets);
  }
  stats.labels_after = TotalSize(sets);
  for (const LabelSet &s : sets) {
    if (!s.empty()) ++stats.instances_after;
  }
  result.labels = std::move(sets);
  return result;
}

}  // namespace finetype
