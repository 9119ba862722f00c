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

#ifndef FINETYPE_AGREEMENT_H_
#define FINETYPE_AGREEMENT_H_

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finetype/evaluation.h"
#include "finetype/taxonomy.h"

namespace finetype {

struct AnnotationRecord {
  std::string annotator;
  std::string document;
  std::string mention;
  LabelSet labels;  // ancestor-closed
  long long timestamp_ms = 0;
};

// Line-delimited JSON: {"annotator","document","mention","labels":[...],
// "timestamp"}. Labels are closed under ancestors on parse.
AnnotationRecord ParseAnnotation(std::string_view record, const Taxonomy &tax);
std::string AnnotationToRecord(const AnnotationRecord &record,
                               const Taxonomy &tax);

using MentionKey = std::pair<std::string, std::string>;  // document, mention

// Latest record per (annotator, mention), grouped by mention. Later records
// in `records` replace earlier ones.
std::map<MentionKey, std::vector<AnnotationRecord>> LatestByMention(
    const std::vector<AnnotationRecord> &records);

// Labels applied (after closure) by at least `min_support` distinct
// annotators of one mention. Throws Error if min_support < 1.
LabelSet Consensus(const std::vector<AnnotationRecord> &records,
                   int min_support, const Taxonomy &tax);

std::map<MentionKey, LabelSet> ConsensusByMention(
    const std::vector<AnnotationRecord> &records, int min_support,
    const Taxonomy &tax);

// 1 - (consensus labels / distinct labels applied), summed over mentions.
double PrunedFraction(const std::vector<AnnotationRecord> &records,
                      const std::map<MentionKey, LabelSet> &consensus,
                      const Taxonomy &tax);

struct AnnotatorScore {
  std::string annotator;
  PrfCounts counts;
  Prf prf;
};

struct AgreementAtDepth {
  int depth = 0;
  std::vector<AnnotatorScore> annotators;  // sorted by annotator id
  // Uniform mean over annotators; an annotator whose precision (recall) is
  // undefined at this depth is left out of that mean.
  Prf average;
};

// Each annotator's labels of exactly `depth` scored against the consensus
// of the mentions they annotated.
AgreementAtDepth AnnotatorAgreement(
    const std::vector<AnnotationRecord> &records,
    const std::map<MentionKey, LabelSet> &consensus, int depth,
    const Taxonomy &tax);

enum class Disagreement { kSpecificity, kType };

std::string_view DisagreementName(Disagreement kind);

// kSpecificity when one label is a proper ancestor of the other, kType
// otherwise. Throws Error("not a disagreement") when a == b.
Disagreement ClassifyDisagreement(LabelId a, LabelId b, const Taxonomy &tax);

struct DisagreementEntry {
  LabelId first = kNoLabel;  // first < second
  LabelId second = kNoLabel;
  Disagreement kind = Disagreement::kType;
  long count = 0;
};

// For every mention, each annotator's labels are restricted to the
// consensus and reduced to their most specific members. For every pair of
// annotators, each label held by one but not the other is paired with each
// label held by the other but not the first. A label pair counts at most
// once per mention. Sorted by kind (specificity first), then count
// descending, then label ids.
std::vector<DisagreementEntry> DisagreementTable(
    const std::vector<AnnotationRecord> &records,
    const std::map<MentionKey, LabelSet> &consensus, const Taxonomy &tax);

std::string FormatAgreementTable(const std::vector<AgreementAtDepth> &rows);
std::string FormatDisagreementTable(
    const std::vector<DisagreementEntry> &entries, const Taxonomy &tax,
    int top_n = 5);

}  // namespace finetype

#endif  // FINETYPE_AGREEMENT_H_
