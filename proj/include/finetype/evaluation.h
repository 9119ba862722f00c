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

#ifndef FINETYPE_EVALUATION_H_
#define FINETYPE_EVALUATION_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "finetype/corpus.h"
#include "finetype/taxonomy.h"

namespace finetype {

struct GoldMention {
  std::string id;
  MentionKind kind = MentionKind::kNamed;
  LabelSet labels;  // closed under ancestors before scoring
};

struct PredictedMention {
  std::string id;
  LabelSet labels;
  std::vector<double> refined;  // indexed by LabelId; may be empty
};

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// Micro-averaged (mention, label) pair counts.
struct PrfCounts {
  long predicted = 0;
  long gold = 0;
  long correct = 0;

  PrfCounts &operator+=(const PrfCounts &other);
  // Empty denominators give 0 and append a warning when `warnings` is set.
  Prf Score(std::vector<std::string> *warnings = nullptr,
            const std::string &scope = "overall") const;
};

// Mention kinds that are scored; pronominal mentions are excluded by default.
using KindFilter = std::set<MentionKind>;
KindFilter DefaultKinds();

struct EvalReport {
  Prf overall;
  PrfCounts counts;
  std::map<int, Prf> per_level;
  std::map<int, PrfCounts> level_counts;
  std::optional<double> auc;
  long mentions_evaluated = 0;
  std::vector<std::string> warnings;
};

// Micro precision/recall/F1 over all labels and per depth. `preds` and `gold`
// are parallel; a differing mention id at any position throws Error.
EvalReport MicroPrf(const std::vector<PredictedMention> &preds,
                    const std::vector<GoldMention> &gold, const Taxonomy &tax,
                    const KindFilter &kinds = DefaultKinds());

// Micro metrics restricted to labels of exactly `depth` on both sides.
Prf PerLevelPrf(const std::vector<PredictedMention> &preds,
                const std::vector<GoldMention> &gold, const Taxonomy &tax,
                int depth, const KindFilter &kinds = DefaultKinds(),
                std::vector<std::string> *warnings = nullptr);

struct CurvePoint {
  double threshold = 0;  // pairs scored >= threshold are predicted
  double precision = 0;
  double recall = 0;
};

struct PrCurve {
  double auc = 0;
  std::vector<CurvePoint> points;  // recall non-decreasing
};

// Sweeps every distinct refined probability from high to low, scoring all
// (mention, label) pairs at or above it. The area is integrated with the
// trapezoid rule over recall, starting at recall 0 with the first point's
// precision and ending at the last achieved recall. Throws Error if there
// are no gold labels.
PrCurve PrCurveAuc(const std::vector<PredictedMention> &preds,
                   const std::vector<GoldMention> &gold, const Taxonomy &tax,
                   const KindFilter &kinds = DefaultKinds());

struct ThresholdChoice {
  double threshold = 0;
  double f1 = 0;
  std::vector<std::string> warnings;
};

// Grid search over {0, step, 2 step, ..., 1} for the threshold with the best
// micro F1 when assigning {t : refined(t) > threshold}; ties go to the
// smallest threshold.
ThresholdChoice TuneThreshold(const std::vector<PredictedMention> &preds,
                              const std::vector<GoldMention> &gold,
                              const Taxonomy &tax, double step = 0.01,
                              const KindFilter &kinds = DefaultKinds());

// Precision / Recall / F1 / AUC table in percent with two decimals.
std::string FormatReport(const EvalReport &report, bool per_level,
                         bool with_auc);

}  // namespace finetype

#endif  // FINETYPE_EVALUATION_H_
