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

#include "finetype/evaluation.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "finetype/error.h"
#include "finetype/format.h"

namespace finetype {

namespace {

void CheckAligned(const std::vector<PredictedMention> &preds,
                  const std::vector<GoldMention> &gold) {
  if (preds.size() != gold.size()) {
    throw Error("prediction and gold streams differ in length (" +
                std::to_string(preds.size()) + " vs " +
                std::to_string(gold.size()) + ")");
  }
  for (size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].id != gold[i].id) {
      throw Error("mention id mismatch at position " + std::to_string(i) +
                  ": '" + preds[i].id + "' vs '" + gold[i].id + "'");
    }
  }
}

void CheckRefined(const PredictedMention &pred, const Taxonomy &tax) {
  if (static_cast<int>(pred.refined.size()) != tax.size()) {
    throw Error("mention '" + pred.id +
                "' has no refined probability for every label");
  }
}

double F1(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

// Grid points 0, step, ..., 1, computed as i / n when step divides 1.
std::vector<double> ThresholdGrid(double step) {
  if (!(step > 0 && step <= 1)) throw Error("grid step must lie in (0, 1]");
  std::vector<double> grid;
  const long n = std::lround(1.0 / step);
  if (std::abs(n * step - 1.0) < 1e-9) {
    for (long i = 0; i <= n; ++i) grid.push_back(static_cast<double>(i) / n);
  } else {
    for (long i = 0; i * step <= 1.0 + 1e-12; ++i) grid.push_back(i * step);
  }
  return grid;
}

}  // namespace

PrfCounts &PrfCounts::operator+=(const PrfCounts &other) {
  predicted += other.predicted;
  gold += other.gold;
  correct += other.correct;
  return *this;
}

Prf PrfCounts::Score(std::vector<std::string> *warnings,
                     const std::string &scope) const {
  Prf out;
  if (predicted > 0) {
    out.precision = static_cast<double>(correct) / predicted;
  } else if (warnings != nullptr) {
    warnings->push_back(scope + ": no predicted labels, precision set to 0");
  }
  if (gold > 0) {
    out.recall = static_cast<double>(correct) / gold;
  } else if (warnings != nullptr) {
    warnings->push_back(scope + ": no gold labels, recall set to 0");
  }
  out.f1 = F1(out.precision, out.recall);
  return out;
}

KindFilter DefaultKinds() {
  return {MentionKind::kNamed, MentionKind::kNominal};
}

EvalReport MicroPrf(const std::vector<PredictedMention> &preds,
                    const std::vector<GoldMention> &gold, const Taxonomy &tax,
                    const KindFilter &kinds) {
  CheckAligned(preds, gold);
  EvalReport report;
  for (int d = 1; d <= tax.max_depth(); ++d) report.level_counts[d] = {};
  for (size_t i = 0; i < preds.size(); ++i) {
    if (!kinds.count(gold[i].kind)) continue;
    ++report.mentions_evaluated;
    const LabelSet g = tax.Closure(gold[i].labels);
    for (LabelId id : preds[i].labels) {
      PrfCounts &level = report.level_counts[tax.depth(id)];
      ++level.predicted;
      if (g.count(id)) ++level.correct;
    }
    for (LabelId id : g) ++report.level_counts[tax.depth(id)].gold;
  }
  for (const auto &[depth, counts] : report.level_counts) {
    report.counts += counts;
    report.per_level[depth] =
        counts.Score(&report.warnings, "level " + std::to_string(depth));
  }
  report.overall = report.counts.Score(&report.warnings, "overall");
  return report;
}

Prf PerLevelPrf(const std::vector<PredictedMention> &preds,
                const std::vector<GoldMention> &gold, const Taxonomy &tax,
                int depth, const KindFilter &kinds,
                std::vector<std::string> *warnings) {
  if (depth < 1) throw Error("depth must be at least 1");
  CheckAligned(preds, gold);
  PrfCounts counts;
  for (size_t i = 0; i < preds.size(); ++i) {
    if (!kinds.count(gold[i].kind)) continue;
    const LabelSet g = tax.Closure(gold[i].labels);
    for (LabelId id : preds[i].labels) {
      if (tax.depth(id) != depth) continue;
      ++counts.predicted;
      if (g.count(id)) ++counts.correct;
    }
    for (LabelId id : g) {
      if (tax.depth(id) == depth) ++counts.gold;
    }
  }
  return counts.Score(warnings, "level " + std::to_string(depth));
}

PrCurve PrCurveAuc(const std::vector<PredictedMention> &preds,
                   const std::vector<GoldMention> &gold, const Taxonomy &tax,
                   const KindFilter &kinds) {
  CheckAligned(preds, gold);
  std::vector<std::pair<double, bool>> pairs;
  long positives = 0;
  for (size_t i = 0; i < preds.size(); ++i) {
    if (!kinds.count(gold[i].kind)) continue;
    CheckRefined(preds[i], tax);
    const LabelSet g = tax.Closure(gold[i].labels);
    positives += static_cast<long>(g.size());
    for (LabelId id = 0; id < tax.size(); ++id) {
      pairs.emplace_back(preds[i].refined[id], g.count(id) > 0);
    }
  }
  if (positives == 0) throw Error("no positive gold labels for the PR curve");
  std::sort(pairs.begin(), pairs.end(),
            [](const auto &a, const auto &b) { return a.first > b.first; });

  PrCurve curve;
  long tp = 0, fp = 0;
  for (size_t i = 0; i < pairs.size();) {
    const double score = pairs[i].first;
    for (; i < pairs.size() && pairs[i].first == score; ++i) {
      (pairs[i].second ? tp : fp) += 1;
    }
    curve.points.push_back({score, static_cast<double>(tp) / (tp + fp),
                            static_cast<double>(tp) / positives});
  }
  double prev_recall = 0;
  double prev_precision = curve.points.front().precision;
  for (const CurvePoint &pt : curve.points) {
    curve.auc += (pt.recall - prev_recall) * (pt.precision + prev_precision) / 2;
    prev_recall = pt.recall;
    prev_precision = pt.precision;
  }
  return curve;
}

ThresholdChoice TuneThreshold(const std::vector<PredictedMention> &preds,
                              const std::vector<GoldMention> &gold,
                              const Taxonomy &tax, double step,
                              const KindFilter &kinds) {
  CheckAligned(preds, gold);
  if (preds.empty()) throw Error("threshold tuning needs a non-empty dev set");
  std::vector<double> all_scores, gold_scores;
  for (size_t i = 0; i < preds.size(); ++i) {
    if (!kinds.count(gold[i].kind)) continue;
    CheckRefined(preds[i], tax);
    const LabelSet g = tax.Closure(gold[i].labels);
    for (LabelId id = 0; id < tax.size(); ++id) {
      all_scores.push_back(preds[i].refined[id]);
      if (g.count(id)) gold_scores.push_back(preds[i].refined[id]);
    }
  }
  std::sort(all_scores.begin(), all_scores.end());
  std::sort(gold_scores.begin(), gold_scores.end());
  auto above = [](const std::vector<double> &sorted, double theta) {
    return static_cast<long>(
        sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), theta));
  };

  ThresholdChoice best;
  best.f1 = -1;
  for (double theta : ThresholdGrid(step)) {
    PrfCounts counts;
    counts.predicted = above(all_scores, theta);
    counts.correct = above(gold_scores, theta);
    counts.gold = static_cast<long>(gold_scores.size());
    const double f1 = counts.Score().f1;
    if (f1 > best.f1) {
      best.f1 = f1;
      best.threshold = theta;
    }
  }
  if (best.f1 <= 0) {
    best.f1 = 0;
    best.threshold = 0;
    best.warnings.push_back(
        "no threshold produced a correct prediction; using 0.00");
  }
  return best;
}

std::string FormatReport(const EvalReport &report, bool per_level,
                         bool with_auc) {
  std::ostringstream out;
  auto pct = [](double v) { return FormatFixed(100.0 * v, 2); };
  auto row = [&](const std::string &name, const Prf &prf,
                 const std::optional<double> &auc) {
    out << name;
    for (size_t i = name.size(); i < 12; ++i) out << ' ';
    out << '\t' << pct(prf.precision) << '\t' << pct(prf.recall) << '\t'
        << pct(prf.f1);
    if (with_auc) out << '\t' << (auc ? pct(*auc) : std::string("-"));
    out << '\n';
  };
  out << "Scope       \tPrec\tRec\tF1";
  if (with_auc) out << "\tAUC";
  out << '\n';
  row("Overall", report.overall, report.auc);
  if (per_level) {
    for (const auto &[depth, prf] : report.per_level) {
      row("Level " + std::to_string(depth), prf, std::nullopt);
    }
  }
  out << "# mentions=" << report.mentions_evaluated
      << " predicted=" << report.counts.predicted
      << " gold=" << report.counts.gold << " correct=" << report.counts.correct
      << " (micro-averaged over mention/label pairs)\n";
  for (const std::string &w : report.warnings) out << "# warning: " << w << '\n';
  return out.str();
}

}  // namespace finetype
