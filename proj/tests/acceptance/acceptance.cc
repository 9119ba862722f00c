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


// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "finetype/agreement.h"
#include "finetype/evaluation.h"
#include "finetype/features.h"
#include "finetype/inference.h"
#include "finetype/objectives.h"
#include "finetype/pruning.h"
#include "support/experiment.h"
#include "support/fixtures.h"

namespace finetype::testing {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string &what) {
    if (ok) return;
    if (pass) detail.clear();
    if (!detail.empty()) detail += "; ";
    detail += what;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string Sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::vector<double> RandomProbabilities(std::mt19937_64 &rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  for (double &v : p) v = u(rng);
  return p;
}

Outcome MarginalOracle() {
  Outcome o;
  std::mt19937_64 rng(1001);
  const auto start = Clock::now();
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    const Taxonomy tax = RandomTaxonomy(rng, 4, 30);
    for (int s = 0; s < 5; ++s) {
      const auto probs = RandomProbabilities(rng, tax.size());
      const auto expected = EnumerateMarginals(tax, probs);
      const auto got = InferMarginal(probs, tax, 0.5).refined;
      for (LabelId id = 0; id < tax.size(); ++id) {
        worst = std::max(worst, std::abs(got[id] - expected[id]));
      }
    }
  }
  const double elapsed = Seconds(start);
  o.detail = "1000 cases, max abs error " + Sci(worst) + ", " + Fixed(elapsed, 2) + " s";
  o.Require(worst <= 1e-9, "max abs error " + Sci(worst) + " > 1e-9");
  o.Require(elapsed < 5, "took " + Fixed(elapsed, 2) + " s");
  return o;
}

std::vector<const SparseFeatureVector *> Pointers(const std::vector<SparseFeatureVector> &xs) {
  std::vector<const SparseFeatureVector *> out;
  for (const auto &x : xs) out.push_back(&x);
  return out;
}

Outcome GradientChecks() {
  Outcome o;
  std::mt19937_64 rng(2002);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_binary = 0, worst_softmax = 0;
  for (int t = 0; t < 50; ++t) {
    for (bool softmax : {false, true}) {
      const int nf = 1 + static_cast<int>(rng() % 20);
      const int n = 1 + static_cast<int>(rng() % 30);
      const int classes = 2 + static_cast<int>(rng() % 5);
      std::vector<SparseFeatureVector> xs(n);
      std::vector<int> ys;
      for (auto &x : xs) {
        for (int f = 0; f < nf; ++f) {
          if (rng() % 3 == 0) x.indices.push_back(f);
        }
        ys.push_back(softmax ? static_cast<int>(rng() % classes) : (rng() % 2 ? 1 : -1));
      }
      const double l2 = std::uniform_real_distribution<double>(0.05, 3.0)(rng);
      std::function<double(std::span<const double>, std::span<double>)> f;
      int dim;
      if (softmax) {
        SoftmaxObjective obj(Pointers(xs), ys, nf, classes, l2);
        dim = obj.dimension();
        f = obj;
      } else {
        BinaryLogisticObjective obj(Pointers(xs), ys, nf, l2);
        dim = obj.dimension();
        f = obj;
      }
      std::vector<double> x(dim);
      for (double &v : x) v = normal(rng);
      double &worst = softmax ? worst_softmax : worst_binary;
      worst = std::max(worst, GradientError(f, x));
    }
  }
  o.detail = "50+50 problems, worst relative error binary " + Sci(worst_binary) +
             ", softmax " + Sci(worst_softmax);
  o.Require(worst_binary <= 1e-5, "binary logistic error " + Sci(worst_binary));
  o.Require(worst_softmax <= 1e-5, "softmax error " + Sci(worst_softmax));
  return o;
}

Outcome HeuristicFixtures() {
  Outcome o;
  const Taxonomy &tax = EntityTypes();
  o.Require(PruneSibling(Labels(tax, {"person", "person/political-figure",
                                      "person/athlete"}),
                         tax) == Labels(tax, {"person"}),
            "sibling example");
  const PruningFixture f = MakePruningFixture(tax);
  PruningConfig config;
  config.enable_sibling = true;
  o.Require(ApplyPruning(f.mapped, config, tax, f.coarse).labels == f.after_sibling,
            "sibling fixture");
  config.enable_coarse = true;
  o.Require(ApplyPruning(f.mapped, config, tax, f.coarse).labels == f.after_coarse,
            "coarse fixture");
  for (size_t i = 0; i < f.mapped.size(); ++i) {
    const LabelSet kept = PruneCoarse(f.mapped[i], f.coarse[i], tax);
    const std::string root(kCoarseTypes[CoarseArgmax(f.coarse[i])]);
    for (LabelId id : kept) {
      o.Require(tax.path(tax.root_of(id)) == root, "coarse kept a label outside " + root);
    }
  }
  config.enable_min_count = true;
  const PruningResult all = ApplyPruning(f.mapped, config, tax, f.coarse);
  o.Require(all.labels == f.after_all, "min-count fixture");
  o.Require(all.stats.removed_min_count == f.removed_min_count, "min-count removals");
  const std::vector<LabelSet> support = {
      Labels(tax, {"organization", "organization/sports-team"}),
      Labels(tax, {"organization", "organization/sports-team"}),
      Labels(tax, {"organization", "organization/company"})};
  o.Require(PruneMinCount(support, 2, tax)[2] == Labels(tax, {"organization"}),
            "singleton support label kept");
  if (o.pass) o.detail = "sibling, coarse and min-count fixtures match exactly";
  return o;
}

Outcome FeatureFidelity() {
  Outcome o;
  const Document doc = ObamaDocument();
  auto got = ExtractFeatures(doc.mentions[0], doc, ObamaClusters(), "politics");
  auto want = ObamaExpectedFeatures();
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  o.Require(got == want, "feature set differs");
  o.detail = std::to_string(got.size()) + " feature strings match";
  if (!o.pass) {
    o.detail = "got:";
    for (const auto &s : got) o.detail += " " + s;
  }
  return o;
}

struct SyntheticRun {
  ExperimentResult none, min_count, sibling, coarse, all, all_negatives, flat;
  long train_mentions = 0;
  double spurious = 0;
  double table_seconds = 0;
};

PruningConfig Heuristics(bool sibling, bool coarse, bool min_count) {
  PruningConfig c;
  c.enable_sibling = sibling;
  c.enable_coarse = coarse;
  c.enable_min_count = min_count;
  return c;
}

const SyntheticRun &Synthetic() {
  static const SyntheticRun run = [] {
    SyntheticRun r;
    const auto start = Clock::now();
    const SyntheticOptions options;
    const ExperimentData data(EntityTypes(), options);
    for (const Document &d : data.train) r.train_mentions += static_cast<long>(d.mentions.size());
    r.spurious = static_cast<double>(data.data.spurious_entities) / data.data.entities;
    const TaggerConfig depth;
    r.none = RunExperiment(data, Heuristics(false, false, false), depth);
    r.min_count = RunExperiment(data, Heuristics(false, false, true), depth);
    r.sibling = RunExperiment(data, Heuristics(true, false, false), depth);
    r.coarse = RunExperiment(data, Heuristics(false, true, false), depth);
    r.all = RunExperiment(data, Heuristics(true, true, true), depth);
    r.table_seconds = Seconds(start);
    TaggerConfig all_negatives;
    all_negatives.negatives = NegativeStrategy::kAll;
    r.all_negatives = RunExperiment(data, Heuristics(true, true, true), all_negatives);
    TaggerConfig flat;
    flat.kind = ModelKind::kFlat;
    r.flat = RunExperiment(data, Heuristics(true, true, true), flat);
    return r;
  }();
  return run;
}

std::string Pct(double v) { return Fixed(100 * v, 2); }

Outcome PruningDirection() {
  Outcome o;
  const SyntheticRun &r = Synthetic();
  o.detail = "F1 None " + Pct(r.none.test.f1) + ", Min-count " + Pct(r.min_count.test.f1) +
             ", Sibling " + Pct(r.sibling.test.f1) + ", Coarse " + Pct(r.coarse.test.f1) +
             ", All " + Pct(r.all.test.f1) + "; " + std::to_string(r.train_mentions) +
             " training mentions, " + Pct(r.spurious) + "% entities with a spurious type, " +
             Fixed(r.table_seconds, 1) + " s";
  o.Require(r.train_mentions >= 5000, "fewer than 5000 training mentions");
  o.Require(EntityTypes().max_depth() == 3, "taxonomy is not three levels deep");
  o.Require(std::abs(r.spurious - 0.4) <= 0.05, "spurious share " + Pct(r.spurious));
  o.Require(r.all.test.f1 - r.none.test.f1 >= 0.05,
            "All improves by " + Pct(r.all.test.f1 - r.none.test.f1) + " points");
  o.Require(r.min_count.test.f1 > r.none.test.f1, "Min-count does not beat None");
  o.Require(r.sibling.test.f1 > r.none.test.f1, "Sibling does not beat None");
  o.Require(r.coarse.test.f1 > r.none.test.f1, "Coarse does not beat None");
  o.Require(r.table_seconds < 300, "took " + Fixed(r.table_seconds, 1) + " s");
  return o;
}

Outcome LocalVersusFlat() {
  Outcome o;
  const SyntheticRun &r = Synthetic();
  o.detail = "AUC local/Depth " + Pct(r.all.auc) + " vs flat " + Pct(r.flat.auc) +
             "; F1 Depth " + Pct(r.all.test.f1) + " vs All negatives " +
             Pct(r.all_negatives.test.f1);
  o.Require(r.all.auc >= r.flat.auc, "flat AUC is higher");
  o.Require(r.all.test.f1 >= r.all_negatives.test.f1, "All negatives F1 is higher");
  return o;
}

Outcome MetricExactness() {
  Outcome o;
  const Taxonomy &tax = EntityTypes();
  const MetricFixture f = MakeMetricFixture(tax);
  const EvalReport report = MicroPrf(f.preds, f.gold, tax);
  const double auc = PrCurveAuc(f.preds, f.gold, tax).auc;
  const double err = std::max({std::abs(report.overall.precision - f.precision),
                               std::abs(report.overall.recall - f.recall),
                               std::abs(report.overall.f1 - f.f1), std::abs(auc - f.auc)});
  o.Require(err <= 1e-12, "fixture error " + Sci(err));
  PrfCounts sum;
  for (const auto &[depth, c] : report.level_counts) sum += c;
  o.Require(sum.predicted == report.counts.predicted && sum.gold == report.counts.gold &&
                sum.correct == report.counts.correct,
            "level counts do not sum to overall");

  std::mt19937_64 rng(7007);
  int agreeing = 0;
  constexpr int kTrials = 20;
  for (int t = 0; t < kTrials; ++t) {
    std::vector<GoldMention> gold;
    std::vector<PredictedMention> preds;
    for (int i = 0; i < 40; ++i) {
      const std::string id = std::to_string(i);
      gold.push_back({id, MentionKind::kNamed,
                      tax.Closure({static_cast<LabelId>(rng() % tax.size())})});
      auto refined = RandomProbabilities(rng, tax.size());
      for (LabelId g : gold.back().labels) refined[g] = 0.5 + refined[g] / 2;
      preds.push_back({id, {}, refined});
    }
    double best_f1 = -1, best_theta = 0;
    for (int k = 0; k <= 100; ++k) {
      auto assigned = preds;
      for (auto &p : assigned) p.labels = AssignAbove(p.refined, k / 100.0);
      const double f1 = MicroPrf(assigned, gold, tax).overall.f1;
      if (f1 > best_f1) {
        best_f1 = f1;
        best_theta = k / 100.0;
      }
    }
    const ThresholdChoice choice = TuneThreshold(preds, gold, tax);
    if (choice.threshold == best_theta && std::abs(choice.f1 - best_f1) <= 1e-12) ++agreeing;
  }
  o.Require(agreeing == kTrials, "tuned threshold differs from the sweep");
  o.detail = "fixture error " + Sci(err) + ", level sums exact, tuning matches sweep in " +
             std::to_string(agreeing) + "/" + std::to_string(kTrials);
  return o;
}

Outcome InferenceProperties() {
  Outcome o;
  std::mt19937_64 rng(8008);
  double worst_sum = 0;
  long unclosed = 0;
  for (int t = 0; t < 1000; ++t) {
    const Taxonomy tax = t % 2 == 0 ? EntityTypes() : RandomTaxonomy(rng, 4, 30);
    const auto probs = RandomProbabilities(rng, tax.size());
    for (int k = 1; k <= 9; ++k) {
      const double theta = k / 10.0;
      for (const Prediction &p :
           {InferConditional(probs, tax, theta), InferMarginal(probs, tax, theta)}) {
        if (p.assigned != tax.Closure(p.assigned)) ++unclosed;
      }
    }
    const auto refined = InferMarginal(probs, tax, 0.5).refined;
    double roots = 0;
    for (LabelId r : tax.roots()) roots += refined[r];
    worst_sum = std::max(worst_sum, std::abs(roots - 1));
  }
  o.detail = "1000 assignments x 9 thresholds, " + std::to_string(unclosed) +
             " unclosed sets, max |root sum - 1| " + Sci(worst_sum);
  o.Require(unclosed == 0, "assigned sets not ancestor-closed");
  o.Require(worst_sum <= 1e-9, "root marginals do not sum to 1");
  return o;
}

Outcome AgreementPipeline() {
  Outcome o;
  const Taxonomy &tax = EntityTypes();
  const AnnotatorFixture f = MakeAnnotatorFixture(tax);
  const auto consensus = ConsensusByMention(f.records, 2, tax);
  o.Require(consensus == f.consensus, "consensus differs from hand counts");
  o.Require(std::abs(PrunedFraction(f.records, consensus, tax) - f.pruned_fraction) <= 1e-12,
            "pruned fraction");
  o.Require(ClassifyDisagreement(tax.Lookup("other"), tax.Lookup("other/legal"), tax) ==
                Disagreement::kSpecificity,
            "(other, other/legal) is not specificity");
  o.Require(ClassifyDisagreement(tax.Lookup("other"), tax.Lookup("person"), tax) ==
                Disagreement::kType,
            "(other, person) is not type");
  if (o.pass) {
    o.detail = "consensus over " + std::to_string(consensus.size()) +
               " mentions matches, pruned fraction " + Fixed(f.pruned_fraction, 4) +
               ", disagreement kinds correct";
  }
  return o;
}

Outcome Determinism() {
  Outcome o;
  TempDir a, b;
  const auto first = RunCliPipeline(a.path().string(), TaxonomyPath());
  const auto second = RunCliPipeline(b.path().string(), TaxonomyPath());
  o.Require(first.failures == 0 && second.failures == 0,
            "pipeline command failed:\n" + first.log + second.log);
  o.Require(!first.artifacts.empty() && first.artifacts == second.artifacts,
            "outputs differ between runs");
  if (o.pass) {
    o.detail = std::to_string(first.artifacts.size()) +
               " bytes of models, predictions and reports identical across two runs";
  }
  return o;
}

}  // namespace
}  // namespace finetype::testing

int main() {
  using namespace finetype::testing;
  const std::vector<std::pair<const char *, Outcome (*)()>> criteria = {
      {"marginal inference matches enumeration", MarginalOracle},
      {"objective gradients match finite differences", GradientChecks},
      {"pruning heuristics match fixtures", HeuristicFixtures},
      {"feature extraction matches the worked example", FeatureFidelity},
      {"pruning heuristics improve synthetic F1", PruningDirection},
      {"local Depth beats flat on AUC and All negatives on F1", LocalVersusFlat},
      {"metrics match hand values and the sweep oracle", MetricExactness},
      {"inference outputs are closed and normalized", InferenceProperties},
      {"consensus and disagreement classes match fixtures", AgreementPipeline},
      {"end-to-end runs are byte-identical", Determinism},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception &e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    if (!outcome.pass) ++failed;
    std::printf("%s %zu %s: %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
