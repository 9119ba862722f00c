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


#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "finetype/error.h"
#include "finetype/evaluation.h"
#include "finetype/inference.h"
#include "support/fixtures.h"

using namespace finetype;
using finetype::testing::EntityTypes;
using finetype::testing::Labels;

namespace {

std::vector<PredictedMention> RandomPredictions(std::mt19937_64 &rng,
                                                const Taxonomy &tax,
                                                std::vector<GoldMention> &gold,
                                                int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<PredictedMention> preds;
  gold.clear();
  for (int i = 0; i < n; ++i) {
    const std::string id = "m" + std::to_string(i);
    gold.push_back({id, MentionKind::kNamed,
                    tax.Closure({static_cast<LabelId>(rng() % tax.size())})});
    std::vector<double> refined(tax.size());
    for (double &v : refined) v = u(rng);
    preds.push_back({id, AssignAbove(refined, 0.5), refined});
  }
  return preds;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("micro scores") {
  const Taxonomy &tax = EntityTypes();
  EvalReport r = MicroPrf({{"a", Labels(tax, {"person", "person/artist"}), {}}},
                          {{"a", MentionKind::kNamed, Labels(tax, {"person"})}}, tax);
  CHECK(r.overall.precision == 0.5);
  CHECK(r.overall.recall == 1.0);
  CHECK(r.overall.f1 == doctest::Approx(2.0 / 3).epsilon(1e-12));
  r = MicroPrf({{"a", Labels(tax, {"person"}), {}}},
               {{"a", MentionKind::kNamed, Labels(tax, {"person"})}}, tax);
  CHECK(r.overall.f1 == 1.0);
  CHECK_THROWS_AS(MicroPrf({{"b", {}, {}}}, {{"a", MentionKind::kNamed, {}}}, tax), Error);
}

TEST_CASE("three-mention fixture") {
  const Taxonomy &tax = EntityTypes();
  const auto f = finetype::testing::MakeMetricFixture(tax);
  const EvalReport r = MicroPrf(f.preds, f.gold, tax);
  CHECK(std::abs(r.overall.precision - f.precision) <= 1e-12);
  CHECK(std::abs(r.overall.recall - f.recall) <= 1e-12);
  CHECK(std::abs(r.overall.f1 - f.f1) <= 1e-12);
  CHECK(std::abs(PrCurveAuc(f.preds, f.gold, tax).auc - f.auc) <= 1e-12);
  for (int d = 1; d <= 3; ++d) {
    const PrfCounts &c = r.level_counts.at(d);
    CHECK(c.predicted == f.level_counts[d - 1].predicted);
    CHECK(c.gold == f.level_counts[d - 1].gold);
    CHECK(c.correct == f.level_counts[d - 1].correct);
  }
  // Scoring named mentions only drops the nominal third mention.
  const EvalReport named = MicroPrf(f.preds, f.gold, tax, {MentionKind::kNamed});
  CHECK(named.mentions_evaluated == 2);
  CHECK(named.counts.correct == 2);
}

TEST_CASE("per level scores and warnings") {
  const Taxonomy &tax = EntityTypes();
  const std::vector<PredictedMention> preds = {{"a", Labels(tax, {"person"}), {}}};
  const std::vector<GoldMention> gold = {
      {"a", MentionKind::kNamed, Labels(tax, {"person", "person/artist"})}};
  const Prf one = PerLevelPrf(preds, gold, tax, 1);
  CHECK(one.precision == 1);
  CHECK(one.recall == 1);
  std::vector<std::string> warnings;
  const Prf two = PerLevelPrf(preds, gold, tax, 2, DefaultKinds(), &warnings);
  CHECK(two.precision == 0);
  CHECK(two.recall == 0);
  CHECK(warnings.size() == 1);
  // Over-predicting at depth 2 leaves depth 1 untouched.
  const std::vector<PredictedMention> more = {
      {"a", Labels(tax, {"person", "person/artist", "person/athlete"}), {}}};
  CHECK(PerLevelPrf(more, gold, tax, 1).f1 == one.f1);
}

TEST_CASE("level counts decompose the overall counts") {
  const Taxonomy &tax = EntityTypes();
  std::mt19937_64 rng(12);
  std::vector<GoldMention> gold;
  const auto preds = RandomPredictions(rng, tax, gold, 200);
  const EvalReport r = MicroPrf(preds, gold, tax);
  PrfCounts sum;
  for (const auto &[d, c] : r.level_counts) sum += c;
  CHECK(sum.predicted == r.counts.predicted);
  CHECK(sum.gold == r.counts.gold);
  CHECK(sum.correct == r.counts.correct);
  for (int d = 1; d <= 3; ++d) {
    CHECK(PerLevelPrf(preds, gold, tax, d).f1 == doctest::Approx(r.per_level.at(d).f1));
  }
  auto shuffled_preds = preds;
  auto shuffled_gold = gold;
  std::vector<size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (size_t i = 0; i < order.size(); ++i) {
    shuffled_preds[i] = preds[order[i]];
    shuffled_gold[i] = gold[order[i]];
  }
  CHECK(MicroPrf(shuffled_preds, shuffled_gold, tax).overall.f1 == r.overall.f1);
}

TEST_CASE("label distribution by level is recoverable from gold") {
  const Taxonomy &tax = EntityTypes();
  std::vector<GoldMention> gold;
  auto add = [&](int n, const char *path) {
    for (int i = 0; i < n; ++i) {
      gold.push_back({std::to_string(gold.size()), MentionKind::kNamed,
                      Labels(tax, {path})});
    }
  };
  add(586, "person/artist/actor");
  add(5209 - 586, "location/city");
  add(11909 - 5209, "organization");
  std::vector<PredictedMention> preds;
  for (const auto &g : gold) preds.push_back({g.id, {}, {}});
  const EvalReport r = MicroPrf(preds, gold, tax);
  CHECK(r.level_counts.at(1).gold == 11909);
  CHECK(r.level_counts.at(2).gold == 5209);
  CHECK(r.level_counts.at(3).gold == 586);
}

TEST_CASE("precision-recall area") {
  const Taxonomy tax = Taxonomy::FromPaths({"A", "A/B", "C"});
  const LabelId a = tax.Lookup("A"), b = tax.Lookup("A/B"), c = tax.Lookup("C");
  auto scores = [&](double sa, double sb, double sc) {
    std::vector<double> r(3);
    r[a] = sa;
    r[b] = sb;
    r[c] = sc;
    return r;
  };
  const std::vector<GoldMention> gold = {{"1", MentionKind::kNamed, {a}},
                                         {"2", MentionKind::kNamed, {c}}};
  // Ranked: .9 T, .6 F, .5 T, .4 F, .2 F, .1 F.
  const std::vector<PredictedMention> preds = {{"1", {}, scores(0.9, 0.2, 0.6)},
                                               {"2", {}, scores(0.4, 0.1, 0.5)}};
  const PrCurve curve = PrCurveAuc(preds, gold, tax);
  CHECK(std::abs(curve.auc - 19.0 / 24.0) <= 1e-12);
  const std::vector<PredictedMention> perfect = {{"1", {}, scores(0.9, 0.2, 0.1)},
                                                 {"2", {}, scores(0.1, 0.1, 0.8)}};
  CHECK(PrCurveAuc(perfect, gold, tax).auc == doctest::Approx(1.0));
}

TEST_CASE("random rankings score near the positive rate") {
  const Taxonomy &tax = EntityTypes();
  std::mt19937_64 rng(21);
  std::vector<GoldMention> gold;
  const auto preds = RandomPredictions(rng, tax, gold, 2000);
  long positives = 0;
  for (const auto &g : gold) positives += static_cast<long>(g.labels.size());
  const double prevalence = static_cast<double>(positives) / (2000.0 * tax.size());
  const double auc = PrCurveAuc(preds, gold, tax).auc;
  CHECK(auc >= 0);
  CHECK(auc <= 1);
  CHECK(std::abs(auc - prevalence) <= 0.05);
}

TEST_CASE("promoting a gold pair never lowers the area") {
  const Taxonomy &tax = EntityTypes();
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<GoldMention> gold;
    auto preds = RandomPredictions(rng, tax, gold, 20);
    const double before = PrCurveAuc(preds, gold, tax).auc;
    PredictedMention &p = preds[rng() % preds.size()];
    const GoldMention &g = gold[&p - preds.data()];
    const LabelId pos = *std::next(g.labels.begin(), rng() % g.labels.size());
    LabelId neg = static_cast<LabelId>(rng() % tax.size());
    while (g.labels.count(neg)) neg = static_cast<LabelId>(rng() % tax.size());
    if (p.refined[pos] < p.refined[neg]) std::swap(p.refined[pos], p.refined[neg]);
    CHECK(PrCurveAuc(preds, gold, tax).auc >= before - 1e-12);
  }
}

TEST_CASE("threshold tuning") {
  const Taxonomy &tax = EntityTypes();
  std::vector<GoldMention> gold;
  std::vector<PredictedMention> preds;
  for (int i = 0; i < 5; ++i) {
    const std::string id = std::to_string(i);
    gold.push_back(
        {id, MentionKind::kNamed, tax.Closure(Labels(tax, {"person/artist"}))});
    std::vector<double> refined(tax.size(), 0.1);
    for (LabelId g : gold.back().labels) refined[g] = 0.9;
    preds.push_back({id, {}, refined});
  }
  // Assignment is strict, so 0.10 already excludes the 0.1 scores.
  ThresholdChoice choice = TuneThreshold(preds, gold, tax);
  CHECK(choice.threshold == doctest::Approx(0.10));
  CHECK(choice.f1 == doctest::Approx(1.0));

  for (auto &p : preds) p.refined.assign(tax.size(), 0.0);
  choice = TuneThreshold(preds, gold, tax);
  CHECK(choice.threshold == 0.0);
  CHECK(choice.f1 == 0.0);
  CHECK(choice.warnings.size() == 1);
}

TEST_CASE("tuned threshold equals an exhaustive sweep") {
  const Taxonomy &tax = EntityTypes();
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<GoldMention> gold;
    auto preds = RandomPredictions(rng, tax, gold, 40);
    // Skew gold scores upward so the optimum is interior.
    for (size_t i = 0; i < preds.size(); ++i) {
      for (LabelId g : gold[i].labels) preds[i].refined[g] = 0.5 + preds[i].refined[g] / 2;
    }
    double best_f1 = -1, best_theta = -1;
    for (int k = 0; k <= 100; ++k) {
      const double theta = k / 100.0;
      std::vector<PredictedMention> assigned = preds;
      for (auto &p : assigned) p.labels = AssignAbove(p.refined, theta);
      const double f1 = MicroPrf(assigned, gold, tax).overall.f1;
      if (f1 > best_f1) {
        best_f1 = f1;
        best_theta = theta;
      }
    }
    const ThresholdChoice choice = TuneThreshold(preds, gold, tax);
    CHECK(choice.threshold == best_theta);
    CHECK(choice.f1 == doctest::Approx(best_f1).epsilon(1e-12));
  }
}

TEST_CASE("report layout") {
  const Taxonomy &tax = EntityTypes();
  const auto f = finetype::testing::MakeMetricFixture(tax);
  EvalReport r = MicroPrf(f.preds, f.gold, tax);
  r.auc = PrCurveAuc(f.preds, f.gold, tax).auc;
  const std::string text = FormatReport(r, true, true);
  CHECK(text.find("Overall     \t60.00\t50.00\t54.55\t") != std::string::npos);
  CHECK(text.find("Level 3") != std::string::npos);
  CHECK(text.find("# mentions=3 predicted=5 gold=6 correct=3") != std::string::npos);
}

}  // TEST_SUITE
