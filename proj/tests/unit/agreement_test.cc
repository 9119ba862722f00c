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


#include <random>
#include <set>

#include "doctest.h"
#include "finetype/agreement.h"
#include "finetype/error.h"
#include "support/fixtures.h"

using namespace finetype;
using finetype::testing::EntityTypes;
using finetype::testing::Labels;

namespace {

AnnotationRecord Record(const Taxonomy &tax, const char *annotator,
                        const char *mention,
                        std::initializer_list<const char *> labels,
                        long long ts = 0) {
  return {annotator, "d", mention, tax.Closure(Labels(tax, labels)), ts};
}

}  // namespace

TEST_SUITE("agreement") {

TEST_CASE("annotation records") {
  const Taxonomy &tax = EntityTypes();
  const AnnotationRecord r = Record(tax, "ann", "m1", {"person/artist"}, 17);
  const AnnotationRecord back = ParseAnnotation(AnnotationToRecord(r, tax), tax);
  CHECK(back.annotator == "ann");
  CHECK(back.mention == "m1");
  CHECK(back.labels == r.labels);
  CHECK(back.timestamp_ms == 17);
  CHECK(ParseAnnotation(R"({"annotator":"a","document":"d","mention":"m","labels":["person/artist"]})",
                        tax)
            .labels.count(tax.Lookup("person")) == 1);
  CHECK_THROWS_AS(ParseAnnotation("{", tax), Error);
  CHECK_THROWS_AS(ParseAnnotation(R"({"annotator":"a","document":"d","labels":[]})", tax),
                  Error);
  CHECK_THROWS_AS(
      ParseAnnotation(R"({"annotator":"a","document":"d","mention":"m","labels":["nope"]})",
                      tax),
      Error);
}

TEST_CASE("latest annotation wins") {
  const Taxonomy &tax = EntityTypes();
  const std::vector<AnnotationRecord> records = {
      Record(tax, "a", "m1", {"person"}, 1), Record(tax, "a", "m1", {"location"}, 2),
      Record(tax, "b", "m1", {"location"}, 3)};
  const auto latest = LatestByMention(records);
  REQUIRE(latest.size() == 1);
  const auto &group = latest.begin()->second;
  REQUIRE(group.size() == 2);
  for (const auto &r : group) CHECK(r.labels == Labels(tax, {"location"}));
  CHECK(Consensus(group, 2, tax) == Labels(tax, {"location"}));
}

TEST_CASE("six-annotator fixture") {
  const Taxonomy &tax = EntityTypes();
  const auto f = finetype::testing::MakeAnnotatorFixture(tax);
  const auto consensus = ConsensusByMention(f.records, 2, tax);
  CHECK(consensus == f.consensus);
  CHECK(std::abs(PrunedFraction(f.records, consensus, tax) - f.pruned_fraction) <= 1e-12);
  const auto table = DisagreementTable(f.records, consensus, tax);
  std::set<std::tuple<LabelId, LabelId, Disagreement, long>> got, want;
  for (const auto &e : table) got.insert({e.first, e.second, e.kind, e.count});
  for (const auto &p : f.disagreements) {
    LabelId a = tax.Lookup(p.first), b = tax.Lookup(p.second);
    if (a > b) std::swap(a, b);
    want.insert({a, b, p.kind, p.count});
  }
  CHECK(got == want);
  REQUIRE(!table.empty());
  CHECK(table.front().kind == Disagreement::kSpecificity);
  CHECK(table.front().count == 2);
}

TEST_CASE("disagreement kinds") {
  const Taxonomy &tax = EntityTypes();
  auto kind = [&](const char *a, const char *b) {
    return ClassifyDisagreement(tax.Lookup(a), tax.Lookup(b), tax);
  };
  CHECK(kind("person", "person/artist/actor") == Disagreement::kSpecificity);
  CHECK(kind("person/artist/actor", "person") == Disagreement::kSpecificity);
  CHECK(kind("person/artist", "person/athlete") == Disagreement::kType);
  CHECK(kind("person", "location") == Disagreement::kType);
  CHECK_THROWS_AS(kind("person", "person"), Error);
  for (LabelId a = 0; a < tax.size(); ++a) {
    for (LabelId b = 0; b < tax.size(); ++b) {
      if (a != b) CHECK(ClassifyDisagreement(a, b, tax) == ClassifyDisagreement(b, a, tax));
    }
  }
}

TEST_CASE("two-annotator agreement by hand") {
  const Taxonomy &tax = EntityTypes();
  const std::vector<AnnotationRecord> records = {
      Record(tax, "x", "m1", {"person/artist"}), Record(tax, "y", "m1", {"person"}),
      Record(tax, "x", "m2", {"location"}), Record(tax, "y", "m2", {"organization"})};
  const auto consensus = ConsensusByMention(records, 2, tax);
  CHECK(consensus.at({"d", "m1"}) == Labels(tax, {"person"}));
  CHECK(consensus.at({"d", "m2"}).empty());
  CHECK(PrunedFraction(records, consensus, tax) == doctest::Approx(0.75));

  const AgreementAtDepth one = AnnotatorAgreement(records, consensus, 1, tax);
  REQUIRE(one.annotators.size() == 2);
  CHECK(one.annotators[0].annotator == "x");
  CHECK(one.annotators[0].counts.predicted == 2);
  CHECK(one.annotators[0].counts.gold == 1);
  CHECK(one.annotators[0].counts.correct == 1);
  CHECK(one.average.precision == doctest::Approx(0.5));
  CHECK(one.average.recall == doctest::Approx(1.0));
  CHECK(one.average.f1 == doctest::Approx(2.0 / 3));

  // Only x predicts at depth 2 and no consensus label lives there, so recall
  // is undefined for both annotators.
  const AgreementAtDepth two = AnnotatorAgreement(records, consensus, 2, tax);
  CHECK(two.average.precision == 0);
  CHECK(two.average.recall == 0);
  CHECK(two.average.f1 == 0);

  CHECK(FormatAgreementTable({one, two}) ==
        "Depth\tPrecision\tRecall\tF1\n1\t0.50\t1.00\t0.67\n2\t0.00\t0.00\t0.00\n");
}

TEST_CASE("disagreement table layout") {
  const Taxonomy &tax = EntityTypes();
  const auto f = finetype::testing::MakeAnnotatorFixture(tax);
  const auto table =
      DisagreementTable(f.records, ConsensusByMention(f.records, 2, tax), tax);
  const std::string text = FormatDisagreementTable(table, tax, 1);
  CHECK(text.find("[specificity]\nLabel 1\tLabel 2\tCount\norganization\torganization/company\t2\n[type]") !=
        std::string::npos);
}

TEST_CASE("consensus shrinks as support grows") {
  const Taxonomy &tax = EntityTypes();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<AnnotationRecord> records;
    const int annotators = 1 + static_cast<int>(rng() % 6);
    for (int a = 0; a < annotators; ++a) {
      LabelSet direct;
      const int n = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < n; ++i) direct.insert(static_cast<LabelId>(rng() % tax.size()));
      records.push_back({"a" + std::to_string(a), "d", "m", tax.Closure(direct), a});
    }
    LabelSet previous = Consensus(records, 1, tax);
    for (int k = 2; k <= 7; ++k) {
      const LabelSet current = Consensus(records, k, tax);
      for (LabelId id : current) CHECK(previous.count(id) == 1);
      CHECK(current == tax.Closure(current));
      previous = current;
    }
    const double pruned =
        PrunedFraction(records, ConsensusByMention(records, 2, tax), tax);
    CHECK(pruned >= 0);
    CHECK(pruned <= 1);
  }
}

}  // TEST_SUITE
