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


#include "support/fixtures.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace finetype::testing {

std::string TaxonomyPath() { return FINETYPE_TAXONOMY_FILE; }

const Taxonomy &EntityTypes() {
  static const Taxonomy tax = Taxonomy::LoadFile(TaxonomyPath());
  return tax;
}

Taxonomy RandomTaxonomy(std::mt19937_64 &rng, int max_depth, int max_labels) {
  std::uniform_int_distribution<int> size_dist(1, max_labels);
  const int target = size_dist(rng);
  std::vector<std::string> paths;
  std::vector<int> depths;
  int counter = 0;
  const int roots = std::min(target, 1 + static_cast<int>(rng() % 4));
  for (int r = 0; r < roots; ++r) {
    paths.push_back("r" + std::to_string(counter++));
    depths.push_back(1);
  }
  while (static_cast<int>(paths.size()) < target) {
    const size_t parent = rng() % paths.size();
    if (depths[parent] >= max_depth) continue;
    paths.push_back(paths[parent] + "/n" + std::to_string(counter++));
    depths.push_back(depths[parent] + 1);
  }
  return Taxonomy::FromPaths(paths);
}

std::vector<double> EnumerateMarginals(const Taxonomy &tax,
                                       const std::vector<double> &probs) {
  const int n = tax.size();
  auto in_chain = [&](int member, int end) {
    const std::string &a = tax.path(member);
    const std::string &b = tax.path(end);
    return a == b || (b.size() > a.size() && b.compare(0, a.size(), a) == 0 &&
                      b[a.size()] == '/');
  };
  std::vector<double> score(n);
  double total = 0;
  for (int end = 0; end < n; ++end) {
    double s = 1;
    for (int t = 0; t < n; ++t) s *= in_chain(t, end) ? probs[t] : 1 - probs[t];
    score[end] = s;
    total += s;
  }
  std::vector<double> refined(n, 0.0);
  for (int t = 0; t < n; ++t) {
    for (int end = 0; end < n; ++end) {
      if (in_chain(t, end)) refined[t] += score[end];
    }
    refined[t] /= total;
  }
  return refined;
}

double GradientError(
    const std::function<double(std::span<const double>, std::span<double>)> &f,
    const std::vector<double> &x, double h) {
  std::vector<double> grad(x.size()), scratch(x.size());
  f(x, grad);
  double worst = 0;
  std::vector<double> probe = x;
  for (size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe, scratch);
    probe[i] = x[i] - h;
    const double down = f(probe, scratch);
    probe[i] = x[i];
    const double numeric = (up - down) / (2 * h);
    const double scale = std::max({1.0, std::abs(grad[i]), std::abs(numeric)});
    worst = std::max(worst, std::abs(grad[i] - numeric) / scale);
  }
  return worst;
}

Token Tok(std::string text, int head, std::string label) {
  return Token{std::move(text), head, std::move(label)};
}

Document ObamaDocument() {
  Document doc;
  doc.id = "obama";
  doc.split = Split::kTest;
  doc.topic = "politics";
  doc.sentences.push_back({
      Tok("Aides", 7, "nsubj"),    // 0
      Tok("who", 6, "dobj"),       // 1
      Tok("Barack", 4, "compound"),
      Tok("H.", 4, "compound"),
      Tok("Obama", 6, "nsubj"),    // 4
      Tok("first", 6, "advmod"),
      Tok("picked", 0, "relcl"),   // 6
      Tok("stayed", -1, "root"),
      Tok(".", 7, "punct"),
  });
  Mention m;
  m.id = "m0";
  m.sentence = 0;
  m.start = 2;
  m.end = 5;
  m.head = 4;
  m.kind = MentionKind::kNamed;
  doc.mentions.push_back(m);
  return doc;
}

ClusterMap ObamaClusters() {
  ClusterMap clusters;
  clusters.Add("Obama", "59");
  clusters.Add("Aides", "12");
  return clusters;
}

std::vector<std::string> ObamaExpectedFeatures() {
  return {"HEAD:Obama",      "NONHEAD:Barack",  "NONHEAD:H.",
          "CLUSTER:59",      "TRIGRAM::ob",     "TRIGRAM:oba",
          "TRIGRAM:bam",     "TRIGRAM:ama",     "TRIGRAM:ma:",
          "SHAPE:Aa A. Aa",  "ROLE:nsubj",      "CONTEXT:B:who",
          "CONTEXT:A:first", "PARENT:picked",   "TOPIC:politics"};
}

LabelSet Labels(const Taxonomy &tax, std::initializer_list<const char *> paths) {
  LabelSet out;
  for (const char *p : paths) out.insert(tax.Lookup(p));
  return out;
}

PruningFixture MakePruningFixture(const Taxonomy &tax) {
  const CoarseDistribution person = {0.7, 0.1, 0.1, 0.1};
  const CoarseDistribution organization = {0.2, 0.3, 0.4, 0.1};
  PruningFixture f;
  f.mapped = {
      Labels(tax, {"person", "person/political-figure", "person/athlete"}),
      Labels(tax, {"location", "location/city", "organization",
                   "organization/company"}),
      Labels(tax, {"organization", "organization/company"}),
      Labels(tax, {"organization", "organization/sports-team"}),
      Labels(tax, {"person"}),
  };
  f.coarse = {person, organization, organization, organization, person};
  f.after_sibling = f.mapped;
  f.after_sibling[0] = Labels(tax, {"person"});
  f.after_coarse = f.after_sibling;
  f.after_coarse[1] = Labels(tax, {"organization", "organization/company"});
  f.after_all = f.after_coarse;
  f.after_all[3] = Labels(tax, {"organization"});
  f.removed_sibling = 2;
  f.removed_coarse = 2;
  f.removed_min_count = 1;
  return f;
}

MetricFixture MakeMetricFixture(const Taxonomy &tax) {
  MetricFixture f;
  auto refined = [&](std::initializer_list<std::pair<const char *, double>> s) {
    std::vector<double> r(tax.size(), 0.0);
    for (const auto &[path, p] : s) r[tax.Lookup(path)] = p;
    return r;
  };
  f.gold = {
      {"d:m1", MentionKind::kNamed, Labels(tax, {"person/artist"})},
      {"d:m2", MentionKind::kNamed, Labels(tax, {"location/city"})},
      {"d:m3", MentionKind::kNominal, Labels(tax, {"other/legal"})},
  };
  f.preds = {
      {"d:m1",
       Labels(tax, {"person", "person/artist", "person/artist/actor"}),
       refined({{"person", 0.9}, {"person/artist", 0.6},
                {"person/artist/actor", 0.7}})},
      {"d:m2", Labels(tax, {"organization"}),
       refined({{"organization", 0.8}, {"location", 0.5},
                {"location/city", 0.3}})},
      {"d:m3", Labels(tax, {"other"}),
       refined({{"other", 0.95}, {"other/legal", 0.4}})},
  };
  // Pairs: predicted 3 + 1 + 1, gold 2 + 2 + 2, correct 2 + 0 + 1.
  f.precision = 3.0 / 5.0;
  f.recall = 3.0 / 6.0;
  f.f1 = 2 * (3.0 / 5.0) * (3.0 / 6.0) / (3.0 / 5.0 + 3.0 / 6.0);
  // Ranked pairs: .95 T, .9 T, .8 F, .7 F, .6 T, .5 T, .4 T, .3 T, then 268
  // negatives at 0. Recall steps of 1/6 with the precision before and after.
  f.auc = (1.0 / 6) * (1 + 1) / 2 + (1.0 / 6) * (1 + 1) / 2 +
          (1.0 / 6) * (2.0 / 4 + 3.0 / 5) / 2 +
          (1.0 / 6) * (3.0 / 5 + 4.0 / 6) / 2 +
          (1.0 / 6) * (4.0 / 6 + 5.0 / 7) / 2 +
          (1.0 / 6) * (5.0 / 7 + 6.0 / 8) / 2;
  f.level_counts = {{3, 3, 2}, {1, 3, 1}, {1, 0, 0}};
  return f;
}

AnnotatorFixture MakeAnnotatorFixture(const Taxonomy &tax) {
  AnnotatorFixture f;
  long long clock = 1000;
  auto add = [&](const char *annotator, const char *mention,
                 std::initializer_list<const char *> labels) {
    f.records.push_back({annotator, "d1", mention,
                         tax.Closure(Labels(tax, labels)), clock++});
  };
  add("a1", "m1", {"organization/company", "other"});
  add("a2", "m1", {"organization/company"});
  add("a3", "m1", {"other"});
  add("a4", "m1", {"organization", "other/legal"});
  add("a5", "m1", {"organization/company", "other"});
  add("a6", "m1", {"person"});
  add("a1", "m2", {"organization/company"});
  add("a2", "m2", {"organization/company"});
  add("a3", "m2", {"organization"});
  add("a4", "m2", {"organization/company"});
  add("a5", "m2", {"organization/company/news"});
  add("a6", "m2", {"organization/company"});
  add("a1", "m3", {"person/business"});
  add("a2", "m3", {"person/business"});
  add("a3", "m3", {"person"});
  add("a4", "m3", {"person/title"});
  add("a5", "m3", {"person/business"});
  add("a6", "m3", {"person/title"});
  f.consensus[{"d1", "m1"}] =
      Labels(tax, {"organization", "organization/company", "other"});
  f.consensus[{"d1", "m2"}] = Labels(tax, {"organization", "organization/company"});
  f.consensus[{"d1", "m3"}] =
      Labels(tax, {"person", "person/business", "person/title"});
  // Labels applied: 5 + 3 + 3; kept 3 + 2 + 3.
  f.pruned_fraction = 3.0 / 11.0;
  f.disagreements = {
      {"organization", "organization/company", Disagreement::kSpecificity, 2},
      {"person", "person/business", Disagreement::kSpecificity, 1},
      {"person", "person/title", Disagreement::kSpecificity, 1},
      {"organization/company", "other", Disagreement::kType, 1},
      {"person/business", "person/title", Disagreement::kType, 1},
  };
  return f;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  for (;;) {
    path_ = std::filesystem::temp_directory_path() /
            ("finetype-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    if (std::filesystem::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string ReadFile(const std::string &filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + filename);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void WriteFile(const std::string &filename, const std::string &text) {
  std::ofstream out(filename, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + filename);
}

}  // namespace finetype::testing
