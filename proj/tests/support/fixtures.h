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


#ifndef FINETYPE_TESTS_SUPPORT_FIXTURES_H_
#define FINETYPE_TESTS_SUPPORT_FIXTURES_H_

#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <random>
#include <string>
#include <vector>

#include "finetype/agreement.h"
#include "finetype/corpus.h"
#include "finetype/evaluation.h"
#include "finetype/features.h"
#include "finetype/pruning.h"
#include "finetype/taxonomy.h"

namespace finetype::testing {

std::string TaxonomyPath();
const Taxonomy &EntityTypes();

// Random label tree with at most `max_labels` labels and depth `max_depth`.
Taxonomy RandomTaxonomy(std::mt19937_64 &rng, int max_depth, int max_labels);

// Refined probabilities by listing every root-to-node chain of `tax` and
// scoring it with the Bernoulli product. Chains are rebuilt from the label
// path strings.
std::vector<double> EnumerateMarginals(const Taxonomy &tax,
                                       const std::vector<double> &probs);

// Largest relative deviation between an analytic gradient and central
// differences, measured as |g - n| / max(1, |g|, |n|) per coordinate.
double GradientError(
    const std::function<double(std::span<const double>, std::span<double>)> &f,
    const std::vector<double> &x, double h = 1e-5);

// Token with a dependency head and label.
Token Tok(std::string text, int head, std::string label);

// "Aides who Barack H. Obama first picked stayed ." with Obama as the
// mention head, plus a cluster map sending Obama to 59.
Document ObamaDocument();
ClusterMap ObamaClusters();
std::vector<std::string> ObamaExpectedFeatures();

// Pruning fixture: five mentions of one document with mapped labels and
// coarse distributions, and the sets after each stage.
struct PruningFixture {
  std::vector<LabelSet> mapped;
  std::vector<CoarseDistribution> coarse;
  std::vector<LabelSet> after_sibling;
  std::vector<LabelSet> after_coarse;
  std::vector<LabelSet> after_all;
  long removed_sibling = 0;
  long removed_coarse = 0;
  long removed_min_count = 0;
};
PruningFixture MakePruningFixture(const Taxonomy &tax);

// Three mentions with hand-counted metrics.
struct MetricFixture {
  std::vector<PredictedMention> preds;
  std::vector<GoldMention> gold;
  double precision, recall, f1, auc;
  std::vector<PrfCounts> level_counts;  // depth 1..3
};
MetricFixture MakeMetricFixture(const Taxonomy &tax);

// Six annotators on three mentions of one document.
struct AnnotatorFixture {
  std::vector<AnnotationRecord> records;
  std::map<MentionKey, LabelSet> consensus;  // min_support 2
  double pruned_fraction;
  struct Pair {
    std::string first, second;
    Disagreement kind;
    long count;
  };
  std::vector<Pair> disagreements;
};
AnnotatorFixture MakeAnnotatorFixture(const Taxonomy &tax);

LabelSet Labels(const Taxonomy &tax, std::initializer_list<const char *> paths);

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::string operator/(const std::string &name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::string ReadFile(const std::string &filename);
void WriteFile(const std::string &filename, const std::string &text);

}  // namespace finetype::testing

#endif  // FINETYPE_TESTS_SUPPORT_FIXTURES_H_
