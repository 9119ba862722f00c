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

#ifndef FINETYPE_FEATURES_H_
#define FINETYPE_FEATURES_H_

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "finetype/corpus.h"

namespace finetype {

// Binary indicator vector: the ids of the active features, strictly
// increasing.
struct SparseFeatureVector {
  std::vector<int> indices;

  bool operator==(const SparseFeatureVector &other) const = default;
};

// Bijection between feature strings and dense ids. Once frozen, unseen
// strings are no longer added.
class FeatureDictionary {
 public:
  std::optional<int> Find(std::string_view feature) const;
  // Returns the id of `feature`, adding it if needed. Throws Error if the
  // dictionary is frozen and the feature is unseen.
  int Add(const std::string &feature);

  void Freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  int size() const { return static_cast<int>(names_.size()); }
  const std::string &name(int id) const { return names_.at(id); }
  const std::vector<std::string> &names() const { return names_; }

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> names_;
  bool frozen_ = false;
};

// Training-mode vectorization: unseen features are added unless the
// dictionary is frozen, in which case they are dropped.
SparseFeatureVector Vectorize(const std::vector<std::string> &features,
                              FeatureDictionary &dict);
// Lookup-only vectorization; never grows the dictionary.
SparseFeatureVector Vectorize(const std::vector<std::string> &features,
                              const FeatureDictionary &dict);

// Word -> cluster id, read from "word<TAB>cluster" lines.
class ClusterMap {
 public:
  static ClusterMap Load(std::istream &in);
  static ClusterMap LoadFile(const std::string &filename);

  void Add(const std::string &word, const std::string &cluster);
  const std::string *Find(const std::string &word) const;
  int size() const { return static_cast<int>(clusters_.size()); }

 private:
  std::unordered_map<std::string, std::string> clusters_;
};

// "Obama" -> "Aa", "H." -> "A.", "B2B" -> "A0A". Throws Error on "".
std::string WordShape(std::string_view word);
// Per-word shapes joined with single spaces.
std::string PhraseShape(const std::vector<std::string> &words);
// Lowercased head padded with ':' on both sides, then every 3-gram.
std::vector<std::string> CharTrigrams(std::string_view head);

// The nine feature namespaces, as emitted prefixes.
inline constexpr std::array<std::string_view, 9> kFeatureNamespaces = {
    "HEAD:",  "NONHEAD:", "CLUSTER:", "TRIGRAM:", "SHAPE:",
    "ROLE:", "CONTEXT:", "PARENT:",  "TOPIC:"};
bool HasKnownNamespace(std::string_view feature);

struct FeatureOptions {
  int context_window = 1;  // tokens on each side of the mention
};

// Feature strings for one mention. Throws Error if the mention does not fit
// the document.
std::vector<std::string> ExtractFeatures(const Mention &mention,
                                         const Document &doc,
                                         const ClusterMap &clusters,
                                         std::string_view topic,
                                         const FeatureOptions &options = {});

}  // namespace finetype

#endif  // FINETYPE_FEATURES_H_
