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

#ifndef FINETYPE_TAXONOMY_H_
#define FINETYPE_TAXONOMY_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace finetype {

// Index of a type label inside a Taxonomy. Ids follow lexicographic path
// order, so a parent always has a smaller id than its children.
using LabelId = int;
inline constexpr LabelId kNoLabel = -1;

using LabelSet = std::set<LabelId>;

// Tree of type labels. Each label is a "/"-separated path such as
// "person/artist/actor"; its parent is the path minus the last segment. The
// depth-1 labels hang off an implicit root that is not itself a label.
// Immutable after construction.
class Taxonomy {
 public:
  Taxonomy() = default;

  // Reads one path per line. Blank lines and lines starting with '#' are
  // skipped, duplicates are ignored and missing ancestors are inserted.
  // Throws ParseError on an empty segment and Error on an empty taxonomy.
  static Taxonomy Load(std::istream &in);
  static Taxonomy LoadFile(const std::string &filename);
  static Taxonomy FromPaths(const std::vector<std::string> &paths);

  // One path per line in id order. Load(Serialize()) reproduces the taxonomy.
  std::string Serialize() const;

  // 64-bit FNV-1a hash of Serialize(); stored in model files.
  uint64_t Fingerprint() const;

  int size() const { return static_cast<int>(paths_.size()); }
  bool empty() const { return paths_.empty(); }
  bool Contains(LabelId id) const { return id >= 0 && id < size(); }

  const std::string &path(LabelId id) const;
  int depth(LabelId id) const;
  LabelId parent(LabelId id) const;
  const std::vector<LabelId> &children(LabelId id) const;
  LabelId root_of(LabelId id) const;

  // Depth-1 labels in id order.
  const std::vector<LabelId> &roots() const { return roots_; }
  int max_depth() const { return max_depth_; }
  std::vector<LabelId> AtDepth(int depth) const;

  std::optional<LabelId> Find(std::string_view path) const;
  // Like Find() but throws Error for an unknown path.
  LabelId Lookup(std::string_view path) const;

  // Proper ancestors ordered from depth 1 downward.
  std::vector<LabelId> Ancestors(LabelId id) const;
  // Input labels plus all their ancestors.
  LabelSet Closure(const LabelSet &labels) const;
  // Other labels with the same parent; depth-1 labels are mutual siblings.
  std::vector<LabelId> Siblings(LabelId id) const;
  // True iff `ancestor` is a proper ancestor of `label`.
  bool IsAncestor(LabelId ancestor, LabelId label) const;
  // The label and all of its descendants, in id order.
  std::vector<LabelId> Subtree(LabelId id) const;

  // One root-to-node chain per label, in label id order. The empty
  // configuration is not included.
  std::vector<LabelSet> ValidConfigurations() const;

  // Path-string conversions. Unknown paths throw Error.
  LabelSet ToLabelSet(const std::vector<std::string> &paths) const;
  std::vector<std::string> ToPaths(const LabelSet &labels) const;

 private:
  void CheckId(LabelId id) const;

  std::vector<std::string> paths_;
  std::vector<int> depth_;
  std::vector<LabelId> parent_;
  std::vector<std::vector<LabelId>> children_;
  std::vector<LabelId> roots_;
  int max_depth_ = 0;
};

// Splits "a/b/c" into segments. Throws ParseError (line 0) on an empty path
// or an empty segment.
std::vector<std::string> SplitLabelPath(std::string_view path);

}  // namespace finetype

#endif  // FINETYPE_TAXONOMY_H_
