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

#include "finetype/taxonomy.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include "finetype/error.h"

namespace finetype {

namespace {

// Trims trailing whitespace (including '\r').
std::string_view TrimRight(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string_view TrimLeft(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  return s;
}

std::string JoinSegments(const std::vector<std::string> &segments, size_t n) {
  std::string out;
  for (size_t i = 0; i < n; ++i) {
    if (i > 0) out += '/';
    out += segments[i];
  }
  return out;
}

}  // namespace

std::vector<std::string> SplitLabelPath(std::string_view path) {
  if (path.empty()) throw ParseError("empty label path", 0);
  std::vector<std::string> segments;
  size_t start = 0;
  while (true) {
    size_t slash = path.find('/', start);
    std::string_view segment = path.substr(
        start, slash == std::string_view::npos ? std::string_view::npos
                                               : slash - start);
    if (segment.empty()) {
      throw ParseError("empty segment in label path '" + std::string(path) +
                           "'",
                       0);
    }
    segments.emplace_back(segment);
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return segments;
}

Taxonomy Taxonomy::Load(std::istream &in) {
  std::vector<std::string> paths;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view text = TrimLeft(TrimRight(line));
    if (text.empty() || text.front() == '#') continue;
    try {
      SplitLabelPath(text);
    } catch (const ParseError &e) {
      throw ParseError(e.what(), line_number);
    }
    paths.emplace_back(text);
  }
  return FromPaths(paths);
}

Taxonomy Taxonomy::LoadFile(const std::string &filename) {
  std::ifstream in(filename);
  if (!in) throw Error("cannot open taxonomy file '" + filename + "'");
  return Load(in);
}

Taxonomy Taxonomy::FromPaths(const std::vector<std::string> &paths) {
  std::set<std::string> all;
  for (const std::string &p : paths) {
    std::vector<std::string> segments = SplitLabelPath(p);
    for (size_t n = 1; n <= segments.size(); ++n) {
      all.insert(JoinSegments(segments, n));
    }
  }
  if (all.empty()) throw Error("empty taxonomy");

  Taxonomy tax;
  tax.paths_.assign(all.begin(), all.end());
  const int n = tax.size();
  tax.depth_.resize(n);
  tax.parent_.assign(n, kNoLabel);
  tax.children_.assign(n, {});
  for (LabelId id = 0; id < n; ++id) {
    const std::string &p = tax.paths_[id];
    tax.depth_[id] = 1 + static_cast<int>(std::count(p.begin(), p.end(), '/'));
    tax.max_depth_ = std::max(tax.max_depth_, tax.depth_[id]);
    size_t slash = p.rfind('/');
    if (slash == std::string::npos) {
      tax.roots_.push_back(id);
    } else {
      LabelId parent = *tax.Find(std::string_view(p).substr(0, slash));
      tax.parent_[id] = parent;
      tax.children_[parent].push_back(id);
    }
  }
  return tax;
}

std::string Taxonomy::Serialize() const {
  std::string out;
  for (const std::string &p : paths_) {
    out += p;
    out += '\n';
  }
  return out;
}

uint64_t Taxonomy::Fingerprint() const {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : Serialize()) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

void Taxonomy::CheckId(LabelId id) const {
  if (!Contains(id)) {
    throw Error("unknown label id " + std::to_string(id));
  }
}

const std::string &Taxonomy::path(LabelId id) const {
  CheckId(id);
  return paths_[id];
}

int Taxonomy::depth(LabelId id) const {
  CheckId(id);
  return depth_[id];
}

LabelId Taxonomy::parent(LabelId id) const {
  CheckId(id);
  return parent_[id];
}

const std::vector<LabelId> &Taxonomy::children(LabelId id) const {
  CheckId(id);
  return children_[id];
}

LabelId Taxonomy::root_of(LabelId id) const {
  CheckId(id);
  while (parent_[id] != kNoLabel) id = parent_[id];
  return id;
}

std::vector<LabelId> Taxonomy::AtDepth(int d) const {
  std::vector<LabelId> out;
  for (LabelId id = 0; id < size(); ++id) {
    if (depth_[id] == d) out.push_back(id);
  }
  return out;
}

std::optional<LabelId> Taxonomy::Find(std::string_view p) const {
  auto it = std::lower_bound(paths_.begin(), paths_.end(), p,
                             [](const std::string &a, std::string_view b) {
                               return std::string_view(a) < b;
                             });
  if (it == paths_.end() || *it != p) return std::nullopt;
  return static_cast<LabelId>(it - paths_.begin());
}

LabelId Taxonomy::Lookup(std::string_view p) const {
  std::optional<LabelId> id = Find(p);
  if (!id) throw Error("unknown label '" + std::string(p) + "'");
  return *id;
}

std::vector<LabelId> Taxonomy::Ancestors(LabelId id) const {
  CheckId(id);
  std::vector<LabelId> out;
  for (LabelId p = parent_[id]; p != kNoLabel; p = parent_[p]) {
    out.push_back(p);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

LabelSet Taxonomy::Closure(const LabelSet &labels) const {
  LabelSet out;
  for (LabelId id : labels) {
    CheckId(id);
    for (LabelId p = id; p != kNoLabel; p = parent_[p]) {
      if (!out.insert(p).second) break;
    }
  }
  return out;
}

std::vector<LabelId> Taxonomy::Siblings(LabelId id) const {
  CheckId(id);
  const std::vector<LabelId> &group =
      parent_[id] == kNoLabel ? roots_ : children_[parent_[id]];
  std::vector<LabelId> out;
  for (LabelId other : group) {
    if (other != id) out.push_back(other);
  }
  return out;
}

bool Taxonomy::IsAncestor(LabelId ancestor, LabelId label) const {
  CheckId(ancestor);
  CheckId(label);
  for (LabelId p = parent_[label]; p != kNoLabel; p = parent_[p]) {
    if (p == ancestor) return true;
  }
  return false;
}

std::vector<LabelId> Taxonomy::Subtree(LabelId id) const {
  CheckId(id);
  std::vector<LabelId> out;
  std::vector<LabelId> stack = {id};
  while (!stack.empty()) {
    LabelId top = stack.back();
    stack.pop_back();
    out.push_back(top);
    for (LabelId child : children_[top]) stack.push_back(child);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LabelSet> Taxonomy::ValidConfigurations() const {
  std::vector<LabelSet> out;
  out.reserve(paths_.size());
  for (LabelId id = 0; id < size(); ++id) out.push_back(Closure({id}));
  return out;
}

LabelSet Taxonomy::ToLabelSet(const std::vector<std::string> &labels) const {
  LabelSet out;
  for (const std::string &p : labels) out.insert(Lookup(p));
  return out;
}

std::vector<std::string> Taxonomy::ToPaths(const LabelSet &labels) const {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (LabelId id : labels) out.push_back(path(id));
  return out;
}

}  // namespace finetype
