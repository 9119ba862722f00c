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

#ifndef FINETYPE_CORPUS_H_
#define FINETYPE_CORPUS_H_

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "finetype/taxonomy.h"

namespace finetype {

enum class MentionKind { kNamed, kNominal, kPronominal };
enum class Split { kTrain, kDev, kTest };

std::string_view MentionKindName(MentionKind kind);
MentionKind ParseMentionKind(std::string_view name);
std::string_view SplitName(Split split);
Split ParseSplit(std::string_view name);

// The fixed document topic inventory.
inline constexpr std::array<std::string_view, 8> kTopics = {
    "arts",     "business", "entertainment", "health",
    "mayhem",   "politics", "scitech",       "sport"};
bool IsKnownTopic(std::string_view topic);

struct Token {
  std::string text;
  int dep_head = -1;  // index in the same sentence, -1 for the root
  std::string dep_label;
};

using Sentence = std::vector<Token>;

struct Mention {
  std::string id;
  int sentence = 0;
  int start = 0;  // token span [start, end) inside the sentence
  int end = 0;
  int head = 0;   // sentence token index, start <= head < end
  MentionKind kind = MentionKind::kNamed;
  std::optional<std::string> entity_id;
  std::set<std::string> raw_types;
  std::optional<LabelSet> gold_labels;  // ancestor-closed when present
};

struct Document {
  std::string id;
  Split split = Split::kTrain;
  std::vector<Sentence> sentences;
  std::vector<Mention> mentions;
  std::optional<std::string> topic;
};

// Parses one line-delimited JSON document record and validates it. Gold
// labels are closed under ancestors. Throws Error naming the document id and
// the offending field.
Document ParseDocument(std::string_view record, const Taxonomy &tax);
// Serializes a document as a single JSON line (no trailing newline).
std::string DocumentToRecord(const Document &doc, const Taxonomy &tax);

// One document per non-blank line.
std::vector<Document> LoadCorpus(std::istream &in, const Taxonomy &tax);
std::vector<Document> LoadCorpusFile(const std::string &filename,
                                     const Taxonomy &tax);
void WriteCorpus(std::ostream &out, const std::vector<Document> &docs,
                 const Taxonomy &tax);

struct CorpusStats {
  int documents = 0;
  int mentions = 0;
  int labels = 0;  // closed gold labels summed over mentions
  std::map<int, int> labels_at_depth;
};
CorpusStats ComputeCorpusStats(const std::vector<Document> &docs,
                               const Taxonomy &tax);

// Map from external (knowledge base) type ids to taxonomy labels.
class TypeMapping {
 public:
  TypeMapping() = default;

  // Two tab-separated columns per line: external id, label path. Every
  // target must exist in `tax`.
  static TypeMapping Load(std::istream &in, const Taxonomy &tax);
  static TypeMapping LoadFile(const std::string &filename,
                              const Taxonomy &tax);

  void Add(const std::string &external_id, LabelId label);
  std::optional<LabelId> Find(const std::string &external_id) const;
  int size() const { return static_cast<int>(entries_.size()); }

 private:
  std::map<std::string, LabelId> entries_;
};

struct MappedTypes {
  LabelSet labels;   // ancestor-closed
  int skipped = 0;   // raw types without a mapping entry
};

MappedTypes MapRawTypes(const Mention &mention, const TypeMapping &mapping,
                        const Taxonomy &tax);

}  // namespace finetype

#endif  // FINETYPE_CORPUS_H_
