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

#include "finetype/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "finetype/error.h"
#include "json.hpp"

namespace finetype {

using json = nlohmann::json;

namespace {

constexpr std::array<std::string_view, 3> kKindNames = {"named", "nominal",
                                                        "pronominal"};
constexpr std::array<std::string_view, 3> kSplitNames = {"train", "dev",
                                                         "test"};

// Raises a schema error for `field` of document `doc_id`.
[[noreturn]] void Fail(const std::string &doc_id, const std::string &field,
                       const std::string &message) {
  throw Error("document '" + doc_id + "': field '" + field + "': " + message);
}

void CheckKeys(const json &obj, std::initializer_list<std::string_view> keys,
               const std::string &doc_id, const std::string &where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      Fail(doc_id, where + it.key(), "unknown field");
    }
  }
}

const json &Require(const json &obj, const char *key,
                    const std::string &doc_id, const std::string &where) {
  auto it = obj.find(key);
  if (it == obj.end()) Fail(doc_id, where + key, "missing");
  return *it;
}

std::string RequireString(const json &obj, const char *key,
                          const std::string &doc_id,
                          const std::string &where) {
  const json &v = Require(obj, key, doc_id, where);
  if (!v.is_string()) Fail(doc_id, where + key, "expected a string");
  return v.get<std::string>();
}

int RequireInt(const json &obj, const char *key, const std::string &doc_id,
               const std::string &where) {
  const json &v = Require(obj, key, doc_id, where);
  if (!v.is_number_integer()) Fail(doc_id, where + key, "expected an integer");
  return v.get<int>();
}

std::vector<std::string> StringArray(const json &v, const std::string &doc_id,
                                     const std::string &field) {
  if (!v.is_array()) Fail(doc_id, field, "expected an array of strings");
  std::vector<std::string> out;
  for (const json &item : v) {
    if (!item.is_string()) Fail(doc_id, field, "expected an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

Token ParseToken(const json &j, const std::string &doc_id,
                 const std::string &where, int sentence_length, int index) {
  if (!j.is_object()) Fail(doc_id, where, "expected an object");
  CheckKeys(j, {"text", "dep_head", "dep_label"}, doc_id, where + ".");
  Token token;
  token.text = RequireString(j, "text", doc_id, where + ".");
  const json &head = Require(j, "dep_head", doc_id, where + ".");
  if (head.is_null()) {
    token.dep_head = -1;
  } else if (head.is_number_integer()) {
    token.dep_head = head.get<int>();
    if (token.dep_head < 0 || token.dep_head >= sentence_length) {
      Fail(doc_id, where + ".dep_head", "index out of range");
    }
    if (token.dep_head == index) {
      Fail(doc_id, where + ".dep_head", "self loop");
    }
  } else {
    Fail(doc_id, where + ".dep_head", "expected an integer or null");
  }
  token.dep_label = RequireString(j, "dep_label", doc_id, where + ".");
  return token;
}

Mention ParseMention(const json &j, const Document &doc, const Taxonomy &tax,
                     const std::string &where) {
  const std::string &doc_id = doc.id;
  if (!j.is_object()) Fail(doc_id, where, "expected an object");
  CheckKeys(j,
            {"id", "sentence", "start", "end", "head", "kind", "entity_id",
             "raw_types", "gold_labels"},
            doc_id, where + ".");
  Mention m;
  const std::string prefix = where + ".";
  m.id = RequireString(j, "id", doc_id, prefix);
  m.sentence = RequireInt(j, "sentence", doc_id, prefix);
  m.start = RequireInt(j, "start", doc_id, prefix);
  m.end = RequireInt(j, "end", doc_id, prefix);
  m.head = RequireInt(j, "head", doc_id, prefix);
  if (m.sentence < 0 ||
      m.sentence >= static_cast<int>(doc.sentences.size())) {
    Fail(doc_id, prefix + "sentence", "sentence index out of range");
  }
  const int length = static_cast<int>(doc.sentences[m.sentence].size());
  if (m.start < 0 || m.start >= m.end || m.end > length) {
    Fail(doc_id, prefix + "start", "span [" + std::to_string(m.start) + ", " +
                                       std::to_string(m.end) +
                                       ") out of range");
  }
  if (m.head < m.start || m.head >= m.end) {
    Fail(doc_id, prefix + "head", "head outside span");
  }
  std::string kind = RequireString(j, "kind", doc_id, prefix);
  try {
    m.kind = ParseMentionKind(kind);
  } catch (const Error &e) {
    Fail(doc_id, prefix + "kind", e.what());
  }
  if (auto it = j.find("entity_id"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) Fail(doc_id, prefix + "entity_id", "expected string");
    m.entity_id = it->get<std::string>();
  }
  if (auto it = j.find("raw_types"); it != j.end() && !it->is_null()) {
    for (std::string &t : StringArray(*it, doc_id, prefix + "raw_types")) {
      m.raw_types.insert(std::move(t));
    }
  }
  if (auto it = j.find("gold_labels"); it != j.end() && !it->is_null()) {
    std::vector<std::string> paths =
        StringArray(*it, doc_id, prefix + "gold_labels");
    LabelSet labels;
    for (const std::string &p : paths) {
      std::optional<LabelId> id = tax.Find(p);
      if (!id) Fail(doc_id, prefix + "gold_labels", "unknown label '" + p + "'");
      labels.insert(*id);
    }
    m.gold_labels = tax.Closure(labels);
  }
  return m;
}

json MentionToJson(const Mention &m, const Taxonomy &tax) {
  json j = {{"id", m.id},
            {"sentence", m.sentence},
            {"start", m.start},
            {"end", m.end},
            {"head", m.head},
            {"kind", MentionKindName(m.kind)}};
  if (m.entity_id) j["entity_id"] = *m.entity_id;
  if (!m.raw_types.empty()) j["raw_types"] = m.raw_types;
  if (m.gold_labels) j["gold_labels"] = tax.ToPaths(*m.gold_labels);
  return j;
}

}  // namespace

std::string_view MentionKindName(MentionKind kind) {
  return kKindNames[static_cast<int>(kind)];
}

MentionKind ParseMentionKind(std::string_view name) {
  for (size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<MentionKind>(i);
  }
  throw Error("unknown mention kind '" + std::string(name) + "'");
}

std::string_view SplitName(Split split) {
  return kSplitNames[static_cast<int>(split)];
}

Split ParseSplit(std::string_view name) {
  for (size_t i = 0; i < kSplitNames.size(); ++i) {
    if (kSplitNames[i] == name) return static_cast<Split>(i);
  }
  throw Error("unknown split '" + std::string(name) + "'");
}

bool IsKnownTopic(std::string_view topic) {
  return std::find(kTopics.begin(), kTopics.end(), topic) != kTopics.end();
}

Document ParseDocument(std::string_view record, const Taxonomy &tax) {
  json j = json::parse(record, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw Error("malformed JSON document record");
  if (!j.is_object()) throw Error("document record must be a JSON object");

  Document doc;
  auto id = j.find("id");
  if (id == j.end() || !id->is_string()) {
    throw Error("document record: field 'id': missing or not a string");
  }
  doc.id = id->get<std::string>();
  CheckKeys(j, {"id", "split", "sentences", "mentions", "topic"}, doc.id, "");

  std::string split = RequireString(j, "split", doc.id, "");
  try {
    doc.split = ParseSplit(split);
  } catch (const Error &e) {
    Fail(doc.id, "split", e.what());
  }

  const json &sentences = Require(j, "sentences", doc.id, "");
  if (!sentences.is_array()) Fail(doc.id, "sentences", "expected an array");
  for (size_t s = 0; s < sentences.size(); ++s) {
    const json &tokens = sentences[s];
    const std::string where = "sentences[" + std::to_string(s) + "]";
    if (!tokens.is_array()) Fail(doc.id, where, "expected an array");
    Sentence sentence;
    const int length = static_cast<int>(tokens.size());
    for (int t = 0; t < length; ++t) {
      sentence.push_back(ParseToken(tokens[t], doc.id,
                                    where + "[" + std::to_string(t) + "]",
                                    length, t));
    }
    doc.sentences.push_back(std::move(sentence));
  }

  const json &mentions = Require(j, "mentions", doc.id, "");
  if (!mentions.is_array()) Fail(doc.id, "mentions", "expected an array");
  for (size_t i = 0; i < mentions.size(); ++i) {
    doc.mentions.push_back(ParseMention(
        mentions[i], doc, tax, "mentions[" + std::to_string(i) + "]"));
  }

  if (auto it = j.find("topic"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) Fail(doc.id, "topic", "expected a string");
    std::string topic = it->get<std::string>();
    if (!IsKnownTopic(topic)) Fail(doc.id, "topic", "unknown topic '" + topic + "'");
    doc.topic = topic;
  }
  return doc;
}

std::string DocumentToRecord(const Document &doc, const Taxonomy &tax) {
  json sentences = json::array();
  for (const Sentence &sentence : doc.sentences) {
    json tokens = json::array();
    for (const Token &t : sentence) {
      tokens.push_back({{"text", t.text},
                        {"dep_head", t.dep_head < 0 ? json(nullptr)
                                                    : json(t.dep_head)},
                        {"dep_label", t.dep_label}});
    }
    sentences.push_back(std::move(tokens));
  }
  json mentions = json::array();
  for (const Mention &m : doc.mentions) mentions.push_back(MentionToJson(m, tax));
  json j = {{"id", doc.id},
            {"split", SplitName(doc.split)},
            {"sentences", std::move(sentences)},
            {"mentions", std::move(mentions)}};
  if (doc.topic) j["topic"] = *doc.topic;
  return j.dump();
}

std::vector<Document> LoadCorpus(std::istream &in, const Taxonomy &tax) {
  std::vector<Document> docs;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      docs.push_back(ParseDocument(line, tax));
    } catch (const Error &e) {
      throw ParseError(e.what(), line_number);
    }
  }
  return docs;
}

std::vector<Document> LoadCorpusFile(const std::string &filename,
                                     const Taxonomy &tax) {
  std::ifstream in(filename);
  if (!in) throw Error("cannot open corpus file '" + filename + "'");
  return LoadCorpus(in, tax);
}

void WriteCorpus(std::ostream &out, const std::vector<Document> &docs,
                 const Taxonomy &tax) {
  for (const Document &doc : docs) out << DocumentToRecord(doc, tax) << '\n';
}

CorpusStats ComputeCorpusStats(const std::vector<Document> &docs,
                               const Taxonomy &tax) {
  CorpusStats stats;
  stats.documents = static_cast<int>(docs.size());
  for (const Document &doc : docs) {
    stats.mentions += static_cast<int>(doc.mentions.size());
    for (const Mention &m : doc.mentions) {
      if (!m.gold_labels) continue;
      for (LabelId id : *m.gold_labels) {
        ++stats.labels;
        ++stats.labels_at_depth[tax.depth(id)];
      }
    }
  }
  return stats;
}

TypeMapping TypeMapping::Load(std::istream &in, const Taxonomy &tax) {
  TypeMapping mapping;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError("expected two tab-separated columns", line_number);
    }
    std::string label = line.substr(tab + 1);
    std::optional<LabelId> id = tax.Find(label);
    if (!id) {
      throw ParseError("unknown taxonomy label '" + label + "'", line_number);
    }
    mapping.Add(line.substr(0, tab), *id);
  }
  return mapping;
}

TypeMapping TypeMapping::LoadFile(const std::string &filename,
                                  const Taxonomy &tax) {
  std::ifstream in(filename);
  if (!in) throw Error("cannot open mapping file '" + filename + "'");
  return Load(in, tax);
}

void TypeMapping::Add(const std::string &external_id, LabelId label) {
  entries_[external_id] = label;
}

std::optional<LabelId> TypeMapping::Find(const std::string &external_id) const {
  auto it = entries_.find(external_id);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

MappedTypes MapRawTypes(const Mention &mention, const TypeMapping &mapping,
                        const Taxonomy &tax) {
  MappedTypes out;
  LabelSet direct;
  for (const std::string &raw : mention.raw_types) {
    if (std::optional<LabelId> id = mapping.Find(raw)) {
      direct.insert(*id);
    } else {
      ++out.skipped;
    }
  }
  out.labels = tax.Closure(direct);
  return out;
}

}  // namespace finetype
