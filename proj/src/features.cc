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

#include "finetype/features.h"

#include <algorithm>
#include <fstream>
#include <istream>

#include "finetype/error.h"

namespace finetype {

namespace {

char ShapeClass(char c) {
  if (c >= 'A' && c <= 'Z') return 'A';
  if (c >= 'a' && c <= 'z') return 'a';
  if (c >= '0' && c <= '9') return '0';
  return c;
}

bool Collapsible(char c) { return c == 'A' || c == 'a' || c == '0'; }

char AsciiLower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

std::optional<int> FeatureDictionary::Find(std::string_view feature) const {
  auto it = ids_.find(std::string(feature));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

int FeatureDictionary::Add(const std::string &feature) {
  auto it = ids_.find(feature);
  if (it != ids_.end()) return it->second;
  if (frozen_) throw Error("feature dictionary is frozen");
  const int id = size();
  ids_.emplace(feature, id);
  names_.push_back(feature);
  return id;
}

SparseFeatureVector Vectorize(const std::vector<std::string> &features,
                              FeatureDictionary &dict) {
  if (dict.frozen()) {
    return Vectorize(features, static_cast<const FeatureDictionary &>(dict));
  }
  SparseFeatureVector v;
  for (const std::string &f : features) v.indices.push_back(dict.Add(f));
  std::sort(v.indices.begin(), v.indices.end());
  v.indices.erase(std::unique(v.indices.begin(), v.indices.end()),
                  v.indices.end());
  return v;
}

SparseFeatureVector Vectorize(const std::vector<std::string> &features,
                              const FeatureDictionary &dict) {
  SparseFeatureVector v;
  for (const std::string &f : features) {
    if (std::optional<int> id = dict.Find(f)) v.indices.push_back(*id);
  }
  std::sort(v.indices.begin(), v.indices.end());
  v.indices.erase(std::unique(v.indices.begin(), v.indices.end()),
                  v.indices.end());
  return v;
}

ClusterMap ClusterMap::Load(std::istream &in) {
  ClusterMap map;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw ParseError("expected 'word<TAB>cluster'", line_number);
    }
    map.Add(line.substr(0, tab), line.substr(tab + 1));
  }
  return map;
}

ClusterMap ClusterMap::LoadFile(const std::string &filename) {
  std::ifstream in(filename);
  if (!in) throw Error("cannot open cluster file '" + filename + "'");
  return Load(in);
}

void ClusterMap::Add(const std::string &word, const std::string &cluster) {
  clusters_[word] = cluster;
}

const std::string *ClusterMap::Find(const std::string &word) const {
  auto it = clusters_.find(word);
  return it == clusters_.end() ? nullptr : &it->second;
}

std::string WordShape(std::string_view word) {
  if (word.empty()) throw Error("word shape of an empty word");
  std::string shape;
  for (char c : word) {
    char cls = ShapeClass(c);
    if (Collapsible(cls) && !shape.empty() && shape.back() == cls) continue;
    shape += cls;
  }
  return shape;
}

std::string PhraseShape(const std::vector<std::string> &words) {
  std::string out;
  for (const std::string &w : words) {
    if (!out.empty()) out += ' ';
    out += WordShape(w);
  }
  return out;
}

std::vector<std::string> CharTrigrams(std::string_view head) {
  if (head.empty()) throw Error("character trigrams of an empty word");
  std::string padded = ":";
  for (char c : head) padded += AsciiLower(c);
  padded += ':';
  std::vector<std::string> out;
  for (size_t i = 0; i + 3 <= padded.size(); ++i) {
    out.push_back(padded.substr(i, 3));
  }
  return out;
}

bool HasKnownNamespace(std::string_view feature) {
  for (std::string_view ns : kFeatureNamespaces) {
    if (feature.substr(0, ns.size()) == ns) return true;
  }
  return false;
}

std::vector<std::string> ExtractFeatures(const Mention &mention,
                                         const Document &doc,
                                         const ClusterMap &clusters,
                                         std::string_view topic,
                                         const FeatureOptions &options) {
  if (mention.sentence < 0 ||
      mention.sentence >= static_cast<int>(doc.sentences.size())) {
    throw Error("mention '" + mention.id + "' has no sentence in document '" +
                doc.id + "'");
  }
  const Sentence &sentence = doc.sentences[mention.sentence];
  const int length = static_cast<int>(sentence.size());
  if (mention.start < 0 || mention.start >= mention.end ||
      mention.end > length || mention.head < mention.start ||
      mention.head >= mention.end) {
    throw Error("mention '" + mention.id + "' has an invalid span");
  }
  const Token &head = sentence[mention.head];
  if (head.text.empty()) throw Error("mention '" + mention.id + "' has an empty head");

  std::vector<std::string> features;
  features.push_back("HEAD:" + head.text);
  std::vector<std::string> words;
  for (int i = mention.start; i < mention.end; ++i) {
    words.push_back(sentence[i].text);
    if (i != mention.head) features.push_back("NONHEAD:" + sentence[i].text);
  }
  if (const std::string *cluster = clusters.Find(head.text)) {
    features.push_back("CLUSTER:" + *cluster);
  }
  for (std::string &g : CharTrigrams(head.text)) {
    features.push_back("TRIGRAM:" + g);
  }
  features.push_back("SHAPE:" + PhraseShape(words));
  if (!head.dep_label.empty()) features.push_back("ROLE:" + head.dep_label);
  for (int i = std::max(0, mention.start - options.context_window);
       i < mention.start; ++i) {
    features.push_back("CONTEXT:B:" + sentence[i].text);
  }
  for (int i = mention.end;
       i < std::min(length, mention.end + options.context_window); ++i) {
    features.push_back("CONTEXT:A:" + sentence[i].text);
  }
  if (head.dep_head >= 0 && head.dep_head < length) {
    features.push_back("PARENT:" + sentence[head.dep_head].text);
  }
  if (!topic.empty()) features.push_back("TOPIC:" + std::string(topic));
  return features;
}

}  // namespace finetype
