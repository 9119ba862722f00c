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

#include "finetype/synthetic.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "finetype/error.h"

namespace finetype {

namespace {

constexpr std::string_view kOnsets[] = {"b", "d", "f", "g", "k", "l", "m",
                                         "n", "p", "r", "s", "t", "v", "z",
                                         "br", "st", "tr", "gl", "sh"};
constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
constexpr std::string_view kAdverbs[] = {"meanwhile", "yesterday", "later",
                                          "today", "reportedly", "again"};
constexpr std::string_view kSubjects[] = {"officials", "critics", "they",
                                           "observers", "reporters"};

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  size_t Pick(size_t n) { return static_cast<size_t>(engine_() % n); }
  bool Chance(double p) {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p;
  }
  template <typename T>
  const T &From(const std::vector<T> &items) {
    return items[Pick(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

struct Entity {
  std::vector<std::string> name;
  std::vector<LabelId> types;  // primary type first
  std::vector<std::string> raw_types;
};

struct LabelCues {
  std::vector<std::string> verbs;
  std::vector<std::string> titles;
};

std::string RawTypeId(const std::string &path) { return "/kb/" + path; }

class Generator {
 public:
  Generator(const Taxonomy &tax, const SyntheticOptions &options)
      : tax_(tax), options_(options), rng_(options.seed) {
    for (LabelId id = 0; id < tax.size(); ++id) {
      if (tax.depth(id) >= 2) types_.push_back(id);
    }
    if (types_.empty()) throw Error("synthetic corpus needs depth-2 labels");
    cues_.resize(tax.size());
    for (LabelId id = 0; id < tax.size(); ++id) {
      for (int i = 0; i < 3; ++i) cues_[id].verbs.push_back(Word());
      for (int i = 0; i < 2; ++i) cues_[id].titles.push_back(Word());
      for (const auto *words : {&cues_[id].verbs, &cues_[id].titles}) {
        for (const std::string &w : *words) Cluster(w, id);
      }
      const std::string &path = tax.path(id);
      Cluster(path.substr(path.rfind('/') + 1), id);
    }
    for (int i = 0; i < 12; ++i) generic_verbs_.push_back(Word());
    for (size_t t = 0; t < kTopics.size(); ++t) {
      topic_words_.emplace_back();
      for (int i = 0; i < 25; ++i) topic_words_[t].push_back(Word());
    }
    // Each second-level subtree belongs to one topic.
    by_topic_.resize(kTopics.size());
    std::map<LabelId, size_t> branch_topic;
    for (LabelId id : types_) {
      LabelId branch = id;
      while (tax.depth(branch) > 2) branch = tax.parent(branch);
      auto [it, inserted] = branch_topic.emplace(branch, 0);
      if (inserted) it->second = rng_.Pick(kTopics.size());
      by_topic_[it->second].push_back(id);
    }
    for (size_t t = 0; t < kTopics.size(); ++t) {
      if (by_topic_[t].empty()) by_topic_[t] = types_;
    }
    for (LabelId id = 0; id < tax.size(); ++id) {
      data_.mapping.emplace_back(RawTypeId(tax.path(id)), tax.path(id));
    }
  }

  SyntheticData Run() {
    std::vector<Entity> entities, heldout_entities, fresh_entities;
    const Pool pool =
        MakePool(entities, /*counted=*/true, options_.entities_per_type);
    const Pool heldout = MakePool(heldout_entities, /*counted=*/false,
                                  options_.entities_per_type);
    const Pool fresh = MakePool(fresh_entities, /*counted=*/false,
                                options_.coarse_entities_per_type);
    const std::pair<Split, int> splits[] = {
        {Split::kTrain, options_.train_documents},
        {Split::kDev, options_.dev_documents},
        {Split::kTest, options_.test_documents}};
    for (const auto &[split, count] : splits) {
      for (int i = 0; i < count; ++i) {
        data_.corpus.push_back(MakeDocument(
            pool, split == Split::kTrain ? nullptr : &heldout, split, i,
            false));
      }
    }
    for (int i = 0; i < options_.coarse_documents; ++i) {
      data_.coarse_corpus.push_back(
          MakeDocument(fresh, nullptr, Split::kTrain, i, true));
    }
    for (const auto &[word, cluster] : clusters_) {
      data_.clusters.emplace_back(word, cluster);
    }
    return std::move(data_);
  }

 private:
  std::string Word() {
    for (;;) {
      std::string w;
      const int syllables = 2 + static_cast<int>(rng_.Pick(2));
      for (int i = 0; i < syllables; ++i) {
        w += kOnsets[rng_.Pick(std::size(kOnsets))];
        w += kVowels[rng_.Pick(std::size(kVowels))];
      }
      if (used_.insert(w).second) return w;
    }
  }

  std::string Capitalized() {
    std::string w = Word();
    w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
  }

  // Context words of the same second-level branch share a cluster most of
  // the time. Names fall into type-agnostic clusters.
  void Cluster(const std::string &word, LabelId type) {
    LabelId branch = type;
    while (tax_.depth(branch) > 2) branch = tax_.parent(branch);
    const long id = rng_.Chance(0.15) ? static_cast<long>(rng_.Pick(100))
                                      : static_cast<long>(branch);
    clusters_.emplace(word, std::to_string(id));
  }

  void NameCluster(const std::string &word) {
    clusters_.emplace(word, std::to_string(100 + rng_.Pick(20)));
  }

  LabelId SpuriousType(LabelId type) {
    const size_t kind = rng_.Pick(3);
    if (kind == 0) {
      std::vector<LabelId> siblings = tax_.Siblings(type);
      if (!siblings.empty()) return rng_.From(siblings);
    }
    if (kind <= 1) {
      std::vector<LabelId> other;
      for (LabelId id : types_) {
        if (tax_.root_of(id) != tax_.root_of(type)) other.push_back(id);
      }
      return rng_.From(other);
    }
    for (;;) {
      LabelId id = rng_.From(types_);
      if (id != type && !tax_.IsAncestor(id, type) &&
          !tax_.IsAncestor(type, id)) {
        return id;
      }
    }
  }

  // Entities indexed by each of their types. An entity with a second type
  // can appear in either role, and its contexts only cue the role it plays.
  using Pool = std::vector<std::vector<const Entity *>>;

  Pool MakePool(std::vector<Entity> &storage, bool counted, int per_type) {
    storage.reserve(types_.size() * per_type);
    for (LabelId type : types_) {
      for (int i = 0; i < per_type; ++i) {
        Entity e;
        e.types = {type};
        const LabelId root = tax_.root_of(type);
        const int length =
            tax_.path(root) == "person" ? 2 : 1 + static_cast<int>(rng_.Pick(2));
        for (int t = 0; t < length; ++t) {
          e.name.push_back(Capitalized());
          NameCluster(e.name.back());
        }
        const bool second = rng_.Chance(options_.spurious_rate);
        if (second) {
          e.types.push_back(SpuriousType(type));
          if (rng_.Chance(options_.extra_spurious_rate)) {
            const LabelId extra = SpuriousType(type);
            if (std::find(e.types.begin(), e.types.end(), extra) ==
                e.types.end()) {
              e.types.push_back(extra);
            }
          }
        }
        if (counted) {
          ++data_.entities;
          data_.spurious_entities += second;
        }
        e.raw_types = {"/common/topic"};
        for (LabelId t : e.types) e.raw_types.push_back(RawTypeId(tax_.path(t)));
        if (tax_.parent(type) != kNoLabel &&
            rng_.Chance(options_.incomplete_rate)) {
          e.raw_types[1] = RawTypeId(tax_.path(tax_.parent(type)));
        }
        std::sort(e.raw_types.begin(), e.raw_types.end());
        storage.push_back(std::move(e));
      }
    }
    Pool pool(tax_.size());
    for (const Entity &e : storage) {
      for (LabelId t : e.types) pool[t].push_back(&e);
    }
    return pool;
  }

  // Picks the label a mention's context will cue: the type itself or one of
  // its ancestors, or kNoLabel for an uninformative context.
  LabelId CuedLabel(LabelId type, bool focus) {
    const double rate = focus ? options_.focus_cue_rate : options_.cue_rate;
    if (!rng_.Chance(rate)) {
      return rng_.Chance(options_.root_cue_rate) ? tax_.root_of(type)
                                                 : kNoLabel;
    }
    std::vector<LabelId> chain = tax_.Ancestors(type);
    if (chain.empty() || rng_.Chance(0.8)) return type;
    return chain[rng_.Pick(chain.size())];
  }

  // Deepest label that is `type` or an ancestor of it and also lies on the
  // path of every other type of the entity under the same root.
  LabelId SharedAncestor(const std::vector<LabelId> &types, LabelId type) {
    std::vector<LabelId> chain = tax_.Ancestors(type);
    chain.push_back(type);
    for (size_t i = chain.size(); i-- > 0;) {
      bool shared = true;
      for (LabelId other : types) {
        if (tax_.root_of(other) != tax_.root_of(type)) continue;
        if (other != chain[i] && !tax_.IsAncestor(chain[i], other)) {
          shared = false;
        }
      }
      if (shared) return chain[i];
    }
    return tax_.root_of(type);
  }

  // Entities come from `heldout` instead of `pool` with the configured
  // probability when it is given.
  Document MakeDocument(const Pool &pool, const Pool *heldout, Split split,
                        int index,
                        bool coarse) {
    Document doc;
    char id[32];
    std::snprintf(id, sizeof(id), "%s-%04d",
                  coarse ? "coarse" : std::string(SplitName(split)).c_str(),
                  index);
    doc.id = id;
    doc.split = split;
    const size_t topic = rng_.Pick(kTopics.size());
    doc.topic = std::string(kTopics[topic]);
    std::vector<LabelId> focus = {rng_.From(by_topic_[topic]),
                                  rng_.From(by_topic_[topic])};
    const int n = 4 + static_cast<int>(rng_.Pick(4));
    std::set<const Entity *> chosen;
    struct Role {
      const Entity *entity;
      LabelId type;
      bool focus;
    };
    std::vector<Role> roles;
    for (int attempt = 0; static_cast<int>(roles.size()) < n && attempt < 50;
         ++attempt) {
      const bool in_focus = rng_.Chance(options_.focus_share);
      const LabelId type = in_focus ? rng_.From(focus) : rng_.From(types_);
      const Pool &source =
          heldout != nullptr && rng_.Chance(options_.unseen_share) ? *heldout
                                                                   : pool;
      if (source[type].empty()) continue;
      const Entity *e = rng_.From(source[type]);
      if (chosen.insert(e).second) roles.push_back({e, type, in_focus});
    }
    int mention_index = 0;
    for (const Role &role : roles) {
      const int count = rng_.Chance(0.35) ? 2 : 1;
      for (int c = 0; c < count; ++c) {
        AddMention(doc, *role.entity, role.type, role.focus, topic, c == 0,
                   split, coarse, mention_index++);
      }
    }
    return doc;
  }

  void AddMention(Document &doc, const Entity &e, LabelId type, bool focus,
                  size_t topic, bool first, Split split, bool coarse,
                  int index) {
    const LabelId root = tax_.root_of(type);
    LabelId cued = CuedLabel(type, focus);
    if (cued != kNoLabel && e.types.size() > 1 &&
        rng_.Chance(options_.shared_context_rate)) {
      cued = SharedAncestor(e.types, type);
    }
    LabelId supported = cued == kNoLabel ? root : cued;

    std::vector<std::string> words;
    MentionKind kind = MentionKind::kNamed;
    if (first || rng_.Chance(0.5)) {
      words = first ? e.name : std::vector<std::string>{e.name.back()};
    } else if (rng_.Chance(0.7)) {
      kind = MentionKind::kNominal;
      const std::string &path = tax_.path(supported);
      words = {"the", path.substr(path.rfind('/') + 1)};
    } else {
      kind = MentionKind::kPronominal;
      words = {tax_.path(root) == "person" ? (rng_.Chance(0.5) ? "he" : "she")
                                           : "it"};
      supported = root;
    }

    Sentence s;
    auto add = [&s](std::string text, int head, std::string label) {
      s.push_back({std::move(text), head, std::move(label)});
      return static_cast<int>(s.size()) - 1;
    };
    const std::string verb_text =
        (cued == kNoLabel || kind == MentionKind::kPronominal)
            ? rng_.From(generic_verbs_)
            : rng_.From(cues_[cued].verbs);
    // Heads that depend on later positions are patched below.
    const bool subject = rng_.Chance(0.7);
    int start = 0;
    int verb = 0;
    int title = -1;
    int adverb = -1;
    if (subject) {
      if (kind == MentionKind::kNamed && cued != kNoLabel &&
          rng_.Chance(options_.title_rate)) {
        title = add(rng_.From(cues_[cued].titles), -1, "compound");
      } else if (rng_.Chance(0.4)) {
        adverb = add(std::string(kAdverbs[rng_.Pick(std::size(kAdverbs))]),
                     -1, "advmod");
      }
      start = static_cast<int>(s.size());
      for (const std::string &w : words) add(w, -1, "");
      verb = add(verb_text, -1, "root");
    } else {
      const int subj = add(
          std::string(kSubjects[rng_.Pick(std::size(kSubjects))]), -1, "nsubj");
      verb = add(verb_text, -1, "root");
      s[subj].dep_head = verb;
      start = static_cast<int>(s.size());
      for (const std::string &w : words) add(w, -1, "");
    }
    const int end = start + static_cast<int>(words.size());
    const int head = end - 1;
    for (int t = start; t < head; ++t) {
      s[t].dep_head = head;
      s[t].dep_label = (kind == MentionKind::kNominal) ? "det" : "compound";
    }
    s[head].dep_head = verb;
    s[head].dep_label = subject ? "nsubj" : "dobj";
    if (title >= 0) s[title].dep_head = head;
    if (adverb >= 0) s[adverb].dep_head = verb;
    const int object_count = 1 + static_cast<int>(rng_.Pick(2));
    for (int i = 0; i < object_count; ++i) {
      add(rng_.From(topic_words_[topic]), verb, i == 0 ? "dobj" : "dep");
    }
    add(".", verb, "punct");

    Mention m;
    m.id = "m" + std::to_string(index);
    m.sentence = static_cast<int>(doc.sentences.size());
    m.start = start;
    m.end = end;
    m.head = head;
    m.kind = kind;
    m.entity_id = e.name.front() + "_" + e.name.back();
    // Gold holds only what the context supports.
    LabelSet gold = tax_.Closure({supported});
    if (coarse) {
      m.gold_labels = gold;
    } else {
      m.raw_types.insert(e.raw_types.begin(), e.raw_types.end());
      if (split != Split::kTrain || options_.gold_on_train) {
        m.gold_labels = gold;
      }
    }
    doc.sentences.push_back(std::move(s));
    doc.mentions.push_back(std::move(m));
  }

  const Taxonomy &tax_;
  SyntheticOptions options_;
  Rng rng_;
  SyntheticData data_;
  std::vector<LabelId> types_;
  std::vector<LabelCues> cues_;
  std::vector<std::string> generic_verbs_;
  std::vector<std::vector<std::string>> topic_words_;
  std::vector<std::vector<LabelId>> by_topic_;
  std::set<std::string> used_;
  std::map<std::string, std::string> clusters_;
};

}  // namespace

SyntheticData GenerateSynthetic(const Taxonomy &tax,
                                const SyntheticOptions &options) {
  return Generator(tax, options).Run();
}

TypeMapping SyntheticMapping(const SyntheticData &data, const Taxonomy &tax) {
  TypeMapping mapping;
  for (const auto &[raw, path] : data.mapping) mapping.Add(raw, tax.Lookup(path));
  return mapping;
}

ClusterMap SyntheticClusters(const SyntheticData &data) {
  ClusterMap clusters;
  for (const auto &[word, id] : data.clusters) clusters.Add(word, id);
  return clusters;
}

void WriteSynthetic(const SyntheticData &data, const Taxonomy &tax,
                    const std::string &directory) {
  auto open = [&directory](const std::string &name) {
    std::ofstream out(directory + "/" + name, std::ios::binary);
    if (!out) throw Error("cannot write '" + directory + "/" + name + "'");
    return out;
  };
  {
    std::ofstream out = open("corpus.jsonl");
    WriteCorpus(out, data.corpus, tax);
  }
  {
    std::ofstream out = open("coarse.jsonl");
    WriteCorpus(out, data.coarse_corpus, tax);
  }
  {
    std::ofstream out = open("mapping.tsv");
    for (const auto &[raw, path] : data.mapping) out << raw << '\t' << path << '\n';
  }
  {
    std::ofstream out = open("clusters.tsv");
    for (const auto &[word, id] : data.clusters) out << word << '\t' << id << '\n';
  }
}

}  // namespace finetype
