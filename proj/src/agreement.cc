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

#include "finetype/agreement.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "finetype/error.h"
#include "finetype/format.h"
#include "json.hpp"

namespace finetype {

using json = nlohmann::json;

namespace {

// Most specific members: labels with no descendant in the set.
LabelSet Leaves(const LabelSet &labels, const Taxonomy &tax) {
  LabelSet out = labels;
  for (LabelId id : labels) {
    for (LabelId a = tax.parent(id); a != kNoLabel; a = tax.parent(a)) {
      out.erase(a);
    }
  }
  return out;
}

LabelSet Intersect(const LabelSet &a, const LabelSet &b) {
  LabelSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

}  // namespace

AnnotationRecord ParseAnnotation(std::string_view record, const Taxonomy &tax) {
  json j = json::parse(record, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error("malformed annotation record");
  }
  auto text = [&](const char *key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string() || it->get<std::string>().empty()) {
      throw Error(std::string("annotation field '") + key +
                  "' must be a non-empty string");
    }
    return it->get<std::string>();
  };
  AnnotationRecord r;
  r.annotator = text("annotator");
  r.document = text("document");
  r.mention = text("mention");
  auto labels = j.find("labels");
  if (labels == j.end() || !labels->is_array()) {
    throw Error("annotation field 'labels' must be an array");
  }
  LabelSet direct;
  for (const json &l : *labels) {
    if (!l.is_string()) throw Error("annotation labels must be strings");
    direct.insert(tax.Lookup(l.get<std::string>()));
  }
  r.labels = tax.Closure(direct);
  if (auto ts = j.find("timestamp"); ts != j.end()) {
    if (!ts->is_number_integer()) throw Error("annotation timestamp must be an integer");
    r.timestamp_ms = ts->get<long long>();
  }
  return r;
}

std::string AnnotationToRecord(const AnnotationRecord &record,
                               const Taxonomy &tax) {
  json j = {{"annotator", record.annotator},
            {"document", record.document},
            {"mention", record.mention},
            {"labels", tax.ToPaths(record.labels)},
            {"timestamp", record.timestamp_ms}};
  return j.dump();
}

std::map<MentionKey, std::vector<AnnotationRecord>> LatestByMention(
    const std::vector<AnnotationRecord> &records) {
  std::map<MentionKey, std::map<std::string, const AnnotationRecord *>> latest;
  for (const AnnotationRecord &r : records) {
    latest[{r.document, r.mention}][r.annotator] = &r;
  }
  std::map<MentionKey, std::vector<AnnotationRecord>> out;
  for (const auto &[key, by_annotator] : latest) {
    std::vector<AnnotationRecord> &group = out[key];
    for (const auto &[annotator, r] : by_annotator) group.push_back(*r);
  }
  return out;
}

LabelSet Consensus(const std::vector<AnnotationRecord> &records,
                   int min_support, const Taxonomy &tax) {
  if (min_support < 1) throw Error("min_support must be at least 1");
  std::map<std::string, LabelSet> by_annotator;
  for (const AnnotationRecord &r : records) {
    by_annotator[r.annotator] = tax.Closure(r.labels);
  }
  std::map<LabelId, int> support;
  for (const auto &[annotator, labels] : by_annotator) {
    for (LabelId id : labels) ++support[id];
  }
  LabelSet out;
  for (const auto &[id, count] : support) {
    if (count >= min_support) out.insert(id);
  }
  return out;
}

std::map<MentionKey, LabelSet> ConsensusByMention(
    const std::vector<AnnotationRecord> &records, int min_support,
    const Taxonomy &tax) {
  std::map<MentionKey, LabelSet> out;
  for (const auto &[key, group] : LatestByMention(records)) {
    out[key] = Consensus(group, min_support, tax);
  }
  return out;
}

double PrunedFraction(const std::vector<AnnotationRecord> &records,
                      const std::map<MentionKey, LabelSet> &consensus,
                      const Taxonomy &tax) {
  long applied = 0, kept = 0;
  for (const auto &[key, group] : LatestByMention(records)) {
    LabelSet all;
    for (const AnnotationRecord &r : group) {
      for (LabelId id : tax.Closure(r.labels)) all.insert(id);
    }
    applied += static_cast<long>(all.size());
    auto it = consensus.find(key);
    if (it != consensus.end()) kept += static_cast<long>(it->second.size());
  }
  return applied == 0 ? 0.0 : 1.0 - static_cast<double>(kept) / applied;
}

AgreementAtDepth AnnotatorAgreement(
    const std::vector<AnnotationRecord> &records,
    const std::map<MentionKey, LabelSet> &consensus, int depth,
    const Taxonomy &tax) {
  std::map<std::string, PrfCounts> counts;
  for (const auto &[key, group] : LatestByMention(records)) {
    auto it = consensus.find(key);
    const LabelSet empty;
    const LabelSet &gold = it == consensus.end() ? empty : it->second;
    for (const AnnotationRecord &r : group) {
      PrfCounts &c = counts[r.annotator];
      for (LabelId id : tax.Closure(r.labels)) {
        if (tax.depth(id) != depth) continue;
        ++c.predicted;
        if (gold.count(id)) ++c.correct;
      }
      for (LabelId id : gold) {
        if (tax.depth(id) == depth) ++c.gold;
      }
    }
  }
  AgreementAtDepth out;
  out.depth = depth;
  double p_sum = 0, r_sum = 0;
  int p_n = 0, r_n = 0;
  for (const auto &[annotator, c] : counts) {
    AnnotatorScore score{annotator, c, c.Score()};
    if (c.predicted > 0) {
      p_sum += score.prf.precision;
      ++p_n;
    }
    if (c.gold > 0) {
      r_sum += score.prf.recall;
      ++r_n;
    }
    out.annotators.push_back(score);
  }
  out.average.precision = p_n > 0 ? p_sum / p_n : 0.0;
  out.average.recall = r_n > 0 ? r_sum / r_n : 0.0;
  const double p = out.average.precision, r = out.average.recall;
  out.average.f1 = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  return out;
}

std::string_view DisagreementName(Disagreement kind) {
  return kind == Disagreement::kSpecificity ? "specificity" : "type";
}

Disagreement ClassifyDisagreement(LabelId a, LabelId b, const Taxonomy &tax) {
  if (a == b) throw Error("not a disagreement");
  if (tax.IsAncestor(a, b) || tax.IsAncestor(b, a)) {
    return Disagreement::kSpecificity;
  }
  return Disagreement::kType;
}

std::vector<DisagreementEntry> DisagreementTable(
    const std::vector<AnnotationRecord> &records,
    const std::map<MentionKey, LabelSet> &consensus, const Taxonomy &tax) {
  std::map<std::pair<LabelId, LabelId>, long> counts;
  for (const auto &[key, group] : LatestByMention(records)) {
    auto it = consensus.find(key);
    if (it == consensus.end()) continue;
    std::vector<LabelSet> leaves;
    for (const AnnotationRecord &r : group) {
      leaves.push_back(Leaves(Intersect(tax.Closure(r.labels), it->second), tax));
    }
    std::set<std::pair<LabelId, LabelId>> pairs;
    for (size_t a = 0; a < leaves.size(); ++a) {
      for (size_t b = a + 1; b < leaves.size(); ++b) {
        for (LabelId l1 : leaves[a]) {
          if (leaves[b].count(l1)) continue;
          for (LabelId l2 : leaves[b]) {
            if (leaves[a].count(l2) || l1 == l2) continue;
            pairs.insert({std::min(l1, l2), std::max(l1, l2)});
          }
        }
      }
    }
    for (const auto &p : pairs) ++counts[p];
  }
  std::vector<DisagreementEntry> out;
  for (const auto &[p, count] : counts) {
    out.push_back({p.first, p.second,
                   ClassifyDisagreement(p.first, p.second, tax), count});
  }
  std::sort(out.begin(), out.end(),
            [](const DisagreementEntry &x, const DisagreementEntry &y) {
              if (x.kind != y.kind) return x.kind == Disagreement::kSpecificity;
              if (x.count != y.count) return x.count > y.count;
              if (x.first != y.first) return x.first < y.first;
              return x.second < y.second;
            });
  return out;
}

std::string FormatAgreementTable(const std::vector<AgreementAtDepth> &rows) {
  std::ostringstream out;
  out << "Depth\tPrecision\tRecall\tF1\n";
  for (const AgreementAtDepth &row : rows) {
    out << row.depth << '\t' << FormatFixed(row.average.precision, 2) << '\t'
        << FormatFixed(row.average.recall, 2) << '\t'
        << FormatFixed(row.average.f1, 2) << '\n';
  }
  return out.str();
}

std::string FormatDisagreementTable(
    const std::vector<DisagreementEntry> &entries, const Taxonomy &tax,
    int top_n) {
  std::ostringstream out;
  out << "# pairs of most-specific consensus labels held by one annotator and "
         "not another, counted once per mention\n";
  for (Disagreement kind : {Disagreement::kSpecificity, Disagreement::kType}) {
    out << "[" << DisagreementName(kind) << "]\n";
    out << "Label 1\tLabel 2\tCount\n";
    int shown = 0;
    for (const DisagreementEntry &e : entries) {
      if (e.kind != kind || shown >= top_n) continue;
      // Shallower label first so specificity rows read parent, child.
      LabelId a = e.first, b = e.second;
      if (tax.depth(a) > tax.depth(b)) std::swap(a, b);
      out << tax.path(a) << '\t' << tax.path(b) << '\t' << e.count << '\n';
      ++shown;
    }
  }
  return out.str();
}

}  // namespace finetype
