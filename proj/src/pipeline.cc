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

#include "finetype/pipeline.h"

#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "finetype/error.h"
#include "finetype/format.h"
#include "json.hpp"

namespace finetype {

using json = nlohmann::json;

std::string QualifiedId(const Document &doc, const Mention &mention) {
  return doc.id + ":" + mention.id;
}

std::vector<std::string> MentionFeatures(const Mention &mention,
                                         const Document &doc,
                                         const FeatureResources &resources) {
  const std::string topic = ResolveTopic(doc, resources.topic_model);
  return ExtractFeatures(mention, doc, resources.clusters, topic,
                         resources.options);
}

std::vector<Document> FilterSplit(const std::vector<Document> &docs,
                                  Split split) {
  std::vector<Document> out;
  for (const Document &doc : docs) {
    if (doc.split == split) out.push_back(doc);
  }
  return out;
}

PrunedCorpus PruneCorpus(const std::vector<Document> &docs,
                         const TypeMapping &mapping, const Taxonomy &tax,
                         const PruningConfig &config,
                         const CoarseModel *coarse,
                         const FeatureResources &resources) {
  config.Validate();
  if (config.enable_coarse && coarse == nullptr) {
    throw Error("coarse pruning needs a coarse model");
  }
  PrunedCorpus result;
  for (const Document &doc : docs) {
    std::vector<LabelSet> mapped;
    std::vector<CoarseDistribution> dists;
    for (const Mention &m : doc.mentions) {
      mapped.push_back(MapRawTypes(m, mapping, tax).labels);
      if (config.enable_coarse) {
        const SparseFeatureVector x = Vectorize(
            MentionFeatures(m, doc, resources),
            static_cast<const FeatureDictionary &>(coarse->dictionary));
        dists.push_back(PredictCoarse(*coarse, x));
      }
    }
    PruningResult pruned = ApplyPruning(mapped, config, tax, dists);
    result.stats += pruned.stats;
    Document out = doc;
    out.mentions.clear();
    for (size_t i = 0; i < doc.mentions.size(); ++i) {
      if (pruned.labels[i].empty()) continue;
      Mention m = doc.mentions[i];
      m.gold_labels = pruned.labels[i];
      out.mentions.push_back(std::move(m));
    }
    result.documents.push_back(std::move(out));
  }
  return result;
}

std::string FormatPruningStats(const PruningStats &s) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-12s %10s %10s\n", "Heuristic",
                "Examples", "Labels");
  out << line;
  std::snprintf(line, sizeof(line), "%-12s %10ld %10ld\n", "None",
                s.instances_before, s.labels_before);
  out << line;
  std::snprintf(line, sizeof(line), "%-12s %10s %10ld\n", "Sibling", "-",
                -s.removed_sibling);
  out << line;
  std::snprintf(line, sizeof(line), "%-12s %10s %10ld\n", "Coarse", "-",
                -s.removed_coarse);
  out << line;
  std::snprintf(line, sizeof(line), "%-12s %10s %10ld\n", "Min-count", "-",
                -s.removed_min_count);
  out << line;
  std::snprintf(line, sizeof(line), "%-12s %10ld %10ld\n", "Pruned",
                s.instances_after, s.labels_after);
  out << line;
  std::snprintf(line, sizeof(line), "mentions %ld\n", s.mentions);
  out << line;
  return out.str();
}

CoarseModel TrainCoarseFromCorpus(const std::vector<Document> &docs,
                                  const Taxonomy &tax,
                                  const FeatureResources &resources,
                                  const TrainOptions &options) {
  FeatureDictionary dict;
  std::vector<CoarseInstance> instances;
  for (const Document &doc : docs) {
    for (const Mention &m : doc.mentions) {
      if (!m.gold_labels || m.gold_labels->empty()) continue;
      std::set<LabelId> roots;
      for (LabelId id : *m.gold_labels) roots.insert(tax.root_of(id));
      if (roots.size() != 1) continue;
      const int label = CoarseIndex(tax.path(*roots.begin()));
      if (label < 0) continue;
      instances.push_back(
          {Vectorize(MentionFeatures(m, doc, resources), dict), label});
    }
  }
  return TrainCoarse(instances, std::move(dict), options.l2,
                     options.optimizer);
}

ModelFile TrainTagger(const std::vector<Document> &docs, const Taxonomy &tax,
                      const FeatureResources &resources,
                      const TaggerConfig &config) {
  ModelFile model;
  model.kind = config.kind;
  model.taxonomy_fingerprint = tax.Fingerprint();
  std::vector<TrainingInstance> instances;
  for (const Document &doc : docs) {
    for (const Mention &m : doc.mentions) {
      if (!m.gold_labels || m.gold_labels->empty()) continue;
      instances.push_back(
          {Vectorize(MentionFeatures(m, doc, resources), model.dictionary),
           *m.gold_labels});
    }
  }
  if (instances.empty()) throw Error("no labeled mentions to train on");
  model.dictionary.Freeze();
  const int d = model.dictionary.size();
  for (LabelId id = 0; id < tax.size(); ++id) {
    model.classes.push_back(tax.path(id));
  }
  model.metadata["instances"] = std::to_string(instances.size());
  switch (config.kind) {
    case ModelKind::kLocal:
      model.local =
          TrainLocal(instances, tax, config.negatives, d, config.train);
      break;
    case ModelKind::kFlat: {
      FlatModel flat = TrainFlat(instances, tax, d, config.train);
      model.softmax = std::move(flat.softmax);
      model.metadata["l2"] = FormatDouble(flat.l2);
      std::string absent;
      for (LabelId id : flat.absent) {
        if (!absent.empty()) absent += ',';
        absent += std::to_string(id);
      }
      model.metadata["absent"] = absent.empty() ? "-" : absent;
      break;
    }
    case ModelKind::kCoarse:
      throw Error("use TrainCoarseFromCorpus for coarse models");
  }
  if (resources.topic_model != nullptr && resources.topic_model->trained()) {
    model.topic_model = *resources.topic_model;
  }
  return model;
}

std::vector<ScoredMention> ScoreCorpus(const ModelFile &model,
                                       const std::vector<Document> &docs,
                                       const FeatureResources &resources) {
  std::vector<ScoredMention> out;
  for (const Document &doc : docs) {
    for (const Mention &m : doc.mentions) {
      const SparseFeatureVector x =
          Vectorize(MentionFeatures(m, doc, resources), model.dictionary);
      out.push_back(
          {QualifiedId(doc, m), m.kind, PredictLabelProbabilities(model, x)});
    }
  }
  return out;
}

std::vector<PredictedMention> InferAll(const std::vector<ScoredMention> &scored,
                                       const Taxonomy &tax,
                                       InferenceStrategy strategy,
                                       double threshold) {
  std::vector<PredictedMention> out;
  out.reserve(scored.size());
  for (const ScoredMention &s : scored) {
    Prediction p = Infer(strategy, s.probabilities, tax, threshold);
    out.push_back({s.id, std::move(p.assigned), std::move(p.refined)});
  }
  return out;
}

std::vector<GoldMention> GoldMentions(const std::vector<Document> &docs) {
  std::vector<GoldMention> out;
  for (const Document &doc : docs) {
    for (const Mention &m : doc.mentions) {
      if (!m.gold_labels) continue;
      out.push_back({QualifiedId(doc, m), m.kind, *m.gold_labels});
    }
  }
  return out;
}

std::vector<PredictedMention> AlignPredictions(
    const std::vector<PredictedMention> &preds,
    const std::vector<GoldMention> &gold) {
  std::unordered_map<std::string, const PredictedMention *> by_id;
  for (const PredictedMention &p : preds) {
    if (!by_id.emplace(p.id, &p).second) {
      throw Error("duplicate prediction for mention '" + p.id + "'");
    }
  }
  std::vector<PredictedMention> out;
  out.reserve(gold.size());
  for (const GoldMention &g : gold) {
    auto it = by_id.find(g.id);
    if (it == by_id.end()) {
      throw Error("no prediction for mention '" + g.id + "'");
    }
    out.push_back(*it->second);
  }
  return out;
}

void WritePredictions(std::ostream &out,
                      const std::vector<PredictedMention> &preds,
                      const Taxonomy &tax) {
  for (const PredictedMention &p : preds) {
    json record;
    record["id"] = p.id;
    record["labels"] = tax.ToPaths(p.labels);
    json refined = json::object();
    for (LabelId id = 0; id < static_cast<LabelId>(p.refined.size()); ++id) {
      refined[tax.path(id)] = p.refined[id];
    }
    record["refined"] = std::move(refined);
    out << record.dump() << '\n';
  }
}

std::vector<PredictedMention> ReadPredictions(std::istream &in,
                                              const Taxonomy &tax) {
  std::vector<PredictedMention> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json record = json::parse(line);
      PredictedMention p;
      p.id = record.at("id").get<std::string>();
      p.labels = tax.Closure(
          tax.ToLabelSet(record.at("labels").get<std::vector<std::string>>()));
      if (record.contains("refined")) {
        p.refined.assign(tax.size(), 0.0);
        for (const auto &[path, value] : record.at("refined").items()) {
          p.refined[tax.Lookup(path)] = value.get<double>();
        }
      }
      out.push_back(std::move(p));
    } catch (const json::exception &e) {
      throw ParseError(e.what(), number);
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      throw ParseError(e.what(), number);
    }
  }
  return out;
}

}  // namespace finetype
