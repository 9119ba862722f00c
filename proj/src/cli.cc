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


#include "finetype/cli.h"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "finetype/agreement.h"
#include "finetype/annotation_store.h"
#include "finetype/error.h"
#include "finetype/format.h"
#include "finetype/model_io.h"
#include "finetype/pipeline.h"
#include "finetype/server.h"
#include "json.hpp"

namespace finetype {
namespace {

// Raised for flag combinations CLI11 cannot express; reported like any other
// usage error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string taxonomy;
  std::string corpus;
  std::string mapping;
  std::string clusters;
  std::string out = "-";
  std::string split;
  std::string format = "tree";

  bool sibling = false;
  bool coarse = false;
  bool min_count = false;
  bool all_heuristics = false;
  int min_count_k = 2;
  std::string coarse_model;

  std::string model_kind = "local";
  std::string negatives;
  double l2 = 1.0;
  int threads = 1;
  int max_iterations = 500;
  std::string topic_labels;

  std::string model;
  std::string inference = "marginal";
  double threshold = 0.5;

  std::string predictions;
  double step = 0.01;
  std::string kinds = "named,nominal";
  bool per_level = false;
  bool auc = false;

  std::string annotations;
  int min_support = 2;
  int top = 5;

  std::string store = "annotations.jsonl";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string ui_dir;
};

// Writes to a file or, for "-", to `out`. File output is written in full
// before the stream is closed so a failed run leaves no partial success.
void Emit(const std::string &target, const std::string &text,
          std::ostream &out) {
  if (target == "-") {
    out << text;
    return;
  }
  std::ofstream file(target, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot open " + target + " for writing");
  file << text;
  file.close();
  if (!file) throw Error("cannot write " + target);
}

Split SplitOrThrow(const std::string &name) {
  try {
    return ParseSplit(name);
  } catch (const Error &) {
    throw UsageError("--split must be train, dev, test or all");
  }
}

std::vector<Document> SelectSplit(const std::vector<Document> &docs,
                                  const std::string &split) {
  if (split == "all") return docs;
  return FilterSplit(docs, SplitOrThrow(split));
}

KindFilter ParseKinds(const std::string &text) {
  KindFilter kinds;
  std::stringstream in(text);
  std::string name;
  while (std::getline(in, name, ',')) {
    try {
      kinds.insert(ParseMentionKind(name));
    } catch (const Error &) {
      throw UsageError("--kinds takes named, nominal and pronominal");
    }
  }
  if (kinds.empty()) throw UsageError("--kinds must name at least one kind");
  return kinds;
}

FeatureResources LoadResources(const Options &o) {
  FeatureResources r;
  if (!o.clusters.empty()) r.clusters = ClusterMap::LoadFile(o.clusters);
  return r;
}

std::optional<TopicModel> FitTopicModel(const std::vector<Document> &docs,
                                        const std::string &labels_file) {
  std::map<std::string, std::string> labels;
  if (!labels_file.empty()) {
    std::ifstream in(labels_file);
    if (!in) throw Error("cannot open " + labels_file);
    labels = LoadTopicLabels(in);
  }
  std::vector<TopicModel::Example> examples;
  for (const Document &doc : docs) {
    auto it = labels.find(doc.id);
    if (it != labels.end()) {
      examples.push_back({DocumentWords(doc), it->second});
    } else if (doc.topic) {
      examples.push_back({DocumentWords(doc), *doc.topic});
    }
  }
  if (examples.empty()) return std::nullopt;
  return TopicModel::Train(examples);
}

int CmdTaxonomy(const Options &o, std::ostream &out) {
  const Taxonomy tax = Taxonomy::LoadFile(o.taxonomy);
  std::ostringstream text;
  if (o.format == "paths") {
    text << tax.Serialize();
  } else if (o.format == "json") {
    nlohmann::json labels = nlohmann::json::array();
    for (LabelId id = 0; id < tax.size(); ++id) {
      labels.push_back({{"path", tax.path(id)}, {"depth", tax.depth(id)}});
    }
    text << nlohmann::json{{"labels", labels}}.dump() << '\n';
  } else {
    std::vector<LabelId> stack(tax.roots().rbegin(), tax.roots().rend());
    while (!stack.empty()) {
      const LabelId id = stack.back();
      stack.pop_back();
      const std::vector<std::string> parts = SplitLabelPath(tax.path(id));
      text << std::string(2 * (tax.depth(id) - 1), ' ') << parts.back() << '\n';
      const auto &kids = tax.children(id);
      stack.insert(stack.end(), kids.rbegin(), kids.rend());
    }
    text << "# labels=" << tax.size() << " depth=" << tax.max_depth() << '\n';
  }
  Emit(o.out, text.str(), out);
  return kExitOk;
}

int CmdPrune(const Options &o, std::ostream &out) {
  const Taxonomy tax = Taxonomy::LoadFile(o.taxonomy);
  const TypeMapping mapping = TypeMapping::LoadFile(o.mapping, tax);
  const std::vector<Document> docs =
      SelectSplit(LoadCorpusFile(o.corpus, tax), o.split.empty() ? "train" : o.split);
  PruningConfig config;
  config.enable_sibling = o.sibling || o.all_heuristics;
  config.enable_coarse = o.coarse || o.all_heuristics;
  config.enable_min_count = o.min_count || o.all_heuristics;
  config.min_count = o.min_count_k;
  config.Validate();
  FeatureResources resources = LoadResources(o);
  std::optional<CoarseModel> coarse;
  std::optional<TopicModel> topic;
  if (config.enable_coarse) {
    ModelFile file = ReadModelFile(o.coarse_model, nullptr);
    topic = file.topic_model;
    coarse = ToCoarse(std::move(file));
    if (topic) resources.topic_model = &*topic;
  }
  const PrunedCorpus pruned = PruneCorpus(docs, mapping, tax, config,
                                          coarse ? &*coarse : nullptr, resources);
  std::ostringstream corpus;
  WriteCorpus(corpus, pruned.documents, tax);
  Emit(o.out, corpus.str(), out);
  out << FormatPruningStats(pruned.stats);
  return kExitOk;
}

int CmdTrain(const Options &o, std::ostream &out) {
  const ModelKind kind = ParseModelKind(o.model_kind);
  const std::string split = o.split.empty() ? "train" : o.split;
  const Taxonomy tax = Taxonomy::LoadFile(o.taxonomy);
  const std::vector<Document> docs = SelectSplit(LoadCorpusFile(o.corpus, tax), split);
  FeatureResources resources = LoadResources(o);
  std::optional<TopicModel> topic = FitTopicModel(docs, o.topic_labels);
  if (topic) resources.topic_model = &*topic;
  if (kind == ModelKind::kCoarse) {
    TrainOptions train;
    train.l2 = o.l2;
    train.optimizer.max_iterations = o.max_iterations;
    ModelFile model = FromCoarse(TrainCoarseFromCorpus(docs, tax, resources, train));
    model.topic_model = topic;
    std::ostringstream text;
    WriteModel(text, model);
    Emit(o.out, text.str(), out);
    return kExitOk;
  }
  TaggerConfig config;
  config.kind = kind;
  if (!o.negatives.empty()) config.negatives = ParseNegativeStrategy(o.negatives);
  config.train.l2 = o.l2;
  config.train.threads = o.threads;
  config.train.optimizer.max_iterations = o.max_iterations;
  const ModelFile model = TrainTagger(docs, tax, resources, config);
  std::ostringstream text;
  WriteModel(text, model);
  Emit(o.out, text.str(), out);
  return kExitOk;
}

int CmdPredict(const Options &o, std::ostream &out) {
  const Taxonomy tax = Taxonomy::LoadFile(o.taxonomy);
  const ModelFile model = ReadModelFile(o.model, &tax);
  if (model.kind == ModelKind::kCoarse) {
    throw Error("coarse models only drive pruning; use a local or flat model");
  }
  const std::vector<Document> docs =
      SelectSplit(LoadCorpusFile(o.corpus, tax), o.split.empty() ? "test" : o.split);
  FeatureResources resources = LoadResources(o);
  if (model.topic_model) resources.topic_model = &*model.topic_model;
  const std::vector<PredictedMention> preds =
      InferAll(ScoreCorpus(model, docs, resources), tax,
               ParseInferenceStrategy(o.inference), o.threshold);
  std::ostringstream text;
  WritePredictions(text, preds, tax);
  Emit(o.out, text.str(), out);
  return kExitOk;
}

std::vector<PredictedMention> LoadPredictions(const std::string &filename,
                                              const Taxonomy &tax) {
  std::ifstream in(filename);
  if (!in) throw Error("cannot open " + filename);
  try {
    return ReadPredictions(in, tax);
  } catch (const ParseError &e) {
    throw Error(filename + ": " + e.what());
  }
}

int CmdTuneThreshold(const Options &o, std::ostream &out) {
  const Taxonomy tax = Taxonomy::LoadFile(o.taxonomy);
  const std::vector<GoldMention> gold = GoldMentions(
      SelectSplit(LoadCorpusFile(o.corpus, tax), o.split.empty() ? "dev" : o.split));
  const std::vector<PredictedMention> preds =
      AlignPredictions(LoadPredictions(o.predictions, tax), gold);
  const ThresholdChoice choice =
      TuneThreshold(preds, gold, tax, o.step, ParseKinds(o.kinds));
  std::ostringstream text;
  text << "threshold\t" << FormatFixed(choice.threshold, 6) << '\n'
       << "f1\t" << FormatFixed(100.0 * choice.f1, 2) << '\n';
  for (const std::string &w : choice.warnings) text << "# warning: " << w << '\n';
  Emit(o.out, text.str(), out);
  return kExitOk;
}

int CmdEvaluate(const Options &o, std::ostream &out) {
  const Taxonomy tax = Taxonomy::LoadFile(o.taxonomy);
  const std::vector<GoldMention> gold = GoldMentions(
      SelectSplit(LoadCorpusFile(o.corpus, tax), o.split.empty() ? "test" : o.split));
  const std::vector<PredictedMention> preds =
      AlignPredictions(LoadPredictions(o.predictions, tax), gold);
  const KindFilter kinds = ParseKinds(o.kinds);
  EvalReport report = MicroPrf(preds, gold, tax, kinds);
  if (o.auc) report.auc = PrCurveAuc(preds, gold, tax, kinds).auc;
  Emit(o.out, FormatReport(report, o.per_level, o.auc), out);
  return kExitOk;
}

int CmdAgreement(const Options &o, std::ostream &out) {
  const Taxonomy tax = Taxonomy::LoadFile(o.taxonomy);
  std::ifstream probe(o.annotations);
  if (!probe) throw Error("cannot open " + o.annotations);
  const std::vector<AnnotationRecord> records =
      ReadAnnotationLog(o.annotations, tax);
  const auto consensus = ConsensusByMention(records, o.min_support, tax);
  std::vector<AgreementAtDepth> rows;
  for (int depth = 1; depth <= tax.max_depth(); ++depth) {
    rows.push_back(AnnotatorAgreement(records, consensus, depth, tax));
  }
  std::ostringstream text;
  long labelled = 0;
  for (const auto &[key, labels] : consensus) labelled += !labels.empty();
  text << "# mentions=" << consensus.size() << " with_consensus=" << labelled
       << " min_support=" << o.min_support << " pruned_fraction="
       << FormatFixed(PrunedFraction(records, consensus, tax), 4) << '\n';
  text << FormatAgreementTable(rows);
  text << FormatDisagreementTable(DisagreementTable(records, consensus, tax),
                                  tax, o.top);
  Emit(o.out, text.str(), out);
  return kExitOk;
}

int CmdServe(const Options &o, std::ostream &out) {
  const Taxonomy tax = Taxonomy::LoadFile(o.taxonomy);
  std::vector<Document> docs = LoadCorpusFile(o.corpus, tax);
  AnnotationStore store(ResolveStorePath(o.store), tax);
  AnnotationService service(tax, std::move(docs), store);
  ServeOptions options;
  options.host = o.host;
  options.port = o.port;
  options.ui_dir = o.ui_dir;
  Server server(service, options);
  const int port = server.Bind();
  out << "serving http://" << o.host << ':' << port << " store="
      << store.filename() << std::endl;
  server.Run();
  return kExitOk;
}

void CheckCombinations(const std::string &command, const Options &o,
                       const CLI::App &sub) {
  auto given = [&](const char *name) { return sub.count(name) > 0; };
  if (command == "prune") {
    if (o.out == "-") throw UsageError("prune writes the pruned corpus to --out");
    const bool coarse = o.coarse || o.all_heuristics;
    if (coarse && o.coarse_model.empty()) {
      throw UsageError("coarse pruning needs --coarse-model");
    }
    if (!coarse && given("--coarse-model")) {
      throw UsageError("--coarse-model is only used with --coarse or --all");
    }
    if (given("--min-count-k") && !o.min_count && !o.all_heuristics) {
      throw UsageError("--min-count-k is only used with --min-count or --all");
    }
  }
  if (command == "train") {
    if (o.model_kind != "local" && given("--negatives")) {
      throw UsageError("--negatives applies only to --model local");
    }
    if (o.model_kind == "coarse" && given("--threads")) {
      throw UsageError("--threads applies only to --model local");
    }
  }
}

}  // namespace

int RunCli(int argc, const char *const *argv, std::ostream &out,
           std::ostream &err) {
  Options o;
  CLI::App app{"Fine-grained entity type tagging toolkit", "finetype"};
  app.require_subcommand(1);
  app.fallthrough(false);

  auto add_taxonomy = [&](CLI::App *sub) {
    sub->add_option("--taxonomy", o.taxonomy, "Label tree, one path per line")
        ->required()
        ->check(CLI::ExistingFile);
  };
  auto add_corpus = [&](CLI::App *sub) {
    sub->add_option("--corpus", o.corpus, "Corpus in JSON lines")
        ->required()
        ->check(CLI::ExistingFile);
  };
  auto add_out = [&](CLI::App *sub, const char *what) {
    sub->add_option("--out,-o", o.out, what)->capture_default_str();
  };
  auto add_split = [&](CLI::App *sub, const char *fallback) {
    sub->add_option("--split", o.split,
                    std::string("train, dev, test or all (default ") + fallback + ")")
        ->check(CLI::IsMember({"train", "dev", "test", "all"}));
  };
  auto add_clusters = [&](CLI::App *sub) {
    sub->add_option("--clusters", o.clusters, "Word clusters, word<TAB>cluster")
        ->check(CLI::ExistingFile);
  };
  auto add_kinds = [&](CLI::App *sub) {
    sub->add_option("--kinds", o.kinds, "Mention kinds to score")
        ->capture_default_str();
  };

  CLI::App *taxonomy = app.add_subcommand("taxonomy", "Validate and print a taxonomy");
  add_taxonomy(taxonomy);
  taxonomy->add_option("--format", o.format, "tree, paths or json")
      ->check(CLI::IsMember({"tree", "paths", "json"}))
      ->capture_default_str();
  add_out(taxonomy, "Output file");

  CLI::App *prune = app.add_subcommand("prune", "Map knowledge-base types and prune training labels");
  add_taxonomy(prune);
  add_corpus(prune);
  prune->add_option("--mapping", o.mapping, "Type mapping, external<TAB>path")
      ->required()
      ->check(CLI::ExistingFile);
  add_clusters(prune);
  add_split(prune, "train");
  prune->add_flag("--sibling", o.sibling, "Sibling pruning");
  prune->add_flag("--coarse", o.coarse, "Coarse type pruning");
  prune->add_flag("--min-count", o.min_count, "Minimum count pruning");
  prune->add_flag("--all", o.all_heuristics, "All three heuristics");
  prune->add_option("--min-count-k", o.min_count_k, "Minimum mentions per label and document")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  prune->add_option("--coarse-model", o.coarse_model, "Coarse classifier model file")
      ->check(CLI::ExistingFile);
  add_out(prune, "Pruned corpus");

  CLI::App *train = app.add_subcommand("train", "Train a tagger or the coarse classifier");
  add_taxonomy(train);
  add_corpus(train);
  add_clusters(train);
  add_split(train, "train");
  train->add_option("--model", o.model_kind, "local, flat or coarse")
      ->check(CLI::IsMember({"local", "flat", "coarse"}))
      ->capture_default_str();
  train->add_option("--negatives", o.negatives, "all, sibling or depth (default depth)")
      ->check(CLI::IsMember({"all", "sibling", "depth"}));
  train->add_option("--l2,--lambda", o.l2, "L2 regularization strength")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--threads", o.threads, "Parallel label models")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  train->add_option("--max-iterations", o.max_iterations, "Optimizer iteration cap")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  train->add_option("--topic-labels", o.topic_labels,
                    "document<TAB>topic labels for the topic classifier")
      ->check(CLI::ExistingFile);
  add_out(train, "Model file");

  CLI::App *predict = app.add_subcommand("predict", "Tag mentions with a trained model");
  add_taxonomy(predict);
  add_corpus(predict);
  add_clusters(predict);
  add_split(predict, "test");
  predict->add_option("--model", o.model, "Model file")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--inference", o.inference, "independent, conditional or marginal")
      ->check(CLI::IsMember({"independent", "conditional", "marginal"}))
      ->capture_default_str();
  predict->add_option("--threshold", o.threshold, "Decision threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  add_out(predict, "Predictions in JSON lines");

  CLI::App *tune = app.add_subcommand("tune-threshold", "Pick the F1-maximizing threshold");
  add_taxonomy(tune);
  add_corpus(tune);
  add_split(tune, "dev");
  tune->add_option("--predictions", o.predictions, "Predictions with probabilities")
      ->required()
      ->check(CLI::ExistingFile);
  tune->add_option("--step", o.step, "Grid step")
      ->check(CLI::Range(1e-6, 0.5))
      ->capture_default_str();
  add_kinds(tune);
  add_out(tune, "Output file");

  CLI::App *evaluate = app.add_subcommand("evaluate", "Score predictions against gold labels");
  add_taxonomy(evaluate);
  add_corpus(evaluate);
  add_split(evaluate, "test");
  evaluate->add_option("--predictions", o.predictions, "Predictions file")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_flag("--per-level", o.per_level, "Also report each taxonomy level");
  evaluate->add_flag("--auc", o.auc, "Also report the area under the PR curve");
  add_kinds(evaluate);
  add_out(evaluate, "Report file");

  CLI::App *agreement = app.add_subcommand("agreement", "Consensus and annotator agreement");
  add_taxonomy(agreement);
  agreement->add_option("--annotations", o.annotations, "Annotation log")
      ->required();
  agreement->add_option("--min-support", o.min_support, "Annotators needed for consensus")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  agreement->add_option("--top", o.top, "Disagreement pairs listed per section")
      ->check(CLI::Range(0, 1000))
      ->capture_default_str();
  add_out(agreement, "Report file");

  CLI::App *serve = app.add_subcommand("serve", "Serve the annotation API");
  add_taxonomy(serve);
  add_corpus(serve);
  serve->add_option("--store", o.store,
                    std::string("Annotation log; ") + kStoreEnvVar + " overrides it")
      ->capture_default_str();
  serve->add_option("--host", o.host, "Listen address")->capture_default_str();
  serve->add_option("--port", o.port, "Listen port, 0 for any free port")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  serve->add_option("--ui-dir", o.ui_dir, "Built annotation UI assets")
      ->check(CLI::ExistingDirectory);

  std::string command;
  try {
    app.parse(argc, argv);
    for (CLI::App *sub : app.get_subcommands()) command = sub->get_name();
    CheckCombinations(command, o, *app.get_subcommand(command));
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  } catch (const UsageError &e) {
    err << "finetype " << command << ": " << e.what() << '\n';
    err << app.get_subcommand(command)->help();
    return kExitUsage;
  }

  try {
    if (command == "taxonomy") return CmdTaxonomy(o, out);
    if (command == "prune") return CmdPrune(o, out);
    if (command == "train") return CmdTrain(o, out);
    if (command == "predict") return CmdPredict(o, out);
    if (command == "tune-threshold") return CmdTuneThreshold(o, out);
    if (command == "evaluate") return CmdEvaluate(o, out);
    if (command == "agreement") return CmdAgreement(o, out);
    if (command == "serve") return CmdServe(o, out);
  } catch (const UsageError &e) {
    err << "finetype " << command << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "finetype " << command << ": " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace finetype
