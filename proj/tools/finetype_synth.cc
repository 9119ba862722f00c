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

// Writes a synthetic distantly supervised corpus for experiments.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "finetype/error.h"
#include "finetype/synthetic.h"
#include "finetype/taxonomy.h"

int main(int argc, char **argv) {
  CLI::App app{"Generate a synthetic fine-type corpus"};
  std::string taxonomy_path;
  std::string out_dir;
  finetype::SyntheticOptions options;
  app.add_option("--taxonomy", taxonomy_path, "Taxonomy file")->required();
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--seed", options.seed, "Random seed");
  app.add_option("--train-docs", options.train_documents)
      ->check(CLI::PositiveNumber);
  app.add_option("--dev-docs", options.dev_documents)
      ->check(CLI::PositiveNumber);
  app.add_option("--test-docs", options.test_documents)
      ->check(CLI::PositiveNumber);
  app.add_option("--coarse-docs", options.coarse_documents)
      ->check(CLI::PositiveNumber);
  app.add_option("--entities-per-type", options.entities_per_type)
      ->check(CLI::PositiveNumber);
  app.add_option("--coarse-entities-per-type", options.coarse_entities_per_type)
      ->check(CLI::PositiveNumber);
  auto rate = [&](const char *name, double &value) {
    app.add_option(name, value)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  };
  rate("--spurious-rate", options.spurious_rate);
  rate("--extra-spurious-rate", options.extra_spurious_rate);
  rate("--incomplete-rate", options.incomplete_rate);
  rate("--unseen-share", options.unseen_share);
  rate("--focus-share", options.focus_share);
  rate("--focus-cue-rate", options.focus_cue_rate);
  rate("--cue-rate", options.cue_rate);
  rate("--root-cue-rate", options.root_cue_rate);
  rate("--shared-context-rate", options.shared_context_rate);
  rate("--title-rate", options.title_rate);
  app.add_flag("--gold-on-train", options.gold_on_train,
               "Also write context labels on training documents");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    const finetype::Taxonomy tax =
        finetype::Taxonomy::LoadFile(taxonomy_path);
    std::filesystem::create_directories(out_dir);
    const finetype::SyntheticData data =
        finetype::GenerateSynthetic(tax, options);
    finetype::WriteSynthetic(data, tax, out_dir);
    std::cout << "documents " << data.corpus.size() << "\nentities "
              << data.entities << "\nspurious " << data.spurious_entities
              << '\n';
  } catch (const std::exception &e) {
    std::cerr << "finetype-synth: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
