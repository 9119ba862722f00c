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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "finetype/cli.h"
#include "finetype/error.h"
#include "finetype/features.h"
#include "finetype/inference.h"
#include "finetype/pruning.h"
#include "finetype/taxonomy.h"

namespace py = pybind11;

namespace finetype {
namespace {

std::vector<std::string> Paths(const Taxonomy &tax, const LabelSet &labels) {
  return tax.ToPaths(labels);
}

std::vector<double> ProbabilityVector(const Taxonomy &tax,
                                      const std::map<std::string, double> &probs) {
  std::vector<double> out(tax.size(), 0.0);
  for (const auto &[path, p] : probs) out[tax.Lookup(path)] = p;
  return out;
}

py::tuple InferPaths(const Taxonomy &tax, const std::map<std::string, double> &probs,
                     const std::string &strategy, double threshold) {
  const Prediction p = Infer(ParseInferenceStrategy(strategy),
                             ProbabilityVector(tax, probs), tax, threshold);
  std::map<std::string, double> refined;
  for (LabelId id = 0; id < tax.size(); ++id) refined[tax.path(id)] = p.refined[id];
  return py::make_tuple(Paths(tax, p.assigned), refined);
}

std::vector<std::vector<std::string>> PrunePaths(
    const Taxonomy &tax, const std::vector<std::vector<std::string>> &mapped,
    const std::optional<std::vector<std::vector<double>>> &coarse, bool sibling,
    bool coarse_pruning, bool min_count, int k) {
  std::vector<LabelSet> sets;
  for (const auto &labels : mapped) sets.push_back(tax.Closure(tax.ToLabelSet(labels)));
  std::vector<CoarseDistribution> dists;
  if (coarse) {
    for (const auto &d : *coarse) {
      if (d.size() != kCoarseTypes.size()) {
        throw Error("coarse distributions need one value per coarse type");
      }
      CoarseDistribution dist{};
      std::copy(d.begin(), d.end(), dist.begin());
      dists.push_back(dist);
    }
  }
  PruningConfig config;
  config.enable_sibling = sibling;
  config.enable_coarse = coarse_pruning;
  config.enable_min_count = min_count;
  config.min_count = k;
  config.Validate();
  const PruningResult result = ApplyPruning(sets, config, tax, dists);
  std::vector<std::vector<std::string>> out;
  for (const LabelSet &s : result.labels) out.push_back(Paths(tax, s));
  return out;
}

py::tuple RunCliArgs(const std::vector<std::string> &args) {
  std::vector<std::string> full = {"finetype"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char *> argv;
  for (const std::string &a : full) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace
}  // namespace finetype

PYBIND11_MODULE(_finetype, m) {
  using namespace finetype;
  m.doc() = "Fine-grained entity type tagging";

  py::register_exception<Error>(m, "FinetypeError", PyExc_ValueError);

  py::class_<Taxonomy>(m, "Taxonomy")
      .def_static("load", &Taxonomy::LoadFile, py::arg("filename"))
      .def_static("from_paths", &Taxonomy::FromPaths, py::arg("paths"))
      .def("__len__", &Taxonomy::size)
      .def("__contains__",
           [](const Taxonomy &t, const std::string &p) { return t.Find(p).has_value(); })
      .def_property_readonly("paths",
                             [](const Taxonomy &t) {
                               std::vector<std::string> out;
                               for (LabelId id = 0; id < t.size(); ++id) out.push_back(t.path(id));
                               return out;
                             })
      .def_property_readonly("max_depth", &Taxonomy::max_depth)
      .def_property_readonly("fingerprint", &Taxonomy::Fingerprint)
      .def("depth", [](const Taxonomy &t, const std::string &p) { return t.depth(t.Lookup(p)); })
      .def("parent",
           [](const Taxonomy &t, const std::string &p) -> std::optional<std::string> {
             const LabelId parent = t.parent(t.Lookup(p));
             if (parent == kNoLabel) return std::nullopt;
             return t.path(parent);
           })
      .def("closure",
           [](const Taxonomy &t, const std::vector<std::string> &paths) {
             return t.ToPaths(t.Closure(t.ToLabelSet(paths)));
           })
      .def("serialize", &Taxonomy::Serialize);

  m.def("infer", &InferPaths, py::arg("taxonomy"), py::arg("probabilities"),
        py::arg("strategy") = "marginal", py::arg("threshold") = 0.5,
        "Returns (assigned label paths, refined probability per path).");
  m.def("prune", &PrunePaths, py::arg("taxonomy"), py::arg("mapped"),
        py::arg("coarse") = std::nullopt, py::arg("sibling") = false,
        py::arg("coarse_pruning") = false, py::arg("min_count") = false,
        py::arg("k") = 2,
        "Prunes one document's mapped label sets.");
  m.def("word_shape", &WordShape, py::arg("word"));
  m.def("char_trigrams", &CharTrigrams, py::arg("head"));
  m.def("run_cli", &RunCliArgs, py::arg("args"),
        "Runs a finetype command; returns (exit code, stdout, stderr).");
}
