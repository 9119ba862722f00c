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

#include "finetype/inference.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "finetype/error.h"

namespace finetype {

namespace {

void CheckInputs(std::span<const double> probs, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error("threshold must lie in [0, 1]");
  }
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error("probability outside [0, 1]");
  }
}

void CheckSize(std::span<const double> probs, const Taxonomy &tax) {
  if (static_cast<int>(probs.size()) != tax.size()) {
    throw Error("expected one probability per taxonomy label");
  }
}

}  // namespace

std::string_view InferenceStrategyName(InferenceStrategy strategy) {
  switch (strategy) {
    case InferenceStrategy::kIndependent: return "independent";
    case InferenceStrategy::kConditional: return "conditional";
    case InferenceStrategy::kMarginal: return "marginal";
  }
  return "?";
}

InferenceStrategy ParseInferenceStrategy(std::string_view name) {
  if (name == "independent") return InferenceStrategy::kIndependent;
  if (name == "conditional") return InferenceStrategy::kConditional;
  if (name == "marginal") return InferenceStrategy::kMarginal;
  throw Error("unknown inference strategy '" + std::string(name) + "'");
}

LabelSet AssignAbove(std::span<const double> refined, double threshold) {
  LabelSet out;
  for (size_t i = 0; i < refined.size(); ++i) {
    if (refined[i] > threshold) out.insert(static_cast<LabelId>(i));
  }
  return out;
}

Prediction InferIndependent(std::span<const double> probs, double threshold) {
  CheckInputs(probs, threshold);
  Prediction pred;
  pred.refined.assign(probs.begin(), probs.end());
  pred.assigned = AssignAbove(pred.refined, threshold);
  return pred;
}

Prediction InferConditional(std::span<const double> probs, const Taxonomy &tax,
                            double threshold) {
  CheckInputs(probs, threshold);
  CheckSize(probs, tax);
  Prediction pred;
  pred.refined.resize(probs.size());
  // Parents precede children in id order.
  for (LabelId id = 0; id < tax.size(); ++id) {
    const LabelId parent = tax.parent(id);
    pred.refined[id] =
        parent == kNoLabel ? probs[id] : probs[id] * pred.refined[parent];
  }
  pred.assigned = AssignAbove(pred.refined, threshold);
  return pred;
}

Prediction InferMarginal(std::span<const double> probs, const Taxonomy &tax,
                         double threshold, const MarginalOptions &options) {
  CheckInputs(probs, threshold);
  CheckSize(probs, tax);
  const int n = tax.size();
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  // Per-label log p and log(1 - p); a configuration's log score is the sum
  // over its chain of log p, plus log(1 - p) over everything else.
  std::vector<double> log_on(n), log_off(n);
  double off_total = 0;   // sum of finite log(1 - p)
  int certain = 0;        // labels with p == 1, which every config must hold
  for (int t = 0; t < n; ++t) {
    log_on[t] = probs[t] > 0 ? std::log(probs[t]) : kNegInf;
    log_off[t] = probs[t] < 1 ? std::log1p(-probs[t]) : kNegInf;
    if (options.active_only) continue;
    if (probs[t] < 1) {
      off_total += log_off[t];
    } else {
      ++certain;
    }
  }

  // log score of the configuration ending at each label; chains are built
  // incrementally since parents precede children.
  std::vector<double> chain_on(n), chain_off(n);
  std::vector<int> chain_certain(n);
  std::vector<double> log_score(n);
  for (int t = 0; t < n; ++t) {
    const LabelId parent = tax.parent(t);
    chain_on[t] = log_on[t] + (parent == kNoLabel ? 0.0 : chain_on[parent]);
    const double off = probs[t] < 1 ? log_off[t] : 0.0;
    chain_off[t] = off + (parent == kNoLabel ? 0.0 : chain_off[parent]);
    chain_certain[t] = (probs[t] == 1 ? 1 : 0) +
                       (parent == kNoLabel ? 0 : chain_certain[parent]);
    if (options.active_only) {
      log_score[t] = chain_on[t];
    } else if (chain_certain[t] < certain) {
      log_score[t] = kNegInf;
    } else {
      log_score[t] = off_total - chain_off[t] + chain_on[t];
    }
  }
  double log_empty = kNegInf;
  if (options.include_empty) {
    log_empty = options.active_only ? 0.0
                                    : (certain > 0 ? kNegInf : off_total);
  }

  double top = log_empty;
  for (double s : log_score) top = std::max(top, s);
  if (top == kNegInf) throw Error("all configurations impossible");
  double z = log_empty == kNegInf ? 0.0 : std::exp(log_empty - top);
  std::vector<double> weight(n);
  for (int t = 0; t < n; ++t) {
    weight[t] = log_score[t] == kNegInf ? 0.0 : std::exp(log_score[t] - top);
    z += weight[t];
  }

  Prediction pred;
  pred.refined.assign(n, 0.0);
  for (int t = 0; t < n; ++t) {
    if (weight[t] == 0) continue;
    const double w = weight[t] / z;
    for (LabelId u = t; u != kNoLabel; u = tax.parent(u)) pred.refined[u] += w;
  }
  for (double &r : pred.refined) r = std::min(r, 1.0);
  pred.assigned = AssignAbove(pred.refined, threshold);
  return pred;
}

Prediction Infer(InferenceStrategy strategy, std::span<const double> probs,
                 const Taxonomy &tax, double threshold) {
  switch (strategy) {
    case InferenceStrategy::kIndependent:
      return InferIndependent(probs, threshold);
    case InferenceStrategy::kConditional:
      return InferConditional(probs, tax, threshold);
    case InferenceStrategy::kMarginal:
      return InferMarginal(probs, tax, threshold);
  }
  throw Error("unknown inference strategy");
}

}  // namespace finetype
