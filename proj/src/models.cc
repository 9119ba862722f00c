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

#include "finetype/models.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "finetype/error.h"
#include "finetype/objectives.h"

namespace finetype {

namespace {

// Training problems only touch features that occur in their examples; the
// rest keep weight exactly zero. Remaps the occurring features to a dense
// local range.
struct CompactProblem {
  std::vector<int> global_ids;  // local id -> dictionary id
  std::vector<SparseFeatureVector> xs;

  std::vector<const SparseFeatureVector *> Pointers() const {
    std::vector<const SparseFeatureVector *> out;
    out.reserve(xs.size());
    for (const SparseFeatureVector &x : xs) out.push_back(&x);
    return out;
  }
};

CompactProblem Compact(const std::vector<const SparseFeatureVector *> &xs,
                       int num_features) {
  CompactProblem p;
  std::vector<int> local(num_features, -1);
  for (const SparseFeatureVector *x : xs) {
    for (int j : x->indices) {
      if (j < 0 || j >= num_features) throw Error("feature id out of range");
      local[j] = 0;
    }
  }
  for (int j = 0; j < num_features; ++j) {
    if (local[j] == 0) {
      local[j] = static_cast<int>(p.global_ids.size());
      p.global_ids.push_back(j);
    }
  }
  p.xs.reserve(xs.size());
  for (const SparseFeatureVector *x : xs) {
    SparseFeatureVector v;
    v.indices.reserve(x->indices.size());
    for (int j : x->indices) v.indices.push_back(local[j]);
    p.xs.push_back(std::move(v));
  }
  return p;
}

bool Intersects(const LabelSet &labels, const std::vector<bool> &mask) {
  for (LabelId id : labels) {
    if (mask[id]) return true;
  }
  return false;
}

void ParallelFor(int n, int threads, const std::function<void(int)> &body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread &w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string_view NegativeStrategyName(NegativeStrategy strategy) {
  switch (strategy) {
    case NegativeStrategy::kAll: return "all";
    case NegativeStrategy::kSibling: return "sibling";
    case NegativeStrategy::kDepth: return "depth";
  }
  return "?";
}

NegativeStrategy ParseNegativeStrategy(std::string_view name) {
  if (name == "all") return NegativeStrategy::kAll;
  if (name == "sibling") return NegativeStrategy::kSibling;
  if (name == "depth") return NegativeStrategy::kDepth;
  throw Error("unknown negative strategy '" + std::string(name) + "'");
}

double BinaryModel::Score(const SparseFeatureVector &x) const {
  double s = bias;
  const int n = static_cast<int>(weights.size());
  for (int j : x.indices) {
    if (j < n) s += weights[j];
  }
  return s;
}

double BinaryModel::Probability(const SparseFeatureVector &x) const {
  return Sigmoid(Score(x));
}

std::vector<double> SoftmaxModel::Probabilities(
    const SparseFeatureVector &x) const {
  std::vector<double> scores(biases);
  for (int k = 0; k < num_classes; ++k) {
    const double *row = weights.data() + static_cast<size_t>(k) * num_features;
    for (int j : x.indices) {
      if (j < num_features) scores[k] += row[j];
    }
  }
  SoftmaxInPlace(scores);
  return scores;
}

std::vector<int> PositivesFor(LabelId label,
                              const std::vector<TrainingInstance> &instances) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(instances.size()); ++i) {
    if (instances[i].labels.count(label)) out.push_back(i);
  }
  return out;
}

std::vector<int> NegativesFor(LabelId label, NegativeStrategy strategy,
                              const std::vector<TrainingInstance> &instances,
                              const Taxonomy &tax) {
  std::vector<bool> mask(tax.size(), false);
  switch (strategy) {
    case NegativeStrategy::kAll:
      break;
    case NegativeStrategy::kSibling:
      for (LabelId s : tax.Siblings(label)) {
        for (LabelId d : tax.Subtree(s)) mask[d] = true;
      }
      break;
    case NegativeStrategy::kDepth:
      for (LabelId d : tax.AtDepth(tax.depth(label))) {
        if (d != label) mask[d] = true;
      }
      break;
  }
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(instances.size()); ++i) {
    const LabelSet &labels = instances[i].labels;
    if (labels.count(label)) continue;
    if (strategy == NegativeStrategy::kAll || Intersects(labels, mask)) {
      out.push_back(i);
    }
  }
  return out;
}

BinaryModel TrainBinaryLogistic(
    const std::vector<const SparseFeatureVector *> &positives,
    const std::vector<const SparseFeatureVector *> &negatives,
    int num_features, double l2, const OptimizerOptions &options) {
  if (positives.empty() || negatives.empty()) {
    throw Error("degenerate label");
  }
  if (!(l2 > 0)) throw Error("l2 must be positive");
  std::vector<const SparseFeatureVector *> xs = positives;
  xs.insert(xs.end(), negatives.begin(), negatives.end());
  std::vector<int> ys(positives.size(), 1);
  ys.resize(xs.size(), -1);

  CompactProblem problem = Compact(xs, num_features);
  const int local_features = static_cast<int>(problem.global_ids.size());
  BinaryLogisticObjective objective(problem.Pointers(), ys, local_features, l2);
  OptimizerResult result = MinimizeLbfgs(
      [&](std::span<const double> p, std::span<double> g) {
        return objective(p, g);
      },
      std::vector<double>(objective.dimension(), 0.0), options);

  BinaryModel model;
  model.weights.assign(num_features, 0.0);
  for (int j = 0; j < local_features; ++j) {
    model.weights[problem.global_ids[j]] = result.x[j];
  }
  model.bias = result.x[local_features];
  return model;
}

SoftmaxModel TrainSoftmax(const std::vector<const SparseFeatureVector *> &xs,
                          const std::vector<int> &labels, int num_features,
                          int num_classes, double l2,
                          const OptimizerOptions &options) {
  if (xs.empty()) throw Error("softmax training needs at least one example");
  if (xs.size() != labels.size()) throw Error("example/label count mismatch");
  if (!(l2 > 0)) throw Error("l2 must be positive");

  // Dense class index over the classes that occur.
  std::vector<int> local_class(num_classes, -1);
  for (int y : labels) {
    if (y < 0 || y >= num_classes) throw Error("class label out of range");
    local_class[y] = 0;
  }
  std::vector<int> present;
  for (int k = 0; k < num_classes; ++k) {
    if (local_class[k] == 0) {
      local_class[k] = static_cast<int>(present.size());
      present.push_back(k);
    }
  }
  std::vector<int> local_labels;
  local_labels.reserve(labels.size());
  for (int y : labels) local_labels.push_back(local_class[y]);

  CompactProblem problem = Compact(xs, num_features);
  const int d = static_cast<int>(problem.global_ids.size());
  const int k_local = static_cast<int>(present.size());

  SoftmaxModel model;
  model.num_features = num_features;
  model.num_classes = num_classes;
  model.weights.assign(static_cast<size_t>(num_classes) * num_features, 0.0);
  model.biases.assign(num_classes, 0.0);

  std::vector<double> x(static_cast<size_t>(k_local) * (d + 1), 0.0);
  if (k_local > 1) {
    SoftmaxObjective objective(problem.Pointers(), local_labels, d, k_local,
                               l2);
    x = MinimizeLbfgs(
            [&](std::span<const double> p, std::span<double> g) {
              return objective(p, g);
            },
            std::move(x), options)
            .x;
  }
  double min_bias = 0;
  for (int k = 0; k < k_local; ++k) {
    const int cls = present[k];
    double *row = model.weights.data() + static_cast<size_t>(cls) * num_features;
    for (int j = 0; j < d; ++j) {
      row[problem.global_ids[j]] = x[static_cast<size_t>(k) * d + j];
    }
    model.biases[cls] = x[static_cast<size_t>(k_local) * d + k];
    min_bias = k == 0 ? model.biases[cls] : std::min(min_bias, model.biases[cls]);
  }
  for (int k = 0; k < num_classes; ++k) {
    if (local_class[k] < 0) model.biases[k] = min_bias + kDegenerateBias;
  }
  return model;
}

LocalModelSet TrainLocal(const std::vector<TrainingInstance> &instances,
                         const Taxonomy &tax, NegativeStrategy strategy,
                         int num_features, const TrainOptions &options) {
  LocalModelSet set;
  set.strategy = strategy;
  set.l2 = options.l2;
  set.num_features = num_features;
  set.models.resize(tax.size());
  std::vector<char> degenerate(tax.size(), 0), fallback(tax.size(), 0);

  ParallelFor(tax.size(), options.threads, [&](int label) {
    BinaryModel &model = set.models[label];
    std::vector<int> pos = PositivesFor(label, instances);
    if (pos.empty()) {
      model.weights.assign(num_features, 0.0);
      model.bias = kDegenerateBias;
      degenerate[label] = 1;
      return;
    }
    std::vector<int> neg = NegativesFor(label, strategy, instances, tax);
    if (neg.empty()) {
      fallback[label] = 1;
      neg = NegativesFor(label, NegativeStrategy::kAll, instances, tax);
      if (neg.empty()) {
        model.weights.assign(num_features, 0.0);
        model.bias = -kDegenerateBias;
        return;
      }
    }
    std::vector<const SparseFeatureVector *> px, nx;
    for (int i : pos) px.push_back(&instances[i].x);
    for (int i : neg) nx.push_back(&instances[i].x);
    model = TrainBinaryLogistic(px, nx, num_features, options.l2,
                                options.optimizer);
  });
  for (LabelId id = 0; id < tax.size(); ++id) {
    if (degenerate[id]) set.degenerate.push_back(id);
    if (fallback[id]) set.fallback.push_back(id);
  }
  return set;
}

std::vector<SingleLabelInstance> ExpandMultilabel(
    const std::vector<TrainingInstance> &instances) {
  std::vector<SingleLabelInstance> out;
  for (const TrainingInstance &inst : instances) {
    for (LabelId id : inst.labels) out.push_back({&inst.x, id});
  }
  return out;
}

FlatModel TrainFlat(const std::vector<TrainingInstance> &instances,
                    const Taxonomy &tax, int num_features,
                    const TrainOptions &options) {
  std::vector<SingleLabelInstance> expanded = ExpandMultilabel(instances);
  if (expanded.empty()) throw Error("flat training needs labeled instances");
  std::vector<const SparseFeatureVector *> xs;
  std::vector<int> ys;
  for (const SingleLabelInstance &e : expanded) {
    xs.push_back(e.x);
    ys.push_back(e.label);
  }
  FlatModel model;
  model.l2 = options.l2;
  model.softmax = TrainSoftmax(xs, ys, num_features, tax.size(), options.l2,
                               options.optimizer);
  std::vector<bool> seen(tax.size(), false);
  for (int y : ys) seen[y] = true;
  for (LabelId id = 0; id < tax.size(); ++id) {
    if (!seen[id]) model.absent.push_back(id);
  }
  return model;
}

std::vector<double> PredictProbabilities(const LocalModelSet &model,
                                         const SparseFeatureVector &x) {
  std::vector<double> out;
  out.reserve(model.models.size());
  for (const BinaryModel &m : model.models) out.push_back(m.Probability(x));
  return out;
}

std::vector<double> PredictProbabilities(const FlatModel &model,
                                         const SparseFeatureVector &x) {
  return model.softmax.Probabilities(x);
}

}  // namespace finetype
