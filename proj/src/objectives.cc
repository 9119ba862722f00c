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

#include "finetype/objectives.h"

#include <algorithm>
#include <cmath>

#include "finetype/error.h"

namespace finetype {

double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void SoftmaxInPlace(std::span<double> scores) {
  if (scores.empty()) return;
  const double top = *std::max_element(scores.begin(), scores.end());
  double total = 0;
  for (double &s : scores) {
    s = std::exp(s - top);
    total += s;
  }
  for (double &s : scores) s /= total;
}

BinaryLogisticObjective::BinaryLogisticObjective(
    std::vector<const SparseFeatureVector *> examples, std::vector<int> labels,
    int num_features, double l2)
    : examples_(std::move(examples)),
      labels_(std::move(labels)),
      num_features_(num_features),
      l2_(l2) {
  if (examples_.size() != labels_.size()) {
    throw Error("logistic objective: example/label count mismatch");
  }
}

double BinaryLogisticObjective::operator()(std::span<const double> params,
                                           std::span<double> grad) const {
  const double *w = params.data();
  const double b = params[num_features_];
  double f = 0;
  std::fill(grad.begin(), grad.end(), 0.0);
  for (size_t i = 0; i < examples_.size(); ++i) {
    double margin = b;
    for (int j : examples_[i]->indices) margin += w[j];
    const double y = labels_[i] > 0 ? 1.0 : -1.0;
    f += Softplus(-y * margin);
    // d/dmargin log(1 + exp(-y m)) = -y * sigmoid(-y m)
    const double d = -y * Sigmoid(-y * margin);
    for (int j : examples_[i]->indices) grad[j] += d;
    grad[num_features_] += d;
  }
  double norm2 = 0;
  for (int j = 0; j < num_features_; ++j) {
    norm2 += w[j] * w[j];
    grad[j] += l2_ * w[j];
  }
  return f + 0.5 * l2_ * norm2;
}

SoftmaxObjective::SoftmaxObjective(
    std::vector<const SparseFeatureVector *> examples, std::vector<int> labels,
    int num_features, int num_classes, double l2)
    : examples_(std::move(examples)),
      labels_(std::move(labels)),
      num_features_(num_features),
      num_classes_(num_classes),
      l2_(l2) {
  if (examples_.size() != labels_.size()) {
    throw Error("softmax objective: example/label count mismatch");
  }
  for (int y : labels_) {
    if (y < 0 || y >= num_classes_) throw Error("softmax label out of range");
  }
}

double SoftmaxObjective::operator()(std::span<const double> params,
                                    std::span<double> grad) const {
  const int d = num_features_;
  const int k_classes = num_classes_;
  const double *w = params.data();
  const double *bias = params.data() + static_cast<size_t>(k_classes) * d;
  double *gw = grad.data();
  double *gb = grad.data() + static_cast<size_t>(k_classes) * d;
  std::fill(grad.begin(), grad.end(), 0.0);
  std::vector<double> scores(k_classes);
  double f = 0;
  for (size_t i = 0; i < examples_.size(); ++i) {
    const std::vector<int> &x = examples_[i]->indices;
    for (int k = 0; k < k_classes; ++k) {
      double s = bias[k];
      const double *row = w + static_cast<size_t>(k) * d;
      for (int j : x) s += row[j];
      scores[k] = s;
    }
    const double top = *std::max_element(scores.begin(), scores.end());
    double total = 0;
    for (double s : scores) total += std::exp(s - top);
    const double log_z = top + std::log(total);
    f += log_z - scores[labels_[i]];
    for (int k = 0; k < k_classes; ++k) {
      const double delta =
          std::exp(scores[k] - log_z) - (k == labels_[i] ? 1.0 : 0.0);
      double *grow = gw + static_cast<size_t>(k) * d;
      for (int j : x) grow[j] += delta;
      gb[k] += delta;
    }
  }
  double norm2 = 0;
  const size_t nw = static_cast<size_t>(k_classes) * d;
  for (size_t j = 0; j < nw; ++j) {
    norm2 += w[j] * w[j];
    gw[j] += l2_ * w[j];
  }
  return f + 0.5 * l2_ * norm2;
}

}  // namespace finetype
