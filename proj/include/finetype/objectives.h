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

#ifndef FINETYPE_OBJECTIVES_H_
#define FINETYPE_OBJECTIVES_H_

#include <span>
#include <vector>

#include "finetype/features.h"

namespace finetype {

// L2-regularized binary logistic loss over sparse binary features:
//
//   sum_i log(1 + exp(-y_i (w . x_i + b))) + (l2 / 2) |w|^2
//
// with y_i in {-1, +1} and an unregularized bias. Parameters are laid out
// as [w_0 .. w_{D-1}, b].
class BinaryLogisticObjective {
 public:
  BinaryLogisticObjective(std::vector<const SparseFeatureVector *> examples,
                          std::vector<int> labels, int num_features,
                          double l2);

  int dimension() const { return num_features_ + 1; }
  double operator()(std::span<const double> params,
                    std::span<double> grad) const;

 private:
  std::vector<const SparseFeatureVector *> examples_;
  std::vector<int> labels_;
  int num_features_;
  double l2_;
};

// L2-regularized multinomial logistic (softmax) loss:
//
//   sum_i -log softmax(W x_i + b)[y_i] + (l2 / 2) |W|^2
//
// Parameters: W row-major by class (W[k * D + j]) followed by the K biases.
class SoftmaxObjective {
 public:
  SoftmaxObjective(std::vector<const SparseFeatureVector *> examples,
                   std::vector<int> labels, int num_features, int num_classes,
                   double l2);

  int dimension() const { return num_classes_ * (num_features_ + 1); }
  double operator()(std::span<const double> params,
                    std::span<double> grad) const;

 private:
  std::vector<const SparseFeatureVector *> examples_;
  std::vector<int> labels_;
  int num_features_;
  int num_classes_;
  double l2_;
};

// Numerically stable log(1 + exp(z)) and logistic sigmoid.
double Softplus(double z);
double Sigmoid(double z);

// Softmax of `scores` in place; the result sums to 1.
void SoftmaxInPlace(std::span<double> scores);

}  // namespace finetype

#endif  // FINETYPE_OBJECTIVES_H_
