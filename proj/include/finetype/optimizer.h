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

#ifndef FINETYPE_OPTIMIZER_H_
#define FINETYPE_OPTIMIZER_H_

#include <functional>
#include <span>
#include <vector>

namespace finetype {

// Returns f(x) and writes df/dx into `grad` (same size as x).
using Objective =
    std::function<double(std::span<const double> x, std::span<double> grad)>;

struct OptimizerOptions {
  double gradient_tolerance = 1e-6;  // on the Euclidean gradient norm
  int max_iterations = 500;
  int history = 10;
};

struct OptimizerResult {
  std::vector<double> x;
  double objective = 0;
  double gradient_norm = 0;
  int iterations = 0;
  bool converged = false;
};

// Limited-memory BFGS with backtracking (Armijo) line search. Fully
// deterministic for a given starting point. Throws Error if the objective
// becomes non-finite.
OptimizerResult MinimizeLbfgs(const Objective &objective,
                              std::vector<double> x0,
                              const OptimizerOptions &options = {});

}  // namespace finetype

#endif  // FINETYPE_OPTIMIZER_H_
