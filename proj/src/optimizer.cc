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

#include "finetype/optimizer.h"

#include <cmath>
#include <deque>
#include <numeric>

#include "finetype/error.h"

namespace finetype {

namespace {

double Dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double Evaluate(const Objective &objective, std::span<const double> x,
                std::span<double> grad) {
  const double f = objective(x, grad);
  if (!std::isfinite(f)) throw Error("objective is not finite");
  return f;
}

constexpr double kArmijo = 1e-4;
constexpr double kCurvature = 0.9;
constexpr double kRoundoff = 1e-10;

struct Correction {
  std::vector<double> s;  // x_{k+1} - x_k
  std::vector<double> y;  // g_{k+1} - g_k
  double rho = 0;         // 1 / (y . s)
};

}  // namespace

OptimizerResult MinimizeLbfgs(const Objective &objective,
                              std::vector<double> x0,
                              const OptimizerOptions &options) {
  const size_t n = x0.size();
  OptimizerResult result;
  result.x = std::move(x0);
  std::vector<double> grad(n), direction(n), x_next(n), grad_next(n);
  double f = Evaluate(objective, result.x, grad);
  std::deque<Correction> history;
  std::vector<double> alpha(options.history);

  for (int iter = 0;; ++iter) {
    const double gnorm = std::sqrt(Dot(grad, grad));
    result.objective = f;
    result.gradient_norm = gnorm;
    result.iterations = iter;
    if (gnorm <= options.gradient_tolerance) {
      result.converged = true;
      return result;
    }
    if (iter >= options.max_iterations) return result;

    // Two-loop recursion: direction = -H * grad.
    for (size_t i = 0; i < n; ++i) direction[i] = -grad[i];
    for (size_t k = history.size(); k-- > 0;) {
      const Correction &c = history[k];
      alpha[k] = c.rho * Dot(c.s, direction);
      for (size_t i = 0; i < n; ++i) direction[i] -= alpha[k] * c.y[i];
    }
    if (!history.empty()) {
      const Correction &last = history.back();
      const double gamma = 1.0 / (last.rho * Dot(last.y, last.y));
      for (double &d : direction) d *= gamma;
    } else {
      // First step: unit length along steepest descent.
      for (double &d : direction) d /= gnorm;
    }
    for (size_t k = 0; k < history.size(); ++k) {
      const Correction &c = history[k];
      const double beta = c.rho * Dot(c.y, direction);
      for (size_t i = 0; i < n; ++i) direction[i] += (alpha[k] - beta) * c.s[i];
    }

    double slope = Dot(grad, direction);
    if (!(slope < 0)) {
      history.clear();
      for (size_t i = 0; i < n; ++i) direction[i] = -grad[i] / gnorm;
      slope = -gnorm;
    }

    double step = 1.0;
    double f_next = 0;
    bool accepted = false;
    for (int trial = 0; trial < 60; ++trial) {
      for (size_t i = 0; i < n; ++i) x_next[i] = result.x[i] + step * direction[i];
      f_next = objective(x_next, grad_next);
      if (!std::isfinite(f_next)) {
        step *= 0.5;
        continue;
      }
      if (f_next <= f + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      // Near the minimum the decrease drops below the rounding error of f;
      // accept on the approximate Wolfe conditions instead.
      const double slope_next = Dot(grad_next, direction);
      if (f_next <= f + kRoundoff * std::abs(f) &&
          slope_next <= (2 * kArmijo - 1) * slope &&
          slope_next >= kCurvature * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!history.empty()) {
        // Stale curvature information; retry from steepest descent.
        history.clear();
        continue;
      }
      // No decrease is representable at this precision.
      return result;
    }

    Correction c;
    c.s.resize(n);
    c.y.resize(n);
    for (size_t i = 0; i < n; ++i) {
      c.s[i] = x_next[i] - result.x[i];
      c.y[i] = grad_next[i] - grad[i];
    }
    const double ys = Dot(c.y, c.s);
    if (ys > 1e-12 * std::sqrt(Dot(c.y, c.y) * Dot(c.s, c.s))) {
      c.rho = 1.0 / ys;
      history.push_back(std::move(c));
      if (static_cast<int>(history.size()) > options.history) {
        history.pop_front();
      }
    }
    result.x.swap(x_next);
    grad.swap(grad_next);
    f = f_next;
  }
}

}  // namespace finetype
