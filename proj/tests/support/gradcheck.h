// Copyright 2026 The factframe Authors.
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

// Central finite-difference gradient checker shared by the unit tests and
// the acceptance runner.

#ifndef FACTFRAME_TESTS_SUPPORT_GRADCHECK_H_
#define FACTFRAME_TESTS_SUPPORT_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "factframe/autograd.h"

namespace factframe::testing {

inline constexpr double kFiniteDifferenceStep = 1e-4;
inline constexpr double kGradientTolerance = 1e-4;
// Denominator floor so near-zero gradients are compared absolutely.
inline constexpr double kGradientFloor = 1e-3;

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst;  // "input[i](r,c): analytic vs numeric"
  int checked = 0;
};

// `loss` must build a fresh 1x1 graph from the current values of `inputs`.
// Every entry of every input is perturbed in place (and restored).
inline GradCheckResult CheckGradients(const std::function<ag::Var()>& loss,
                                      std::vector<ag::Var> inputs,
                                      double step = kFiniteDifferenceStep) {
  for (auto& v : inputs) v.ZeroGrad();
  loss().Backward();  // analytic pass
  std::vector<ag::Matrix> analytic;
  for (const auto& v : inputs) analytic.push_back(v.grad());

  GradCheckResult result;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    ag::Matrix& value = inputs[i].mutable_value();
    for (Eigen::Index r = 0; r < value.rows(); ++r) {
      for (Eigen::Index c = 0; c < value.cols(); ++c) {
        const double saved = value(r, c);
        value(r, c) = saved + step;
        const double up = loss().scalar();
        value(r, c) = saved - step;
        const double down = loss().scalar();
        value(r, c) = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double a = analytic[i](r, c);
        const double denom = std::max({std::abs(a), std::abs(numeric), kGradientFloor});
        const double err = std::abs(a - numeric) / denom;
        ++result.checked;
        if (err > result.max_relative_error) {
          result.max_relative_error = err;
          result.worst = "input[" + std::to_string(i) + "](" + std::to_string(r) + "," +
                         std::to_string(c) + "): " + std::to_string(a) + " vs " +
                         std::to_string(numeric);
        }
      }
    }
  }
  return result;
}

// Random projection so matrix-valued outputs reduce to a scalar with
// non-trivial upstream gradients.
inline ag::Var ProjectToScalar(const ag::Var& out, const ag::Matrix& weights) {
  return ag::SumAll(ag::Mul(out, ag::Var(weights)));
}

}  // namespace factframe::testing

#endif  // FACTFRAME_TESTS_SUPPORT_GRADCHECK_H_
