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

#ifndef FACTFRAME_CLASSIFIER_H_
#define FACTFRAME_CLASSIFIER_H_

#include <array>
#include <random>

#include "factframe/autograd.h"
#include "factframe/core_types.h"

namespace factframe {

// p = sigmoid([f_sum; c] W + b) with W: 2d x 4 and a per-class bias.
class ClassifierHead {
 public:
  ClassifierHead() = default;
  ClassifierHead(int d, std::mt19937_64& rng);

  ag::Parameter weight;  // 2d x kNumErrorTypes
  ag::Parameter bias;    // 1 x kNumErrorTypes

  int input_dim() const { return static_cast<int>(weight.var.rows()); }
  void AppendParameters(ag::ParameterList& out);
};

struct FusedFacts {
  ag::Var summary;  // 1 x d, mean of summary fact rows
  ag::Var context;  // 1 x d, mean of context rows
};

// Throws std::invalid_argument if there are no rows or the shapes differ.
FusedFacts Fuse(const ag::Var& summary_facts, const ag::Var& context);

// 1 x 4 probabilities.
ag::Var Predict(const FusedFacts& fused, const ClassifierHead& head);

using Probabilities = std::array<double, kNumErrorTypes>;
Probabilities ToProbabilities(const ag::Var& p);

// bit_i = p_i >= threshold. Throws std::invalid_argument unless
// 0 < threshold < 1.
LabelVector Decide(const Probabilities& p, double threshold);

}  // namespace factframe

#endif  // FACTFRAME_CLASSIFIER_H_
