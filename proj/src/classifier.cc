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

#include "factframe/classifier.h"

#include <stdexcept>

namespace factframe {

ClassifierHead::ClassifierHead(int d, std::mt19937_64& rng)
    : weight(ag::MakeParameter("classifier.weight",
                               ag::GlorotNormal(2 * d, kNumErrorTypes, rng))),
      bias(ag::MakeParameter("classifier.bias",
                             ag::Matrix::Zero(1, kNumErrorTypes))) {}

void ClassifierHead::AppendParameters(ag::ParameterList& out) {
  out.push_back(&weight);
  out.push_back(&bias);
}

FusedFacts Fuse(const ag::Var& summary_facts, const ag::Var& context) {
  if (summary_facts.rows() < 1) {
    throw std::invalid_argument("Fuse needs at least one summary fact");
  }
  if (summary_facts.rows() != context.rows() ||
      summary_facts.cols() != context.cols()) {
    throw std::invalid_argument("summary facts and context differ in shape");
  }
  return {ag::MeanRows(summary_facts), ag::MeanRows(context)};
}

ag::Var Predict(const FusedFacts& fused, const ClassifierHead& head) {
  const ag::Var x = ag::ConcatCols({fused.summary, fused.context});
  if (x.cols() != head.input_dim()) {
    throw std::invalid_argument("classifier input width mismatch");
  }
  return ag::Sigmoid(ag::AddRow(ag::MatMul(x, head.weight.var), head.bias.var));
}

Probabilities ToProbabilities(const ag::Var& p) {
  if (p.rows() != 1 || p.cols() != kNumErrorTypes) {
    throw std::invalid_argument("expected a 1 x 4 probability row");
  }
  Probabilities out{};
  for (int i = 0; i < kNumErrorTypes; ++i) out[i] = p.value()(0, i);
  return out;
}

LabelVector Decide(const Probabilities& p, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("threshold must lie in (0, 1)");
  }
  LabelVector out;
  for (int i = 0; i < kNumErrorTypes; ++i) {
    out.Set(ErrorTypeFromIndex(i), p[i] >= threshold);
  }
  return out;
}

}  // namespace factframe
