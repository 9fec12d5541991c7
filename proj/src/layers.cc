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

#include "factframe/layers.h"

#include <cmath>

#include "factframe/errors.h"

namespace factframe {

Linear::Linear(const std::string& name, int in, int out, std::mt19937_64& rng,
               bool trainable)
    : weight(ag::MakeParameter(name + ".weight", ag::GlorotNormal(in, out, rng),
                               trainable)),
      bias(ag::MakeParameter(name + ".bias", ag::Matrix::Zero(1, out),
                             trainable)) {}

ag::Var Linear::Forward(const ag::Var& x) const {
  return ag::AddRow(ag::MatMul(x, weight.var), bias.var);
}

void Linear::AppendParameters(ag::ParameterList& out) {
  out.push_back(&weight);
  out.push_back(&bias);
}

LayerNorm::LayerNorm(const std::string& name, int width, bool trainable,
                     double eps_value)
    : gain(ag::MakeParameter(name + ".weight", ag::Matrix::Ones(1, width),
                             trainable)),
      bias(ag::MakeParameter(name + ".bias", ag::Matrix::Zero(1, width),
                             trainable)),
      eps(eps_value) {}

ag::Var LayerNorm::Forward(const ag::Var& x) const {
  return ag::LayerNormRows(x, gain.var, bias.var, eps);
}

void LayerNorm::AppendParameters(ag::ParameterList& out) {
  out.push_back(&gain);
  out.push_back(&bias);
}

MultiHeadAttention::MultiHeadAttention(const std::string& name, int d,
                                       int heads, std::mt19937_64& rng,
                                       bool trainable)
    : d_(d), heads_(heads) {
  if (heads <= 0 || d <= 0 || d % heads != 0) {
    throw ConfigError("hidden size " + std::to_string(d) +
                      " is not divisible by " + std::to_string(heads) +
                      " attention heads");
  }
  query = Linear(name + ".query", d, d, rng, trainable);
  key = Linear(name + ".key", d, d, rng, trainable);
  value = Linear(name + ".value", d, d, rng, trainable);
  output = Linear(name + ".output", d, d, rng, trainable);
}

AttentionResult MultiHeadAttention::ForwardHeads(const ag::Var& query_src,
                                                 const ag::Var& kv_src) const {
  const ag::Var q = query.Forward(query_src);
  const ag::Var k = key.Forward(kv_src);
  const ag::Var v = value.Forward(kv_src);
  const int dh = d_ / heads_;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  AttentionResult result;
  std::vector<ag::Var> per_head;
  per_head.reserve(heads_);
  for (int h = 0; h < heads_; ++h) {
    const ag::Var qh = ag::SliceCols(q, h * dh, dh);
    const ag::Var kh = ag::SliceCols(k, h * dh, dh);
    const ag::Var vh = ag::SliceCols(v, h * dh, dh);
    const ag::Var probs =
        ag::SoftmaxRows(ag::Scale(ag::MatMul(qh, ag::Transpose(kh)), scale));
    result.probabilities.push_back(probs.value());
    per_head.push_back(ag::MatMul(probs, vh));
  }
  result.output = heads_ == 1 ? per_head[0] : ag::ConcatCols(per_head);
  return result;
}

AttentionResult MultiHeadAttention::Forward(const ag::Var& query_src,
                                            const ag::Var& kv_src) const {
  AttentionResult r = ForwardHeads(query_src, kv_src);
  r.output = output.Forward(r.output);
  return r;
}

void MultiHeadAttention::AppendParameters(ag::ParameterList& out) {
  query.AppendParameters(out);
  key.AppendParameters(out);
  value.AppendParameters(out);
  output.AppendParameters(out);
}

}  // namespace factframe
