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

// Building blocks shared by the encoder and the fact attention module.

#ifndef FACTFRAME_LAYERS_H_
#define FACTFRAME_LAYERS_H_

#include <random>
#include <string>
#include <vector>

#include "factframe/autograd.h"

namespace factframe {

// y = x W + b with W stored as (in x out).
struct Linear {
  ag::Parameter weight;
  ag::Parameter bias;

  Linear() = default;
  Linear(const std::string& name, int in, int out, std::mt19937_64& rng,
         bool trainable = true);

  ag::Var Forward(const ag::Var& x) const;
  void AppendParameters(ag::ParameterList& out);
  int in_features() const { return static_cast<int>(weight.var.rows()); }
  int out_features() const { return static_cast<int>(weight.var.cols()); }
};

struct LayerNorm {
  ag::Parameter gain;
  ag::Parameter bias;
  double eps = 1e-12;

  LayerNorm() = default;
  LayerNorm(const std::string& name, int width, bool trainable = true,
            double eps = 1e-12);
  ag::Var Forward(const ag::Var& x) const;
  void AppendParameters(ag::ParameterList& out);
};

struct AttentionResult {
  ag::Var output;                       // rows(query) x d
  std::vector<ag::Matrix> probabilities;  // per head: rows(query) x rows(kv)
};

// Scaled dot-product multi-head attention. Head h reads columns
// [h * d/H, (h+1) * d/H) of the query/key/value projections; the logits are
// scaled by 1/sqrt(d/H).
class MultiHeadAttention {
 public:
  MultiHeadAttention() = default;
  // Throws ConfigError if d is not divisible by heads.
  MultiHeadAttention(const std::string& name, int d, int heads,
                     std::mt19937_64& rng, bool trainable = true);

  AttentionResult Forward(const ag::Var& query_src, const ag::Var& kv_src) const;
  // Context vectors before the output projection, plus probabilities.
  AttentionResult ForwardHeads(const ag::Var& query_src,
                               const ag::Var& kv_src) const;

  void AppendParameters(ag::ParameterList& out);
  int heads() const { return heads_; }
  int hidden() const { return d_; }

  Linear query;
  Linear key;
  Linear value;
  Linear output;

 private:
  int d_ = 0;
  int heads_ = 1;
};

}  // namespace factframe

#endif  // FACTFRAME_LAYERS_H_
