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

#include <random>

#include "doctest.h"
#include "factframe/classifier.h"
#include "factframe/encoder.h"
#include "factframe/fact_attention.h"
#include "factframe/model.h"
#include "factframe/srl.h"
#include "factframe/training.h"
#include "support/gradcheck.h"

namespace factframe {
namespace {

using testing::CheckGradients;
using testing::kGradientTolerance;
using testing::ProjectToScalar;

constexpr int kD = 8;
constexpr int kH = 2;

ag::Var RandomVar(int rows, int cols, std::mt19937_64& rng, double sd = 1.0) {
  return ag::Var(ag::RandomNormal(rows, cols, sd, rng), /*requires_grad=*/true);
}

// Whole-model check: stacked LayerNorms at width 8 put the step-1e-4
// truncation error just above 1e-4 for a handful of entries.
constexpr double kEndToEndTolerance = 1e-3;

void Expect(const testing::GradCheckResult& r, double tolerance = kGradientTolerance) {
  INFO(r.worst);
  CHECK(r.checked > 0);
  CHECK(r.max_relative_error < tolerance);
}

TEST_CASE("elementwise and reduction ops") {
  std::mt19937_64 rng(1);
  ag::Var a = RandomVar(3, 4, rng);
  ag::Var b = RandomVar(3, 4, rng);
  ag::Var w = RandomVar(4, 2, rng);
  ag::Var row = RandomVar(1, 4, rng);
  const ag::Matrix proj = ag::RandomNormal(3, 2, 1.0, rng);
  const ag::Matrix proj4 = ag::RandomNormal(3, 4, 1.0, rng);
  Expect(CheckGradients([&] { return ProjectToScalar(ag::MatMul(a, w), proj); }, {a, w}));
  Expect(CheckGradients(
      [&] { return ProjectToScalar(ag::Mul(ag::Tanh(a), ag::Sigmoid(b)), proj4); }, {a, b}));
  Expect(CheckGradients([&] { return ProjectToScalar(ag::Gelu(ag::AddRow(a, row)), proj4); },
                        {a, row}));
  Expect(CheckGradients([&] { return ProjectToScalar(ag::SoftmaxRows(a), proj4); }, {a}));
  Expect(CheckGradients(
      [&] { return ProjectToScalar(ag::Sub(ag::Transpose(ag::Transpose(a)), b), proj4); },
      {a, b}));
}

TEST_CASE("layer norm") {
  std::mt19937_64 rng(2);
  ag::Var x = RandomVar(3, kD, rng);
  ag::Var g = RandomVar(1, kD, rng);
  ag::Var b = RandomVar(1, kD, rng);
  const ag::Matrix proj = ag::RandomNormal(3, kD, 1.0, rng);
  Expect(CheckGradients([&] { return ProjectToScalar(ag::LayerNormRows(x, g, b, 1e-5), proj); },
                        {x, g, b}));
}

TEST_CASE("weighted_bce") {
  std::mt19937_64 rng(3);
  ClassWeights w;
  w.beta = {0.3, 2.0, 1.0, 0.7};
  ag::Var logits = RandomVar(1, kNumErrorTypes, rng);
  for (unsigned bits : {0u, 5u, 10u, 15u}) {
    const LabelVector y = LabelVector::FromBits(bits);
    Expect(CheckGradients([&] { return WeightedBce(ag::Sigmoid(logits), y, w); }, {logits}));
  }
}

TEST_CASE("pool_fact") {
  std::mt19937_64 rng(4);
  AttentivePooler pooler(kD, kD, ag::Activation::kGelu, rng);
  ag::Var tokens = RandomVar(5, kD, rng);
  const ag::Matrix proj = ag::RandomNormal(1, kD, 1.0, rng);
  ag::ParameterList params;
  pooler.AppendParameters(params);
  std::vector<ag::Var> inputs = {tokens};
  for (auto* p : params) inputs.push_back(p->var);
  Expect(CheckGradients([&] { return ProjectToScalar(PoolFact(tokens, pooler).vector, proj); },
                        inputs));
}

TEST_CASE("fuse_layers") {
  std::mt19937_64 rng(5);
  std::vector<ag::Var> layers = {RandomVar(4, kD, rng), RandomVar(4, kD, rng),
                                 RandomVar(4, kD, rng)};
  const ag::Matrix proj = ag::RandomNormal(4, kD, 1.0, rng);
  for (LayerFusion f : {LayerFusion::kMax, LayerFusion::kMean, LayerFusion::kLast}) {
    Expect(CheckGradients([&] { return ProjectToScalar(FuseLayers(layers, f), proj); },
                          layers));
  }
}

TEST_CASE("attend") {
  std::mt19937_64 rng(6);
  MultiHeadCrossAttention mha(kD, kH, rng);
  ag::Var summary = RandomVar(3, kD, rng);
  ag::Var document = RandomVar(5, kD, rng);
  const ag::Matrix proj = ag::RandomNormal(3, kD, 1.0, rng);
  ag::ParameterList params;
  mha.AppendParameters(params);
  std::vector<ag::Var> inputs = {summary, document};
  for (auto* p : params) inputs.push_back(p->var);
  Expect(CheckGradients(
      [&] { return ProjectToScalar(Attend(summary, document, mha).context, proj); }, inputs));
}

TEST_CASE("predict") {
  std::mt19937_64 rng(7);
  ClassifierHead head(kD, rng);
  ag::Var summary = RandomVar(3, kD, rng);
  ag::Var context = RandomVar(3, kD, rng);
  const ag::Matrix proj = ag::RandomNormal(1, kNumErrorTypes, 1.0, rng);
  Expect(CheckGradients(
      [&] { return ProjectToScalar(Predict(Fuse(summary, context), head), proj); },
      {summary, context, head.weight.var, head.bias.var}));
}

TEST_CASE("end-to-end model loss") {
  ModelConfig config;
  config.hidden = kD;
  config.encoder_layers = 1;
  config.encoder_heads = kH;
  config.heads = kH;
  config.vocab_size = 64;
  config.seed = 11;
  for (DocumentContext ctx : {DocumentContext::kAttention, DocumentContext::kMeanPooled}) {
    config.document_context = ctx;
    FactModel model(config);
    FixtureBackend backend({"signed", "left"});
    const std::string doc = "Alice signed the deal . Bob left the firm .";
    const std::string sum = "Bob signed the deal .";
    const PreparedInput in = model.Prepare(
        doc, ExtractFrames(doc, FrameSource::kDocument, backend).frames, sum,
        ExtractFrames(sum, FrameSource::kSummary, backend).frames);
    ClassWeights w;
    w.beta = {0.5, 1.5, 1.0, 2.0};
    const LabelVector y = LabelVector::FromBits(0b0010);
    std::vector<ag::Var> inputs;
    for (auto* p : model.TrainableParameters()) {
      // Embedding tables are large and sparse; the rest covers every op.
      if (p->name.find("embeddings.word") != std::string::npos) continue;
      inputs.push_back(p->var);
    }
    Expect(CheckGradients(
        [&] { return WeightedBce(model.Forward(in).probabilities, y, w); }, inputs),
        kEndToEndTolerance);
  }
}

}  // namespace
}  // namespace factframe
