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


#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "factframe/encoder.h"

namespace factframe {
namespace {

using ag::Matrix;
using ag::Var;

Matrix RandomMatrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = n(rng);
  }
  return m;
}

TEST_CASE("fuse_layers examples") {
  Matrix a(1, 2), b(1, 2);
  a << 1, 2;
  b << 3, 0;
  const Matrix fused = FuseLayers({Var(a), Var(b)}).value();
  CHECK(fused(0, 0) == 3.0);
  CHECK(fused(0, 1) == 2.0);
  CHECK(FuseLayers({Var(a)}).value() == a);
  CHECK_THROWS(FuseLayers({}));
  CHECK_THROWS(FuseLayers({Var(a), Var(Matrix::Zero(2, 2))}));
}

TEST_CASE("fuse_layers matches a brute-force max loop and dominates") {
  std::mt19937_64 rng(3);
  std::vector<Var> layers;
  for (int l = 0; l < 4; ++l) layers.emplace_back(RandomMatrix(3, 5, rng));
  const Matrix fused = FuseLayers(layers).value();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 5; ++j) {
      double best = -INFINITY;
      for (const auto& l : layers) best = std::max(best, l.value()(i, j));
      CHECK(fused(i, j) == best);
      for (const auto& l : layers) CHECK(fused(i, j) >= l.value()(i, j));
    }
  }
  const Matrix mean = FuseLayers(layers, LayerFusion::kMean).value();
  CHECK(mean(1, 2) == doctest::Approx((layers[0].value()(1, 2) +
                                       layers[1].value()(1, 2) +
                                       layers[2].value()(1, 2) +
                                       layers[3].value()(1, 2)) / 4));
  CHECK(FuseLayers(layers, LayerFusion::kLast).value() == layers[3].value());
}

// Independent pooling oracle straight from the pooler's weights.
struct OraclePool {
  Matrix phi;
  std::vector<double> alpha;
  Matrix out;
};

OraclePool Oracle(const Matrix& t, const AttentivePooler& p) {
  const Matrix& w1 = p.layer1.weight.var.value();
  const Matrix& b1 = p.layer1.bias.var.value();
  const Matrix& w2 = p.layer2.weight.var.value();
  const Matrix& b2 = p.layer2.bias.var.value();
  const Matrix& ws = p.score.weight.var.value();
  const double cs = p.score.bias.var.value()(0, 0);
  OraclePool o;
  const int m = static_cast<int>(t.rows());
  o.phi = Matrix(m, t.cols());
  std::vector<double> s(m);
  for (int j = 0; j < m; ++j) {
    Matrix h = t.row(j) * w1 + b1;
    for (int k = 0; k < h.cols(); ++k) {
      const double x = h(0, k);
      h(0, k) = 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0)));
    }
    o.phi.row(j) = h * w2 + b2;
    s[j] = (o.phi.row(j) * ws)(0, 0) + cs;
  }
  double mx = *std::max_element(s.begin(), s.end());
  double z = 0;
  for (double v : s) z += std::exp(v - mx);
  o.out = Matrix::Zero(1, t.cols());
  for (int j = 0; j < m; ++j) {
    o.alpha.push_back(std::exp(s[j] - mx) / z);
    o.out += o.alpha[j] * o.phi.row(j);
  }
  return o;
}

TEST_CASE("pool_fact examples") {
  std::mt19937_64 rng(9);
  const AttentivePooler pooler(6, 6, ag::Activation::kGelu, rng);

  const Matrix one = RandomMatrix(1, 6, rng);
  const auto single = PoolFact(Var(one), pooler);
  CHECK(single.weights(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((single.vector.value() - pooler.Phi(Var(one)).value()).norm() < 1e-12);

  Matrix twice(2, 6);
  twice.row(0) = one.row(0);
  twice.row(1) = one.row(0);
  const auto dup = PoolFact(Var(twice), pooler);
  CHECK(dup.weights(0, 0) == doctest::Approx(0.5));
  CHECK(dup.weights(0, 1) == doctest::Approx(0.5));
  CHECK((dup.vector.value() - single.vector.value()).norm() < 1e-12);

  const Matrix three = RandomMatrix(3, 6, rng);
  const auto pooled = PoolFact(Var(three), pooler);
  const auto oracle = Oracle(three, pooler);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(pooled.weights(0, j) - oracle.alpha[j]) < 1e-6);
  }
  CHECK((pooled.vector.value() - oracle.out).cwiseAbs().maxCoeff() < 1e-6);

  CHECK_THROWS(PoolFact(Var(Matrix(0, 6)), pooler));
}

TEST_CASE("pool_fact weights form a distribution and output is in the hull") {
  std::mt19937_64 rng(21);
  const AttentivePooler pooler(8, 8, ag::Activation::kGelu, rng);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 7);
    const Matrix t = 3.0 * RandomMatrix(m, 8, rng);
    const auto pooled = PoolFact(Var(t), pooler);
    CHECK(pooled.weights.minCoeff() > 0.0);
    CHECK(std::abs(pooled.weights.sum() - 1.0) < 1e-6);
    const Matrix phi = pooler.Phi(Var(t)).value();
    for (int k = 0; k < 8; ++k) {
      const double v = pooled.vector.value()(0, k);
      CHECK(v >= phi.col(k).minCoeff() - 1e-9);
      CHECK(v <= phi.col(k).maxCoeff() + 1e-9);
    }
  }
}

TEST_CASE("PoolFrames equals pooling each frame separately") {
  std::mt19937_64 rng(5);
  const AttentivePooler pooler(4, 4, ag::Activation::kGelu, rng);
  const Matrix tokens = RandomMatrix(7, 4, rng);
  std::vector<AlignedFrame> frames(2);
  frames[0].positions = {1, 2, 5};
  frames[1].positions = {3};
  const Matrix pooled = PoolFrames(Var(tokens), frames, pooler).value();
  REQUIRE(pooled.rows() == 2);
  for (int f = 0; f < 2; ++f) {
    Matrix rows(frames[f].positions.size(), 4);
    for (std::size_t i = 0; i < frames[f].positions.size(); ++i) {
      rows.row(i) = tokens.row(frames[f].positions[i]);
    }
    CHECK((pooled.row(f) - Oracle(rows, pooler).out).norm() < 1e-9);
  }
}

PreparedInput ToyInput(const Tokenizer& tok, bool reverse_doc_frames) {
  std::vector<SemanticFrame> doc(3), sum(2);
  doc[0].predicate = {1, 2};
  doc[0].arguments = {{"ARG0", {0, 1}}};
  doc[1].predicate = {3, 4};
  doc[2].sentence_index = 1;
  doc[2].predicate = {0, 2};
  sum[0].predicate = {1, 2};
  sum[1].predicate = {0, 1};
  sum[1].arguments = {{"ARG1", {2, 3}}};
  if (reverse_doc_frames) std::reverse(doc.begin(), doc.end());
  return PrepareInput("Ann met Bob and Cy . Dee left early .", doc,
                      "Ann met Bob .", sum, tok, 64);
}

TEST_CASE("encode_sample shapes, permutation and determinism") {
  auto enc = TransformerEncoder::MakeToy(16, 2, 2, 64, 11);
  std::mt19937_64 rng(1);
  const AttentivePooler pooler(16, 16, ag::Activation::kGelu, rng);
  ag::NoGradGuard no_grad;

  const auto input = ToyInput(enc->tokenizer(), false);
  const auto facts = EncodeSample(input, *enc, pooler);
  CHECK(facts.document.rows() == 3);
  CHECK(facts.document.cols() == 16);
  CHECK(facts.summary.rows() == 2);
  CHECK(facts.encoder_output.layers.size() == 2);
  CHECK(facts.encoder_output.final_attention.size() == 2);
  const int seq = static_cast<int>(input.encoder_input.ids.size());
  CHECK(facts.encoder_output.final_attention[0].rows() == seq);
  CHECK(facts.encoder_output.final_attention[0].row(0).sum() ==
        doctest::Approx(1.0));

  const auto reversed = EncodeSample(ToyInput(enc->tokenizer(), true), *enc,
                                     pooler);
  for (int i = 0; i < 3; ++i) {
    CHECK((reversed.document.value().row(i) -
           facts.document.value().row(2 - i)).norm() < 1e-12);
  }

  auto enc2 = TransformerEncoder::MakeToy(16, 2, 2, 64, 11);
  const auto again = EncodeSample(input, *enc2, pooler);
  CHECK(again.document.value() == facts.document.value());
  CHECK(again.summary.value() == facts.summary.value());

  PreparedInput no_summary = input;
  no_summary.summary_alignment.frames.clear();
  CHECK_THROWS(EncodeSample(no_summary, *enc, pooler));
}

TEST_CASE("prepare_input layout and truncation budget") {
  HashingTokenizer tok(512);
  const auto p = ToyInput(tok, false);
  const auto& ids = p.encoder_input.ids;
  // [CLS] 10 doc words [SEP] 4 summary words [SEP]
  REQUIRE(ids.size() == 17);
  CHECK(ids[0] == tok.cls_id());
  CHECK(ids[11] == tok.sep_id());
  CHECK(ids[16] == tok.sep_id());
  CHECK(p.encoder_input.segments[11] == 0);
  CHECK(p.encoder_input.segments[12] == 1);
  CHECK(p.summary_alignment.frames[0].positions == std::vector<int>{13});

  std::vector<SemanticFrame> doc(1), sum(1);
  doc[0].predicate = {0, 1};
  sum[0].predicate = {0, 1};
  std::string words;
  for (int i = 0; i < 300; ++i) words += "w" + std::to_string(i) + " ";
  const auto t = PrepareInput(words, doc, words, sum, tok, 64);
  CHECK(t.encoder_input.ids.size() == 64);
  CHECK(t.summary_alignment.frames.size() == 1);
  for (const auto& f : t.summary_alignment.frames) {
    for (int pos : f.positions) CHECK(pos < 63);
  }
}

TEST_CASE("tokenizers") {
  HashingTokenizer hashing(100);
  CHECK(hashing.TokenizeWord("Flame") == hashing.TokenizeWord("flame"));
  const int id = hashing.TokenizeWord("flame")[0];
  CHECK(id >= 4);
  CHECK(id < 100);

  WordPieceTokenizer wp({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "un", "##aff",
                         "##able", "flame"});
  CHECK(wp.TokenizeWord("unaffable") == std::vector<int>{4, 5, 6});
  CHECK(wp.TokenizeWord("Flame") == std::vector<int>{7});
  CHECK(wp.TokenizeWord("zzz") == std::vector<int>{wp.unk_id()});
  CHECK(wp.cls_id() == 2);
  CHECK(wp.sep_id() == 3);
}

TEST_CASE("weight file round trip and loading") {
  std::mt19937_64 rng(2);
  const std::vector<NamedTensor> tensors = {
      {"a.weight", RandomMatrix(3, 2, rng)}, {"b", RandomMatrix(1, 4, rng)}};
  const std::string path = "encoder_weights.ffwt";
  WriteWeightFile(path, tensors);
  const auto back = ReadWeightFile(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].name == "a.weight");
  // Stored as float32.
  CHECK((back[0].value - tensors[0].value).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(back[1].value.cols() == 4);
  std::filesystem::remove(path);

  ag::Parameter a = ag::MakeParameter("a.weight", Matrix::Zero(3, 2));
  ag::Parameter c = ag::MakeParameter("c", Matrix::Zero(2, 2));
  LoadWeights(back, {&a, &c}, "a.");
  CHECK(a.var.value() == back[0].value);
  CHECK_THROWS(LoadWeights(back, {&c}, "c"));

  ag::Parameter wrong = ag::MakeParameter("a.weight", Matrix::Zero(2, 2));
  CHECK_THROWS(LoadWeights(back, {&wrong}, ""));
}

TEST_CASE("toy encoder from a weight dump reproduces its output") {
  auto enc = TransformerEncoder::MakeToy(8, 1, 2, 32, 4);
  std::vector<NamedTensor> dump;
  for (auto* p : enc->Parameters()) dump.push_back({p->name, p->var.value()});
  auto other = TransformerEncoder::MakeToy(8, 1, 2, 32, 99);
  LoadWeights(dump, other->Parameters(), "");
  EncoderInput in{{2, 10, 11, 3, 12, 3}, {0, 0, 0, 0, 1, 1}};
  ag::NoGradGuard no_grad;
  CHECK(enc->Encode(in).layers[0].value() == other->Encode(in).layers[0].value());
}

}  // namespace
}  // namespace factframe
