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
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "factframe/errors.h"
#include "factframe/fact_attention.h"

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

Matrix Affine(const Matrix& x, const Linear& l) {
  Matrix y = x * l.weight.var.value();
  for (int i = 0; i < y.rows(); ++i) y.row(i) += l.bias.var.value().row(0);
  return y;
}

// Scaled dot-product attention written with explicit loops.
struct OracleAttention {
  Matrix context;
  std::vector<Matrix> probs;
};

OracleAttention Oracle(const Matrix& fs, const Matrix& fd,
                       const MultiHeadCrossAttention& mha) {
  const auto& a = mha.attention();
  const int d = a.hidden(), h = a.heads(), dh = d / h;
  const Matrix q = Affine(fs, a.query), k = Affine(fd, a.key),
               v = Affine(fd, a.value);
  Matrix heads_out = Matrix::Zero(fs.rows(), d);
  OracleAttention o;
  for (int head = 0; head < h; ++head) {
    Matrix p(fs.rows(), fd.rows());
    for (int j = 0; j < fs.rows(); ++j) {
      std::vector<double> logits(fd.rows());
      for (int i = 0; i < fd.rows(); ++i) {
        double dot = 0;
        for (int c = 0; c < dh; ++c) {
          dot += q(j, head * dh + c) * k(i, head * dh + c);
        }
        logits[i] = dot / std::sqrt(static_cast<double>(dh));
      }
      double z = 0;
      for (double l : logits) z += std::exp(l);
      for (int i = 0; i < fd.rows(); ++i) p(j, i) = std::exp(logits[i]) / z;
      for (int c = 0; c < dh; ++c) {
        double acc = 0;
        for (int i = 0; i < fd.rows(); ++i) acc += p(j, i) * v(i, head * dh + c);
        heads_out(j, head * dh + c) = acc;
      }
    }
    o.probs.push_back(p);
  }
  o.context = Affine(heads_out, a.output);
  return o;
}

TEST_CASE("construction rejects d not divisible by heads") {
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(MultiHeadCrossAttention(8, 3, rng), ConfigError);
}

TEST_CASE("single document fact gets all attention") {
  std::mt19937_64 rng(2);
  const MultiHeadCrossAttention mha(8, 2, rng);
  const Matrix fs = RandomMatrix(3, 8, rng), fd = RandomMatrix(1, 8, rng);
  ag::NoGradGuard no_grad;
  const auto r = Attend(Var(fs), Var(fd), mha);
  for (const auto& p : r.probabilities) {
    CHECK((p.array() - 1.0).abs().maxCoeff() < 1e-15);
  }
  const Matrix expected =
      Affine(Affine(fd, mha.attention().value), mha.attention().output);
  for (int j = 0; j < 3; ++j) {
    CHECK((r.context.value().row(j) - expected.row(0)).norm() < 1e-12);
  }
}

TEST_CASE("duplicated document facts share attention") {
  std::mt19937_64 rng(3);
  const MultiHeadCrossAttention mha(8, 2, rng);
  Matrix fd = RandomMatrix(3, 8, rng);
  fd.row(2) = fd.row(0);
  ag::NoGradGuard no_grad;
  const auto r = Attend(Var(RandomMatrix(2, 8, rng)), Var(fd), mha);
  for (const auto& p : r.probabilities) {
    for (int j = 0; j < 2; ++j) CHECK(std::abs(p(j, 0) - p(j, 2)) < 1e-15);
  }
}

TEST_CASE("attend matches a hand-rolled oracle") {
  std::mt19937_64 rng(4);
  const MultiHeadCrossAttention mha(8, 2, rng);
  const Matrix fs = RandomMatrix(2, 8, rng), fd = RandomMatrix(3, 8, rng);
  ag::NoGradGuard no_grad;
  const auto r = Attend(Var(fs), Var(fd), mha);
  const auto o = Oracle(fs, fd, mha);
  CHECK((r.context.value() - o.context).cwiseAbs().maxCoeff() < 1e-5);
  REQUIRE(r.probabilities.size() == 2);
  for (int h = 0; h < 2; ++h) {
    CHECK((r.probabilities[h] - o.probs[h]).cwiseAbs().maxCoeff() < 1e-12);
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(r.probabilities[h].row(j).sum() - 1.0) < 1e-12);
    }
  }
  CHECK_THROWS(Attend(Var(Matrix(0, 8)), Var(fd), mha));
  CHECK_THROWS(Attend(Var(fs), Var(RandomMatrix(3, 4, rng)), mha));
}

TEST_CASE("importance examples") {
  std::mt19937_64 rng(5);
  const MultiHeadCrossAttention mha(8, 4, rng);
  ag::NoGradGuard no_grad;
  for (int nd = 1; nd <= 6; ++nd) {
    const auto r = Attend(Var(RandomMatrix(2, 8, rng)),
                          Var(RandomMatrix(nd, 8, rng)), mha);
    const auto imp = Importance(r.probabilities);
    CHECK(imp.scores.size() == static_cast<std::size_t>(nd));
    CHECK(imp.heads == 4);
    CHECK(imp.summary_facts == 2);
    const double total = std::accumulate(imp.scores.begin(), imp.scores.end(), 0.0);
    CHECK(std::abs(total - 8.0) < 1e-4);
    for (double s : imp.scores) CHECK(s >= 0.0);
  }

  const Matrix uniform = Matrix::Constant(1, 4, 0.25);
  const auto u = Importance({uniform});
  for (double s : u.scores) CHECK(s == 0.25);
}

TEST_CASE("importance matches a triple loop") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Matrix> a(3, Matrix(4, 5));
  for (auto& m : a) {
    for (int j = 0; j < 4; ++j) {
      for (int i = 0; i < 5; ++i) m(j, i) = unif(rng);
      m.row(j) /= m.row(j).sum();
    }
  }
  const auto imp = Importance(a);
  for (int i = 0; i < 5; ++i) {
    double s = 0;
    for (int h = 0; h < 3; ++h) {
      for (int j = 0; j < 4; ++j) s += a[h](j, i);
    }
    CHECK(imp.scores[i] == s);
  }
}

std::vector<int> Frames(const HighlightResult& r) {
  std::vector<int> out;
  for (const auto& h : r.ranked) out.push_back(h.frame);
  return out;
}

TEST_CASE("top-k examples") {
  CHECK(Frames(TopKHighlights({0.5, 0.2, 0.9}, 2)) == std::vector<int>{2, 0});
  CHECK(Frames(TopKHighlights({0.5, 0.2, 0.9}, 10)) ==
        std::vector<int>{2, 0, 1});
  CHECK(Frames(TopKHighlights({0.5, 0.5}, 1)) == std::vector<int>{0});
  CHECK(Frames(TopKHighlights({0.1, 0.5, 0.5, 0.5}, 3)) ==
        std::vector<int>{1, 2, 3});
  CHECK_THROWS(TopKHighlights({0.1}, 0));
  const auto r = TopKHighlights({0.3, 0.7}, 2);
  CHECK(r.ranked[0].score == 0.7);
}

TEST_CASE("document permutation permutes importance, keeps context") {
  std::mt19937_64 rng(7);
  const MultiHeadCrossAttention mha(8, 2, rng);
  const Matrix fs = RandomMatrix(3, 8, rng), fd = RandomMatrix(5, 8, rng);
  const std::vector<int> perm = {3, 0, 4, 1, 2};
  Matrix fd_perm(5, 8);
  for (int i = 0; i < 5; ++i) fd_perm.row(i) = fd.row(perm[i]);
  ag::NoGradGuard no_grad;
  const auto a = Attend(Var(fs), Var(fd), mha);
  const auto b = Attend(Var(fs), Var(fd_perm), mha);
  CHECK((a.context.value() - b.context.value()).cwiseAbs().maxCoeff() < 1e-12);
  const auto ia = Importance(a.probabilities), ib = Importance(b.probabilities);
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(ib.scores[i] - ia.scores[perm[i]]) < 1e-12);
  }
  // Highlighted frames by identity.
  std::set<int> top_a, top_b;
  for (int f : Frames(TopKHighlights(ia.scores, 2))) top_a.insert(f);
  for (int f : Frames(TopKHighlights(ib.scores, 2))) top_b.insert(perm[f]);
  CHECK(top_a == top_b);
}

TEST_CASE("summary permutation permutes context, keeps importance") {
  std::mt19937_64 rng(8);
  const MultiHeadCrossAttention mha(8, 4, rng);
  const Matrix fs = RandomMatrix(3, 8, rng), fd = RandomMatrix(4, 8, rng);
  Matrix fs_perm(3, 8);
  fs_perm << fs.row(2), fs.row(0), fs.row(1);
  ag::NoGradGuard no_grad;
  const auto a = Attend(Var(fs), Var(fd), mha);
  const auto b = Attend(Var(fs_perm), Var(fd), mha);
  CHECK((b.context.value().row(0) - a.context.value().row(2)).norm() < 1e-12);
  CHECK((b.context.value().row(1) - a.context.value().row(0)).norm() < 1e-12);
  const auto ia = Importance(a.probabilities), ib = Importance(b.probabilities);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(ia.scores[i] - ib.scores[i]) < 1e-12);
}

TEST_CASE("highlight rendering and json") {
  const auto text = TokenizedText::Split("David saw the flame .");
  SemanticFrame f;
  f.predicate = {1, 2};
  f.arguments = {{"ARG0", {0, 1}}, {"ARG1", {2, 4}}};
  CHECK(RenderFrame(f, text) == "[ARG0 David] [V saw] [ARG1 the flame]");
  const auto j = HighlightsToJson("x", TopKHighlights({1.5}, 5), {f}, text);
  CHECK(j["sample_id"] == "x");
  REQUIRE(j["highlights"].size() == 1);
  CHECK(j["highlights"][0]["rank"] == 1);
  CHECK(j["highlights"][0]["score"] == 1.5);
  CHECK(j["highlights"][0]["predicate"] == "saw");
  CHECK(j["highlights"][0]["args"][1]["text"] == "the flame");
}

}  // namespace
}  // namespace factframe
