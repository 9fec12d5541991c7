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
#include <random>

#include "doctest.h"
#include "factframe/classifier.h"

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

TEST_CASE("fuse examples") {
  std::mt19937_64 rng(1);
  const Matrix one = RandomMatrix(1, 4, rng);
  const auto f1 = Fuse(Var(one), Var(2.0 * one));
  CHECK(f1.summary.value() == one);
  CHECK(f1.context.value() == 2.0 * one);

  Matrix pm(2, 4);
  pm.row(0) = one.row(0);
  pm.row(1) = -one.row(0);
  CHECK(Fuse(Var(pm), Var(pm)).summary.value().norm() == 0.0);

  const Matrix s = RandomMatrix(5, 8, rng), c = RandomMatrix(5, 8, rng);
  const auto f = Fuse(Var(s), Var(c));
  for (int k = 0; k < 8; ++k) {
    double ss = 0, cc = 0;
    for (int i = 0; i < 5; ++i) {
      ss += s(i, k);
      cc += c(i, k);
    }
    CHECK(std::abs(f.summary.value()(0, k) - ss / 5) < 1e-6);
    CHECK(std::abs(f.context.value()(0, k) - cc / 5) < 1e-6);
  }
  CHECK_THROWS(Fuse(Var(Matrix(0, 8)), Var(Matrix(0, 8))));
  CHECK_THROWS(Fuse(Var(s), Var(RandomMatrix(4, 8, rng))));
}

TEST_CASE("predict examples") {
  std::mt19937_64 rng(2);
  ClassifierHead head(8, rng);
  CHECK(head.input_dim() == 16);
  const FusedFacts fused{Var(RandomMatrix(1, 8, rng)), Var(RandomMatrix(1, 8, rng))};

  head.weight.var.mutable_value().setZero();
  head.bias.var.mutable_value().setZero();
  for (double p : ToProbabilities(Predict(fused, head))) CHECK(p == 0.5);

  head.bias.var.mutable_value().setConstant(20.0);
  for (double p : ToProbabilities(Predict(fused, head))) CHECK(p > 0.999);

  head = ClassifierHead(8, rng);
  const auto probs = ToProbabilities(Predict(fused, head));
  const Matrix& w = head.weight.var.value();
  for (int l = 0; l < kNumErrorTypes; ++l) {
    double z = head.bias.var.value()(0, l);
    for (int k = 0; k < 8; ++k) {
      z += fused.summary.value()(0, k) * w(k, l);
      z += fused.context.value()(0, k) * w(8 + k, l);
    }
    CHECK(std::abs(probs[l] - 1.0 / (1.0 + std::exp(-z))) < 1e-6);
    CHECK(probs[l] > 0.0);
    CHECK(probs[l] < 1.0);
  }
}

TEST_CASE("decide examples") {
  CHECK(Decide({0.6, 0.4, 0.5, 0.1}, 0.5) ==
        LabelVector::FromArray({true, false, true, false}));
  const auto none = Decide({0.49, 0.49, 0.49, 0.49}, 0.5);
  CHECK(none.NoError());
  CHECK(none.ToString() == "No Error");
  CHECK(Decide({0.5, 0.0, 0.0, 0.0}, 0.5).Get(ErrorType::kExtrinsicNP));
  CHECK_THROWS(Decide({0.5, 0.5, 0.5, 0.5}, 0.0));
  CHECK_THROWS(Decide({0.5, 0.5, 0.5, 0.5}, 1.0));
}

TEST_CASE("decide is monotone in each probability") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    Probabilities p{u(rng), u(rng), u(rng), u(rng)};
    const double t = 0.05 + 0.9 * u(rng);
    const auto before = Decide(p, t);
    const int i = static_cast<int>(rng() % 4);
    p[i] = std::min(1.0, p[i] + u(rng));
    const auto after = Decide(p, t);
    CHECK((after.bits() & before.bits()) == before.bits());
  }
}

TEST_CASE("predict is invariant to summary fact order") {
  std::mt19937_64 rng(4);
  ClassifierHead head(8, rng);
  const Matrix s = RandomMatrix(4, 8, rng), c = RandomMatrix(4, 8, rng);
  Matrix sp(4, 8), cp(4, 8);
  const int perm[4] = {2, 3, 1, 0};
  for (int i = 0; i < 4; ++i) {
    sp.row(i) = s.row(perm[i]);
    cp.row(i) = c.row(perm[i]);
  }
  const auto a = ToProbabilities(Predict(Fuse(Var(s), Var(c)), head));
  const auto b = ToProbabilities(Predict(Fuse(Var(sp), Var(cp)), head));
  for (int l = 0; l < 4; ++l) CHECK(std::abs(a[l] - b[l]) < 1e-15);
}

}  // namespace
}  // namespace factframe
