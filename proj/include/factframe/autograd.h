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

// Small reverse-mode automatic differentiation over dense double matrices.
//
// A Var wraps a node holding a value and (lazily) a gradient. Operations on
// Vars that require gradients record their parents and a backward closure;
// Var::Backward() on a scalar walks the graph in reverse topological order.
// Leaf parameter gradients accumulate across Backward() calls until cleared,
// which is what gradient accumulation needs. Graphs are acyclic by
// construction: nodes only point at their parents.

#ifndef FACTFRAME_AUTOGRAD_H_
#define FACTFRAME_AUTOGRAD_H_

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace factframe::ag {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;

struct Node {
  Matrix value;
  Matrix grad;  // empty until something flows into it
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;

  Matrix& MutableGrad();
  void AccumulateGrad(const Matrix& g);
};

class Var {
 public:
  Var() = default;
  explicit Var(Matrix value, bool requires_grad = false);

  const Matrix& value() const { return node_->value; }
  Matrix& mutable_value() { return node_->value; }
  // Gradient; a zero matrix of the value's shape if nothing flowed in.
  Matrix grad() const;
  bool requires_grad() const { return node_ && node_->requires_grad; }
  Eigen::Index rows() const { return node_->value.rows(); }
  Eigen::Index cols() const { return node_->value.cols(); }
  bool defined() const { return node_ != nullptr; }
  double scalar() const { return node_->value(0, 0); }

  void ZeroGrad();
  // Seeds d(this)/d(this) = 1; this must be 1x1.
  void Backward() const;

  const std::shared_ptr<Node>& node() const { return node_; }

  static Var FromOp(Matrix value, std::vector<Var> parents,
                    std::function<void(Node&)> backward);

 private:
  std::shared_ptr<Node> node_;
};

// Disables graph recording on this thread while alive.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};
bool GradEnabled();

// Linear algebra.
Var MatMul(const Var& a, const Var& b);
Var Transpose(const Var& a);
Var Add(const Var& a, const Var& b);
Var Sub(const Var& a, const Var& b);
Var Mul(const Var& a, const Var& b);  // elementwise
Var Scale(const Var& a, double s);
// a (n x m) + row (1 x m) broadcast over rows.
Var AddRow(const Var& a, const Var& row);

// Elementwise nonlinearities.
Var Relu(const Var& a);
Var Gelu(const Var& a);  // exact erf form
Var Tanh(const Var& a);
Var Sigmoid(const Var& a);

enum class Activation { kGelu, kRelu, kTanh };
Activation ParseActivation(const std::string& name);
std::string ActivationName(Activation act);
Var Activate(const Var& a, Activation act);

// Row-wise softmax.
Var SoftmaxRows(const Var& a);
// Row-wise layer normalization with learned gain/bias (1 x cols each).
Var LayerNormRows(const Var& a, const Var& gamma, const Var& beta,
                  double eps = 1e-12);

// Reductions and reshaping.
Var MaxOf(const std::vector<Var>& xs);   // elementwise, first argmax on ties
Var MeanOf(const std::vector<Var>& xs);  // elementwise
Var MeanRows(const Var& a);              // 1 x cols
Var SumAll(const Var& a);                // 1 x 1
Var ConcatCols(const std::vector<Var>& xs);
Var ConcatRows(const std::vector<Var>& xs);
Var SliceCols(const Var& a, Eigen::Index begin, Eigen::Index count);
Var SliceRows(const Var& a, Eigen::Index begin, Eigen::Index count);
Var GatherRows(const Var& a, const std::vector<int>& rows);

// A trainable or frozen named tensor.
struct Parameter {
  std::string name;
  Var var;
  bool trainable = true;
};

using ParameterList = std::vector<Parameter*>;

Parameter MakeParameter(std::string name, Matrix value, bool trainable = true);
// Normal(0, stddev) initialization.
Matrix RandomNormal(Eigen::Index rows, Eigen::Index cols, double stddev,
                    std::mt19937_64& rng);
// Glorot-style normal init for a fan_in x fan_out weight.
Matrix GlorotNormal(Eigen::Index fan_in, Eigen::Index fan_out,
                    std::mt19937_64& rng);

}  // namespace factframe::ag

#endif  // FACTFRAME_AUTOGRAD_H_
