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

#include "factframe/autograd.h"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace factframe::ag {
namespace {

thread_local bool grad_enabled = true;

void CheckSameShape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch (" +
                                std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
  }
}

Node& Parent(Node& self, std::size_t i) { return *self.parents[i]; }

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

}  // namespace

Matrix& Node::MutableGrad() {
  if (grad.size() == 0) grad = Matrix::Zero(value.rows(), value.cols());
  return grad;
}

void Node::AccumulateGrad(const Matrix& g) {
  if (grad.size() == 0) {
    grad = g;
  } else {
    grad += g;
  }
}

Var::Var(Matrix value, bool requires_grad)
    : node_(std::make_shared<Node>()) {
  node_->value = std::move(value);
  node_->requires_grad = requires_grad;
}

Matrix Var::grad() const {
  if (node_->grad.size() == 0) {
    return Matrix::Zero(node_->value.rows(), node_->value.cols());
  }
  return node_->grad;
}

void Var::ZeroGrad() {
  if (node_->grad.size() != 0) node_->grad.setZero();
}

Var Var::FromOp(Matrix value, std::vector<Var> parents,
                std::function<void(Node&)> backward) {
  Var out(std::move(value), false);
  if (!grad_enabled) return out;
  bool any = false;
  for (const Var& p : parents) any = any || p.requires_grad();
  if (!any) return out;
  out.node_->requires_grad = true;
  out.node_->parents.reserve(parents.size());
  for (const Var& p : parents) out.node_->parents.push_back(p.node_);
  out.node_->backward = std::move(backward);
  return out;
}

void Var::Backward() const {
  if (node_->value.rows() != 1 || node_->value.cols() != 1) {
    throw std::invalid_argument("Backward() requires a 1x1 value");
  }
  if (!node_->requires_grad) return;

  // Iterative post-order DFS gives a topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(node_.get(), 0);
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next < n->parents.size()) {
      Node* p = n->parents[next++].get();
      if (p->requires_grad && visited.insert(p).second) {
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }

  node_->AccumulateGrad(Matrix::Ones(1, 1));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (!n->backward || n->grad.size() == 0) continue;
    n->backward(*n);
    // Interior gradients are not needed after propagation.
    if (n != node_.get()) n->grad.resize(0, 0);
  }
}

NoGradGuard::NoGradGuard() : previous_(grad_enabled) { grad_enabled = false; }
NoGradGuard::~NoGradGuard() { grad_enabled = previous_; }
bool GradEnabled() { return grad_enabled; }

Var MatMul(const Var& a, const Var& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument(
        "MatMul: inner dimensions differ (" + std::to_string(a.cols()) +
        " vs " + std::to_string(b.rows()) + ")");
  }
  return Var::FromOp(a.value() * b.value(), {a, b}, [](Node& self) {
    Node& pa = Parent(self, 0);
    Node& pb = Parent(self, 1);
    if (pa.requires_grad) pa.MutableGrad().noalias() += self.grad * pb.value.transpose();
    if (pb.requires_grad) pb.MutableGrad().noalias() += pa.value.transpose() * self.grad;
  });
}

Var Transpose(const Var& a) {
  return Var::FromOp(a.value().transpose(), {a}, [](Node& self) {
    Parent(self, 0).MutableGrad() += self.grad.transpose();
  });
}

Var Add(const Var& a, const Var& b) {
  CheckSameShape(a.value(), b.value(), "Add");
  return Var::FromOp(a.value() + b.value(), {a, b}, [](Node& self) {
    for (int i = 0; i < 2; ++i) {
      Node& p = Parent(self, i);
      if (p.requires_grad) p.AccumulateGrad(self.grad);
    }
  });
}

Var Sub(const Var& a, const Var& b) {
  CheckSameShape(a.value(), b.value(), "Sub");
  return Var::FromOp(a.value() - b.value(), {a, b}, [](Node& self) {
    Node& pa = Parent(self, 0);
    Node& pb = Parent(self, 1);
    if (pa.requires_grad) pa.AccumulateGrad(self.grad);
    if (pb.requires_grad) pb.MutableGrad() -= self.grad;
  });
}

Var Mul(const Var& a, const Var& b) {
  CheckSameShape(a.value(), b.value(), "Mul");
  return Var::FromOp(a.value().cwiseProduct(b.value()), {a, b}, [](Node& self) {
    Node& pa = Parent(self, 0);
    Node& pb = Parent(self, 1);
    if (pa.requires_grad) pa.MutableGrad() += self.grad.cwiseProduct(pb.value);
    if (pb.requires_grad) pb.MutableGrad() += self.grad.cwiseProduct(pa.value);
  });
}

Var Scale(const Var& a, double s) {
  return Var::FromOp(a.value() * s, {a}, [s](Node& self) {
    Parent(self, 0).MutableGrad() += self.grad * s;
  });
}

Var AddRow(const Var& a, const Var& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) {
    throw std::invalid_argument("AddRow: row must be 1 x " +
                                std::to_string(a.cols()));
  }
  Matrix out = a.value();
  out.rowwise() += row.value().row(0);
  return Var::FromOp(std::move(out), {a, row}, [](Node& self) {
    Node& pa = Parent(self, 0);
    Node& pr = Parent(self, 1);
    if (pa.requires_grad) pa.AccumulateGrad(self.grad);
    if (pr.requires_grad) pr.MutableGrad() += self.grad.colwise().sum();
  });
}

Var Relu(const Var& a) {
  Matrix out = a.value().cwiseMax(0.0);
  return Var::FromOp(std::move(out), {a}, [](Node& self) {
    Node& p = Parent(self, 0);
    p.MutableGrad() +=
        (p.value.array() > 0.0).cast<double>().matrix().cwiseProduct(self.grad);
  });
}

Var Gelu(const Var& a) {
  const Matrix& x = a.value();
  Matrix out = x.unaryExpr(
      [](double v) { return 0.5 * v * (1.0 + std::erf(v * kInvSqrt2)); });
  return Var::FromOp(std::move(out), {a}, [](Node& self) {
    Node& p = Parent(self, 0);
    Matrix d = p.value.unaryExpr([](double v) {
      const double cdf = 0.5 * (1.0 + std::erf(v * kInvSqrt2));
      const double pdf = kInvSqrt2Pi * std::exp(-0.5 * v * v);
      return cdf + v * pdf;
    });
    p.MutableGrad() += d.cwiseProduct(self.grad);
  });
}

Var Tanh(const Var& a) {
  Matrix out = a.value().array().tanh().matrix();
  return Var::FromOp(out, {a}, [out](Node& self) {
    Parent(self, 0).MutableGrad() +=
        (1.0 - out.array().square()).matrix().cwiseProduct(self.grad);
  });
}

Var Sigmoid(const Var& a) {
  Matrix out = a.value().unaryExpr([](double v) {
    if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
  });
  return Var::FromOp(out, {a}, [out](Node& self) {
    Parent(self, 0).MutableGrad() +=
        (out.array() * (1.0 - out.array())).matrix().cwiseProduct(self.grad);
  });
}

Activation ParseActivation(const std::string& name) {
  if (name == "gelu") return Activation::kGelu;
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  throw std::invalid_argument("unknown activation: " + name);
}

std::string ActivationName(Activation act) {
  switch (act) {
    case Activation::kGelu: return "gelu";
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
  }
  return "gelu";
}

Var Activate(const Var& a, Activation act) {
  switch (act) {
    case Activation::kGelu: return Gelu(a);
    case Activation::kRelu: return Relu(a);
    case Activation::kTanh: return Tanh(a);
  }
  return a;
}

Var SoftmaxRows(const Var& a) {
  Matrix out = a.value();
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double m = out.row(r).maxCoeff();
    out.row(r) = (out.row(r).array() - m).exp().matrix();
    out.row(r) /= out.row(r).sum();
  }
  return Var::FromOp(out, {a}, [out](Node& self) {
    // dx = y * (g - sum(g * y)) per row.
    Eigen::VectorXd dots = self.grad.cwiseProduct(out).rowwise().sum();
    Matrix g = self.grad;
    g.colwise() -= dots;
    Parent(self, 0).MutableGrad() += out.cwiseProduct(g);
  });
}

Var LayerNormRows(const Var& a, const Var& gamma, const Var& beta, double eps) {
  const Matrix& x = a.value();
  const Eigen::Index n = x.cols();
  if (gamma.rows() != 1 || gamma.cols() != n || beta.rows() != 1 ||
      beta.cols() != n) {
    throw std::invalid_argument("LayerNormRows: gain/bias must be 1 x cols");
  }
  Eigen::VectorXd mean = x.rowwise().mean();
  Matrix centered = x.colwise() - mean;
  Eigen::VectorXd inv_std =
      ((centered.array().square().rowwise().sum() / static_cast<double>(n)) +
       eps)
          .rsqrt()
          .matrix();
  Matrix xhat = centered.array().colwise() * inv_std.array();
  Matrix out = xhat.array().rowwise() * gamma.value().row(0).array();
  out.rowwise() += beta.value().row(0);
  return Var::FromOp(std::move(out), {a, gamma, beta},
                     [xhat, inv_std](Node& self) {
    Node& px = Parent(self, 0);
    Node& pg = Parent(self, 1);
    Node& pb = Parent(self, 2);
    const double n = static_cast<double>(xhat.cols());
    if (pg.requires_grad) {
      pg.MutableGrad() += self.grad.cwiseProduct(xhat).colwise().sum();
    }
    if (pb.requires_grad) pb.MutableGrad() += self.grad.colwise().sum();
    if (px.requires_grad) {
      Matrix dxhat = self.grad.array().rowwise() * pg.value.row(0).array();
      Eigen::VectorXd sum_d = dxhat.rowwise().sum();
      Eigen::VectorXd sum_dx = dxhat.cwiseProduct(xhat).rowwise().sum();
      Matrix dx = (n * dxhat).colwise() - sum_d;
      dx -= (xhat.array().colwise() * sum_dx.array()).matrix();
      dx = (dx.array().colwise() * (inv_std.array() / n)).matrix();
      px.MutableGrad() += dx;
    }
  });
}

Var MaxOf(const std::vector<Var>& xs) {
  if (xs.empty()) throw std::invalid_argument("MaxOf: no inputs");
  const Matrix& first = xs[0].value();
  Matrix out = first;
  Eigen::MatrixXi arg = Eigen::MatrixXi::Zero(first.rows(), first.cols());
  for (std::size_t k = 1; k < xs.size(); ++k) {
    CheckSameShape(first, xs[k].value(), "MaxOf");
    const Matrix& v = xs[k].value();
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      for (Eigen::Index r = 0; r < out.rows(); ++r) {
        if (v(r, c) > out(r, c)) {
          out(r, c) = v(r, c);
          arg(r, c) = static_cast<int>(k);
        }
      }
    }
  }
  return Var::FromOp(std::move(out), xs, [arg](Node& self) {
    for (std::size_t k = 0; k < self.parents.size(); ++k) {
      Node& p = *self.parents[k];
      if (!p.requires_grad) continue;
      Matrix& g = p.MutableGrad();
      for (Eigen::Index c = 0; c < arg.cols(); ++c) {
        for (Eigen::Index r = 0; r < arg.rows(); ++r) {
          if (arg(r, c) == static_cast<int>(k)) g(r, c) += self.grad(r, c);
        }
      }
    }
  });
}

Var MeanOf(const std::vector<Var>& xs) {
  if (xs.empty()) throw std::invalid_argument("MeanOf: no inputs");
  Matrix out = xs[0].value();
  for (std::size_t k = 1; k < xs.size(); ++k) {
    CheckSameShape(out, xs[k].value(), "MeanOf");
    out += xs[k].value();
  }
  const double inv = 1.0 / static_cast<double>(xs.size());
  out *= inv;
  return Var::FromOp(std::move(out), xs, [inv](Node& self) {
    for (auto& p : self.parents) {
      if (p->requires_grad) p->MutableGrad() += self.grad * inv;
    }
  });
}

Var MeanRows(const Var& a) {
  if (a.rows() == 0) throw std::invalid_argument("MeanRows: no rows");
  Matrix out = a.value().colwise().mean();
  return Var::FromOp(std::move(out), {a}, [](Node& self) {
    Node& p = Parent(self, 0);
    const double inv = 1.0 / static_cast<double>(p.value.rows());
    p.MutableGrad().rowwise() += self.grad.row(0) * inv;
  });
}

Var SumAll(const Var& a) {
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return Var::FromOp(std::move(out), {a}, [](Node& self) {
    Node& p = Parent(self, 0);
    p.MutableGrad().array() += self.grad(0, 0);
  });
}

Var ConcatCols(const std::vector<Var>& xs) {
  if (xs.empty()) throw std::invalid_argument("ConcatCols: no inputs");
  Eigen::Index cols = 0;
  for (const Var& x : xs) {
    if (x.rows() != xs[0].rows()) {
      throw std::invalid_argument("ConcatCols: row counts differ");
    }
    cols += x.cols();
  }
  Matrix out(xs[0].rows(), cols);
  Eigen::Index c = 0;
  for (const Var& x : xs) {
    out.middleCols(c, x.cols()) = x.value();
    c += x.cols();
  }
  return Var::FromOp(std::move(out), xs, [](Node& self) {
    Eigen::Index c = 0;
    for (auto& p : self.parents) {
      const Eigen::Index w = p->value.cols();
      if (p->requires_grad) p->MutableGrad() += self.grad.middleCols(c, w);
      c += w;
    }
  });
}

Var ConcatRows(const std::vector<Var>& xs) {
  if (xs.empty()) throw std::invalid_argument("ConcatRows: no inputs");
  Eigen::Index rows = 0;
  for (const Var& x : xs) {
    if (x.cols() != xs[0].cols()) {
      throw std::invalid_argument("ConcatRows: column counts differ");
    }
    rows += x.rows();
  }
  Matrix out(rows, xs[0].cols());
  Eigen::Index r = 0;
  for (const Var& x : xs) {
    out.middleRows(r, x.rows()) = x.value();
    r += x.rows();
  }
  return Var::FromOp(std::move(out), xs, [](Node& self) {
    Eigen::Index r = 0;
    for (auto& p : self.parents) {
      const Eigen::Index h = p->value.rows();
      if (p->requires_grad) p->MutableGrad() += self.grad.middleRows(r, h);
      r += h;
    }
  });
}

Var SliceCols(const Var& a, Eigen::Index begin, Eigen::Index count) {
  if (begin < 0 || count < 0 || begin + count > a.cols()) {
    throw std::out_of_range("SliceCols: range out of bounds");
  }
  return Var::FromOp(a.value().middleCols(begin, count), {a},
                     [begin, count](Node& self) {
    Parent(self, 0).MutableGrad().middleCols(begin, count) += self.grad;
  });
}

Var SliceRows(const Var& a, Eigen::Index begin, Eigen::Index count) {
  if (begin < 0 || count < 0 || begin + count > a.rows()) {
    throw std::out_of_range("SliceRows: range out of bounds");
  }
  return Var::FromOp(a.value().middleRows(begin, count), {a},
                     [begin, count](Node& self) {
    Parent(self, 0).MutableGrad().middleRows(begin, count) += self.grad;
  });
}

Var GatherRows(const Var& a, const std::vector<int>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= a.rows()) {
      throw std::out_of_range("GatherRows: row index " +
                              std::to_string(rows[i]) + " out of range");
    }
    out.row(static_cast<Eigen::Index>(i)) = a.value().row(rows[i]);
  }
  return Var::FromOp(std::move(out), {a}, [rows](Node& self) {
    Matrix& g = Parent(self, 0).MutableGrad();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      g.row(rows[i]) += self.grad.row(static_cast<Eigen::Index>(i));
    }
  });
}

Parameter MakeParameter(std::string name, Matrix value, bool trainable) {
  return Parameter{std::move(name), Var(std::move(value), trainable), trainable};
}

Matrix RandomNormal(Eigen::Index rows, Eigen::Index cols, double stddev,
                    std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  Matrix m(rows, cols);
  // Fill in row-major order so the draw sequence does not depend on storage.
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = dist(rng);
  }
  return m;
}

Matrix GlorotNormal(Eigen::Index fan_in, Eigen::Index fan_out,
                    std::mt19937_64& rng) {
  const double stddev =
      std::sqrt(2.0 / static_cast<double>(fan_in + fan_out));
  return RandomNormal(fan_in, fan_out, stddev, rng);
}

}  // namespace factframe::ag
