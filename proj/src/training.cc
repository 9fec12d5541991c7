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

#include "factframe/training.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "factframe/errors.h"
#include "factframe/evaluation.h"
#include "factframe/log.h"

namespace factframe {
namespace {

double Clamp(double p) {
  return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

}  // namespace

WeightMode ParseWeightMode(const std::string& name) {
  if (name == "pos-over-neg") return WeightMode::kPosOverNeg;
  if (name == "inverse") return WeightMode::kInverse;
  throw ConfigError("unknown weight mode: " + name);
}

std::string WeightModeName(WeightMode mode) {
  return mode == WeightMode::kPosOverNeg ? "pos-over-neg" : "inverse";
}

ClassWeights ComputeClassWeights(const std::vector<LabelVector>& train_labels,
                                 WeightMode mode) {
  ClassWeights w;
  for (int i = 0; i < kNumErrorTypes; ++i) {
    long pos = 0;
    for (const auto& y : train_labels) pos += y.Get(i) ? 1 : 0;
    const long neg = static_cast<long>(train_labels.size()) - pos;
    if (pos == 0 || neg == 0) {
      LogWarning("class " + std::string(ErrorTypeShortName(ErrorTypeFromIndex(i))) +
                 " has " + std::to_string(pos) + " positives and " +
                 std::to_string(neg) + " negatives; using weight 1");
      w.beta[i] = 1.0;
      continue;
    }
    w.beta[i] = mode == WeightMode::kPosOverNeg
                    ? static_cast<double>(pos) / static_cast<double>(neg)
                    : static_cast<double>(neg) / static_cast<double>(pos);
  }
  return w;
}

ag::Var WeightedBce(const ag::Var& p, const LabelVector& gold,
                    const ClassWeights& weights) {
  if (p.rows() != 1 || p.cols() != kNumErrorTypes) {
    throw std::invalid_argument("WeightedBce expects 1 x 4 probabilities");
  }
  ag::Matrix out(1, 1);
  out(0, 0) = WeightedBceValue(ToProbabilities(p), gold, weights);
  return ag::Var::FromOp(std::move(out), {p}, [gold, weights](ag::Node& self) {
    ag::Node& parent = *self.parents[0];
    ag::Matrix& g = parent.MutableGrad();
    const double upstream = self.grad(0, 0);
    for (int i = 0; i < kNumErrorTypes; ++i) {
      const double raw = parent.value(0, i);
      // The clamp is flat outside its range.
      if (raw < kProbabilityClamp || raw > 1.0 - kProbabilityClamp) continue;
      const double d = gold.Get(i) ? -weights.beta[i] / raw : 1.0 / (1.0 - raw);
      g(0, i) += upstream * d;
    }
  });
}

double WeightedBceValue(const Probabilities& p, const LabelVector& gold,
                        const ClassWeights& weights) {
  double loss = 0.0;
  for (int i = 0; i < kNumErrorTypes; ++i) {
    const double pi = Clamp(p[i]);
    loss -= gold.Get(i) ? weights.beta[i] * std::log(pi) : std::log(1.0 - pi);
  }
  return loss;
}

void TrainConfig::Validate() const {
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (!(learning_rate >= 0.0)) throw ConfigError("learning rate must be >= 0");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (grad_accum < 1) throw ConfigError("gradient accumulation must be >= 1");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("threshold must lie in (0, 1)");
  }
  if (top_k < 1) throw ConfigError("top-k must be >= 1");
}

nlohmann::json TrainConfig::ToJson() const {
  return {{"epochs", epochs},
          {"learning_rate", learning_rate},
          {"batch_size", batch_size},
          {"grad_accum", grad_accum},
          {"seed", seed},
          {"threshold", threshold},
          {"top_k", top_k},
          {"weight_mode", WeightModeName(weight_mode)},
          {"adam_beta1", adam_beta1},
          {"adam_beta2", adam_beta2},
          {"adam_eps", adam_eps}};
}

TrainConfig TrainConfig::FromJson(const nlohmann::json& j) {
  TrainConfig c;
  c.epochs = j.value("epochs", c.epochs);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.grad_accum = j.value("grad_accum", c.grad_accum);
  c.seed = j.value("seed", c.seed);
  c.threshold = j.value("threshold", c.threshold);
  c.top_k = j.value("top_k", c.top_k);
  c.weight_mode = ParseWeightMode(j.value("weight_mode", WeightModeName(c.weight_mode)));
  c.adam_beta1 = j.value("adam_beta1", c.adam_beta1);
  c.adam_beta2 = j.value("adam_beta2", c.adam_beta2);
  c.adam_eps = j.value("adam_eps", c.adam_eps);
  return c;
}

Adam::Adam(ag::ParameterList params, double learning_rate, double beta1,
           double beta2, double eps)
    : params_(std::move(params)),
      lr_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps) {
  for (auto* p : params_) {
    m_.push_back(ag::Matrix::Zero(p->var.rows(), p->var.cols()));
    v_.push_back(ag::Matrix::Zero(p->var.rows(), p->var.cols()));
  }
}

void Adam::Step() {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    ag::Node& node = *params_[i]->var.node();
    if (node.grad.size() == 0) continue;
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * node.grad;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * node.grad.cwiseAbs2();
    node.value.array() -=
        lr_ * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + eps_);
  }
}

void Adam::ZeroGrad() {
  for (auto* p : params_) p->var.ZeroGrad();
}

PreparedCorpus PrepareCorpus(const FactModel& model,
                             const std::vector<Sample>& samples,
                             const FrameStore& frames) {
  PreparedCorpus c;
  for (const auto& s : samples) {
    c.ids.push_back(s.id);
    c.inputs.push_back(model.Prepare(s, frames));
    c.labels.push_back(s.labels);
    c.categories.push_back(s.system_category);
  }
  return c;
}

std::vector<Prediction> PredictCorpus(const FactModel& model,
                                      const PreparedCorpus& corpus,
                                      double threshold) {
  std::vector<Prediction> out;
  out.reserve(corpus.size());
  for (const auto& in : corpus.inputs) out.push_back(model.Predict(in, threshold));
  return out;
}

nlohmann::json EpochLog::ToJson() const {
  return {{"epoch", epoch},
          {"train_loss", train_loss},
          {"val_f1", val_f1},
          {"val_bacc", val_bacc}};
}

double CorpusLoss(const FactModel& model, const PreparedCorpus& corpus,
                  const ClassWeights& weights) {
  if (corpus.size() == 0) return 0.0;
  ag::NoGradGuard no_grad;
  double total = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    total += WeightedBceValue(
        ToProbabilities(model.Forward(corpus.inputs[i]).probabilities),
        corpus.labels[i], weights);
  }
  return total / static_cast<double>(corpus.size());
}

TrainResult Train(FactModel& model, const PreparedCorpus& train,
                  const PreparedCorpus& validation, const TrainConfig& config,
                  const TrainHooks& hooks) {
  config.Validate();
  TrainResult result;
  result.weights = ComputeClassWeights(train.labels, config.weight_mode);

  std::ofstream log_file;
  if (!hooks.log_path.empty()) {
    log_file.open(hooks.log_path, std::ios::app);
    if (!log_file) throw std::runtime_error("cannot open " + hooks.log_path);
  }
  auto evaluate = [&](EpochLog& entry) {
    if (validation.size() == 0) return;
    const auto preds = PredictCorpus(model, validation, config.threshold);
    std::vector<LabelVector> labels;
    labels.reserve(preds.size());
    for (const auto& p : preds) labels.push_back(p.labels);
    entry.val_f1 = MacroF1(labels, validation.labels);
    entry.val_bacc = MacroBalancedAccuracy(labels, validation.labels,
                                           /*log_degenerate=*/false);
  };
  auto record = [&](const EpochLog& entry) {
    result.log.push_back(entry);
    if (log_file) log_file << entry.ToJson().dump() << '\n' << std::flush;
    if (hooks.on_epoch) hooks.on_epoch(entry);
  };
  auto capture = [&](const EpochLog& entry) {
    result.best = CaptureCheckpoint(model);
    result.best.train_config = config.ToJson();
    result.best.seed = config.seed;
    result.best.epoch = entry.epoch;
    result.best.validation_bacc = entry.val_bacc;
  };

  if (config.epochs == 0) {
    EpochLog entry;
    entry.train_loss = CorpusLoss(model, train, result.weights);
    evaluate(entry);
    record(entry);
    capture(entry);
    return result;
  }

  Adam optimizer(model.TrainableParameters(), config.learning_rate,
                 config.adam_beta1, config.adam_beta2, config.adam_eps);
  optimizer.ZeroGrad();
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  bool have_best = false;
  double best_bacc = 0.0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    // Fisher-Yates with raw engine output keeps the order identical across
    // standard library implementations.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }
    double epoch_loss = 0.0;
    int pending = 0;
    int batch_id = 0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size, ++batch_id) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      const double scale =
          1.0 / (static_cast<double>(end - start) * config.grad_accum);
      double batch_loss = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        const std::size_t idx = order[i];
        const ForwardOutput out = model.Forward(train.inputs[idx]);
        const ag::Var loss =
            WeightedBce(out.probabilities, train.labels[idx], result.weights);
        batch_loss += loss.scalar();
        ag::Scale(loss, scale).Backward();
      }
      if (!std::isfinite(batch_loss)) throw NonFiniteLossError(epoch, batch_id);
      epoch_loss += batch_loss;
      if (++pending == config.grad_accum) {
        optimizer.Step();
        optimizer.ZeroGrad();
        pending = 0;
      }
    }
    if (pending > 0) {
      optimizer.Step();
      optimizer.ZeroGrad();
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss =
        train.size() == 0 ? 0.0 : epoch_loss / static_cast<double>(train.size());
    evaluate(entry);
    record(entry);
    if (!have_best || entry.val_bacc > best_bacc ||
        (validation.size() == 0)) {
      have_best = true;
      best_bacc = entry.val_bacc;
      capture(entry);
    }
  }
  ApplyCheckpoint(result.best, model);
  return result;
}

}  // namespace factframe
