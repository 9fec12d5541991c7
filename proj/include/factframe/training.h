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

#ifndef FACTFRAME_TRAINING_H_
#define FACTFRAME_TRAINING_H_

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "factframe/autograd.h"
#include "factframe/checkpoint.h"
#include "factframe/classifier.h"
#include "factframe/core_types.h"
#include "factframe/model.h"
#include "factframe/srl.h"
#include "json.hpp"

namespace factframe {

// kPosOverNeg: beta_i = positives_i / negatives_i.
// kInverse: beta_i = negatives_i / positives_i (the usual pos_weight).
enum class WeightMode { kPosOverNeg, kInverse };
WeightMode ParseWeightMode(const std::string& name);
std::string WeightModeName(WeightMode mode);

struct ClassWeights {
  std::array<double, kNumErrorTypes> beta{1.0, 1.0, 1.0, 1.0};
};

// A class with no positives or no negatives gets beta = 1 and a warning.
ClassWeights ComputeClassWeights(const std::vector<LabelVector>& train_labels,
                                 WeightMode mode = WeightMode::kPosOverNeg);

inline constexpr double kProbabilityClamp = 1e-7;

// -sum_i [beta_i y_i log p_i + (1 - y_i) log(1 - p_i)] with p clamped to
// [1e-7, 1 - 1e-7]. `p` is 1 x 4; the result is 1 x 1.
ag::Var WeightedBce(const ag::Var& p, const LabelVector& gold,
                    const ClassWeights& weights);
double WeightedBceValue(const Probabilities& p, const LabelVector& gold,
                        const ClassWeights& weights);

struct TrainConfig {
  int epochs = 40;
  double learning_rate = 1e-5;
  int batch_size = 12;
  int grad_accum = 2;
  std::uint64_t seed = 13;
  double threshold = 0.5;
  int top_k = 5;
  WeightMode weight_mode = WeightMode::kPosOverNeg;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  // Throws ConfigError on non-positive sizes or a threshold outside (0,1).
  void Validate() const;
  nlohmann::json ToJson() const;
  static TrainConfig FromJson(const nlohmann::json& j);
};

class Adam {
 public:
  Adam(ag::ParameterList params, double learning_rate, double beta1 = 0.9,
       double beta2 = 0.999, double eps = 1e-8);
  void Step();
  void ZeroGrad();
  long steps() const { return t_; }

 private:
  ag::ParameterList params_;
  std::vector<ag::Matrix> m_;
  std::vector<ag::Matrix> v_;
  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  long t_ = 0;
};

// Samples paired with their aligned encoder inputs.
struct PreparedCorpus {
  std::vector<std::string> ids;
  std::vector<PreparedInput> inputs;
  std::vector<LabelVector> labels;
  std::vector<SystemCategory> categories;
  std::size_t size() const { return inputs.size(); }
};

PreparedCorpus PrepareCorpus(const FactModel& model,
                             const std::vector<Sample>& samples,
                             const FrameStore& frames);

std::vector<Prediction> PredictCorpus(const FactModel& model,
                                      const PreparedCorpus& corpus,
                                      double threshold);

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double val_f1 = 0.0;
  double val_bacc = 0.0;
  nlohmann::json ToJson() const;
};

struct TrainResult {
  ModelCheckpoint best;
  std::vector<EpochLog> log;
  ClassWeights weights;
};

struct TrainHooks {
  // Appends one JSON line per epoch when non-empty.
  std::string log_path;
  std::function<void(const EpochLog&)> on_epoch;
};

// Runs config.epochs epochs, stepping the optimizer every grad_accum
// micro-batches, evaluating macro BACC on `validation` after each epoch and
// keeping the best epoch's parameters (ties keep the earlier epoch). The
// model is left holding the best parameters. With epochs == 0 the initial
// model is evaluated once and returned. Throws NonFiniteLossError on a NaN
// or infinite micro-batch loss.
TrainResult Train(FactModel& model, const PreparedCorpus& train,
                  const PreparedCorpus& validation, const TrainConfig& config,
                  const TrainHooks& hooks = {});

// Mean per-sample loss over a corpus without updating anything.
double CorpusLoss(const FactModel& model, const PreparedCorpus& corpus,
                  const ClassWeights& weights);

}  // namespace factframe

#endif  // FACTFRAME_TRAINING_H_
