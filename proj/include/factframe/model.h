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

// The full detector: encoder -> fact pooling -> document fact attention ->
// mean fusion -> per-type sigmoid.

#ifndef FACTFRAME_MODEL_H_
#define FACTFRAME_MODEL_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "factframe/classifier.h"
#include "factframe/core_types.h"
#include "factframe/encoder.h"
#include "factframe/fact_attention.h"
#include "factframe/srl.h"
#include "json.hpp"

namespace factframe {

// How each summary fact's document context vector is formed. kMeanPooled is
// the ablation that replaces attention with the mean of all document facts.
enum class DocumentContext { kAttention, kMeanPooled };

struct ModelConfig {
  std::string encoder = "toy";  // "toy" or "adapter"
  int hidden = 32;
  int encoder_layers = 2;
  int encoder_heads = 2;
  int vocab_size = 8192;       // toy only
  int truncation_limit = 512;  // subword positions, specials included
  int adapter_dim = 32;
  std::string base_weights;  // adapter only
  std::string vocab_path;    // adapter only
  int heads = 16;            // document fact attention heads
  int pooler_hidden = 0;     // 0 means `hidden`
  ag::Activation activation = ag::Activation::kGelu;
  LayerFusion fusion = LayerFusion::kMax;
  DocumentContext document_context = DocumentContext::kAttention;
  std::uint64_t seed = 13;

  nlohmann::json ToJson() const;
  static ModelConfig FromJson(const nlohmann::json& j);
};

struct ForwardOutput {
  ag::Var probabilities;  // 1 x 4
  FactMatrices facts;
  AttendResult attention;  // probabilities empty for the mean ablation
  // Aligned document fact row -> index in PreparedInput::document_frames.
  std::vector<int> document_frame_index;
};

struct Prediction {
  Probabilities probabilities{};
  LabelVector labels;
};

class FactModel {
 public:
  // Throws ConfigError for inconsistent configurations.
  explicit FactModel(const ModelConfig& config);
  FactModel(const FactModel&) = delete;
  FactModel& operator=(const FactModel&) = delete;

  PreparedInput Prepare(const Sample& sample, const FrameStore& frames) const;
  PreparedInput Prepare(const std::string& document,
                        std::vector<SemanticFrame> document_frames,
                        const std::string& summary,
                        std::vector<SemanticFrame> summary_frames) const;

  // Records the autograd graph unless a NoGradGuard is active.
  ForwardOutput Forward(const PreparedInput& input) const;
  // Evaluation-mode prediction.
  Prediction Predict(const PreparedInput& input, double threshold) const;
  // Document fact highlights from summed attention; indices refer to
  // input.document_frames. Not available for the mean-pooled ablation.
  HighlightResult Highlights(const PreparedInput& input, int k) const;
  // Same as Highlights but returns every document fact's score, indexed
  // like input.document_frames (dropped frames score 0).
  std::vector<double> DocumentImportance(const PreparedInput& input) const;

  ag::ParameterList Parameters();
  ag::ParameterList TrainableParameters();
  const ModelConfig& config() const { return config_; }
  const TokenEncoder& encoder() const { return *encoder_; }

 private:
  ModelConfig config_;
  std::unique_ptr<TokenEncoder> encoder_;
  AttentivePooler pooler_;
  MultiHeadCrossAttention cross_attention_;
  ClassifierHead head_;
};

}  // namespace factframe

#endif  // FACTFRAME_MODEL_H_
