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

// Token encoders and fact pooling.
//
// A TokenEncoder maps the concatenated [CLS] document [SEP] summary [SEP]
// subword sequence to per-layer hidden states. Token representations are the
// elementwise max over all layers, and each frame is pooled into one fact
// vector by attentive pooling over its tokens.

#ifndef FACTFRAME_ENCODER_H_
#define FACTFRAME_ENCODER_H_

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "factframe/autograd.h"
#include "factframe/core_types.h"
#include "factframe/layers.h"
#include "factframe/srl.h"
#include "factframe/text.h"
#include "factframe/tokenizer.h"

namespace factframe {

struct EncoderInput {
  std::vector<int> ids;
  std::vector<int> segments;  // 0 = document side, 1 = summary side
};

struct EncoderOutput {
  std::vector<ag::Var> layers;  // L entries of seq x d
  // Final-layer attention probabilities, one seq x seq matrix per head.
  std::vector<ag::Matrix> final_attention;
};

class TokenEncoder {
 public:
  virtual ~TokenEncoder() = default;
  virtual std::string kind() const = 0;
  virtual int hidden_size() const = 0;
  virtual int num_layers() const = 0;
  virtual int max_positions() const = 0;
  virtual const Tokenizer& tokenizer() const = 0;
  virtual EncoderOutput Encode(const EncoderInput& input) const = 0;
  virtual ag::ParameterList Parameters() = 0;
};

struct TransformerConfig {
  int vocab_size = 8192;
  int hidden = 32;
  int layers = 2;
  int heads = 2;
  int ffn = 64;
  int max_positions = 256;
  int type_vocab = 2;
  // Bottleneck width of the adapters inserted after the attention and
  // feed-forward sublayers; 0 disables adapters.
  int adapter_dim = 0;
  // Freezes everything except adapters and layer norms.
  bool freeze_base = false;
  ag::Activation activation = ag::Activation::kGelu;
  double layer_norm_eps = 1e-12;
  // Starts each self-attention block with key weights equal to the query
  // weights, so identical tokens attend to each other from the first step.
  // Only meaningful for randomly initialised encoders.
  bool symmetric_qk_init = false;
};

// BERT-style post-norm transformer. Parameter names follow the usual BERT
// checkpoint layout ("encoder.layer.0.attention.self.query.weight", ...),
// with weights stored as (in x out).
class TransformerEncoder : public TokenEncoder {
 public:
  TransformerEncoder(const TransformerConfig& config,
                     std::unique_ptr<Tokenizer> tokenizer, std::uint64_t seed,
                     std::string kind);

  // Small randomly initialized encoder with a hashing tokenizer.
  static std::unique_ptr<TransformerEncoder> MakeToy(int hidden, int layers,
                                                     int heads,
                                                     int max_positions,
                                                     std::uint64_t seed,
                                                     int vocab_size = 8192);
  // Pretrained encoder loaded from a weight file (see LoadWeightFile), with
  // trainable adapters of width `adapter_dim` and a frozen base.
  static std::unique_ptr<TransformerEncoder> MakeAdapter(
      const TransformerConfig& config, const std::string& weights_path,
      const std::string& vocab_path, std::uint64_t seed);

  std::string kind() const override { return kind_; }
  int hidden_size() const override { return config_.hidden; }
  int num_layers() const override { return config_.layers; }
  int max_positions() const override { return config_.max_positions; }
  const Tokenizer& tokenizer() const override { return *tokenizer_; }
  EncoderOutput Encode(const EncoderInput& input) const override;
  ag::ParameterList Parameters() override;

  const TransformerConfig& config() const { return config_; }

 private:
  struct Adapter {
    Linear down;
    Linear up;
  };
  struct Block {
    MultiHeadAttention attention;
    LayerNorm attention_norm;
    Linear intermediate;
    Linear output;
    LayerNorm output_norm;
    Adapter attention_adapter;
    Adapter output_adapter;
  };
  ag::Var ApplyAdapter(const Adapter& a, const ag::Var& x) const;

  TransformerConfig config_;
  std::unique_ptr<Tokenizer> tokenizer_;
  std::string kind_;
  ag::Parameter word_embeddings_;
  ag::Parameter position_embeddings_;
  ag::Parameter type_embeddings_;
  LayerNorm embedding_norm_;
  std::vector<Block> blocks_;
};

// Named float32 tensors: "FFWT0001", u32 count, then per tensor u32 name
// length, name bytes, u32 rows, u32 cols, rows*cols little-endian float32 in
// row-major order.
struct NamedTensor {
  std::string name;
  ag::Matrix value;
};
std::vector<NamedTensor> ReadWeightFile(const std::string& path);
void WriteWeightFile(const std::string& path,
                     const std::vector<NamedTensor>& tensors);
// Copies tensors into same-named parameters. Every parameter in `params`
// whose name matches `required_prefix` must be present with the right shape.
void LoadWeights(const std::vector<NamedTensor>& tensors,
                 const ag::ParameterList& params,
                 const std::string& required_prefix = "");

enum class LayerFusion { kMax, kMean, kLast };
LayerFusion ParseLayerFusion(const std::string& name);
std::string LayerFusionName(LayerFusion fusion);

// Elementwise maximum over the layer axis. Throws std::invalid_argument on
// an empty list or mismatched shapes.
ag::Var FuseLayers(const std::vector<ag::Var>& per_layer,
                   LayerFusion fusion = LayerFusion::kMax);

// Attentive pooler: value network phi(t) = W2 act(W1 t + b1) + b2 and a
// scalar score head s(t) = phi(t) w + c. A frame with token rows T pools to
// sum_j softmax(s)_j phi(T_j).
class AttentivePooler {
 public:
  AttentivePooler() = default;
  AttentivePooler(int d, int hidden, ag::Activation activation,
                  std::mt19937_64& rng);

  ag::Var Phi(const ag::Var& tokens) const;
  ag::Var Scores(const ag::Var& phi) const;  // m x 1
  void AppendParameters(ag::ParameterList& out);
  int dim() const { return d_; }

  Linear layer1;
  Linear layer2;
  Linear score;

 private:
  int d_ = 0;
  ag::Activation activation_ = ag::Activation::kGelu;
};

struct PooledFact {
  ag::Var vector;     // 1 x d
  ag::Matrix weights;  // 1 x m attention weights
};

// Throws std::invalid_argument when `tokens` has no rows.
PooledFact PoolFact(const ag::Var& tokens, const AttentivePooler& pooler);

// Pools every frame of a fused token matrix; phi and the scores are computed
// once per token and gathered per frame, which is equivalent to pooling each
// frame separately.
ag::Var PoolFrames(const ag::Var& fused_tokens,
                   const std::vector<AlignedFrame>& frames,
                   const AttentivePooler& pooler);

// Encoder input with both sides' frames aligned to subword positions.
struct PreparedInput {
  EncoderInput encoder_input;
  TokenizedText document_text;
  TokenizedText summary_text;
  std::vector<SemanticFrame> document_frames;
  std::vector<SemanticFrame> summary_frames;
  AlignmentResult document_alignment;
  AlignmentResult summary_alignment;
};

// Builds [CLS] doc [SEP] summary [SEP] within `limit` positions. When both
// sides do not fit, the summary keeps at most half of the budget and the
// document takes the rest.
PreparedInput PrepareInput(const std::string& document,
                           std::vector<SemanticFrame> document_frames,
                           const std::string& summary,
                           std::vector<SemanticFrame> summary_frames,
                           const Tokenizer& tokenizer, int limit);

struct FactMatrices {
  ag::Var document;  // n_d x d
  ag::Var summary;   // n_s x d
  EncoderOutput encoder_output;
};

// Throws std::invalid_argument if no summary (or document) frame survives
// alignment.
FactMatrices EncodeSample(const PreparedInput& input,
                          const TokenEncoder& encoder,
                          const AttentivePooler& pooler,
                          LayerFusion fusion = LayerFusion::kMax);

}  // namespace factframe

#endif  // FACTFRAME_ENCODER_H_
