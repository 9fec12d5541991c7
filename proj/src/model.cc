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

#include "factframe/model.h"

#include "factframe/errors.h"

namespace factframe {
namespace {

std::string ContextName(DocumentContext c) {
  return c == DocumentContext::kAttention ? "attention" : "mean";
}

DocumentContext ParseContext(const std::string& s) {
  if (s == "attention") return DocumentContext::kAttention;
  if (s == "mean") return DocumentContext::kMeanPooled;
  throw ConfigError("unknown document context: " + s);
}

}  // namespace

nlohmann::json ModelConfig::ToJson() const {
  return {{"encoder", encoder},
          {"hidden", hidden},
          {"encoder_layers", encoder_layers},
          {"encoder_heads", encoder_heads},
          {"vocab_size", vocab_size},
          {"truncation_limit", truncation_limit},
          {"adapter_dim", adapter_dim},
          {"base_weights", base_weights},
          {"vocab_path", vocab_path},
          {"heads", heads},
          {"pooler_hidden", pooler_hidden},
          {"activation", ag::ActivationName(activation)},
          {"fusion", LayerFusionName(fusion)},
          {"document_context", ContextName(document_context)},
          {"seed", seed}};
}

ModelConfig ModelConfig::FromJson(const nlohmann::json& j) {
  ModelConfig c;
  c.encoder = j.value("encoder", c.encoder);
  c.hidden = j.value("hidden", c.hidden);
  c.encoder_layers = j.value("encoder_layers", c.encoder_layers);
  c.encoder_heads = j.value("encoder_heads", c.encoder_heads);
  c.vocab_size = j.value("vocab_size", c.vocab_size);
  c.truncation_limit = j.value("truncation_limit", c.truncation_limit);
  c.adapter_dim = j.value("adapter_dim", c.adapter_dim);
  c.base_weights = j.value("base_weights", c.base_weights);
  c.vocab_path = j.value("vocab_path", c.vocab_path);
  c.heads = j.value("heads", c.heads);
  c.pooler_hidden = j.value("pooler_hidden", c.pooler_hidden);
  c.activation = ag::ParseActivation(
      j.value("activation", ag::ActivationName(c.activation)));
  c.fusion = ParseLayerFusion(j.value("fusion", LayerFusionName(c.fusion)));
  c.document_context = ParseContext(
      j.value("document_context", ContextName(c.document_context)));
  c.seed = j.value("seed", c.seed);
  return c;
}

FactModel::FactModel(const ModelConfig& config) : config_(config) {
  if (config.heads <= 0 ||
      (config.encoder == "toy" && config.hidden % config.heads != 0)) {
    throw ConfigError("hidden size " + std::to_string(config.hidden) +
                      " is not divisible by " + std::to_string(config.heads) +
                      " fact attention heads");
  }
  if (config.encoder == "toy") {
    encoder_ = TransformerEncoder::MakeToy(
        config.hidden, config.encoder_layers, config.encoder_heads,
        config.truncation_limit, config.seed, config.vocab_size);
  } else if (config.encoder == "adapter") {
    TransformerConfig tc;
    tc.heads = config.encoder_heads;
    tc.adapter_dim = config.adapter_dim;
    tc.activation = config.activation;
    encoder_ = TransformerEncoder::MakeAdapter(tc, config.base_weights,
                                               config.vocab_path, config.seed);
    if (encoder_->hidden_size() != config.hidden) {
      config_.hidden = encoder_->hidden_size();
      if (config_.hidden % config_.heads != 0) {
        throw ConfigError("encoder hidden size is not divisible by heads");
      }
    }
    config_.encoder_layers = encoder_->num_layers();
    config_.truncation_limit =
        std::min(config_.truncation_limit, encoder_->max_positions());
  } else {
    throw ConfigError("unknown encoder: " + config.encoder);
  }
  // Separate stream so head/pooler init does not depend on encoder size.
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  const int d = config_.hidden;
  pooler_ = AttentivePooler(d, config.pooler_hidden > 0 ? config.pooler_hidden : d,
                            config.activation, rng);
  cross_attention_ = MultiHeadCrossAttention(d, config.heads, rng);
  head_ = ClassifierHead(d, rng);
}

PreparedInput FactModel::Prepare(const Sample& sample,
                                 const FrameStore& frames) const {
  return Prepare(sample.document, frames.Document(sample.id), sample.summary,
                 frames.Summary(sample.id));
}

PreparedInput FactModel::Prepare(const std::string& document,
                                 std::vector<SemanticFrame> document_frames,
                                 const std::string& summary,
                                 std::vector<SemanticFrame> summary_frames) const {
  return PrepareInput(document, std::move(document_frames), summary,
                      std::move(summary_frames), encoder_->tokenizer(),
                      config_.truncation_limit);
}

ForwardOutput FactModel::Forward(const PreparedInput& input) const {
  ForwardOutput out;
  out.facts = EncodeSample(input, *encoder_, pooler_, config_.fusion);
  for (const auto& f : input.document_alignment.frames) {
    out.document_frame_index.push_back(f.frame_index);
  }
  ag::Var context;
  if (config_.document_context == DocumentContext::kAttention) {
    out.attention = Attend(out.facts.summary, out.facts.document, cross_attention_);
    context = out.attention.context;
  } else {
    const ag::Var mean = ag::MeanRows(out.facts.document);
    std::vector<ag::Var> rows(out.facts.summary.rows(), mean);
    context = rows.size() == 1 ? mean : ag::ConcatRows(rows);
    out.attention.context = context;
  }
  out.probabilities = factframe::Predict(Fuse(out.facts.summary, context), head_);
  return out;
}

Prediction FactModel::Predict(const PreparedInput& input,
                              double threshold) const {
  ag::NoGradGuard no_grad;
  Prediction p;
  p.probabilities = ToProbabilities(Forward(input).probabilities);
  p.labels = Decide(p.probabilities, threshold);
  return p;
}

std::vector<double> FactModel::DocumentImportance(
    const PreparedInput& input) const {
  if (config_.document_context != DocumentContext::kAttention) {
    throw std::logic_error("highlights need the attention document context");
  }
  ag::NoGradGuard no_grad;
  const ForwardOutput out = Forward(input);
  const ImportanceScores imp = Importance(out.attention.probabilities);
  std::vector<double> scores(input.document_frames.size(), 0.0);
  for (std::size_t i = 0; i < imp.scores.size(); ++i) {
    scores[out.document_frame_index[i]] = imp.scores[i];
  }
  return scores;
}

HighlightResult FactModel::Highlights(const PreparedInput& input, int k) const {
  if (config_.document_context != DocumentContext::kAttention) {
    throw std::logic_error("highlights need the attention document context");
  }
  ag::NoGradGuard no_grad;
  const ForwardOutput out = Forward(input);
  const ImportanceScores imp = Importance(out.attention.probabilities);
  HighlightResult r = TopKHighlights(imp.scores, k);
  for (auto& h : r.ranked) h.frame = out.document_frame_index[h.frame];
  return r;
}

ag::ParameterList FactModel::Parameters() {
  ag::ParameterList out = encoder_->Parameters();
  pooler_.AppendParameters(out);
  cross_attention_.AppendParameters(out);
  head_.AppendParameters(out);
  return out;
}

ag::ParameterList FactModel::TrainableParameters() {
  ag::ParameterList out;
  for (auto* p : Parameters()) {
    if (p->trainable) out.push_back(p);
  }
  return out;
}

}  // namespace factframe
