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

#include "factframe/encoder.h"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

#include "factframe/errors.h"

namespace factframe {
namespace {

constexpr char kWeightMagic[8] = {'F', 'F', 'W', 'T', '0', '0', '0', '1'};
constexpr double kEmbeddingStddev = 0.02;

std::uint32_t ReadU32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error("truncated weight file");
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void WriteU32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {
      static_cast<unsigned char>(v & 0xff),
      static_cast<unsigned char>((v >> 8) & 0xff),
      static_cast<unsigned char>((v >> 16) & 0xff),
      static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::string LayerPrefix(int i) {
  return "encoder.layer." + std::to_string(i);
}

}  // namespace

TransformerEncoder::TransformerEncoder(const TransformerConfig& config,
                                       std::unique_ptr<Tokenizer> tokenizer,
                                       std::uint64_t seed, std::string kind)
    : config_(config), tokenizer_(std::move(tokenizer)), kind_(std::move(kind)) {
  if (config.layers < 1) throw ConfigError("encoder needs at least one layer");
  if (tokenizer_->vocab_size() > config.vocab_size) {
    throw ConfigError("tokenizer vocabulary exceeds the embedding table");
  }
  std::mt19937_64 rng(seed);
  const int d = config.hidden;
  const bool base_trainable = !config.freeze_base;
  word_embeddings_ = ag::MakeParameter(
      "embeddings.word_embeddings.weight",
      ag::RandomNormal(config.vocab_size, d, kEmbeddingStddev, rng),
      base_trainable);
  position_embeddings_ = ag::MakeParameter(
      "embeddings.position_embeddings.weight",
      ag::RandomNormal(config.max_positions, d, kEmbeddingStddev, rng),
      base_trainable);
  type_embeddings_ = ag::MakeParameter(
      "embeddings.token_type_embeddings.weight",
      ag::RandomNormal(config.type_vocab, d, kEmbeddingStddev, rng),
      base_trainable);
  embedding_norm_ = LayerNorm("embeddings.LayerNorm", d, true,
                              config.layer_norm_eps);
  blocks_.reserve(config.layers);
  for (int i = 0; i < config.layers; ++i) {
    const std::string p = LayerPrefix(i);
    Block b;
    b.attention = MultiHeadAttention(p + ".attention", d, config.heads, rng,
                                     base_trainable);
    // BERT names the self-attention projections differently.
    b.attention.query.weight.name = p + ".attention.self.query.weight";
    b.attention.query.bias.name = p + ".attention.self.query.bias";
    b.attention.key.weight.name = p + ".attention.self.key.weight";
    b.attention.key.bias.name = p + ".attention.self.key.bias";
    b.attention.value.weight.name = p + ".attention.self.value.weight";
    b.attention.value.bias.name = p + ".attention.self.value.bias";
    b.attention.output.weight.name = p + ".attention.output.dense.weight";
    b.attention.output.bias.name = p + ".attention.output.dense.bias";
    if (config.symmetric_qk_init) {
      b.attention.key.weight.var.mutable_value() = b.attention.query.weight.var.value();
    }
    b.attention_norm = LayerNorm(p + ".attention.output.LayerNorm", d, true,
                                 config.layer_norm_eps);
    b.intermediate = Linear(p + ".intermediate.dense", d, config.ffn, rng,
                            base_trainable);
    b.output = Linear(p + ".output.dense", config.ffn, d, rng, base_trainable);
    b.output_norm = LayerNorm(p + ".output.LayerNorm", d, true,
                              config.layer_norm_eps);
    if (config.adapter_dim > 0) {
      for (auto [adapter, name] :
           {std::pair{&b.attention_adapter, p + ".attention.adapter"},
            std::pair{&b.output_adapter, p + ".output.adapter"}}) {
        adapter->down = Linear(name + ".down", d, config.adapter_dim, rng);
        adapter->up = Linear(name + ".up", config.adapter_dim, d, rng);
        // Near-identity start: the adapter initially adds almost nothing.
        adapter->up.weight.var.mutable_value() =
            ag::RandomNormal(config.adapter_dim, d, 1e-3, rng);
      }
    }
    blocks_.push_back(std::move(b));
  }
}

std::unique_ptr<TransformerEncoder> TransformerEncoder::MakeToy(
    int hidden, int layers, int heads, int max_positions, std::uint64_t seed,
    int vocab_size) {
  TransformerConfig c;
  c.vocab_size = vocab_size;
  c.hidden = hidden;
  c.layers = layers;
  c.heads = heads;
  c.ffn = 2 * hidden;
  c.max_positions = max_positions;
  c.symmetric_qk_init = true;
  return std::make_unique<TransformerEncoder>(
      c, std::make_unique<HashingTokenizer>(vocab_size), seed, "toy");
}

std::unique_ptr<TransformerEncoder> TransformerEncoder::MakeAdapter(
    const TransformerConfig& config, const std::string& weights_path,
    const std::string& vocab_path, std::uint64_t seed) {
  const auto tensors = ReadWeightFile(weights_path);
  std::map<std::string, const ag::Matrix*> by_name;
  for (const auto& t : tensors) by_name[t.name] = &t.value;
  auto shape_of = [&](const std::string& name) -> const ag::Matrix& {
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw ConfigError("weight file " + weights_path + " lacks " + name);
    }
    return *it->second;
  };
  TransformerConfig c = config;
  const auto& words = shape_of("embeddings.word_embeddings.weight");
  c.vocab_size = static_cast<int>(words.rows());
  c.hidden = static_cast<int>(words.cols());
  c.max_positions = static_cast<int>(
      shape_of("embeddings.position_embeddings.weight").rows());
  c.type_vocab = static_cast<int>(
      shape_of("embeddings.token_type_embeddings.weight").rows());
  int layers = 0;
  while (by_name.count(LayerPrefix(layers) + ".attention.self.query.weight")) {
    ++layers;
  }
  c.layers = layers;
  c.ffn = static_cast<int>(
      shape_of(LayerPrefix(0) + ".intermediate.dense.weight").cols());
  c.freeze_base = true;
  if (c.adapter_dim <= 0) throw ConfigError("adapter encoder needs adapter_dim > 0");
  auto tokenizer =
      std::make_unique<WordPieceTokenizer>(WordPieceTokenizer::Load(vocab_path));
  auto encoder = std::make_unique<TransformerEncoder>(c, std::move(tokenizer),
                                                      seed, "adapter");
  auto params = encoder->Parameters();
  // Adapters start fresh; everything else must come from the file.
  ag::ParameterList base;
  for (auto* p : params) {
    if (p->name.find(".adapter.") == std::string::npos) base.push_back(p);
  }
  LoadWeights(tensors, base, "");
  return encoder;
}

ag::Var TransformerEncoder::ApplyAdapter(const Adapter& a,
                                         const ag::Var& x) const {
  if (config_.adapter_dim <= 0) return x;
  return ag::Add(
      x, a.up.Forward(ag::Activate(a.down.Forward(x), config_.activation)));
}

EncoderOutput TransformerEncoder::Encode(const EncoderInput& input) const {
  const int n = static_cast<int>(input.ids.size());
  if (n == 0) throw std::invalid_argument("empty encoder input");
  if (n > config_.max_positions) {
    throw std::invalid_argument("encoder input longer than max positions");
  }
  if (input.segments.size() != input.ids.size()) {
    throw std::invalid_argument("segment ids do not match token ids");
  }
  std::vector<int> positions(n);
  for (int i = 0; i < n; ++i) positions[i] = i;
  ag::Var x = ag::Add(
      ag::Add(ag::GatherRows(word_embeddings_.var, input.ids),
              ag::GatherRows(position_embeddings_.var, positions)),
      ag::GatherRows(type_embeddings_.var, input.segments));
  x = embedding_norm_.Forward(x);

  EncoderOutput out;
  out.layers.reserve(blocks_.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Block& b = blocks_[i];
    AttentionResult att = b.attention.Forward(x, x);
    ag::Var h = ApplyAdapter(b.attention_adapter, att.output);
    x = b.attention_norm.Forward(ag::Add(x, h));
    ag::Var ff = b.output.Forward(
        ag::Activate(b.intermediate.Forward(x), config_.activation));
    ff = ApplyAdapter(b.output_adapter, ff);
    x = b.output_norm.Forward(ag::Add(x, ff));
    out.layers.push_back(x);
    if (i + 1 == blocks_.size()) out.final_attention = std::move(att.probabilities);
  }
  return out;
}

ag::ParameterList TransformerEncoder::Parameters() {
  ag::ParameterList out;
  out.push_back(&word_embeddings_);
  out.push_back(&position_embeddings_);
  out.push_back(&type_embeddings_);
  embedding_norm_.AppendParameters(out);
  for (auto& b : blocks_) {
    b.attention.AppendParameters(out);
    b.attention_norm.AppendParameters(out);
    b.intermediate.AppendParameters(out);
    b.output.AppendParameters(out);
    b.output_norm.AppendParameters(out);
    if (config_.adapter_dim > 0) {
      b.attention_adapter.down.AppendParameters(out);
      b.attention_adapter.up.AppendParameters(out);
      b.output_adapter.down.AppendParameters(out);
      b.output_adapter.up.AppendParameters(out);
    }
  }
  return out;
}

std::vector<NamedTensor> ReadWeightFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInputError(path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kWeightMagic, 8) != 0) {
    throw std::runtime_error(path + " is not a weight file (bad magic)");
  }
  const std::uint32_t count = ReadU32(in);
  std::vector<NamedTensor> tensors;
  tensors.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor t;
    t.name.resize(ReadU32(in));
    in.read(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    const std::uint32_t rows = ReadU32(in);
    const std::uint32_t cols = ReadU32(in);
    std::vector<float> data(static_cast<std::size_t>(rows) * cols);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(float)));
    if (!in) throw std::runtime_error("truncated weight file " + path);
    t.value.resize(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t c = 0; c < cols; ++c) {
        t.value(r, c) = data[static_cast<std::size_t>(r) * cols + c];
      }
    }
    tensors.push_back(std::move(t));
  }
  return tensors;
}

void WriteWeightFile(const std::string& path,
                     const std::vector<NamedTensor>& tensors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(kWeightMagic, 8);
  WriteU32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& t : tensors) {
    WriteU32(out, static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    WriteU32(out, static_cast<std::uint32_t>(t.value.rows()));
    WriteU32(out, static_cast<std::uint32_t>(t.value.cols()));
    for (Eigen::Index r = 0; r < t.value.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.value.cols(); ++c) {
        const float v = static_cast<float>(t.value(r, c));
        out.write(reinterpret_cast<const char*>(&v), sizeof(float));
      }
    }
  }
}

void LoadWeights(const std::vector<NamedTensor>& tensors,
                 const ag::ParameterList& params,
                 const std::string& required_prefix) {
  std::map<std::string, const NamedTensor*> by_name;
  for (const auto& t : tensors) by_name[t.name] = &t;
  for (auto* p : params) {
    auto it = by_name.find(p->name);
    if (it == by_name.end()) {
      if (p->name.rfind(required_prefix, 0) == 0) {
        throw ConfigError("missing weight: " + p->name);
      }
      continue;
    }
    const ag::Matrix& v = it->second->value;
    if (v.rows() != p->var.rows() || v.cols() != p->var.cols()) {
      throw ConfigError("shape mismatch for " + p->name);
    }
    p->var.mutable_value() = v;
  }
}

LayerFusion ParseLayerFusion(const std::string& name) {
  if (name == "max") return LayerFusion::kMax;
  if (name == "mean") return LayerFusion::kMean;
  if (name == "last") return LayerFusion::kLast;
  throw std::invalid_argument("unknown layer fusion: " + name);
}

std::string LayerFusionName(LayerFusion fusion) {
  switch (fusion) {
    case LayerFusion::kMax: return "max";
    case LayerFusion::kMean: return "mean";
    case LayerFusion::kLast: return "last";
  }
  return "max";
}

ag::Var FuseLayers(const std::vector<ag::Var>& per_layer, LayerFusion fusion) {
  if (per_layer.empty()) throw std::invalid_argument("FuseLayers: no layers");
  switch (fusion) {
    case LayerFusion::kMax: return ag::MaxOf(per_layer);
    case LayerFusion::kMean: return ag::MeanOf(per_layer);
    case LayerFusion::kLast: return per_layer.back();
  }
  return ag::MaxOf(per_layer);
}

AttentivePooler::AttentivePooler(int d, int hidden, ag::Activation activation,
                                 std::mt19937_64& rng)
    : layer1("pooler.phi.0", d, hidden, rng),
      layer2("pooler.phi.1", hidden, d, rng),
      score("pooler.score", d, 1, rng),
      d_(d),
      activation_(activation) {}

ag::Var AttentivePooler::Phi(const ag::Var& tokens) const {
  return layer2.Forward(ag::Activate(layer1.Forward(tokens), activation_));
}

ag::Var AttentivePooler::Scores(const ag::Var& phi) const {
  return score.Forward(phi);
}

void AttentivePooler::AppendParameters(ag::ParameterList& out) {
  layer1.AppendParameters(out);
  layer2.AppendParameters(out);
  score.AppendParameters(out);
}

PooledFact PoolFact(const ag::Var& tokens, const AttentivePooler& pooler) {
  if (tokens.rows() == 0) {
    throw std::invalid_argument("cannot pool a frame with no tokens");
  }
  const ag::Var phi = pooler.Phi(tokens);
  const ag::Var alpha = ag::SoftmaxRows(ag::Transpose(pooler.Scores(phi)));
  return {ag::MatMul(alpha, phi), alpha.value()};
}

ag::Var PoolFrames(const ag::Var& fused_tokens,
                   const std::vector<AlignedFrame>& frames,
                   const AttentivePooler& pooler) {
  if (frames.empty()) throw std::invalid_argument("PoolFrames: no frames");
  const ag::Var phi = pooler.Phi(fused_tokens);
  const ag::Var scores = pooler.Scores(phi);  // seq x 1
  std::vector<ag::Var> rows;
  rows.reserve(frames.size());
  for (const auto& f : frames) {
    if (f.positions.empty()) {
      throw std::invalid_argument("cannot pool a frame with no tokens");
    }
    const ag::Var s = ag::Transpose(ag::GatherRows(scores, f.positions));
    const ag::Var alpha = ag::SoftmaxRows(s);
    rows.push_back(ag::MatMul(alpha, ag::GatherRows(phi, f.positions)));
  }
  return rows.size() == 1 ? rows[0] : ag::ConcatRows(rows);
}

PreparedInput PrepareInput(const std::string& document,
                           std::vector<SemanticFrame> document_frames,
                           const std::string& summary,
                           std::vector<SemanticFrame> summary_frames,
                           const Tokenizer& tokenizer, int limit) {
  if (limit < 5) throw std::invalid_argument("truncation limit too small");
  PreparedInput p;
  p.document_text = TokenizedText::Split(document);
  p.summary_text = TokenizedText::Split(summary);
  p.document_frames = std::move(document_frames);
  p.summary_frames = std::move(summary_frames);

  std::vector<int> doc_ids;
  std::vector<int> doc_counts;
  for (const auto& w : p.document_text.Words()) {
    auto ids = tokenizer.TokenizeWord(w);
    doc_counts.push_back(static_cast<int>(ids.size()));
    doc_ids.insert(doc_ids.end(), ids.begin(), ids.end());
  }
  std::vector<int> sum_ids;
  std::vector<int> sum_counts;
  for (const auto& w : p.summary_text.Words()) {
    auto ids = tokenizer.TokenizeWord(w);
    sum_counts.push_back(static_cast<int>(ids.size()));
    sum_ids.insert(sum_ids.end(), ids.begin(), ids.end());
  }

  const int budget = limit - 3;
  const int doc_len = static_cast<int>(doc_ids.size());
  const int sum_len = static_cast<int>(sum_ids.size());
  int sum_budget = sum_len;
  int doc_budget = doc_len;
  if (doc_len + sum_len > budget) {
    sum_budget = std::min(sum_len, std::max(budget / 2, budget - doc_len));
    doc_budget = budget - sum_budget;
  }

  auto& ids = p.encoder_input.ids;
  auto& seg = p.encoder_input.segments;
  ids.push_back(tokenizer.cls_id());
  ids.insert(ids.end(), doc_ids.begin(), doc_ids.begin() + doc_budget);
  ids.push_back(tokenizer.sep_id());
  seg.assign(ids.size(), 0);
  const int summary_offset = static_cast<int>(ids.size());
  ids.insert(ids.end(), sum_ids.begin(), sum_ids.begin() + sum_budget);
  ids.push_back(tokenizer.sep_id());
  seg.resize(ids.size(), 1);

  const SpanAlignment doc_align(doc_counts, 1, 1 + doc_budget);
  const SpanAlignment sum_align(sum_counts, summary_offset,
                                summary_offset + sum_budget);
  p.document_alignment =
      AlignFrames(p.document_frames, p.document_text, doc_align);
  p.summary_alignment = AlignFrames(p.summary_frames, p.summary_text, sum_align);
  return p;
}

FactMatrices EncodeSample(const PreparedInput& input,
                          const TokenEncoder& encoder,
                          const AttentivePooler& pooler, LayerFusion fusion) {
  if (input.summary_alignment.frames.empty()) {
    throw std::invalid_argument("no summary frame survives alignment");
  }
  if (input.document_alignment.frames.empty()) {
    throw std::invalid_argument("no document frame survives alignment");
  }
  FactMatrices out;
  out.encoder_output = encoder.Encode(input.encoder_input);
  const ag::Var fused = FuseLayers(out.encoder_output.layers, fusion);
  out.document = PoolFrames(fused, input.document_alignment.frames, pooler);
  out.summary = PoolFrames(fused, input.summary_alignment.frames, pooler);
  return out;
}

}  // namespace factframe
