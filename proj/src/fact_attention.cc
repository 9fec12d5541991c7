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

#include "factframe/fact_attention.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace factframe {

MultiHeadCrossAttention::MultiHeadCrossAttention(int d, int heads,
                                                 std::mt19937_64& rng)
    : attention_("fact_attention", d, heads, rng) {}

AttendResult Attend(const ag::Var& summary_facts, const ag::Var& document_facts,
                    const MultiHeadCrossAttention& mha) {
  if (summary_facts.rows() < 1 || document_facts.rows() < 1) {
    throw std::invalid_argument("Attend needs at least one fact per side");
  }
  if (summary_facts.cols() != mha.hidden() ||
      document_facts.cols() != mha.hidden()) {
    throw std::invalid_argument("fact width does not match attention size");
  }
  AttentionResult r = mha.attention().Forward(summary_facts, document_facts);
  return {r.output, std::move(r.probabilities)};
}

ImportanceScores Importance(const std::vector<ag::Matrix>& probabilities) {
  ImportanceScores out;
  out.heads = static_cast<int>(probabilities.size());
  if (probabilities.empty()) return out;
  out.summary_facts = static_cast<int>(probabilities[0].rows());
  const Eigen::Index n_doc = probabilities[0].cols();
  Eigen::RowVectorXd total = Eigen::RowVectorXd::Zero(n_doc);
  for (const auto& a : probabilities) {
    if (a.cols() != n_doc || a.rows() != out.summary_facts) {
      throw std::invalid_argument("attention heads have different shapes");
    }
    // One running sum per document fact, so the result does not depend on
    // vectorised reduction order.
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
      for (Eigen::Index i = 0; i < n_doc; ++i) total(i) += a(j, i);
    }
  }
  out.scores.assign(total.data(), total.data() + n_doc);
  return out;
}

HighlightResult TopKHighlights(const std::vector<double>& scores, int k) {
  if (k < 1) throw std::invalid_argument("top-k needs k >= 1");
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&scores](int a, int b) { return scores[a] > scores[b]; });
  HighlightResult result;
  const int n = std::min<int>(k, static_cast<int>(order.size()));
  for (int i = 0; i < n; ++i) result.ranked.push_back({order[i], scores[order[i]]});
  return result;
}

std::string RenderFrame(const SemanticFrame& frame, const TokenizedText& text) {
  struct Piece {
    int begin;
    std::string role;
    Span span;
  };
  std::vector<Piece> pieces;
  if (frame.IsFallback()) {
    return "[" + std::string(kFullSentenceRole) + " " +
           text.SpanText(frame.sentence_index, frame.predicate.begin,
                         frame.predicate.end) +
           "]";
  }
  pieces.push_back({frame.predicate.begin, "V", frame.predicate});
  for (const auto& a : frame.arguments) {
    pieces.push_back({a.span.begin, a.role, a.span});
  }
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const Piece& a, const Piece& b) { return a.begin < b.begin; });
  std::string out;
  for (const auto& p : pieces) {
    if (!out.empty()) out += ' ';
    out += "[" + p.role + " " +
           text.SpanText(frame.sentence_index, p.span.begin, p.span.end) + "]";
  }
  return out;
}

nlohmann::json HighlightsToJson(const std::string& sample_id,
                                const HighlightResult& result,
                                const std::vector<SemanticFrame>& frames,
                                const TokenizedText& document) {
  nlohmann::json j;
  j["sample_id"] = sample_id;
  j["highlights"] = nlohmann::json::array();
  int rank = 1;
  for (const auto& h : result.ranked) {
    const SemanticFrame& f = frames.at(h.frame);
    nlohmann::json hj;
    hj["rank"] = rank++;
    hj["score"] = h.score;
    hj["sentence"] = f.sentence_index;
    hj["predicate"] =
        document.SpanText(f.sentence_index, f.predicate.begin, f.predicate.end);
    hj["args"] = nlohmann::json::array();
    for (const auto& a : f.arguments) {
      hj["args"].push_back(
          {{"role", a.role},
           {"text", document.SpanText(f.sentence_index, a.span.begin, a.span.end)}});
    }
    hj["rendered"] = RenderFrame(f, document);
    j["highlights"].push_back(std::move(hj));
  }
  return j;
}

}  // namespace factframe
