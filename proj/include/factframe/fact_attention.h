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

// Summary facts attend over document facts. The attention mass each
// document fact receives, summed over summary facts and heads, ranks the
// document facts; the top ones are returned as highlights.

#ifndef FACTFRAME_FACT_ATTENTION_H_
#define FACTFRAME_FACT_ATTENTION_H_

#include <random>
#include <string>
#include <vector>

#include "factframe/autograd.h"
#include "factframe/core_types.h"
#include "factframe/layers.h"
#include "factframe/text.h"
#include "json.hpp"

namespace factframe {

class MultiHeadCrossAttention {
 public:
  MultiHeadCrossAttention() = default;
  // Throws ConfigError if d % heads != 0.
  MultiHeadCrossAttention(int d, int heads, std::mt19937_64& rng);

  int heads() const { return attention_.heads(); }
  int hidden() const { return attention_.hidden(); }
  MultiHeadAttention& attention() { return attention_; }
  const MultiHeadAttention& attention() const { return attention_; }
  void AppendParameters(ag::ParameterList& out) { attention_.AppendParameters(out); }

 private:
  MultiHeadAttention attention_;
};

struct AttendResult {
  ag::Var context;  // C: n_s x d
  // A[h]: n_s x n_d softmax probabilities, before the output projection.
  std::vector<ag::Matrix> probabilities;
};

// Throws std::invalid_argument if either fact matrix is empty or widths
// differ from the attention's hidden size.
AttendResult Attend(const ag::Var& summary_facts, const ag::Var& document_facts,
                    const MultiHeadCrossAttention& mha);

struct ImportanceScores {
  std::vector<double> scores;  // one per document fact
  int summary_facts = 0;
  int heads = 0;
};

// scores[i] = sum over heads h and summary facts j of A[h](j, i).
ImportanceScores Importance(const std::vector<ag::Matrix>& probabilities);

struct Highlight {
  int frame = 0;  // index into the document frame list
  double score = 0.0;
};

struct HighlightResult {
  std::vector<Highlight> ranked;
};

// min(k, n) entries by descending score; ties go to the earlier document
// position. Throws std::invalid_argument if k < 1.
HighlightResult TopKHighlights(const std::vector<double>& scores, int k);

// {"sample_id", "highlights": [{"rank", "score", "sentence", "predicate",
// "args": [{"role", "text"}]}]}; ranks start at 1.
nlohmann::json HighlightsToJson(const std::string& sample_id,
                                const HighlightResult& result,
                                const std::vector<SemanticFrame>& frames,
                                const TokenizedText& document);

// Bracketed role rendering, e.g. "[ARG0 David] [V saw] [ARG1 the flame]".
std::string RenderFrame(const SemanticFrame& frame, const TokenizedText& text);

}  // namespace factframe

#endif  // FACTFRAME_FACT_ATTENTION_H_
