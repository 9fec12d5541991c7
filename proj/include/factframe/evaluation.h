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

// Classification metrics (per-class precision/recall/F1/balanced accuracy,
// macro averages, per-system-category reports) and highlight evaluation
// (recall@k, the CLS-attention baseline, evidence corpora).

#ifndef FACTFRAME_EVALUATION_H_
#define FACTFRAME_EVALUATION_H_

#include <array>
#include <map>
#include <string>
#include <vector>

#include "factframe/autograd.h"
#include "factframe/core_types.h"
#include "factframe/fact_attention.h"
#include "factframe/srl.h"
#include "json.hpp"

namespace factframe {

class FactModel;

struct ClassMetrics {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;
  double precision = 0.0;
  double recall = 0.0;  // true positive rate
  double tnr = 0.0;     // true negative rate
  double f1 = 0.0;
  double bacc = 0.0;
  // Gold has no positives or no negatives for this class; the undefined
  // rate counts as 0.
  bool degenerate = false;
};

// Throws std::invalid_argument on empty or misaligned input.
ClassMetrics ComputeClassMetrics(const std::vector<LabelVector>& preds,
                                 const std::vector<LabelVector>& golds,
                                 ErrorType type);

// (TPR + TNR) / 2; logs a warning when the class is degenerate.
double BalancedAccuracy(const std::vector<LabelVector>& preds,
                        const std::vector<LabelVector>& golds, ErrorType type);
double MacroBalancedAccuracy(const std::vector<LabelVector>& preds,
                             const std::vector<LabelVector>& golds,
                             bool log_degenerate = true);
// Unweighted mean of the four per-class F1 scores (F1 = 0 when precision
// and recall are both 0).
double MacroF1(const std::vector<LabelVector>& preds,
               const std::vector<LabelVector>& golds);

struct CategoryReport {
  std::array<ClassMetrics, kNumErrorTypes> per_class{};
  double macro_f1 = 0.0;
  double macro_bacc = 0.0;
  long samples = 0;
};

inline constexpr std::array<const char*, 5> kReportCategories = {
    "SOTA", "XFORMER", "OLD", "REF", "All"};

struct MetricReport {
  std::map<std::string, CategoryReport> categories;
  std::vector<std::string> notes;
  nlohmann::json metadata = nlohmann::json::object();

  nlohmann::json ToJson() const;
  static MetricReport FromJson(const nlohmann::json& j);
  // Aligned text table: one (F1, BACC) column pair per category, then a
  // per-class breakdown of the "All" row. Values are percentages.
  std::string ToTable() const;
};

// Metrics per system category and over everything ("All"). Categories with
// no samples are left out and noted. Unknown-category samples only count
// towards "All".
MetricReport EvaluateByCategory(const std::vector<LabelVector>& preds,
                                const std::vector<LabelVector>& golds,
                                const std::vector<SystemCategory>& categories);

// Field-wise mean of several reports (e.g. one per seed). Confusion counts
// are summed; a category must appear in every report to be kept.
MetricReport AverageReports(const std::vector<MetricReport>& reports);

enum class FrameMatcher { kExact, kOverlap };
FrameMatcher ParseFrameMatcher(const std::string& name);

// Token-level F1 between the (sentence, word) sets covered by two frames.
double FrameTokenF1(const SemanticFrame& a, const SemanticFrame& b);
bool FramesMatch(const SemanticFrame& predicted, const SemanticFrame& gold,
                 FrameMatcher matcher);

// Fraction of gold frames matched by at least one of the first k ranked
// highlights. Highlight indices refer to `document_frames`. Throws
// std::invalid_argument on an empty gold set or k < 1.
double RecallAtK(const HighlightResult& predicted,
                 const std::vector<SemanticFrame>& document_frames,
                 const std::vector<SemanticFrame>& gold, int k,
                 FrameMatcher matcher = FrameMatcher::kOverlap);

enum class BaselineImportance { kMean, kSum };
BaselineImportance ParseBaselineImportance(const std::string& name);

// Per-frame importance from the attention the first ([CLS]) position pays
// to the frame's subword positions in the final layer, summed over heads and
// averaged (or summed) over the frame's positions. Ranking and tie-breaking
// follow TopKHighlights; indices refer to the original frame list.
HighlightResult BaselineClsHighlights(
    const std::vector<ag::Matrix>& final_attention,
    const std::vector<AlignedFrame>& document_frames, int k,
    BaselineImportance mode = BaselineImportance::kMean);

// A claim with the section containing its evidence.
struct EvidenceRecord {
  std::string id;
  std::string claim;
  std::string section;
  std::vector<int> evidence_sentences;  // sentence indices within `section`
};

std::vector<EvidenceRecord> ReadEvidenceJsonl(const std::string& path);

struct HighlightEvalItem {
  std::string id;
  std::string claim;     // used as the summary
  std::string document;  // the section
  std::vector<SemanticFrame> document_frames;
  std::vector<SemanticFrame> claim_frames;
  std::vector<SemanticFrame> gold;  // frames of the evidence sentences
};

struct HighlightEvalSet {
  std::vector<HighlightEvalItem> items;
  int dropped = 0;  // records whose evidence produced no frame
};

HighlightEvalSet BuildHighlightEvalSet(const std::vector<EvidenceRecord>& records,
                                       SrlBackend& backend);

struct HighlightEvalReport {
  std::map<int, double> recall_at_k;  // mean over items
  int items = 0;
  nlohmann::json ToJson() const;
};

enum class HighlightMethod { kFactAttention, kClsBaseline };

HighlightEvalReport EvaluateHighlights(const FactModel& model,
                                       const HighlightEvalSet& set,
                                       const std::vector<int>& ks,
                                       FrameMatcher matcher,
                                       HighlightMethod method,
                                       BaselineImportance baseline_mode =
                                           BaselineImportance::kMean);

}  // namespace factframe

#endif  // FACTFRAME_EVALUATION_H_
