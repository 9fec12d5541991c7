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

#include "factframe/evaluation.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "factframe/errors.h"
#include "factframe/log.h"
#include "factframe/model.h"

namespace factframe {
namespace {

void CheckAligned(const std::vector<LabelVector>& preds,
                  const std::vector<LabelVector>& golds) {
  if (preds.empty()) throw std::invalid_argument("metrics need at least one sample");
  if (preds.size() != golds.size()) {
    throw std::invalid_argument("predictions and gold labels differ in length");
  }
}

double SafeDiv(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

void Finish(ClassMetrics& m) {
  m.precision = SafeDiv(m.tp, m.tp + m.fp);
  m.recall = SafeDiv(m.tp, m.tp + m.fn);
  m.tnr = SafeDiv(m.tn, m.tn + m.fp);
  m.f1 = (m.precision + m.recall) == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  m.bacc = 0.5 * (m.recall + m.tnr);
  m.degenerate = (m.tp + m.fn) == 0 || (m.tn + m.fp) == 0;
}

nlohmann::json ClassMetricsToJson(const ClassMetrics& m) {
  return {{"tp", m.tp},           {"fp", m.fp},
          {"tn", m.tn},           {"fn", m.fn},
          {"precision", m.precision}, {"recall", m.recall},
          {"tnr", m.tnr},         {"f1", m.f1},
          {"bacc", m.bacc},       {"degenerate", m.degenerate}};
}

ClassMetrics ClassMetricsFromJson(const nlohmann::json& j) {
  ClassMetrics m;
  m.tp = j.value("tp", 0L);
  m.fp = j.value("fp", 0L);
  m.tn = j.value("tn", 0L);
  m.fn = j.value("fn", 0L);
  m.precision = j.value("precision", 0.0);
  m.recall = j.value("recall", 0.0);
  m.tnr = j.value("tnr", 0.0);
  m.f1 = j.value("f1", 0.0);
  m.bacc = j.value("bacc", 0.0);
  m.degenerate = j.value("degenerate", false);
  return m;
}

CategoryReport MakeCategoryReport(const std::vector<LabelVector>& preds,
                                  const std::vector<LabelVector>& golds) {
  CategoryReport r;
  r.samples = static_cast<long>(preds.size());
  for (int i = 0; i < kNumErrorTypes; ++i) {
    r.per_class[i] = ComputeClassMetrics(preds, golds, ErrorTypeFromIndex(i));
    r.macro_f1 += r.per_class[i].f1 / kNumErrorTypes;
    r.macro_bacc += r.per_class[i].bacc / kNumErrorTypes;
  }
  return r;
}

// (sentence, word) pairs covered by a frame.
std::set<std::pair<int, int>> FrameTokens(const SemanticFrame& f) {
  std::set<std::pair<int, int>> out;
  for (int w = f.predicate.begin; w < f.predicate.end; ++w) {
    out.emplace(f.sentence_index, w);
  }
  for (const auto& a : f.arguments) {
    for (int w = a.span.begin; w < a.span.end; ++w) out.emplace(f.sentence_index, w);
  }
  return out;
}

}  // namespace

ClassMetrics ComputeClassMetrics(const std::vector<LabelVector>& preds,
                                 const std::vector<LabelVector>& golds,
                                 ErrorType type) {
  CheckAligned(preds, golds);
  ClassMetrics m;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const bool p = preds[i].Get(type);
    const bool g = golds[i].Get(type);
    if (p && g) ++m.tp;
    else if (p && !g) ++m.fp;
    else if (!p && g) ++m.fn;
    else ++m.tn;
  }
  Finish(m);
  return m;
}

double BalancedAccuracy(const std::vector<LabelVector>& preds,
                        const std::vector<LabelVector>& golds, ErrorType type) {
  const ClassMetrics m = ComputeClassMetrics(preds, golds, type);
  if (m.degenerate) {
    LogWarning("balanced accuracy for " + std::string(ErrorTypeShortName(type)) +
               ": gold has no " + ((m.tp + m.fn) == 0 ? "positives" : "negatives") +
               "; undefined rate counted as 0");
  }
  return m.bacc;
}

double MacroBalancedAccuracy(const std::vector<LabelVector>& preds,
                             const std::vector<LabelVector>& golds,
                             bool log_degenerate) {
  double sum = 0.0;
  for (ErrorType t : kAllErrorTypes) {
    sum += log_degenerate ? BalancedAccuracy(preds, golds, t)
                          : ComputeClassMetrics(preds, golds, t).bacc;
  }
  return sum / kNumErrorTypes;
}

double MacroF1(const std::vector<LabelVector>& preds,
               const std::vector<LabelVector>& golds) {
  double sum = 0.0;
  for (ErrorType t : kAllErrorTypes) sum += ComputeClassMetrics(preds, golds, t).f1;
  return sum / kNumErrorTypes;
}

MetricReport EvaluateByCategory(const std::vector<LabelVector>& preds,
                                const std::vector<LabelVector>& golds,
                                const std::vector<SystemCategory>& categories) {
  CheckAligned(preds, golds);
  if (categories.size() != preds.size()) {
    throw std::invalid_argument("categories and predictions differ in length");
  }
  MetricReport report;
  for (const char* name : kReportCategories) {
    const std::string cat(name);
    std::vector<LabelVector> p;
    std::vector<LabelVector> g;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      if (cat == "All" || SystemCategoryName(categories[i]) == cat) {
        p.push_back(preds[i]);
        g.push_back(golds[i]);
      }
    }
    if (p.empty()) {
      report.notes.push_back("category " + cat + " has no samples; omitted");
      continue;
    }
    report.categories[cat] = MakeCategoryReport(p, g);
  }
  return report;
}

MetricReport AverageReports(const std::vector<MetricReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("no reports to average");
  if (reports.size() == 1) return reports[0];
  MetricReport out;
  const double n = static_cast<double>(reports.size());
  for (const auto& [cat, first] : reports[0].categories) {
    bool everywhere = std::all_of(reports.begin(), reports.end(),
                                  [&cat = cat](const MetricReport& r) {
                                    return r.categories.count(cat) > 0;
                                  });
    if (!everywhere) {
      out.notes.push_back("category " + cat + " missing from some runs; omitted");
      continue;
    }
    CategoryReport avg;
    avg.samples = first.samples;
    for (const auto& r : reports) {
      const CategoryReport& c = r.categories.at(cat);
      avg.macro_f1 += c.macro_f1 / n;
      avg.macro_bacc += c.macro_bacc / n;
      for (int i = 0; i < kNumErrorTypes; ++i) {
        ClassMetrics& a = avg.per_class[i];
        const ClassMetrics& m = c.per_class[i];
        a.tp += m.tp;
        a.fp += m.fp;
        a.tn += m.tn;
        a.fn += m.fn;
        a.precision += m.precision / n;
        a.recall += m.recall / n;
        a.tnr += m.tnr / n;
        a.f1 += m.f1 / n;
        a.bacc += m.bacc / n;
        a.degenerate = a.degenerate || m.degenerate;
      }
    }
    out.categories[cat] = avg;
  }
  for (const auto& r : reports) {
    out.notes.insert(out.notes.end(), r.notes.begin(), r.notes.end());
  }
  std::sort(out.notes.begin(), out.notes.end());
  out.notes.erase(std::unique(out.notes.begin(), out.notes.end()), out.notes.end());
  out.metadata["runs"] = reports.size();
  return out;
}

nlohmann::json MetricReport::ToJson() const {
  nlohmann::json j;
  j["categories"] = nlohmann::json::object();
  for (const auto& [cat, r] : categories) {
    nlohmann::json c;
    c["samples"] = r.samples;
    c["macro_f1"] = r.macro_f1;
    c["macro_bacc"] = r.macro_bacc;
    c["per_class"] = nlohmann::json::object();
    for (int i = 0; i < kNumErrorTypes; ++i) {
      c["per_class"][std::string(ErrorTypeKey(ErrorTypeFromIndex(i)))] =
          ClassMetricsToJson(r.per_class[i]);
    }
    j["categories"][cat] = std::move(c);
  }
  j["notes"] = notes;
  j["metadata"] = metadata;
  return j;
}

MetricReport MetricReport::FromJson(const nlohmann::json& j) {
  MetricReport r;
  for (const auto& [cat, c] : j.at("categories").items()) {
    CategoryReport cr;
    cr.samples = c.value("samples", 0L);
    cr.macro_f1 = c.value("macro_f1", 0.0);
    cr.macro_bacc = c.value("macro_bacc", 0.0);
    for (int i = 0; i < kNumErrorTypes; ++i) {
      const std::string key(ErrorTypeKey(ErrorTypeFromIndex(i)));
      if (c.contains("per_class") && c["per_class"].contains(key)) {
        cr.per_class[i] = ClassMetricsFromJson(c["per_class"][key]);
      }
    }
    r.categories[cat] = cr;
  }
  if (j.contains("notes")) r.notes = j["notes"].get<std::vector<std::string>>();
  if (j.contains("metadata")) r.metadata = j["metadata"];
  return r;
}

std::string MetricReport::ToTable() const {
  std::ostringstream out;
  char buf[64];
  out << "          ";
  for (const char* cat : kReportCategories) {
    if (!categories.count(cat)) continue;
    std::snprintf(buf, sizeof(buf), "| %-15s", cat);
    out << buf;
  }
  out << "\n          ";
  for (const char* cat : kReportCategories) {
    if (!categories.count(cat)) continue;
    out << "|   F1     BACC  ";
  }
  out << "\nmodel     ";
  for (const char* cat : kReportCategories) {
    auto it = categories.find(cat);
    if (it == categories.end()) continue;
    std::snprintf(buf, sizeof(buf), "| %6.2f  %6.2f ", 100.0 * it->second.macro_f1,
                  100.0 * it->second.macro_bacc);
    out << buf;
  }
  out << "\n";
  auto all = categories.find("All");
  if (all != categories.end()) {
    out << "\nper class (All, n=" << all->second.samples << ")\n";
    out << "type      precision  recall     F1    BACC\n";
    for (int i = 0; i < kNumErrorTypes; ++i) {
      const ClassMetrics& m = all->second.per_class[i];
      std::snprintf(buf, sizeof(buf), "%-8s  %8.2f  %6.2f  %6.2f  %6.2f\n",
                    std::string(ErrorTypeShortName(ErrorTypeFromIndex(i))).c_str(),
                    100.0 * m.precision, 100.0 * m.recall, 100.0 * m.f1,
                    100.0 * m.bacc);
      out << buf;
    }
  }
  for (const auto& n : notes) out << "note: " << n << "\n";
  return out.str();
}

FrameMatcher ParseFrameMatcher(const std::string& name) {
  if (name == "exact") return FrameMatcher::kExact;
  if (name == "overlap") return FrameMatcher::kOverlap;
  throw std::invalid_argument("unknown matcher: " + name);
}

double FrameTokenF1(const SemanticFrame& a, const SemanticFrame& b) {
  const auto ta = FrameTokens(a);
  const auto tb = FrameTokens(b);
  if (ta.empty() || tb.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& t : ta) common += tb.count(t);
  return 2.0 * static_cast<double>(common) /
         static_cast<double>(ta.size() + tb.size());
}

bool FramesMatch(const SemanticFrame& predicted, const SemanticFrame& gold,
                 FrameMatcher matcher) {
  if (matcher == FrameMatcher::kOverlap) {
    return FrameTokenF1(predicted, gold) >= 0.5;
  }
  if (predicted.sentence_index != gold.sentence_index ||
      !(predicted.predicate == gold.predicate)) {
    return false;
  }
  auto sorted_args = [](const SemanticFrame& f) {
    std::vector<std::pair<int, int>> spans;
    for (const auto& a : f.arguments) spans.emplace_back(a.span.begin, a.span.end);
    std::sort(spans.begin(), spans.end());
    return spans;
  };
  return sorted_args(predicted) == sorted_args(gold);
}

double RecallAtK(const HighlightResult& predicted,
                 const std::vector<SemanticFrame>& document_frames,
                 const std::vector<SemanticFrame>& gold, int k,
                 FrameMatcher matcher) {
  if (gold.empty()) throw std::invalid_argument("recall@k is undefined for an empty gold set");
  if (k < 1) throw std::invalid_argument("recall@k needs k >= 1");
  const std::size_t n = std::min<std::size_t>(k, predicted.ranked.size());
  int hit = 0;
  for (const auto& g : gold) {
    for (std::size_t i = 0; i < n; ++i) {
      if (FramesMatch(document_frames.at(predicted.ranked[i].frame), g, matcher)) {
        ++hit;
        break;
      }
    }
  }
  return static_cast<double>(hit) / static_cast<double>(gold.size());
}

BaselineImportance ParseBaselineImportance(const std::string& name) {
  if (name == "mean") return BaselineImportance::kMean;
  if (name == "sum") return BaselineImportance::kSum;
  throw std::invalid_argument("unknown baseline importance: " + name);
}

HighlightResult BaselineClsHighlights(
    const std::vector<ag::Matrix>& final_attention,
    const std::vector<AlignedFrame>& document_frames, int k,
    BaselineImportance mode) {
  if (final_attention.empty()) {
    throw std::invalid_argument("baseline highlights need final-layer attention");
  }
  // Attention from the [CLS] position, summed over heads.
  Eigen::RowVectorXd from_cls = Eigen::RowVectorXd::Zero(final_attention[0].cols());
  for (const auto& head : final_attention) from_cls += head.row(0);
  std::vector<double> scores;
  scores.reserve(document_frames.size());
  for (const auto& f : document_frames) {
    double s = 0.0;
    for (int pos : f.positions) s += from_cls(pos);
    if (mode == BaselineImportance::kMean && !f.positions.empty()) {
      s /= static_cast<double>(f.positions.size());
    }
    scores.push_back(s);
  }
  HighlightResult r = TopKHighlights(scores, k);
  for (auto& h : r.ranked) h.frame = document_frames[h.frame].frame_index;
  return r;
}

std::vector<EvidenceRecord> ReadEvidenceJsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError(path);
  std::vector<EvidenceRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line);
    EvidenceRecord r;
    r.id = j.at("id").get<std::string>();
    r.claim = j.at("claim").get<std::string>();
    r.section = j.at("section").get<std::string>();
    r.evidence_sentences = j.at("evidence").get<std::vector<int>>();
    out.push_back(std::move(r));
  }
  return out;
}

HighlightEvalSet BuildHighlightEvalSet(const std::vector<EvidenceRecord>& records,
                                       SrlBackend& backend) {
  HighlightEvalSet set;
  for (const auto& r : records) {
    HighlightEvalItem item;
    item.id = r.id;
    item.claim = r.claim;
    item.document = r.section;
    item.document_frames =
        ExtractFrames(r.section, FrameSource::kDocument, backend).frames;
    item.claim_frames = ExtractFrames(r.claim, FrameSource::kSummary, backend).frames;
    const std::set<int> evidence(r.evidence_sentences.begin(),
                                 r.evidence_sentences.end());
    for (const auto& f : item.document_frames) {
      // Fallback pseudo-frames are not evidence facts.
      if (!f.IsFallback() && evidence.count(f.sentence_index)) {
        item.gold.push_back(f);
      }
    }
    if (item.gold.empty()) {
      ++set.dropped;
      continue;
    }
    set.items.push_back(std::move(item));
  }
  return set;
}

nlohmann::json HighlightEvalReport::ToJson() const {
  nlohmann::json j;
  j["items"] = items;
  for (const auto& [k, v] : recall_at_k) j["recall@" + std::to_string(k)] = v;
  return j;
}

HighlightEvalReport EvaluateHighlights(const FactModel& model,
                                       const HighlightEvalSet& set,
                                       const std::vector<int>& ks,
                                       FrameMatcher matcher,
                                       HighlightMethod method,
                                       BaselineImportance baseline_mode) {
  HighlightEvalReport report;
  if (ks.empty()) return report;
  const int max_k = *std::max_element(ks.begin(), ks.end());
  for (int k : ks) report.recall_at_k[k] = 0.0;
  for (const auto& item : set.items) {
    const PreparedInput in = model.Prepare(item.document, item.document_frames,
                                           item.claim, item.claim_frames);
    HighlightResult ranked;
    if (method == HighlightMethod::kFactAttention) {
      ranked = model.Highlights(in, max_k);
    } else {
      ag::NoGradGuard no_grad;
      const EncoderOutput enc = model.encoder().Encode(in.encoder_input);
      ranked = BaselineClsHighlights(enc.final_attention,
                                     in.document_alignment.frames, max_k,
                                     baseline_mode);
    }
    for (int k : ks) {
      report.recall_at_k[k] += RecallAtK(ranked, item.document_frames, item.gold, k, matcher);
    }
    ++report.items;
  }
  if (report.items > 0) {
    for (auto& [k, v] : report.recall_at_k) v /= report.items;
  }
  return report;
}

}  // namespace factframe
