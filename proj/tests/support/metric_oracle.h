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


// Confusion-matrix metric oracles written independently of the library,
// plus a random fixture generator.

#ifndef FACTFRAME_TESTS_SUPPORT_METRIC_ORACLE_H_
#define FACTFRAME_TESTS_SUPPORT_METRIC_ORACLE_H_

#include <random>
#include <vector>

#include "factframe/core_types.h"

namespace factframe::testing {

// Agreement tolerance between the library and the oracles. The oracles use
// F1 = 2TP / (2TP + FP + FN), which differs from 2PR / (P + R) only by
// rounding.
inline constexpr double kMetricOracleTolerance = 1e-12;

struct OracleCounts {
  long tp = 0, fp = 0, tn = 0, fn = 0;
};

inline OracleCounts Count(const std::vector<LabelVector>& preds,
                          const std::vector<LabelVector>& golds, int cls) {
  OracleCounts c;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const int p = (preds[i].bits() >> cls) & 1;
    const int g = (golds[i].bits() >> cls) & 1;
    c.tp += p & g;
    c.fp += p & (1 - g);
    c.fn += (1 - p) & g;
    c.tn += (1 - p) & (1 - g);
  }
  return c;
}

inline double OracleF1(const OracleCounts& c) {
  const long denom = 2 * c.tp + c.fp + c.fn;
  return denom == 0 ? 0.0 : 2.0 * c.tp / denom;
}

inline double OracleBacc(const OracleCounts& c) {
  const double tpr = (c.tp + c.fn) == 0 ? 0.0 : double(c.tp) / (c.tp + c.fn);
  const double tnr = (c.tn + c.fp) == 0 ? 0.0 : double(c.tn) / (c.tn + c.fp);
  return (tpr + tnr) / 2.0;
}

inline double OracleMacroF1(const std::vector<LabelVector>& preds,
                            const std::vector<LabelVector>& golds) {
  double s = 0;
  for (int c = 0; c < kNumErrorTypes; ++c) s += OracleF1(Count(preds, golds, c));
  return s / kNumErrorTypes;
}

inline double OracleMacroBacc(const std::vector<LabelVector>& preds,
                              const std::vector<LabelVector>& golds) {
  double s = 0;
  for (int c = 0; c < kNumErrorTypes; ++c) s += OracleBacc(Count(preds, golds, c));
  return s / kNumErrorTypes;
}

struct LabelFixture {
  std::vector<LabelVector> preds;
  std::vector<LabelVector> golds;
};

inline LabelFixture RandomLabelFixture(std::mt19937_64& rng, int max_size) {
  LabelFixture f;
  const int n = 1 + static_cast<int>(rng() % max_size);
  for (int i = 0; i < n; ++i) {
    f.preds.push_back(LabelVector::FromBits(static_cast<std::uint8_t>(rng() % 16)));
    f.golds.push_back(LabelVector::FromBits(static_cast<std::uint8_t>(rng() % 16)));
  }
  return f;
}

}  // namespace factframe::testing

#endif  // FACTFRAME_TESTS_SUPPORT_METRIC_ORACLE_H_
