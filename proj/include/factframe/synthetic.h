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

// Synthetic corpora with a controlled error typology. Each document is a
// list of "subject verb object ." facts; the summary restates one fact,
// possibly corrupted:
//   ExNP   an argument is replaced by an entity absent from the document
//   InNP   an argument is replaced by an entity from another fact (or the
//          subject and object are swapped)
//   ExPred the verb is replaced by a verb absent from the document
//   InPred the verb is replaced by the verb of another fact

#ifndef FACTFRAME_SYNTHETIC_H_
#define FACTFRAME_SYNTHETIC_H_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "factframe/core_types.h"
#include "factframe/evaluation.h"

namespace factframe {

struct SyntheticConfig {
  int samples = 64;
  int facts_per_document = 4;
  int entities = 40;
  int verbs = 16;
  // Probability that a sample is left consistent; otherwise exactly one
  // error type is drawn uniformly.
  double consistent_rate = 0.2;
  std::uint64_t seed = 7;
};

struct SyntheticCorpus {
  std::vector<Sample> samples;
  std::set<std::string> verb_lexicon;  // for FixtureBackend
};

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticConfig& config);

// Claims restating one sentence of a generated section; the evidence is
// that sentence.
struct SyntheticEvidence {
  std::vector<EvidenceRecord> records;
  std::set<std::string> verb_lexicon;
};

SyntheticEvidence GenerateEvidenceCorpus(int records, int sentences_per_section,
                                         std::uint64_t seed);

}  // namespace factframe

#endif  // FACTFRAME_SYNTHETIC_H_
