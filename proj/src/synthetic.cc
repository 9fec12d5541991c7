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

#include "factframe/synthetic.h"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace factframe {
namespace {

struct Fact {
  int subject;
  int verb;
  int object;
};

std::string Entity(int i) { return "ent" + std::to_string(i); }
std::string Verb(int i) { return "verbs" + std::to_string(i); }

std::string Render(const Fact& f) {
  return Entity(f.subject) + " " + Verb(f.verb) + " " + Entity(f.object) + " .";
}

// Uniform integer in [0, n) from raw engine output.
int Draw(std::mt19937_64& rng, int n) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

// Distinct values from [0, n).
std::vector<int> DrawDistinct(std::mt19937_64& rng, int n, int count) {
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < count; ++i) std::swap(pool[i], pool[i + Draw(rng, n - i)]);
  pool.resize(count);
  return pool;
}

}  // namespace

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticConfig& config) {
  const int k = config.facts_per_document;
  if (k < 2) throw std::invalid_argument("synthetic documents need >= 2 facts");
  if (config.entities < 2 * k + 1 || config.verbs < k + 1) {
    throw std::invalid_argument("synthetic vocabulary too small for the fact count");
  }
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SyntheticCorpus corpus;
  for (int v = 0; v < config.verbs; ++v) corpus.verb_lexicon.insert(Verb(v));

  for (int n = 0; n < config.samples; ++n) {
    // Every entity and verb in a document is distinct, so each corruption is
    // unambiguous.
    const auto ents = DrawDistinct(rng, config.entities, 2 * k);
    const auto verbs = DrawDistinct(rng, config.verbs, k);
    std::vector<Fact> facts;
    for (int i = 0; i < k; ++i) facts.push_back({ents[2 * i], verbs[i], ents[2 * i + 1]});

    const int j = Draw(rng, k);
    Fact s = facts[j];
    LabelVector labels;
    if (unit(rng) >= config.consistent_rate) {
      const auto type = ErrorTypeFromIndex(Draw(rng, kNumErrorTypes));
      const int other = (j + 1 + Draw(rng, k - 1)) % k;
      const bool hit_object = Draw(rng, 2) == 1;
      switch (type) {
        case ErrorType::kExtrinsicNP: {
          int e;
          do {
            e = Draw(rng, config.entities);
          } while (std::find(ents.begin(), ents.end(), e) != ents.end());
          (hit_object ? s.object : s.subject) = e;
          break;
        }
        case ErrorType::kIntrinsicNP:
          if (Draw(rng, 3) == 0) {
            std::swap(s.subject, s.object);
          } else {
            (hit_object ? s.object : s.subject) =
                Draw(rng, 2) ? facts[other].object : facts[other].subject;
          }
          break;
        case ErrorType::kExtrinsicPred: {
          int v;
          do {
            v = Draw(rng, config.verbs);
          } while (std::find(verbs.begin(), verbs.end(), v) != verbs.end());
          s.verb = v;
          break;
        }
        case ErrorType::kIntrinsicPred:
          s.verb = facts[other].verb;
          break;
      }
      labels.Set(type);
    }

    Sample sample;
    sample.id = "syn" + std::to_string(n);
    for (int i = 0; i < k; ++i) {
      if (i) sample.document += ' ';
      sample.document += Render(facts[i]);
    }
    sample.summary = Render(s);
    sample.labels = labels;
    sample.system_category = static_cast<SystemCategory>(n % 4);
    sample.origin = (n / 4) % 2 ? Origin::kXSum : Origin::kCNNDM;
    sample.system = "synth" + std::to_string(n % 5);
    corpus.samples.push_back(std::move(sample));
  }
  return corpus;
}

SyntheticEvidence GenerateEvidenceCorpus(int records, int sentences_per_section,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SyntheticEvidence out;
  const int entities = 4 * sentences_per_section + 8;
  const int verbs = sentences_per_section + 4;
  for (int v = 0; v < verbs; ++v) out.verb_lexicon.insert(Verb(v));
  for (int r = 0; r < records; ++r) {
    const auto ents = DrawDistinct(rng, entities, 2 * sentences_per_section);
    const auto vs = DrawDistinct(rng, verbs, sentences_per_section);
    EvidenceRecord rec;
    rec.id = "ev" + std::to_string(r);
    std::vector<Fact> facts;
    for (int i = 0; i < sentences_per_section; ++i) {
      facts.push_back({ents[2 * i], vs[i], ents[2 * i + 1]});
      if (i) rec.section += ' ';
      rec.section += Render(facts.back());
    }
    const int e = Draw(rng, sentences_per_section);
    rec.claim = Render(facts[e]);
    rec.evidence_sentences = {e};
    out.records.push_back(std::move(rec));
  }
  return out;
}

}  // namespace factframe
