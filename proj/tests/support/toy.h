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


// Small synthetic corpora with fixture-backend frames, shared by the unit
// tests and the acceptance runner.

#ifndef FACTFRAME_TESTS_SUPPORT_TOY_H_
#define FACTFRAME_TESTS_SUPPORT_TOY_H_

#include <memory>
#include <vector>

#include "factframe/model.h"
#include "factframe/srl.h"
#include "factframe/synthetic.h"
#include "factframe/training.h"

namespace factframe::testing {

struct ToyData {
  std::vector<Sample> samples;
  FrameStore frames;
};

inline ToyData MakeToyData(const SyntheticConfig& config) {
  SyntheticCorpus corpus = GenerateSyntheticCorpus(config);
  FixtureBackend backend(corpus.verb_lexicon);
  ToyData data;
  data.frames = FrameStore(ExtractCorpusFrames(corpus.samples, backend));
  data.samples = std::move(corpus.samples);
  return data;
}

inline ToyData MakeToyData(int samples, std::uint64_t seed) {
  SyntheticConfig config;
  config.samples = samples;
  config.seed = seed;
  return MakeToyData(config);
}

inline std::vector<Sample> Slice(const std::vector<Sample>& samples,
                                 std::size_t begin, std::size_t end) {
  return {samples.begin() + begin, samples.begin() + end};
}

// Toy model at width d with the given attention heads.
inline ModelConfig ToyModelConfig(int d, int heads, std::uint64_t seed) {
  ModelConfig config;
  config.hidden = d;
  config.heads = heads;
  config.vocab_size = 512;
  config.truncation_limit = 128;
  config.seed = seed;
  return config;
}

}  // namespace factframe::testing

#endif  // FACTFRAME_TESTS_SUPPORT_TOY_H_
