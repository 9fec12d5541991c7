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

// Corpus ingestion, deduplication, split construction and statistics.

#ifndef FACTFRAME_DATA_PIPELINE_H_
#define FACTFRAME_DATA_PIPELINE_H_

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "factframe/core_types.h"
#include "json.hpp"

namespace factframe {

struct DedupResult {
  std::vector<Sample> samples;
  int removed = 0;
  int conflicts = 0;  // dropped duplicates whose labels differ from the keeper
};

// Keeps the first occurrence of each (document, summary) pair, compared
// after whitespace normalization. Label conflicts are warned about.
DedupResult Dedup(const std::vector<Sample>& samples);

enum class SplitMode { kRandom, kChallenging };

struct SplitSpec {
  SplitMode mode = SplitMode::kRandom;
  int train = 0;
  int validation = 0;
  int test = 0;
  std::uint64_t seed = 13;
  std::string holdout_system;  // challenging mode only
};

struct SplitManifest {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
  std::vector<std::string> removed_overlap;

  nlohmann::json ToJson() const;
  static SplitManifest FromJson(const nlohmann::json& j);
  void Write(const std::string& path) const;
  static SplitManifest Read(const std::string& path);
};

// Deterministic Fisher-Yates permutation of [0, n).
std::vector<std::size_t> SeededPermutation(std::size_t n, std::uint64_t seed);

// Seeded shuffle, then partition into train/validation/test. Throws
// std::invalid_argument when the sizes do not sum to the corpus size.
SplitManifest MakeRandomSplit(const std::vector<Sample>& samples,
                              const SplitSpec& spec);

// Test = every sample of `holdout_system`; the rest is shuffled and split
// with `validation_size` samples for validation. Training samples whose
// normalized document equals a test document are then removed and listed in
// removed_overlap. Throws std::invalid_argument if the holdout system has
// no samples.
SplitManifest MakeChallengingSplit(const std::vector<Sample>& samples,
                                   const std::string& holdout_system,
                                   int validation_size, std::uint64_t seed);

// Selects samples by id in manifest order. Throws on unknown ids.
std::vector<Sample> SelectSamples(const std::vector<Sample>& samples,
                                  const std::vector<std::string>& ids);

struct CorpusStats {
  // origin name -> per-error-type positive counts
  std::map<std::string, std::array<long, kNumErrorTypes>> by_origin;
  // origin name -> per-category sample counts (SOTA, XFORMER, OLD, REF)
  std::map<std::string, std::array<long, 4>> categories_by_origin;
  long samples = 0;

  nlohmann::json ToJson() const;
  std::string ToTable() const;
};

// CNNDM and XSum rows are always present (zero when empty).
CorpusStats ComputeCorpusStats(const std::vector<Sample>& samples);

// Field mapping for raw annotated corpora.
struct RawCorpusConfig {
  std::string id_field = "id";
  std::string document_field = "doc";
  std::string summary_field = "summary";
  // Either a JSON array of tags or a delimited string.
  std::string labels_field = "errors";
  std::string label_delimiter = ";";
  std::string system_field = "model_name";
  std::string origin_field = "origin";
  std::string category_field;  // optional; overrides system_categories
  std::map<std::string, std::string> system_categories;
  std::set<std::string> no_error_tags = {"", "no-error", "none", "correct"};
  std::string id_prefix = "s";  // used when id_field is missing

  static RawCorpusConfig FromJson(const nlohmann::json& j);
};

// RFC 4180 CSV: quoted fields, doubled quotes, embedded newlines.
std::vector<std::vector<std::string>> ParseCsv(const std::string& text);

std::vector<Sample> ReadRawCorpus(const std::string& path,
                                  const RawCorpusConfig& config);

}  // namespace factframe

#endif  // FACTFRAME_DATA_PIPELINE_H_
