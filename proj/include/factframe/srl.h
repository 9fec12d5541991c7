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

// Semantic-role-labelling frontend: turns text into SemanticFrames through a
// pluggable backend, stores them in a JSONL sidecar, and aligns word spans
// to encoder subword positions.

#ifndef FACTFRAME_SRL_H_
#define FACTFRAME_SRL_H_

#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "factframe/core_types.h"
#include "factframe/text.h"
#include "json.hpp"

namespace factframe {

class SrlBackend {
 public:
  virtual ~SrlBackend() = default;
  virtual std::string name() const = 0;
  virtual std::string version() const = 0;
  // Frames for one tokenized sentence. Only predicate/argument spans are
  // meaningful in the result; the caller fills sentence index and source.
  // Throws on failure.
  virtual std::vector<SemanticFrame> Label(const Sentence& sentence) = 0;
};

// Deterministic rule backend for tests and desk-scale runs. Every word in
// the verb lexicon is a predicate; the run of words immediately before it is
// ARG0 and the run immediately after it is ARG1. Runs stop at punctuation,
// coordinating conjunctions and other lexicon verbs.
class FixtureBackend : public SrlBackend {
 public:
  explicit FixtureBackend(std::set<std::string> verb_lexicon);

  std::string name() const override { return "fixture"; }
  std::string version() const override;
  std::vector<SemanticFrame> Label(const Sentence& sentence) override;

  const std::set<std::string>& lexicon() const { return lexicon_; }

 private:
  bool IsVerb(const std::string& word) const;
  bool IsBoundary(const std::string& word) const;

  std::set<std::string> lexicon_;
};

// Talks to an external SRL tool over a pipe. For each sentence one line
// {"tokens": [...]} is written to the child's stdin and one line is read
// back: {"frames": [{"predicate": [b, e], "args": [{"role": r, "span":
// [b, e]}]}]} on success or {"error": "..."} on a per-sentence failure.
class SubprocessBackend : public SrlBackend {
 public:
  // `command` runs under /bin/sh -c. Throws BackendError if it cannot start.
  explicit SubprocessBackend(const std::string& command,
                             std::string version = "1");
  ~SubprocessBackend() override;
  SubprocessBackend(const SubprocessBackend&) = delete;
  SubprocessBackend& operator=(const SubprocessBackend&) = delete;

  std::string name() const override { return "subprocess:" + command_; }
  std::string version() const override { return version_; }
  std::vector<SemanticFrame> Label(const Sentence& sentence) override;

 private:
  std::string command_;
  std::string version_;
  int pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
};

struct ExtractionResult {
  std::vector<SemanticFrame> frames;
  std::vector<std::string> warnings;
  int failed_sentences = 0;
};

// Runs the backend over every sentence. Frames come out ordered by
// (sentence, predicate start). A sentence whose backend call fails adds a
// warning and no frames; if every sentence fails, throws BackendError. If
// the text yields no frames at all, one FULLSENT pseudo-frame per sentence
// is emitted instead.
ExtractionResult ExtractFrames(const TokenizedText& text, FrameSource source,
                               SrlBackend& backend);
ExtractionResult ExtractFrames(std::string_view text, FrameSource source,
                               SrlBackend& backend);

// Frames whose source is one text of one sample.
struct FrameRecord {
  std::string sample_id;
  FrameSource source = FrameSource::kDocument;
  std::vector<SemanticFrame> frames;
};

nlohmann::json FrameRecordToJson(const FrameRecord& record);
FrameRecord FrameRecordFromJson(const nlohmann::json& j);
nlohmann::json FrameToJson(const SemanticFrame& frame);
SemanticFrame FrameFromJson(const nlohmann::json& j, FrameSource source);

// Document then summary record for every sample, in corpus order.
// Per-sentence warnings are appended to `warnings` when given.
std::vector<FrameRecord> ExtractCorpusFrames(
    const std::vector<Sample>& samples, SrlBackend& backend,
    std::vector<std::string>* warnings = nullptr);

void WriteFrameSidecar(const std::string& path,
                       const std::vector<FrameRecord>& records);
std::vector<FrameRecord> ReadFrameSidecar(const std::string& path);

// Document and summary frames per sample id.
class FrameStore {
 public:
  FrameStore() = default;
  explicit FrameStore(const std::vector<FrameRecord>& records);
  static FrameStore Load(const std::string& path);

  void Put(const std::string& sample_id, FrameSource source,
           std::vector<SemanticFrame> frames);
  bool Contains(const std::string& sample_id) const;
  const std::vector<SemanticFrame>& Document(const std::string& id) const;
  const std::vector<SemanticFrame>& Summary(const std::string& id) const;
  std::vector<FrameRecord> Records() const;

 private:
  struct Entry {
    std::vector<SemanticFrame> document;
    std::vector<SemanticFrame> summary;
  };
  std::map<std::string, Entry> entries_;
};

// Maps flat word indices onto contiguous subword positions of the encoder
// input. Positions start at `offset`; anything at or beyond `limit` is
// truncated. A word survives if at least one of its subwords does.
class SpanAlignment {
 public:
  SpanAlignment(const std::vector<int>& subwords_per_word, int offset,
                int limit);

  // Clipped half-open subword range of a word, or nullopt if truncated.
  std::optional<std::pair<int, int>> WordRange(int word) const;
  int truncation_limit() const { return limit_; }
  int num_words() const { return static_cast<int>(ranges_.size()); }
  int num_surviving_words() const { return surviving_; }
  // One past the last emitted position.
  int end_position() const { return end_; }

 private:
  std::vector<std::pair<int, int>> ranges_;  // unclipped
  int limit_;
  int surviving_ = 0;
  int end_ = 0;
};

struct AlignedArgument {
  std::string role;
  std::vector<int> positions;
};

struct AlignedFrame {
  int frame_index = 0;  // index into the input frame list
  std::vector<int> predicate_positions;
  std::vector<AlignedArgument> arguments;
  // Sorted, distinct union of all positions of the frame.
  std::vector<int> positions;
};

struct AlignmentResult {
  std::vector<AlignedFrame> frames;
  int dropped = 0;
};

// Replaces word spans by subword positions. A frame whose predicate is fully
// truncated is dropped and counted; argument words past the limit are
// clipped, and arguments with no surviving word are removed.
AlignmentResult AlignFrames(const std::vector<SemanticFrame>& frames,
                            const TokenizedText& text,
                            const SpanAlignment& alignment);

}  // namespace factframe

#endif  // FACTFRAME_SRL_H_
