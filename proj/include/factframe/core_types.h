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

// Error typology, label vectors, samples and semantic frames shared by every
// other part of the library.

#ifndef FACTFRAME_CORE_TYPES_H_
#define FACTFRAME_CORE_TYPES_H_

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace factframe {

// Fine-grained factual error types. The enumerator values are the canonical
// label indices used by every vector, metric and file format.
enum class ErrorType : int {
  kExtrinsicNP = 0,
  kIntrinsicNP = 1,
  kExtrinsicPred = 2,
  kIntrinsicPred = 3,
};

inline constexpr int kNumErrorTypes = 4;
inline constexpr std::array<ErrorType, kNumErrorTypes> kAllErrorTypes = {
    ErrorType::kExtrinsicNP, ErrorType::kIntrinsicNP,
    ErrorType::kExtrinsicPred, ErrorType::kIntrinsicPred};

// JSON key of an error type ("extrinsic_np", ...).
std::string_view ErrorTypeKey(ErrorType type);
// Short display name ("ExNP", ...).
std::string_view ErrorTypeShortName(ErrorType type);
ErrorType ErrorTypeFromIndex(int index);

// Multi-label target: one bit per ErrorType. All zeros means "no factual
// error".
class LabelVector {
 public:
  LabelVector() = default;
  static LabelVector FromBits(std::uint8_t bits);
  static LabelVector FromArray(const std::array<bool, kNumErrorTypes>& bits);

  bool Get(ErrorType type) const { return bits_ & Mask(type); }
  bool Get(int index) const { return Get(ErrorTypeFromIndex(index)); }
  void Set(ErrorType type, bool value = true);
  bool NoError() const { return bits_ == 0; }
  std::uint8_t bits() const { return bits_; }

  nlohmann::json ToJson() const;
  static LabelVector FromJson(const nlohmann::json& j);
  std::string ToString() const;

  LabelVector operator|(const LabelVector& other) const {
    return FromBits(bits_ | other.bits_);
  }
  bool operator==(const LabelVector&) const = default;

 private:
  static std::uint8_t Mask(ErrorType type) {
    return static_cast<std::uint8_t>(1u << static_cast<int>(type));
  }
  std::uint8_t bits_ = 0;
};

class UnknownTagError : public std::invalid_argument {
 public:
  explicit UnknownTagError(const std::string& tag)
      : std::invalid_argument("unknown raw error tag: '" + tag + "'"),
        tag_(tag) {}
  const std::string& tag() const { return tag_; }

 private:
  std::string tag_;
};

// Maps raw annotation tags to the 4-type label vector. Fine-grained tags
// pass through; entire-sentence tags expand to the NP and predicate bits of
// their side (or all four bits for plain "entire-sentence"). Tag spelling is
// normalized: case-insensitive, '_' and ' ' treated as '-'.
LabelVector MapRawErrorLabels(const std::set<std::string>& raw_tags);

// Half-open word-index span [begin, end).
struct Span {
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
  bool empty() const { return end <= begin; }
  bool Overlaps(const Span& other) const {
    return begin < other.end && other.begin < end;
  }
  bool operator==(const Span&) const = default;
};

enum class FrameSource { kDocument, kSummary };

struct FrameArgument {
  std::string role;  // ARG0, ARG1, ARGM-MNR, FULLSENT, ...
  Span span;
  bool operator==(const FrameArgument&) const = default;
};

inline constexpr std::string_view kFullSentenceRole = "FULLSENT";

// One predicate with its role-labelled arguments. Spans index words of the
// sentence the frame belongs to.
struct SemanticFrame {
  int sentence_index = 0;
  Span predicate;
  std::vector<FrameArgument> arguments;
  FrameSource source = FrameSource::kDocument;

  // Number of distinct words covered by the predicate and arguments.
  int TokenCount() const;
  bool IsFallback() const;
  // Throws std::invalid_argument if the frame breaks an invariant for a
  // sentence of `sentence_length` words.
  void Validate(int sentence_length) const;
  bool operator==(const SemanticFrame&) const = default;
};

enum class SystemCategory { kSOTA, kXFORMER, kOLD, kREF, kUnknown };
enum class Origin { kCNNDM, kXSum, kOther };

std::string_view SystemCategoryName(SystemCategory category);
SystemCategory ParseSystemCategory(std::string_view name);
std::string_view OriginName(Origin origin);
Origin ParseOrigin(std::string_view name);

struct Sample {
  std::string id;
  std::string document;
  std::string summary;
  LabelVector labels;
  SystemCategory system_category = SystemCategory::kUnknown;
  Origin origin = Origin::kOther;
  // Name of the summarization system, when known.
  std::string system;

  void Validate() const;
};

nlohmann::json SampleToJson(const Sample& sample);
Sample SampleFromJson(const nlohmann::json& j);

// Reads/writes one JSON sample record per line. Duplicate ids are rejected
// on read.
std::vector<Sample> ReadSamplesJsonl(const std::string& path);
void WriteSamplesJsonl(const std::string& path,
                       const std::vector<Sample>& samples);

}  // namespace factframe

#endif  // FACTFRAME_CORE_TYPES_H_
