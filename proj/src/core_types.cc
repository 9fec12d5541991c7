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

#include "factframe/core_types.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

#include "factframe/errors.h"

namespace factframe {
namespace {

constexpr std::array<std::string_view, kNumErrorTypes> kKeys = {
    "extrinsic_np", "intrinsic_np", "extrinsic_pred", "intrinsic_pred"};
constexpr std::array<std::string_view, kNumErrorTypes> kShortNames = {
    "ExNP", "InNP", "ExPred", "InPred"};

std::string NormalizeTag(std::string_view tag) {
  std::string out;
  out.reserve(tag.size());
  for (char c : tag) {
    if (c == '_' || c == ' ') {
      out.push_back('-');
    } else {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  // Trim stray separators.
  while (!out.empty() && out.back() == '-') out.pop_back();
  std::size_t start = 0;
  while (start < out.size() && out[start] == '-') ++start;
  return out.substr(start);
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view ErrorTypeKey(ErrorType type) {
  return kKeys[static_cast<int>(type)];
}

std::string_view ErrorTypeShortName(ErrorType type) {
  return kShortNames[static_cast<int>(type)];
}

ErrorType ErrorTypeFromIndex(int index) {
  if (index < 0 || index >= kNumErrorTypes) {
    throw std::out_of_range("error type index out of range: " +
                            std::to_string(index));
  }
  return static_cast<ErrorType>(index);
}

LabelVector LabelVector::FromBits(std::uint8_t bits) {
  if (bits >= (1u << kNumErrorTypes)) {
    throw std::out_of_range("label bits out of range");
  }
  LabelVector v;
  v.bits_ = bits;
  return v;
}

LabelVector LabelVector::FromArray(
    const std::array<bool, kNumErrorTypes>& bits) {
  LabelVector v;
  for (int i = 0; i < kNumErrorTypes; ++i) v.Set(ErrorTypeFromIndex(i), bits[i]);
  return v;
}

void LabelVector::Set(ErrorType type, bool value) {
  if (value) {
    bits_ |= Mask(type);
  } else {
    bits_ &= static_cast<std::uint8_t>(~Mask(type));
  }
}

nlohmann::json LabelVector::ToJson() const {
  nlohmann::json j = nlohmann::json::object();
  for (ErrorType t : kAllErrorTypes) {
    j[std::string(ErrorTypeKey(t))] = Get(t) ? 1 : 0;
  }
  return j;
}

LabelVector LabelVector::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("labels must be an object");
  LabelVector v;
  for (ErrorType t : kAllErrorTypes) {
    const std::string key(ErrorTypeKey(t));
    if (!j.contains(key)) {
      throw std::invalid_argument("labels object is missing '" + key + "'");
    }
    const auto& bit = j.at(key);
    int value = bit.is_boolean() ? static_cast<int>(bit.get<bool>())
                                 : bit.get<int>();
    if (value != 0 && value != 1) {
      throw std::invalid_argument("label '" + key + "' must be 0 or 1");
    }
    v.Set(t, value == 1);
  }
  return v;
}

std::string LabelVector::ToString() const {
  if (NoError()) return "No Error";
  std::string out;
  for (ErrorType t : kAllErrorTypes) {
    if (!Get(t)) continue;
    if (!out.empty()) out += ",";
    out += ErrorTypeShortName(t);
  }
  return out;
}

LabelVector MapRawErrorLabels(const std::set<std::string>& raw_tags) {
  LabelVector out;
  for (const std::string& raw : raw_tags) {
    const std::string tag = NormalizeTag(raw);
    if (tag == "extrinsic-np") {
      out.Set(ErrorType::kExtrinsicNP);
    } else if (tag == "intrinsic-np") {
      out.Set(ErrorType::kIntrinsicNP);
    } else if (tag == "extrinsic-predicate" || tag == "extrinsic-pred") {
      out.Set(ErrorType::kExtrinsicPred);
    } else if (tag == "intrinsic-predicate" || tag == "intrinsic-pred") {
      out.Set(ErrorType::kIntrinsicPred);
    } else if (tag == "intrinsic-entire-sentence") {
      out.Set(ErrorType::kIntrinsicNP);
      out.Set(ErrorType::kIntrinsicPred);
    } else if (tag == "extrinsic-entire-sentence") {
      out.Set(ErrorType::kExtrinsicNP);
      out.Set(ErrorType::kExtrinsicPred);
    } else if (tag == "entire-sentence") {
      out = LabelVector::FromBits(0xF);
    } else {
      throw UnknownTagError(raw);
    }
  }
  return out;
}

int SemanticFrame::TokenCount() const {
  std::vector<bool> covered;
  auto mark = [&covered](const Span& s) {
    if (s.end > static_cast<int>(covered.size())) covered.resize(s.end, false);
    for (int i = std::max(0, s.begin); i < s.end; ++i) covered[i] = true;
  };
  mark(predicate);
  for (const auto& arg : arguments) mark(arg.span);
  return static_cast<int>(std::count(covered.begin(), covered.end(), true));
}

bool SemanticFrame::IsFallback() const {
  return arguments.size() == 1 && arguments[0].role == kFullSentenceRole;
}

void SemanticFrame::Validate(int sentence_length) const {
  auto in_bounds = [sentence_length](const Span& s) {
    return s.begin >= 0 && s.end <= sentence_length && !s.empty();
  };
  if (predicate.empty()) {
    throw std::invalid_argument("frame predicate span is empty");
  }
  if (!in_bounds(predicate)) {
    throw std::invalid_argument("frame predicate span out of sentence bounds");
  }
  for (const auto& arg : arguments) {
    if (!in_bounds(arg.span)) {
      throw std::invalid_argument("argument '" + arg.role +
                                  "' span out of sentence bounds");
    }
    if (!IsFallback() && arg.span.Overlaps(predicate)) {
      throw std::invalid_argument("argument '" + arg.role +
                                  "' overlaps the predicate");
    }
  }
}

std::string_view SystemCategoryName(SystemCategory category) {
  switch (category) {
    case SystemCategory::kSOTA: return "SOTA";
    case SystemCategory::kXFORMER: return "XFORMER";
    case SystemCategory::kOLD: return "OLD";
    case SystemCategory::kREF: return "REF";
    case SystemCategory::kUnknown: return "Unknown";
  }
  return "Unknown";
}

SystemCategory ParseSystemCategory(std::string_view name) {
  const std::string n = Lower(name);
  if (n == "sota") return SystemCategory::kSOTA;
  if (n == "xformer") return SystemCategory::kXFORMER;
  if (n == "old") return SystemCategory::kOLD;
  if (n == "ref" || n == "reference") return SystemCategory::kREF;
  return SystemCategory::kUnknown;
}

std::string_view OriginName(Origin origin) {
  switch (origin) {
    case Origin::kCNNDM: return "CNNDM";
    case Origin::kXSum: return "XSum";
    case Origin::kOther: return "Other";
  }
  return "Other";
}

Origin ParseOrigin(std::string_view name) {
  const std::string n = Lower(name);
  if (n == "cnndm" || n == "cnn/dm" || n == "cnn_dm" || n == "cnndm_test" ||
      n == "cnn") {
    return Origin::kCNNDM;
  }
  if (n == "xsum") return Origin::kXSum;
  return Origin::kOther;
}

void Sample::Validate() const {
  if (id.empty()) throw std::invalid_argument("sample id is empty");
  if (document.empty()) {
    throw std::invalid_argument("sample '" + id + "' has an empty document");
  }
  if (summary.empty()) {
    throw std::invalid_argument("sample '" + id + "' has an empty summary");
  }
}

nlohmann::json SampleToJson(const Sample& sample) {
  nlohmann::json j;
  j["id"] = sample.id;
  j["document"] = sample.document;
  j["summary"] = sample.summary;
  j["labels"] = sample.labels.ToJson();
  j["system_category"] = SystemCategoryName(sample.system_category);
  j["origin"] = OriginName(sample.origin);
  if (!sample.system.empty()) j["system"] = sample.system;
  return j;
}

Sample SampleFromJson(const nlohmann::json& j) {
  Sample s;
  s.id = j.at("id").get<std::string>();
  s.document = j.at("document").get<std::string>();
  s.summary = j.at("summary").get<std::string>();
  s.labels = j.contains("labels") ? LabelVector::FromJson(j.at("labels"))
                                  : LabelVector();
  if (j.contains("system_category")) {
    s.system_category =
        ParseSystemCategory(j.at("system_category").get<std::string>());
  }
  if (j.contains("origin")) s.origin = ParseOrigin(j.at("origin").get<std::string>());
  if (j.contains("system")) s.system = j.at("system").get<std::string>();
  s.Validate();
  return s;
}

std::vector<Sample> ReadSamplesJsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError(path);
  std::vector<Sample> samples;
  std::unordered_set<std::string> ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Sample s;
    try {
      s = SampleFromJson(nlohmann::json::parse(line));
    } catch (const std::exception& e) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": " +
                                  e.what());
    }
    if (!ids.insert(s.id).second) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": duplicate sample id '" + s.id + "'");
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

void WriteSamplesJsonl(const std::string& path,
                       const std::vector<Sample>& samples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& s : samples) out << SampleToJson(s).dump() << '\n';
}

}  // namespace factframe
