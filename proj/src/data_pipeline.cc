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

#include "factframe/data_pipeline.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "factframe/errors.h"
#include "factframe/log.h"
#include "factframe/text.h"

namespace factframe {
namespace {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInputError(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string PairKey(const Sample& s) {
  return NormalizeWhitespace(s.document) + '\x1f' + NormalizeWhitespace(s.summary);
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitOn(const std::string& s, const std::string& delim) {
  std::vector<std::string> out;
  if (delim.empty()) {
    out.push_back(s);
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(delim, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + delim.size();
  }
  return out;
}

// A raw record flattened to string fields (arrays kept as JSON).
using RawRecord = std::map<std::string, nlohmann::json>;

std::vector<RawRecord> ReadRawRecords(const std::string& path) {
  const std::string text = ReadFile(path);
  std::vector<RawRecord> out;
  const bool csv = path.size() >= 4 && ToLower(path.substr(path.size() - 4)) == ".csv";
  if (csv) {
    const auto rows = ParseCsv(text);
    if (rows.empty()) return out;
    const auto& header = rows[0];
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() == 1 && rows[r][0].empty()) continue;
      if (rows[r].size() != header.size()) {
        throw std::runtime_error(path + ": row " + std::to_string(r + 1) + " has " +
                                 std::to_string(rows[r].size()) + " fields, expected " +
                                 std::to_string(header.size()));
      }
      RawRecord rec;
      for (std::size_t c = 0; c < header.size(); ++c) rec[header[c]] = rows[r][c];
      out.push_back(std::move(rec));
    }
    return out;
  }
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    const auto j = nlohmann::json::parse(line);
    RawRecord rec;
    for (const auto& [k, v] : j.items()) rec[k] = v;
    out.push_back(std::move(rec));
  }
  return out;
}

std::string FieldString(const RawRecord& rec, const std::string& field) {
  auto it = rec.find(field);
  if (it == rec.end() || it->second.is_null()) return "";
  if (it->second.is_string()) return it->second.get<std::string>();
  return it->second.dump();
}

}  // namespace

DedupResult Dedup(const std::vector<Sample>& samples) {
  DedupResult r;
  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& s : samples) {
    const std::string key = PairKey(s);
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(key, r.samples.size());
      r.samples.push_back(s);
      continue;
    }
    ++r.removed;
    const Sample& keeper = r.samples[it->second];
    if (!(keeper.labels == s.labels)) {
      ++r.conflicts;
      LogWarning("duplicate pair " + s.id + " has labels " + s.labels.ToString() +
                 " but kept " + keeper.id + " has " + keeper.labels.ToString());
    }
  }
  return r;
}

nlohmann::json SplitManifest::ToJson() const {
  return {{"train", train},
          {"validation", validation},
          {"test", test},
          {"removed_overlap", removed_overlap}};
}

SplitManifest SplitManifest::FromJson(const nlohmann::json& j) {
  SplitManifest m;
  m.train = j.at("train").get<std::vector<std::string>>();
  m.validation = j.at("validation").get<std::vector<std::string>>();
  m.test = j.at("test").get<std::vector<std::string>>();
  m.removed_overlap =
      j.value("removed_overlap", std::vector<std::string>{});
  return m;
}

void SplitManifest::Write(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << ToJson().dump(2) << '\n';
}

SplitManifest SplitManifest::Read(const std::string& path) {
  return FromJson(nlohmann::json::parse(ReadFile(path)));
}

std::vector<std::size_t> SeededPermutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  return order;
}

SplitManifest MakeRandomSplit(const std::vector<Sample>& samples,
                              const SplitSpec& spec) {
  if (spec.train < 0 || spec.validation < 0 || spec.test < 0) {
    throw std::invalid_argument("split sizes must be non-negative");
  }
  const long expected = static_cast<long>(spec.train) + spec.validation + spec.test;
  if (expected != static_cast<long>(samples.size())) {
    throw std::invalid_argument(
        "split sizes " + std::to_string(spec.train) + "/" +
        std::to_string(spec.validation) + "/" + std::to_string(spec.test) +
        " sum to " + std::to_string(expected) + " but the corpus has " +
        std::to_string(samples.size()) + " samples");
  }
  const auto order = SeededPermutation(samples.size(), spec.seed);
  SplitManifest m;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::string& id = samples[order[i]].id;
    if (i < static_cast<std::size_t>(spec.train)) m.train.push_back(id);
    else if (i < static_cast<std::size_t>(spec.train + spec.validation)) m.validation.push_back(id);
    else m.test.push_back(id);
  }
  return m;
}

SplitManifest MakeChallengingSplit(const std::vector<Sample>& samples,
                                   const std::string& holdout_system,
                                   int validation_size, std::uint64_t seed) {
  std::vector<const Sample*> rest;
  std::unordered_set<std::string> test_documents;
  SplitManifest m;
  for (const auto& s : samples) {
    if (s.system == holdout_system) {
      m.test.push_back(s.id);
      test_documents.insert(NormalizeWhitespace(s.document));
    } else {
      rest.push_back(&s);
    }
  }
  if (m.test.empty()) {
    throw std::invalid_argument("holdout system '" + holdout_system +
                                "' has no samples");
  }
  if (validation_size < 0 || validation_size > static_cast<int>(rest.size())) {
    throw std::invalid_argument("validation size " + std::to_string(validation_size) +
                                " exceeds the " + std::to_string(rest.size()) +
                                " non-holdout samples");
  }
  const auto order = SeededPermutation(rest.size(), seed);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Sample& s = *rest[order[i]];
    if (i < static_cast<std::size_t>(validation_size)) {
      m.validation.push_back(s.id);
    } else if (test_documents.count(NormalizeWhitespace(s.document))) {
      m.removed_overlap.push_back(s.id);
    } else {
      m.train.push_back(s.id);
    }
  }
  return m;
}

std::vector<Sample> SelectSamples(const std::vector<Sample>& samples,
                                  const std::vector<std::string>& ids) {
  std::unordered_map<std::string, const Sample*> by_id;
  for (const auto& s : samples) by_id.emplace(s.id, &s);
  std::vector<Sample> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw std::invalid_argument("unknown sample id: " + id);
    out.push_back(*it->second);
  }
  return out;
}

CorpusStats ComputeCorpusStats(const std::vector<Sample>& samples) {
  CorpusStats st;
  st.by_origin["CNNDM"] = {};
  st.by_origin["XSum"] = {};
  st.categories_by_origin["CNNDM"] = {};
  st.categories_by_origin["XSum"] = {};
  for (const auto& s : samples) {
    const std::string origin(OriginName(s.origin));
    auto& counts = st.by_origin[origin];
    for (int i = 0; i < kNumErrorTypes; ++i) counts[i] += s.labels.Get(ErrorTypeFromIndex(i));
    auto& cats = st.categories_by_origin[origin];
    if (s.system_category != SystemCategory::kUnknown) {
      ++cats[static_cast<int>(s.system_category)];
    }
    ++st.samples;
  }
  return st;
}

nlohmann::json CorpusStats::ToJson() const {
  nlohmann::json j;
  j["samples"] = samples;
  for (const auto& [origin, c] : by_origin) {
    for (int i = 0; i < kNumErrorTypes; ++i) {
      j["error_types"][origin][std::string(ErrorTypeShortName(ErrorTypeFromIndex(i)))] = c[i];
    }
  }
  for (const auto& [origin, c] : categories_by_origin) {
    for (int i = 0; i < 4; ++i) {
      const std::string name(SystemCategoryName(static_cast<SystemCategory>(i)));
      j["categories"][origin][name] = c[i];
    }
  }
  return j;
}

std::string CorpusStats::ToTable() const {
  std::ostringstream out;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%-8s %7s %7s %7s %7s\n", "origin", "ExNP", "InNP",
                "ExPred", "InPred");
  out << buf;
  for (const auto& [origin, c] : by_origin) {
    std::snprintf(buf, sizeof(buf), "%-8s %7ld %7ld %7ld %7ld\n", origin.c_str(), c[0],
                  c[1], c[2], c[3]);
    out << buf;
  }
  out << '\n';
  std::snprintf(buf, sizeof(buf), "%-8s %7s %7s %7s %7s\n", "origin", "SOTA", "XFORMER",
                "OLD", "REF");
  out << buf;
  for (const auto& [origin, c] : categories_by_origin) {
    std::snprintf(buf, sizeof(buf), "%-8s %7ld %7ld %7ld %7ld\n", origin.c_str(), c[0],
                  c[1], c[2], c[3]);
    out << buf;
  }
  return out.str();
}

RawCorpusConfig RawCorpusConfig::FromJson(const nlohmann::json& j) {
  RawCorpusConfig c;
  c.id_field = j.value("id_field", c.id_field);
  c.document_field = j.value("document_field", c.document_field);
  c.summary_field = j.value("summary_field", c.summary_field);
  c.labels_field = j.value("labels_field", c.labels_field);
  c.label_delimiter = j.value("label_delimiter", c.label_delimiter);
  c.system_field = j.value("system_field", c.system_field);
  c.origin_field = j.value("origin_field", c.origin_field);
  c.category_field = j.value("category_field", c.category_field);
  c.id_prefix = j.value("id_prefix", c.id_prefix);
  if (j.contains("system_categories")) {
    c.system_categories =
        j["system_categories"].get<std::map<std::string, std::string>>();
  }
  if (j.contains("no_error_tags")) {
    c.no_error_tags = j["no_error_tags"].get<std::set<std::string>>();
  }
  return c;
}

std::vector<std::vector<std::string>> ParseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    any = true;
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw std::runtime_error("unterminated quoted CSV field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Sample> ReadRawCorpus(const std::string& path,
                                  const RawCorpusConfig& config) {
  std::set<std::string> no_error;
  for (const auto& t : config.no_error_tags) no_error.insert(ToLower(Trim(t)));
  std::vector<Sample> out;
  int index = 0;
  for (const auto& rec : ReadRawRecords(path)) {
    Sample s;
    s.id = FieldString(rec, config.id_field);
    if (s.id.empty()) s.id = config.id_prefix + std::to_string(index);
    ++index;
    s.document = FieldString(rec, config.document_field);
    s.summary = FieldString(rec, config.summary_field);
    s.system = FieldString(rec, config.system_field);

    std::vector<std::string> tags;
    auto it = rec.find(config.labels_field);
    if (it != rec.end() && it->second.is_array()) {
      for (const auto& t : it->second) tags.push_back(t.get<std::string>());
    } else {
      std::string raw = FieldString(rec, config.labels_field);
      // CSV cells may hold a list literal, JSON or Python style.
      const std::string trimmed = Trim(raw);
      if (trimmed.size() >= 2 && trimmed.front() == '[' && trimmed.back() == ']') {
        for (std::string t : SplitOn(trimmed.substr(1, trimmed.size() - 2), ",")) {
          t = Trim(t);
          if (t.size() >= 2 && (t.front() == '"' || t.front() == '\'') &&
              t.back() == t.front()) {
            t = t.substr(1, t.size() - 2);
          }
          tags.push_back(t);
        }
      } else {
        tags = SplitOn(raw, config.label_delimiter);
      }
    }
    std::set<std::string> raw_tags;
    for (const auto& t : tags) {
      const std::string trimmed = Trim(t);
      if (!no_error.count(ToLower(trimmed))) raw_tags.insert(trimmed);
    }
    s.labels = MapRawErrorLabels(raw_tags);

    const std::string origin = FieldString(rec, config.origin_field);
    s.origin = origin.empty() ? Origin::kOther : ParseOrigin(origin);
    std::string category;
    if (!config.category_field.empty()) category = FieldString(rec, config.category_field);
    if (category.empty()) {
      auto c = config.system_categories.find(s.system);
      if (c != config.system_categories.end()) category = c->second;
    }
    s.system_category =
        category.empty() ? SystemCategory::kUnknown : ParseSystemCategory(category);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace factframe
