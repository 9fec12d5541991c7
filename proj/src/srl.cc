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

#include "factframe/srl.h"

#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <fstream>

#include "factframe/errors.h"

namespace factframe {
namespace {

bool IsPunctuation(const std::string& w) {
  return !w.empty() &&
         std::all_of(w.begin(), w.end(), [](char c) {
           return std::ispunct(static_cast<unsigned char>(c));
         });
}

Span SpanFromJson(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("span must be [start, end]");
  }
  return Span{j[0].get<int>(), j[1].get<int>()};
}

nlohmann::json SpanToJson(const Span& s) { return {s.begin, s.end}; }

std::string_view SourceName(FrameSource source) {
  return source == FrameSource::kDocument ? "document" : "summary";
}

FrameSource ParseSource(const std::string& s) {
  if (s == "document") return FrameSource::kDocument;
  if (s == "summary") return FrameSource::kSummary;
  throw std::invalid_argument("unknown frame source: " + s);
}

}  // namespace

FixtureBackend::FixtureBackend(std::set<std::string> verb_lexicon) {
  for (const auto& v : verb_lexicon) lexicon_.insert(ToLower(v));
}

std::string FixtureBackend::version() const {
  // The lexicon changes the output, so it is part of the version.
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& v : lexicon_) {
    for (char c : v) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  }
  return "1-" + std::to_string(h % 1000000007ull);
}

bool FixtureBackend::IsVerb(const std::string& word) const {
  return lexicon_.count(ToLower(word)) > 0;
}

bool FixtureBackend::IsBoundary(const std::string& word) const {
  if (IsVerb(word) || IsPunctuation(word)) return true;
  const std::string w = ToLower(word);
  return w == "and" || w == "or" || w == "but";
}

std::vector<SemanticFrame> FixtureBackend::Label(const Sentence& sentence) {
  std::vector<SemanticFrame> frames;
  const int n = static_cast<int>(sentence.size());
  for (int i = 0; i < n; ++i) {
    if (!IsVerb(sentence[i])) continue;
    SemanticFrame f;
    f.predicate = {i, i + 1};
    int b = i;
    while (b > 0 && !IsBoundary(sentence[b - 1])) --b;
    if (b < i) f.arguments.push_back({"ARG0", {b, i}});
    int e = i + 1;
    while (e < n && !IsBoundary(sentence[e])) ++e;
    if (e > i + 1) f.arguments.push_back({"ARG1", {i + 1, e}});
    frames.push_back(std::move(f));
  }
  return frames;
}

SubprocessBackend::SubprocessBackend(const std::string& command,
                                     std::string version)
    : command_(command), version_(std::move(version)) {
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0) throw BackendError("pipe() failed");
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw BackendError("pipe() failed");
  }
  // A dead child must surface as a per-call error, not a signal.
  signal(SIGPIPE, SIG_IGN);
  pid_ = fork();
  if (pid_ < 0) throw BackendError("fork() failed for: " + command);
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = fdopen(in_pipe[1], "w");
  from_child_ = fdopen(out_pipe[0], "r");
  if (to_child_ == nullptr || from_child_ == nullptr) {
    throw BackendError("fdopen() failed for: " + command);
  }
}

SubprocessBackend::~SubprocessBackend() {
  if (to_child_ != nullptr) std::fclose(to_child_);
  if (from_child_ != nullptr) std::fclose(from_child_);
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

std::vector<SemanticFrame> SubprocessBackend::Label(const Sentence& sentence) {
  nlohmann::json request;
  request["tokens"] = sentence;
  const std::string line = request.dump() + "\n";
  if (std::fputs(line.c_str(), to_child_) < 0 || std::fflush(to_child_) != 0) {
    throw BackendError("cannot write to SRL subprocess");
  }
  std::string response;
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), from_child_) != nullptr) {
    response += buf;
    if (!response.empty() && response.back() == '\n') break;
  }
  if (response.empty()) throw BackendError("SRL subprocess closed its output");

  const auto j = nlohmann::json::parse(response);
  if (j.contains("error")) {
    throw std::runtime_error("SRL subprocess error: " +
                             j.at("error").get<std::string>());
  }
  std::vector<SemanticFrame> frames;
  for (const auto& fj : j.at("frames")) {
    frames.push_back(FrameFromJson(fj, FrameSource::kDocument));
  }
  return frames;
}

ExtractionResult ExtractFrames(const TokenizedText& text, FrameSource source,
                               SrlBackend& backend) {
  if (text.num_sentences() == 0) {
    throw std::invalid_argument("cannot extract frames from empty text");
  }
  ExtractionResult result;
  for (int s = 0; s < text.num_sentences(); ++s) {
    std::vector<SemanticFrame> frames;
    try {
      frames = backend.Label(text.sentences()[s]);
    } catch (const std::exception& e) {
      ++result.failed_sentences;
      result.warnings.push_back("sentence " + std::to_string(s) + ": " +
                                e.what());
      continue;
    }
    for (auto& f : frames) {
      f.sentence_index = s;
      f.source = source;
      try {
        f.Validate(text.SentenceLength(s));
      } catch (const std::exception& e) {
        result.warnings.push_back("sentence " + std::to_string(s) +
                                  ": dropped invalid frame: " + e.what());
        continue;
      }
      result.frames.push_back(std::move(f));
    }
  }
  if (result.failed_sentences == text.num_sentences()) {
    throw BackendError("SRL backend '" + backend.name() +
                       "' failed on every sentence" +
                       (result.warnings.empty() ? std::string()
                                                : ": " + result.warnings[0]));
  }
  std::stable_sort(result.frames.begin(), result.frames.end(),
                   [](const SemanticFrame& a, const SemanticFrame& b) {
                     if (a.sentence_index != b.sentence_index) {
                       return a.sentence_index < b.sentence_index;
                     }
                     return a.predicate.begin < b.predicate.begin;
                   });
  if (result.frames.empty()) {
    for (int s = 0; s < text.num_sentences(); ++s) {
      const int n = text.SentenceLength(s);
      if (n == 0) continue;
      SemanticFrame f;
      f.sentence_index = s;
      f.source = source;
      f.predicate = {0, n};
      f.arguments.push_back({std::string(kFullSentenceRole), {0, n}});
      result.frames.push_back(std::move(f));
    }
  }
  return result;
}

ExtractionResult ExtractFrames(std::string_view text, FrameSource source,
                               SrlBackend& backend) {
  return ExtractFrames(TokenizedText::Split(text), source, backend);
}

nlohmann::json FrameToJson(const SemanticFrame& frame) {
  nlohmann::json j;
  j["sentence"] = frame.sentence_index;
  j["predicate"] = SpanToJson(frame.predicate);
  j["args"] = nlohmann::json::array();
  for (const auto& a : frame.arguments) {
    j["args"].push_back({{"role", a.role}, {"span", SpanToJson(a.span)}});
  }
  return j;
}

SemanticFrame FrameFromJson(const nlohmann::json& j, FrameSource source) {
  SemanticFrame f;
  f.source = source;
  f.sentence_index = j.value("sentence", 0);
  f.predicate = SpanFromJson(j.at("predicate"));
  if (j.contains("args")) {
    for (const auto& a : j.at("args")) {
      f.arguments.push_back(
          {a.at("role").get<std::string>(), SpanFromJson(a.at("span"))});
    }
  }
  return f;
}

nlohmann::json FrameRecordToJson(const FrameRecord& record) {
  nlohmann::json j;
  j["sample_id"] = record.sample_id;
  j["source"] = SourceName(record.source);
  j["frames"] = nlohmann::json::array();
  for (const auto& f : record.frames) j["frames"].push_back(FrameToJson(f));
  return j;
}

FrameRecord FrameRecordFromJson(const nlohmann::json& j) {
  FrameRecord r;
  r.sample_id = j.at("sample_id").get<std::string>();
  r.source = ParseSource(j.at("source").get<std::string>());
  for (const auto& fj : j.at("frames")) {
    r.frames.push_back(FrameFromJson(fj, r.source));
  }
  return r;
}

std::vector<FrameRecord> ExtractCorpusFrames(
    const std::vector<Sample>& samples, SrlBackend& backend,
    std::vector<std::string>* warnings) {
  std::vector<FrameRecord> records;
  records.reserve(2 * samples.size());
  for (const auto& s : samples) {
    for (FrameSource source : {FrameSource::kDocument, FrameSource::kSummary}) {
      ExtractionResult r = ExtractFrames(
          source == FrameSource::kDocument ? s.document : s.summary, source, backend);
      if (warnings) {
        for (auto& w : r.warnings) warnings->push_back(s.id + ": " + w);
      }
      records.push_back({s.id, source, std::move(r.frames)});
    }
  }
  return records;
}

void WriteFrameSidecar(const std::string& path,
                       const std::vector<FrameRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& r : records) out << FrameRecordToJson(r).dump() << '\n';
}

std::vector<FrameRecord> ReadFrameSidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError(path);
  std::vector<FrameRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    records.push_back(FrameRecordFromJson(nlohmann::json::parse(line)));
  }
  return records;
}

FrameStore::FrameStore(const std::vector<FrameRecord>& records) {
  for (const auto& r : records) Put(r.sample_id, r.source, r.frames);
}

FrameStore FrameStore::Load(const std::string& path) {
  return FrameStore(ReadFrameSidecar(path));
}

void FrameStore::Put(const std::string& sample_id, FrameSource source,
                     std::vector<SemanticFrame> frames) {
  Entry& e = entries_[sample_id];
  (source == FrameSource::kDocument ? e.document : e.summary) =
      std::move(frames);
}

bool FrameStore::Contains(const std::string& sample_id) const {
  return entries_.count(sample_id) > 0;
}

const std::vector<SemanticFrame>& FrameStore::Document(
    const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    throw std::out_of_range("no frames for sample '" + id + "'");
  }
  return it->second.document;
}

const std::vector<SemanticFrame>& FrameStore::Summary(
    const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    throw std::out_of_range("no frames for sample '" + id + "'");
  }
  return it->second.summary;
}

std::vector<FrameRecord> FrameStore::Records() const {
  std::vector<FrameRecord> out;
  for (const auto& [id, e] : entries_) {
    out.push_back({id, FrameSource::kDocument, e.document});
    out.push_back({id, FrameSource::kSummary, e.summary});
  }
  return out;
}

SpanAlignment::SpanAlignment(const std::vector<int>& subwords_per_word,
                             int offset, int limit)
    : limit_(limit) {
  ranges_.reserve(subwords_per_word.size());
  int pos = offset;
  end_ = offset;
  for (int count : subwords_per_word) {
    ranges_.emplace_back(pos, pos + count);
    if (pos < limit && count > 0) {
      ++surviving_;
      end_ = std::min(pos + count, limit);
    }
    pos += count;
  }
}

std::optional<std::pair<int, int>> SpanAlignment::WordRange(int word) const {
  if (word < 0 || word >= static_cast<int>(ranges_.size())) return std::nullopt;
  auto [b, e] = ranges_[word];
  e = std::min(e, limit_);
  if (b >= e) return std::nullopt;
  return std::make_pair(b, e);
}

AlignmentResult AlignFrames(const std::vector<SemanticFrame>& frames,
                            const TokenizedText& text,
                            const SpanAlignment& alignment) {
  AlignmentResult result;
  auto positions_of = [&](int sentence, const Span& span) {
    std::vector<int> out;
    for (int w = span.begin; w < span.end; ++w) {
      auto r = alignment.WordRange(text.GlobalWordIndex(sentence, w));
      if (!r) continue;
      for (int p = r->first; p < r->second; ++p) out.push_back(p);
    }
    return out;
  };
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const SemanticFrame& f = frames[i];
    AlignedFrame af;
    af.frame_index = static_cast<int>(i);
    af.predicate_positions = positions_of(f.sentence_index, f.predicate);
    if (af.predicate_positions.empty()) {
      ++result.dropped;
      continue;
    }
    af.positions = af.predicate_positions;
    for (const auto& arg : f.arguments) {
      auto pos = positions_of(f.sentence_index, arg.span);
      if (pos.empty()) continue;
      af.positions.insert(af.positions.end(), pos.begin(), pos.end());
      af.arguments.push_back({arg.role, std::move(pos)});
    }
    std::sort(af.positions.begin(), af.positions.end());
    af.positions.erase(std::unique(af.positions.begin(), af.positions.end()),
                       af.positions.end());
    result.frames.push_back(std::move(af));
  }
  return result;
}

}  // namespace factframe
