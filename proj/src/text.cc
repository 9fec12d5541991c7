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

#include "factframe/text.h"

#include <cctype>

namespace factframe {
namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

bool IsSplitPunct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?': case '"':
    case '\'': case '(': case ')': case '[': case ']': case '{': case '}':
      return true;
    default:
      return false;
  }
}

bool IsSentenceEnd(const std::string& w) {
  return w == "." || w == "!" || w == "?";
}

// Splits a whitespace-free chunk into leading punctuation, core, trailing
// punctuation.
void SplitChunk(std::string_view chunk, std::vector<std::string>& out) {
  std::size_t b = 0;
  std::size_t e = chunk.size();
  std::vector<std::string> trailing;
  while (b < e && IsSplitPunct(chunk[b])) out.emplace_back(1, chunk[b++]);
  while (e > b && IsSplitPunct(chunk[e - 1])) trailing.emplace_back(1, chunk[--e]);
  if (e > b) out.emplace_back(chunk.substr(b, e - b));
  out.insert(out.end(), trailing.rbegin(), trailing.rend());
}

}  // namespace

TokenizedText::TokenizedText(std::vector<Sentence> sentences)
    : sentences_(std::move(sentences)) {
  offsets_.reserve(sentences_.size());
  for (const auto& s : sentences_) {
    offsets_.push_back(total_words_);
    total_words_ += static_cast<int>(s.size());
  }
}

TokenizedText TokenizedText::Split(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !IsSpace(text[j])) ++j;
    if (j > i) SplitChunk(text.substr(i, j - i), words);
    i = j;
  }
  std::vector<Sentence> sentences;
  Sentence current;
  for (auto& w : words) {
    const bool end = IsSentenceEnd(w);
    current.push_back(std::move(w));
    if (end) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return TokenizedText(std::move(sentences));
}

int TokenizedText::SentenceLength(int sentence) const {
  return static_cast<int>(sentences_.at(sentence).size());
}

std::vector<std::string> TokenizedText::Words() const {
  std::vector<std::string> out;
  out.reserve(total_words_);
  for (const auto& s : sentences_) out.insert(out.end(), s.begin(), s.end());
  return out;
}

std::string TokenizedText::SpanText(int sentence, int begin, int end) const {
  std::string out;
  const auto& s = sentences_.at(sentence);
  for (int i = begin; i < end && i < static_cast<int>(s.size()); ++i) {
    if (!out.empty()) out += ' ';
    out += s[i];
  }
  return out;
}

std::string ToLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string NormalizeWhitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

}  // namespace factframe
