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

#ifndef FACTFRAME_TEXT_H_
#define FACTFRAME_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace factframe {

using Sentence = std::vector<std::string>;

// Text split into sentences of words. Word indices used by frames are
// sentence-local; GlobalWordIndex() maps them onto the flat word sequence.
class TokenizedText {
 public:
  TokenizedText() = default;
  explicit TokenizedText(std::vector<Sentence> sentences);

  // Rule-based segmentation: whitespace splits words, leading and trailing
  // punctuation is split off, and ".", "!" or "?" tokens end a sentence.
  static TokenizedText Split(std::string_view text);

  const std::vector<Sentence>& sentences() const { return sentences_; }
  int num_sentences() const { return static_cast<int>(sentences_.size()); }
  int num_words() const { return total_words_; }
  int SentenceLength(int sentence) const;
  int SentenceOffset(int sentence) const { return offsets_.at(sentence); }
  int GlobalWordIndex(int sentence, int word) const {
    return offsets_.at(sentence) + word;
  }
  const std::string& Word(int sentence, int word) const {
    return sentences_.at(sentence).at(word);
  }
  // Flat list of all words in order.
  std::vector<std::string> Words() const;
  // Space-joined words of [begin, end) in `sentence`.
  std::string SpanText(int sentence, int begin, int end) const;

 private:
  std::vector<Sentence> sentences_;
  std::vector<int> offsets_;
  int total_words_ = 0;
};

std::string ToLower(std::string_view s);
// Collapses runs of whitespace to one space and trims the ends.
std::string NormalizeWhitespace(std::string_view s);

}  // namespace factframe

#endif  // FACTFRAME_TEXT_H_
