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

#include "factframe/tokenizer.h"

#include <fstream>
#include <stdexcept>

#include "factframe/errors.h"
#include "factframe/text.h"

namespace factframe {
namespace {

constexpr int kReserved = 4;
constexpr std::size_t kMaxWordChars = 100;

}  // namespace

HashingTokenizer::HashingTokenizer(int vocab_size) : vocab_size_(vocab_size) {
  if (vocab_size <= kReserved) {
    throw ConfigError("hashing vocabulary must exceed " +
                      std::to_string(kReserved));
  }
}

std::vector<int> HashingTokenizer::TokenizeWord(const std::string& word) const {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : ToLower(word)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return {kReserved + static_cast<int>(h % static_cast<std::uint64_t>(
                                                 vocab_size_ - kReserved))};
}

WordPieceTokenizer::WordPieceTokenizer(std::vector<std::string> vocab,
                                       bool lower_case)
    : vocab_(std::move(vocab)), lower_case_(lower_case) {
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    ids_.emplace(vocab_[i], static_cast<int>(i));
  }
  cls_ = Lookup("[CLS]");
  sep_ = Lookup("[SEP]");
  unk_ = Lookup("[UNK]");
  if (cls_ < 0 || sep_ < 0 || unk_ < 0) {
    throw ConfigError("vocabulary lacks [CLS], [SEP] or [UNK]");
  }
}

WordPieceTokenizer WordPieceTokenizer::Load(const std::string& vocab_path,
                                            bool lower_case) {
  std::ifstream in(vocab_path);
  if (!in) throw MissingInputError(vocab_path);
  std::vector<std::string> vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    vocab.push_back(line);
  }
  return WordPieceTokenizer(std::move(vocab), lower_case);
}

int WordPieceTokenizer::Lookup(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? -1 : it->second;
}

std::vector<int> WordPieceTokenizer::TokenizeWord(const std::string& raw) const {
  const std::string word = lower_case_ ? ToLower(raw) : raw;
  if (word.empty() || word.size() > kMaxWordChars) return {unk_};
  std::vector<int> out;
  std::size_t start = 0;
  while (start < word.size()) {
    std::size_t end = word.size();
    int found = -1;
    while (start < end) {
      std::string piece = word.substr(start, end - start);
      if (start > 0) piece = "##" + piece;
      found = Lookup(piece);
      if (found >= 0) break;
      --end;
    }
    if (found < 0) return {unk_};
    out.push_back(found);
    start = end;
  }
  return out;
}

}  // namespace factframe
