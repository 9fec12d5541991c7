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

#ifndef FACTFRAME_TOKENIZER_H_
#define FACTFRAME_TOKENIZER_H_

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace factframe {

// Word to subword-id mapping for an encoder.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  // Always returns at least one id.
  virtual std::vector<int> TokenizeWord(const std::string& word) const = 0;
  virtual int vocab_size() const = 0;
  virtual int cls_id() const = 0;
  virtual int sep_id() const = 0;
  virtual int unk_id() const = 0;
};

// One subword per word: lower-cased FNV-1a hash into a fixed bucket range.
// Ids 0..3 are reserved for [PAD], [UNK], [CLS], [SEP].
class HashingTokenizer : public Tokenizer {
 public:
  explicit HashingTokenizer(int vocab_size);
  std::vector<int> TokenizeWord(const std::string& word) const override;
  int vocab_size() const override { return vocab_size_; }
  int cls_id() const override { return 2; }
  int sep_id() const override { return 3; }
  int unk_id() const override { return 1; }

 private:
  int vocab_size_;
};

// Greedy longest-match-first WordPiece over a BERT-style vocab file (one
// token per line, line number = id, "##" marks continuations).
class WordPieceTokenizer : public Tokenizer {
 public:
  WordPieceTokenizer(std::vector<std::string> vocab, bool lower_case = true);
  static WordPieceTokenizer Load(const std::string& vocab_path,
                                 bool lower_case = true);

  std::vector<int> TokenizeWord(const std::string& word) const override;
  int vocab_size() const override { return static_cast<int>(vocab_.size()); }
  int cls_id() const override { return cls_; }
  int sep_id() const override { return sep_; }
  int unk_id() const override { return unk_; }

 private:
  int Lookup(const std::string& token) const;

  std::vector<std::string> vocab_;
  std::unordered_map<std::string, int> ids_;
  bool lower_case_;
  int cls_ = -1;
  int sep_ = -1;
  int unk_ = -1;
};

}  // namespace factframe

#endif  // FACTFRAME_TOKENIZER_H_
