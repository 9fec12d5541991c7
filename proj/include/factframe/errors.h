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

#ifndef FACTFRAME_ERRORS_H_
#define FACTFRAME_ERRORS_H_

#include <stdexcept>
#include <string>

namespace factframe {

// A required input file does not exist or cannot be opened.
class MissingInputError : public std::runtime_error {
 public:
  explicit MissingInputError(const std::string& path)
      : std::runtime_error("cannot open input: " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// The semantic role labelling backend failed on every sentence of a text,
// or could not be started at all.
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training produced a NaN or infinite loss.
class NonFiniteLossError : public std::runtime_error {
 public:
  NonFiniteLossError(int epoch, int batch)
      : std::runtime_error("non-finite loss at epoch " +
                           std::to_string(epoch) + ", batch " +
                           std::to_string(batch)),
        epoch_(epoch),
        batch_(batch) {}
  int epoch() const { return epoch_; }
  int batch() const { return batch_; }

 private:
  int epoch_;
  int batch_;
};

// Malformed configuration, detected at construction time.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace factframe

#endif  // FACTFRAME_ERRORS_H_
