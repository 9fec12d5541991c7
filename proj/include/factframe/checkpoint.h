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

// Checkpoint file layout:
//
//   "FFCKPT\r\n"            8-byte magic
//   u32 format version       (currently 1)
//   u64 length, bytes        plain-text JSON: model config, metadata
//   u32 tensor count
//   per tensor: u32 name length, name, u32 rows, u32 cols,
//               rows*cols little-endian float64, row-major
//
// Only trainable parameters are stored; frozen encoder weights are reloaded
// from the path recorded in the model config. Writes go to a temporary file
// that is renamed into place.

#ifndef FACTFRAME_CHECKPOINT_H_
#define FACTFRAME_CHECKPOINT_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "factframe/encoder.h"
#include "factframe/model.h"
#include "json.hpp"

namespace factframe {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct ModelCheckpoint {
  ModelConfig model_config;
  nlohmann::json train_config = nlohmann::json::object();
  std::uint64_t seed = 0;
  int epoch = 0;
  double validation_bacc = 0.0;
  std::vector<NamedTensor> parameters;

  // Identifier derived from the parameter bytes.
  std::string Id() const;
};

ModelCheckpoint CaptureCheckpoint(FactModel& model);
// Copies checkpoint tensors into the model's trainable parameters; throws
// ConfigError on a missing or mis-shaped tensor.
void ApplyCheckpoint(const ModelCheckpoint& checkpoint, FactModel& model);
std::unique_ptr<FactModel> RestoreModel(const ModelCheckpoint& checkpoint);

void SaveCheckpoint(const std::string& path, const ModelCheckpoint& checkpoint);
ModelCheckpoint LoadCheckpoint(const std::string& path);

}  // namespace factframe

#endif  // FACTFRAME_CHECKPOINT_H_
