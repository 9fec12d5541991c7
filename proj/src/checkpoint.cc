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

#include "factframe/checkpoint.h"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "factframe/errors.h"

namespace factframe {
namespace {

constexpr char kMagic[8] = {'F', 'F', 'C', 'K', 'P', 'T', '\r', '\n'};

template <typename T>
void WriteLE(std::ostream& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));  // host is little-endian (x86/arm)
  out.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <typename T>
T ReadLE(std::istream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("truncated checkpoint");
  return v;
}

}  // namespace

std::string ModelCheckpoint::Id() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& t : parameters) {
    mix(t.name.data(), t.name.size());
    mix(t.value.data(), static_cast<std::size_t>(t.value.size()) * sizeof(double));
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ModelCheckpoint CaptureCheckpoint(FactModel& model) {
  ModelCheckpoint c;
  c.model_config = model.config();
  c.seed = model.config().seed;
  for (auto* p : model.TrainableParameters()) {
    c.parameters.push_back({p->name, p->var.value()});
  }
  return c;
}

void ApplyCheckpoint(const ModelCheckpoint& checkpoint, FactModel& model) {
  LoadWeights(checkpoint.parameters, model.TrainableParameters(), "");
}

std::unique_ptr<FactModel> RestoreModel(const ModelCheckpoint& checkpoint) {
  auto model = std::make_unique<FactModel>(checkpoint.model_config);
  ApplyCheckpoint(checkpoint, *model);
  return model;
}

void SaveCheckpoint(const std::string& path, const ModelCheckpoint& checkpoint) {
  nlohmann::json meta;
  meta["model"] = checkpoint.model_config.ToJson();
  meta["train"] = checkpoint.train_config;
  meta["seed"] = checkpoint.seed;
  meta["epoch"] = checkpoint.epoch;
  meta["validation_bacc"] = checkpoint.validation_bacc;
  meta["id"] = checkpoint.Id();
  const std::string text = meta.dump(2);

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out.write(kMagic, sizeof(kMagic));
    WriteLE<std::uint32_t>(out, kCheckpointVersion);
    WriteLE<std::uint64_t>(out, text.size());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    WriteLE<std::uint32_t>(out, static_cast<std::uint32_t>(checkpoint.parameters.size()));
    for (const auto& t : checkpoint.parameters) {
      WriteLE<std::uint32_t>(out, static_cast<std::uint32_t>(t.name.size()));
      out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
      WriteLE<std::uint32_t>(out, static_cast<std::uint32_t>(t.value.rows()));
      WriteLE<std::uint32_t>(out, static_cast<std::uint32_t>(t.value.cols()));
      for (Eigen::Index r = 0; r < t.value.rows(); ++r) {
        for (Eigen::Index c = 0; c < t.value.cols(); ++c) {
          WriteLE<double>(out, t.value(r, c));
        }
      }
    }
    if (!out) throw std::runtime_error("failed writing " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

ModelCheckpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInputError(path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error(path + " is not a checkpoint (bad magic)");
  }
  const auto version = ReadLE<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " +
                             std::to_string(version));
  }
  std::string text(ReadLE<std::uint64_t>(in), '\0');
  in.read(text.data(), static_cast<std::streamsize>(text.size()));
  if (!in) throw std::runtime_error("truncated checkpoint " + path);
  const auto meta = nlohmann::json::parse(text);

  ModelCheckpoint c;
  c.model_config = ModelConfig::FromJson(meta.at("model"));
  c.train_config = meta.value("train", nlohmann::json::object());
  c.seed = meta.value("seed", std::uint64_t{0});
  c.epoch = meta.value("epoch", 0);
  c.validation_bacc = meta.value("validation_bacc", 0.0);
  const auto count = ReadLE<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor t;
    t.name.resize(ReadLE<std::uint32_t>(in));
    in.read(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    const auto rows = ReadLE<std::uint32_t>(in);
    const auto cols = ReadLE<std::uint32_t>(in);
    t.value.resize(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t col = 0; col < cols; ++col) {
        t.value(r, col) = ReadLE<double>(in);
      }
    }
    c.parameters.push_back(std::move(t));
  }
  return c;
}

}  // namespace factframe
