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

#include "factframe/log.h"

#include <iostream>
#include <mutex>

namespace factframe {
namespace {

std::mutex mu;
std::vector<std::string> recent;
bool silenced = false;
constexpr std::size_t kMaxRecent = 1000;

}  // namespace

void LogWarning(const std::string& message) {
  std::lock_guard<std::mutex> lock(mu);
  if (!silenced) std::cerr << "warning: " << message << '\n';
  if (recent.size() < kMaxRecent) recent.push_back(message);
}

std::vector<std::string> RecentWarnings() {
  std::lock_guard<std::mutex> lock(mu);
  return recent;
}

void ClearWarnings() {
  std::lock_guard<std::mutex> lock(mu);
  recent.clear();
}

void SetWarningsSilenced(bool value) {
  std::lock_guard<std::mutex> lock(mu);
  silenced = value;
}

}  // namespace factframe
