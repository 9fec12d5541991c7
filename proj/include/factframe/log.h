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

#ifndef FACTFRAME_LOG_H_
#define FACTFRAME_LOG_H_

#include <string>
#include <vector>

namespace factframe {

// Writes "warning: <message>" to stderr (unless silenced) and remembers it.
void LogWarning(const std::string& message);
// Warnings logged since the last ClearWarnings().
std::vector<std::string> RecentWarnings();
void ClearWarnings();
void SetWarningsSilenced(bool silenced);

}  // namespace factframe

#endif  // FACTFRAME_LOG_H_
