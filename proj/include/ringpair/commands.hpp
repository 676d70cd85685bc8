// Copyright 2026 The ringpair Authors
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

#pragma once

#include <optional>
#include <string>

#include "ringpair/config.hpp"

namespace ringpair {

enum class Command { kSpectrum, kEnhance, kFields, kRates, kBiphoton };

const char* to_string(Command c);

struct CommandOptions {
  std::optional<std::string> out;     // overrides [output] path; "-" is stdout
  std::optional<std::string> format;  // overrides [output] format
  unsigned threads = 0;               // 0: all cores
};

// Runs one analysis and returns the artifact text.
std::string run_command(Command command, const RunConfig& config, const CommandOptions& options = {});

// Writes the artifact to the resolved destination (stdout when empty or "-").
void write_artifact(const std::string& text, const std::string& path);

std::string output_path(const RunConfig& config, const CommandOptions& options);

}  // namespace ringpair
