// Copyright 2026 The xslu Authors.
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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace xslu {

inline constexpr const char* kToolVersion = "0.1.0";

struct InputDigest {
  std::string path;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// Everything needed to rerun a CLI invocation: the command, every option
/// value, digests of all inputs, the seed and the tool version.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<InputDigest> inputs;
  std::vector<std::string> outputs;
  std::optional<std::uint64_t> seed;
  std::string tool_version = kToolVersion;
  nlohmann::ordered_json algorithms = nlohmann::ordered_json::object();
};

/// Hex SHA-256 of a file's bytes; throws Error naming the path.
std::string sha256_file(const std::string& path);

InputDigest digest_input(const std::string& path);

std::string manifest_json(const RunManifest& m);

}  // namespace xslu
