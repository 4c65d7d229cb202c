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

#include <istream>
#include <ostream>
#include <string>

#include "xslu/tagger.hpp"

namespace xslu {

// Text checkpoint container, version 1:
//
//   xslu-checkpoint 1
//   [config]            key value lines of TrainConfig
//   [tokens] N          N lines, one token each, id order
//   [slot_tags] N
//   [intents] N
//   [tensor NAME R C]   R lines of C values, row-major, %.17g
//   ...                 one block per tensor, in ModelParams order
//   [end]
//
// Values are printed with 17 significant digits, so a save/load round trip
// reproduces every parameter bit for bit.

inline constexpr int kCheckpointVersion = 1;

void save_model(std::ostream& out, const Model& model);
void save_model_file(const std::string& path, const Model& model);

/// Loads and validates a checkpoint: tensor names, order and shapes must
/// match the dimensions implied by the config and vocabulary.
Model load_model(std::istream& in);
Model load_model_file(const std::string& path);

}  // namespace xslu
