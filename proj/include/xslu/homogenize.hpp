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
#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "xslu/corpus.hpp"

namespace xslu {

/// Label renaming tables for building a unified training set from corpora
/// with different schemas. Unmapped labels map to themselves.
struct LabelMap {
  std::map<std::string, std::string> slot_map;
  std::map<std::string, std::string> intent_map;
  /// Tokens stripped from the front of every span by trim_span_prefixes
  /// (leading function words such as "at" or "for").
  std::set<std::string> trim_tokens;

  const std::string& slot(const std::string& label) const;
  const std::string& intent(const std::string& label) const;
};

/// Reads the mapping file: sections `[slots]`, `[intents]` and `[trim]`;
/// mapping lines are `old<TAB>new`, trim lines hold one token; `#` starts a
/// comment line. Throws ParseError with the line number.
LabelMap parse_label_map(std::istream& in);
LabelMap read_label_map_file(const std::string& path);

/// Renames slot labels and intents. B/I prefixes and span boundaries are
/// kept, so adjacent spans that end up with the same label stay distinct.
Dataset apply_label_map(const Dataset& ds, const LabelMap& map);

/// Drops leading tokens found in `trim_tokens` from each span (compared
/// case-insensitively); a span made only of such tokens disappears. Tags of
/// the input must be valid BIO.
Dataset trim_span_prefixes(const Dataset& ds, const std::set<std::string>& trim_tokens);

/// Identifier of the shuffle procedure, recorded in run manifests.
inline constexpr std::string_view kShuffleAlgorithm =
    "fisher-yates-descending/mt19937_64/splitmix64-seeding/rejection-bounded";

/// Concatenates the datasets in order and applies a seeded shuffle.
Dataset merge_shuffle(const std::vector<Dataset>& datasets, std::uint64_t seed);

}  // namespace xslu
