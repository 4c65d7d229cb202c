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

#include <cstddef>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "xslu/bio.hpp"

namespace xslu {

/// One annotated utterance: pre-tokenized text, per-token BIO slot tags and
/// a sentence-level intent.
struct Utterance {
  std::string id;
  std::string text;
  std::vector<std::string> tokens;
  std::vector<std::string> slot_tags;
  std::string intent;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct Dataset {
  std::string name;
  std::vector<Utterance> utterances;
  std::set<std::string> label_inventory;
  std::set<std::string> intent_inventory;

  std::size_t size() const { return utterances.size(); }
  bool empty() const { return utterances.empty(); }

  /// Recomputes both inventories from the utterances.
  void refresh_inventories();

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Builds a dataset and fills its inventories.
Dataset make_dataset(std::string name, std::vector<Utterance> utterances);

/// Checks the Utterance invariants (lengths, lexical tag form, no tabs or
/// newlines in fields). Throws StructuralError.
void check_utterance(const Utterance& u);

/// Reads the CoNLL-style corpus format. Throws ParseError for unreadable
/// lines and StructuralError for blocks that break the Utterance invariants;
/// both carry the 1-based line number.
Dataset parse_dataset(std::istream& in, std::string name = {});
Dataset parse_dataset_string(std::string_view text, std::string name = {});
Dataset read_dataset_file(const std::string& path);

/// Canonical serialization; parse_dataset(write_dataset(ds)) == ds.
std::string write_dataset(const Dataset& ds);
void write_dataset_file(const Dataset& ds, const std::string& path);

struct Issue {
  std::string utterance_id;
  std::size_t position = 0;
  IssueKind kind = IssueKind::kOrphanInside;
  friend bool operator==(const Issue&, const Issue&) = default;
};

/// Every BIO violation in the dataset, in utterance then token order.
std::vector<Issue> validate(const Dataset& ds);

}  // namespace xslu
