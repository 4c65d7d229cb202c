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
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "xslu/corpus.hpp"

namespace xslu {

/// Token, slot-tag and intent inventories of a tagger.
///
/// Token ids are dense from 0 and the first four are reserved:
/// 0 <pad>, 1 <unk>, 2 <mask>, 3 <cls>. Remaining tokens follow in byte
/// order. Slot tag 0 is "O", followed by B-x and I-x for every label x in
/// label order. Intents are sorted.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kMask = 2;
  static constexpr int kCls = 3;
  static constexpr int kReserved = 4;

  Vocab();
  Vocab(std::vector<std::string> tokens, std::vector<std::string> slot_tags,
        std::vector<std::string> intents);

  int size() const { return static_cast<int>(tokens_.size()); }
  int n_slot_tags() const { return static_cast<int>(slot_tags_.size()); }
  int n_intents() const { return static_cast<int>(intents_.size()); }

  /// Token id, <unk> for unknown tokens.
  int token_id(const std::string& token) const;
  /// Throws StructuralError for tags or intents outside the inventory.
  int slot_tag_id(const std::string& tag) const;
  int intent_id(const std::string& intent) const;

  const std::string& token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  const std::string& slot_tag(int id) const { return slot_tags_.at(static_cast<std::size_t>(id)); }
  const std::string& intent(int id) const { return intents_.at(static_cast<std::size_t>(id)); }

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::string>& slot_tags() const { return slot_tags_; }
  const std::vector<std::string>& intents() const { return intents_; }

  std::vector<int> encode(std::span<const std::string> tokens) const;

  friend bool operator==(const Vocab& a, const Vocab& b) {
    return a.tokens_ == b.tokens_ && a.slot_tags_ == b.slot_tags_ && a.intents_ == b.intents_;
  }

 private:
  void index();

  std::vector<std::string> tokens_;
  std::vector<std::string> slot_tags_;
  std::vector<std::string> intents_;
  std::unordered_map<std::string, int> token_index_;
  std::unordered_map<std::string, int> tag_index_;
  std::unordered_map<std::string, int> intent_index_;
};

/// Collects tokens from the labelled datasets and any extra raw sentences;
/// tokens seen fewer than `min_count` times map to <unk>.
Vocab build_vocab(std::span<const Dataset> datasets, std::size_t min_count,
                  std::span<const std::vector<std::string>> extra_sentences = {});

}  // namespace xslu
