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

#include "xslu/vocab.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "xslu/bio.hpp"
#include "xslu/errors.hpp"

namespace xslu {

namespace {

const std::vector<std::string>& reserved_tokens() {
  static const std::vector<std::string> kTokens = {"<pad>", "<unk>", "<mask>", "<cls>"};
  return kTokens;
}

}  // namespace

Vocab::Vocab() : tokens_(reserved_tokens()), slot_tags_{"O"} { index(); }

Vocab::Vocab(std::vector<std::string> tokens, std::vector<std::string> slot_tags,
             std::vector<std::string> intents)
    : tokens_(std::move(tokens)), slot_tags_(std::move(slot_tags)), intents_(std::move(intents)) {
  const auto& reserved = reserved_tokens();
  if (tokens_.size() < reserved.size() ||
      !std::equal(reserved.begin(), reserved.end(), tokens_.begin())) {
    throw StructuralError("vocab: reserved tokens missing or out of place");
  }
  if (slot_tags_.empty() || slot_tags_.front() != "O") {
    throw StructuralError("vocab: slot tag 0 must be O");
  }
  index();
}

void Vocab::index() {
  token_index_.clear();
  tag_index_.clear();
  intent_index_.clear();
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!token_index_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw StructuralError("vocab: duplicate token '" + tokens_[i] + "'");
    }
  }
  for (std::size_t i = 0; i < slot_tags_.size(); ++i) {
    if (!is_well_formed_tag(slot_tags_[i]) ||
        !tag_index_.emplace(slot_tags_[i], static_cast<int>(i)).second) {
      throw StructuralError("vocab: bad or duplicate slot tag '" + slot_tags_[i] + "'");
    }
  }
  for (std::size_t i = 0; i < intents_.size(); ++i) {
    if (!intent_index_.emplace(intents_[i], static_cast<int>(i)).second) {
      throw StructuralError("vocab: duplicate intent '" + intents_[i] + "'");
    }
  }
}

int Vocab::token_id(const std::string& token) const {
  auto it = token_index_.find(token);
  return it == token_index_.end() ? kUnk : it->second;
}

int Vocab::slot_tag_id(const std::string& tag) const {
  auto it = tag_index_.find(tag);
  if (it == tag_index_.end()) throw StructuralError("vocab: unknown slot tag '" + tag + "'");
  return it->second;
}

int Vocab::intent_id(const std::string& intent) const {
  auto it = intent_index_.find(intent);
  if (it == intent_index_.end()) throw StructuralError("vocab: unknown intent '" + intent + "'");
  return it->second;
}

std::vector<int> Vocab::encode(std::span<const std::string> tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(token_id(t));
  return ids;
}

Vocab build_vocab(std::span<const Dataset> datasets, std::size_t min_count,
                  std::span<const std::vector<std::string>> extra_sentences) {
  std::map<std::string, std::size_t> counts;
  std::set<std::string> labels;
  std::set<std::string> intents;
  for (const auto& ds : datasets) {
    for (const auto& u : ds.utterances) {
      for (const auto& t : u.tokens) ++counts[t];
      intents.insert(u.intent);
    }
    labels.insert(ds.label_inventory.begin(), ds.label_inventory.end());
  }
  for (const auto& sentence : extra_sentences) {
    for (const auto& t : sentence) ++counts[t];
  }
  std::vector<std::string> tokens = reserved_tokens();
  for (const auto& [tok, n] : counts) {
    if (n < min_count) continue;
    if (std::find(reserved_tokens().begin(), reserved_tokens().end(), tok) !=
        reserved_tokens().end()) {
      continue;
    }
    tokens.push_back(tok);
  }
  std::vector<std::string> tags{"O"};
  for (const auto& label : labels) {
    tags.push_back("B-" + label);
    tags.push_back("I-" + label);
  }
  return Vocab(std::move(tokens), std::move(tags), {intents.begin(), intents.end()});
}

}  // namespace xslu
