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

#include "xslu/corpus.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "xslu/errors.hpp"

namespace xslu {

void Dataset::refresh_inventories() {
  label_inventory.clear();
  intent_inventory.clear();
  for (const auto& u : utterances) {
    intent_inventory.insert(u.intent);
    for (std::size_t i = 0; i < u.slot_tags.size(); ++i) {
      Tag tag = parse_tag(u.slot_tags[i], i);
      if (tag.prefix != Prefix::kOutside) label_inventory.insert(std::move(tag.label));
    }
  }
}

Dataset make_dataset(std::string name, std::vector<Utterance> utterances) {
  Dataset ds{std::move(name), std::move(utterances), {}, {}};
  ds.refresh_inventories();
  return ds;
}

namespace {

bool has_line_break_or_tab(std::string_view s) {
  return s.find_first_of("\t\n\r") != std::string_view::npos;
}

bool has_line_break(std::string_view s) {
  return s.find_first_of("\n\r") != std::string_view::npos;
}

constexpr std::string_view kIdKey = "# id: ";
constexpr std::string_view kTextKey = "# text: ";
constexpr std::string_view kIntentKey = "# intent: ";

struct Block {
  std::size_t first_line = 0;
  std::optional<std::string> id, text, intent;
  Utterance utt;
};

void finish_block(Block& b, std::vector<Utterance>& out) {
  if (!b.id) throw StructuralError(b.first_line, "block has no '# id:' line");
  if (!b.text) throw StructuralError(b.first_line, "block has no '# text:' line");
  if (!b.intent) throw StructuralError(b.first_line, "block has no '# intent:' line");
  if (b.utt.tokens.empty()) throw StructuralError(b.first_line, "block has no tokens");
  b.utt.id = std::move(*b.id);
  b.utt.text = std::move(*b.text);
  b.utt.intent = std::move(*b.intent);
  out.push_back(std::move(b.utt));
}

void set_meta(std::optional<std::string>& field, std::string_view value,
              std::string_view key, std::size_t line) {
  if (field) {
    throw StructuralError(line, "duplicate '" + std::string(key.substr(0, key.size() - 1)) + "' line");
  }
  field = std::string(value);
}

}  // namespace

void check_utterance(const Utterance& u) {
  const std::string where = "utterance '" + u.id + "': ";
  if (u.tokens.empty()) throw StructuralError(where + "no tokens");
  if (u.tokens.size() != u.slot_tags.size()) {
    throw StructuralError(where + std::to_string(u.tokens.size()) + " tokens but " +
                          std::to_string(u.slot_tags.size()) + " tags");
  }
  if (has_line_break(u.id) || has_line_break(u.text) || has_line_break(u.intent)) {
    throw StructuralError(where + "metadata contains a line break");
  }
  if (u.intent.empty()) throw StructuralError(where + "empty intent");
  for (std::size_t i = 0; i < u.tokens.size(); ++i) {
    if (u.tokens[i].empty() || has_line_break_or_tab(u.tokens[i])) {
      throw StructuralError(where + "token " + std::to_string(i) + " is empty or has a tab");
    }
    if (!is_well_formed_tag(u.slot_tags[i])) {
      throw StructuralError(where + "malformed tag '" + u.slot_tags[i] + "' at token " +
                            std::to_string(i));
    }
  }
}

Dataset parse_dataset(std::istream& in, std::string name) {
  std::vector<Utterance> utterances;
  std::optional<Block> block;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      if (block) {
        finish_block(*block, utterances);
        block.reset();
      }
      continue;
    }
    if (!block) {
      block.emplace();
      block->first_line = lineno;
    }
    if (line.front() == '#') {
      if (!block->utt.tokens.empty()) {
        throw ParseError(lineno, "metadata line after token lines");
      }
      std::string_view view(line);
      if (view.starts_with(kIdKey)) {
        set_meta(block->id, view.substr(kIdKey.size()), kIdKey, lineno);
      } else if (view.starts_with(kTextKey)) {
        set_meta(block->text, view.substr(kTextKey.size()), kTextKey, lineno);
      } else if (view.starts_with(kIntentKey)) {
        set_meta(block->intent, view.substr(kIntentKey.size()), kIntentKey, lineno);
      } else {
        throw ParseError(lineno, "unknown metadata line '" + line + "'");
      }
      continue;
    }

    std::vector<std::string_view> cols;
    std::string_view rest(line);
    for (;;) {
      auto tab = rest.find('\t');
      cols.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (cols.size() == 2) {
      throw StructuralError(lineno, "token '" + std::string(cols[1]) + "' has no tag");
    }
    if (cols.size() != 3) {
      throw ParseError(lineno, "expected 3 tab-separated columns, found " +
                                   std::to_string(cols.size()));
    }
    std::size_t index = 0;
    auto [ptr, ec] = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), index);
    if (ec != std::errc() || ptr != cols[0].data() + cols[0].size()) {
      throw ParseError(lineno, "token index '" + std::string(cols[0]) + "' is not a number");
    }
    auto& utt = block->utt;
    if (index != utt.tokens.size() + 1) {
      throw StructuralError(lineno, "token index " + std::to_string(index) + ", expected " +
                                        std::to_string(utt.tokens.size() + 1));
    }
    if (cols[1].empty()) throw ParseError(lineno, "empty token");
    if (!is_well_formed_tag(cols[2])) {
      throw ParseError(lineno, "malformed tag '" + std::string(cols[2]) + "'");
    }
    utt.tokens.emplace_back(cols[1]);
    utt.slot_tags.emplace_back(cols[2]);
  }
  if (block) finish_block(*block, utterances);
  return make_dataset(std::move(name), std::move(utterances));
}

Dataset parse_dataset_string(std::string_view text, std::string name) {
  std::istringstream in{std::string(text)};
  return parse_dataset(in, std::move(name));
}

Dataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return parse_dataset(in, path);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

std::string write_dataset(const Dataset& ds) {
  std::string out;
  for (std::size_t k = 0; k < ds.utterances.size(); ++k) {
    const Utterance& u = ds.utterances[k];
    check_utterance(u);
    if (k > 0) out += '\n';
    out.append(kIdKey).append(u.id).append("\n");
    out.append(kTextKey).append(u.text).append("\n");
    out.append(kIntentKey).append(u.intent).append("\n");
    for (std::size_t i = 0; i < u.tokens.size(); ++i) {
      out.append(std::to_string(i + 1)).append("\t").append(u.tokens[i]).append("\t");
      out.append(u.slot_tags[i]).append("\n");
    }
  }
  return out;
}

void write_dataset_file(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << write_dataset(ds);
  if (!out) throw Error("write failed for '" + path + "'");
}

std::vector<Issue> validate(const Dataset& ds) {
  std::vector<Issue> issues;
  for (const auto& u : ds.utterances) {
    for (const auto& t : bio_issues(u.slot_tags)) {
      issues.push_back({u.id, t.position, t.kind});
    }
  }
  return issues;
}

}  // namespace xslu
