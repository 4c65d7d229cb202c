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

#include "xslu/homogenize.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "xslu/bio.hpp"
#include "xslu/errors.hpp"
#include "xslu/rng.hpp"

namespace xslu {

const std::string& LabelMap::slot(const std::string& label) const {
  auto it = slot_map.find(label);
  return it == slot_map.end() ? label : it->second;
}

const std::string& LabelMap::intent(const std::string& label) const {
  auto it = intent_map.find(label);
  return it == intent_map.end() ? label : it->second;
}

namespace {

std::string trimmed(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

LabelMap parse_label_map(std::istream& in) {
  enum class Section { kNone, kSlots, kIntents, kTrim } section = Section::kNone;
  LabelMap map;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trimmed(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line == "[slots]") {
      section = Section::kSlots;
      continue;
    }
    if (line == "[intents]") {
      section = Section::kIntents;
      continue;
    }
    if (line == "[trim]") {
      section = Section::kTrim;
      continue;
    }
    if (line.front() == '[') throw ParseError(lineno, "unknown section " + line);
    if (section == Section::kNone) throw ParseError(lineno, "entry outside of a section");
    if (section == Section::kTrim) {
      map.trim_tokens.insert(lowercase(line));
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(lineno, "expected 'old<TAB>new'");
    }
    std::string from = trimmed(line.substr(0, tab));
    std::string to = trimmed(line.substr(tab + 1));
    if (from.empty() || to.empty()) throw ParseError(lineno, "empty label");
    auto& table = section == Section::kSlots ? map.slot_map : map.intent_map;
    if (section == Section::kSlots && !is_well_formed_tag("B-" + to)) {
      throw ParseError(lineno, "'" + to + "' is not a valid slot label");
    }
    if (!table.emplace(from, to).second) throw ParseError(lineno, "duplicate mapping for " + from);
  }
  return map;
}

LabelMap read_label_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return parse_label_map(in);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

Dataset apply_label_map(const Dataset& ds, const LabelMap& map) {
  Dataset out = ds;
  for (auto& u : out.utterances) {
    u.intent = map.intent(u.intent);
    for (std::size_t i = 0; i < u.slot_tags.size(); ++i) {
      Tag tag = parse_tag(u.slot_tags[i], i);
      if (tag.prefix == Prefix::kOutside) continue;
      tag.label = map.slot(tag.label);
      u.slot_tags[i] = tag.str();
    }
  }
  out.refresh_inventories();
  return out;
}

Dataset trim_span_prefixes(const Dataset& ds, const std::set<std::string>& trim_tokens) {
  Dataset out = ds;
  if (trim_tokens.empty()) return out;
  for (auto& u : out.utterances) {
    std::vector<SlotSpan> spans = spans_from_tags(u.slot_tags);
    std::vector<SlotSpan> kept;
    for (auto s : spans) {
      while (s.start < s.end && trim_tokens.count(lowercase(u.tokens[s.start]))) ++s.start;
      if (s.start < s.end) kept.push_back(std::move(s));
    }
    u.slot_tags = tags_from_spans(kept, u.tokens.size());
  }
  out.refresh_inventories();
  return out;
}

Dataset merge_shuffle(const std::vector<Dataset>& datasets, std::uint64_t seed) {
  std::vector<Utterance> all;
  std::string name;
  for (const auto& ds : datasets) {
    if (!name.empty()) name += '+';
    name += ds.name;
    all.insert(all.end(), ds.utterances.begin(), ds.utterances.end());
  }
  Rng rng(seed);
  rng.shuffle(all);
  return make_dataset(std::move(name), std::move(all));
}

}  // namespace xslu
