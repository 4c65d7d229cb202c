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

#include "xslu/bio.hpp"

#include <algorithm>
#include <cctype>

#include "xslu/errors.hpp"

namespace xslu {

std::string Tag::str() const {
  switch (prefix) {
    case Prefix::kOutside:
      return "O";
    case Prefix::kBegin:
      return "B-" + label;
    case Prefix::kInside:
      return "I-" + label;
  }
  return "O";
}

namespace {

bool valid_label(std::string_view label) {
  if (label.empty()) return false;
  return std::none_of(label.begin(), label.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

}  // namespace

bool is_well_formed_tag(std::string_view tag) {
  if (tag == "O") return true;
  if (tag.size() < 3 || tag[1] != '-') return false;
  if (tag[0] != 'B' && tag[0] != 'I') return false;
  return valid_label(tag.substr(2));
}

Tag parse_tag(std::string_view tag, std::size_t position) {
  if (!is_well_formed_tag(tag)) {
    throw TagError(position, "malformed tag '" + std::string(tag) + "'");
  }
  if (tag == "O") return {};
  return Tag{tag[0] == 'B' ? Prefix::kBegin : Prefix::kInside,
             std::string(tag.substr(2))};
}

std::string_view to_string(IssueKind kind) {
  switch (kind) {
    case IssueKind::kOrphanInside:
      return "OrphanI";
    case IssueKind::kLabelSwitch:
      return "LabelSwitch";
  }
  return "?";
}

std::vector<TagIssue> bio_issues(std::span<const std::string> tags) {
  std::vector<TagIssue> issues;
  std::string chunk_label;
  bool in_chunk = false;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    Tag tag = parse_tag(tags[i], i);
    switch (tag.prefix) {
      case Prefix::kOutside:
        in_chunk = false;
        break;
      case Prefix::kBegin:
        in_chunk = true;
        chunk_label = std::move(tag.label);
        break;
      case Prefix::kInside:
        if (!in_chunk) {
          issues.push_back({i, IssueKind::kOrphanInside});
          in_chunk = true;
          chunk_label = std::move(tag.label);
        } else if (tag.label != chunk_label) {
          issues.push_back({i, IssueKind::kLabelSwitch});
        }
        break;
    }
  }
  return issues;
}

bool is_valid_bio(std::span<const std::string> tags) { return bio_issues(tags).empty(); }

std::vector<std::string> repair(std::span<const std::string> tags) {
  std::vector<std::string> out;
  out.reserve(tags.size());
  std::string chunk_label;
  bool in_chunk = false;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    Tag tag = parse_tag(tags[i], i);
    switch (tag.prefix) {
      case Prefix::kOutside:
        in_chunk = false;
        out.emplace_back("O");
        break;
      case Prefix::kBegin:
        in_chunk = true;
        chunk_label = tag.label;
        out.push_back(tags[i]);
        break;
      case Prefix::kInside:
        if (!in_chunk) {
          in_chunk = true;
          chunk_label = tag.label;
          out.push_back("B-" + chunk_label);
        } else {
          out.push_back("I-" + chunk_label);
        }
        break;
    }
  }
  return out;
}

std::vector<SlotSpan> spans_from_tags(std::span<const std::string> tags) {
  auto issues = bio_issues(tags);
  if (!issues.empty()) {
    throw TagError(issues.front().position,
                   "invalid BIO (" + std::string(to_string(issues.front().kind)) +
                       "); repair the sequence first");
  }
  std::vector<SlotSpan> spans;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    Tag tag = parse_tag(tags[i], i);
    if (tag.prefix == Prefix::kBegin) {
      spans.push_back({i, i + 1, std::move(tag.label)});
    } else if (tag.prefix == Prefix::kInside) {
      spans.back().end = i + 1;
    }
  }
  return spans;
}

std::vector<std::string> tags_from_spans(std::span<const SlotSpan> spans,
                                         std::size_t length) {
  std::vector<const SlotSpan*> order;
  order.reserve(spans.size());
  for (const auto& s : spans) {
    if (s.start >= s.end || s.end > length) {
      throw StructuralError("span [" + std::to_string(s.start) + ", " +
                            std::to_string(s.end) + ") out of range for length " +
                            std::to_string(length));
    }
    if (s.label.empty() || !is_well_formed_tag("B-" + s.label)) {
      throw StructuralError("span label '" + s.label + "' is not a valid slot label");
    }
    order.push_back(&s);
  }
  std::sort(order.begin(), order.end(),
            [](const SlotSpan* a, const SlotSpan* b) { return a->start < b->start; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (order[k]->start < order[k - 1]->end) {
      throw StructuralError("overlapping spans at token " + std::to_string(order[k]->start));
    }
  }
  std::vector<std::string> tags(length, "O");
  for (const SlotSpan* s : order) {
    tags[s->start] = "B-" + s->label;
    for (std::size_t i = s->start + 1; i < s->end; ++i) tags[i] = "I-" + s->label;
  }
  return tags;
}

}  // namespace xslu
