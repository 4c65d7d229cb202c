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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xslu {

// BIO tag algebra. Tags are plain strings ("O", "B-loc", "I-loc") so they
// move through files and datasets untouched; the helpers below parse them on
// demand.

enum class Prefix { kOutside, kBegin, kInside };

struct Tag {
  Prefix prefix = Prefix::kOutside;
  std::string label;  // empty iff prefix == kOutside

  std::string str() const;
  friend bool operator==(const Tag&, const Tag&) = default;
};

/// Parses one tag; throws TagError naming `position` when malformed.
Tag parse_tag(std::string_view tag, std::size_t position = 0);

/// True when `tag` is lexically O, B-<label> or I-<label> with a label
/// that is nonempty and free of whitespace.
bool is_well_formed_tag(std::string_view tag);

/// Half-open token interval [start, end) carrying a slot label.
struct SlotSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;

  std::size_t length() const { return end - start; }
  bool overlaps(const SlotSpan& other) const {
    return start < other.end && other.start < end;
  }
  friend bool operator==(const SlotSpan&, const SlotSpan&) = default;
  friend auto operator<=>(const SlotSpan&, const SlotSpan&) = default;
};

enum class IssueKind { kOrphanInside, kLabelSwitch };

std::string_view to_string(IssueKind kind);

struct TagIssue {
  std::size_t position = 0;
  IssueKind kind = IssueKind::kOrphanInside;
  friend bool operator==(const TagIssue&, const TagIssue&) = default;
};

/// Lists every position that makes a lexically well-formed sequence invalid
/// BIO. An I is an orphan when it opens the sequence or follows O; it is a
/// label switch when its label differs from the label that opened its chunk.
std::vector<TagIssue> bio_issues(std::span<const std::string> tags);

bool is_valid_bio(std::span<const std::string> tags);

/// Converts any lexically well-formed sequence into valid BIO.
///
/// A chunk starts at a B or at an orphan I and runs over the following I
/// tags. Every token of a chunk takes the label of its first token, then an
/// orphan first token becomes B. Valid input is returned unchanged.
std::vector<std::string> repair(std::span<const std::string> tags);

/// Spans of a valid BIO sequence, sorted by start. Throws on invalid input;
/// call repair() first.
std::vector<SlotSpan> spans_from_tags(std::span<const std::string> tags);

/// Inverse of spans_from_tags. Spans must be disjoint and inside
/// [0, length); input order does not matter.
std::vector<std::string> tags_from_spans(std::span<const SlotSpan> spans,
                                         std::size_t length);

}  // namespace xslu
