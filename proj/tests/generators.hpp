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

// Random generators and independent reference implementations shared by
// the unit and acceptance tests. Nothing here calls into the code paths it
// is used to check.

#include <cstdint>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "xslu/bio.hpp"
#include "xslu/corpus.hpp"
#include "xslu/rng.hpp"

namespace xslu::testing {

inline const std::vector<std::string>& label_pool() {
  static const std::vector<std::string> kLabels = {"loc", "datetime", "todo", "reminder"};
  return kLabels;
}

/// Any lexically well-formed sequence, valid BIO or not.
inline std::vector<std::string> random_tags(Rng& rng, std::size_t n, std::size_t n_labels = 4) {
  std::vector<std::string> tags;
  for (std::size_t i = 0; i < n; ++i) {
    const auto kind = rng.below(3);
    const std::string& label = label_pool()[rng.below(n_labels)];
    tags.push_back(kind == 0 ? "O" : (kind == 1 ? "B-" : "I-") + label);
  }
  return tags;
}

/// A valid BIO sequence built directly from random disjoint spans.
inline std::vector<std::string> random_valid_tags(Rng& rng, std::size_t n, std::size_t n_labels = 4) {
  std::vector<std::string> tags(n, "O");
  std::size_t i = 0;
  while (i < n) {
    if (rng.below(2) == 0) {
      ++i;
      continue;
    }
    const std::size_t len = 1 + rng.below(std::min<std::size_t>(3, n - i));
    const std::string& label = label_pool()[rng.below(n_labels)];
    tags[i] = "B-" + label;
    for (std::size_t k = 1; k < len; ++k) tags[i + k] = "I-" + label;
    i += len;
  }
  return tags;
}

/// Reference chunker written as a plain scan: a span opens at each B and
/// extends over the I tags that follow it.
inline std::set<std::tuple<std::size_t, std::size_t, std::string>> reference_spans(
    const std::vector<std::string>& tags) {
  std::set<std::tuple<std::size_t, std::size_t, std::string>> out;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i][0] != 'B') continue;
    std::size_t j = i + 1;
    while (j < tags.size() && tags[j][0] == 'I') ++j;
    out.emplace(i, j, tags[i].substr(2));
  }
  return out;
}

inline Utterance make_utterance(std::string id, std::vector<std::string> tags,
                                std::string intent = "alarm/set_alarm") {
  Utterance u;
  u.id = std::move(id);
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (i) u.text += ' ';
    u.tokens.push_back("w" + std::to_string(i));
    u.text += u.tokens.back();
  }
  u.slot_tags = std::move(tags);
  u.intent = std::move(intent);
  return u;
}

}  // namespace xslu::testing

namespace xslu::testing {

/// Reference BIO repair: an I whose left neighbour (after repair) is O or
/// absent becomes B; any other I copies the label of its left neighbour.
inline std::vector<std::string> reference_repair(const std::vector<std::string>& tags) {
  std::vector<std::string> out;
  for (const auto& t : tags) {
    if (t[0] != 'I') {
      out.push_back(t);
    } else if (out.empty() || out.back() == "O") {
      out.push_back("B-" + t.substr(2));
    } else {
      out.push_back("I-" + out.back().substr(2));
    }
  }
  return out;
}

struct OracleCounts {
  double precision = 0, recall = 0, f1 = 0;
  std::size_t tp = 0, n_pred = 0, n_gold = 0;
};

/// Strict span scores by set intersection of (start, end, label) triples.
inline OracleCounts oracle_strict(const std::vector<std::vector<std::string>>& gold,
                                  const std::vector<std::vector<std::string>>& pred) {
  OracleCounts c;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const auto g = reference_spans(gold[k]);
    const auto p = reference_spans(reference_repair(pred[k]));
    c.n_gold += g.size();
    c.n_pred += p.size();
    for (const auto& s : p) c.tp += g.count(s);
  }
  c.precision = c.n_pred ? double(c.tp) / double(c.n_pred) : 0.0;
  c.recall = c.n_gold ? double(c.tp) / double(c.n_gold) : 0.0;
  c.f1 = c.precision + c.recall > 0 ? 2 * c.precision * c.recall / (c.precision + c.recall) : 0.0;
  return c;
}

}  // namespace xslu::testing
