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

#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "generators.hpp"
#include "xslu/errors.hpp"
#include "xslu/homogenize.hpp"

using namespace xslu;
using Tags = std::vector<std::string>;

namespace {

LabelMap parse(const std::string& text) {
  std::istringstream in(text);
  return parse_label_map(in);
}

std::vector<std::string> ids(const Dataset& ds) {
  std::vector<std::string> out;
  for (const auto& u : ds.utterances) out.push_back(u.id);
  return out;
}

Dataset numbered(const std::string& prefix, std::size_t n) {
  std::vector<Utterance> utts;
  for (std::size_t i = 0; i < n; ++i) utts.push_back(testing::make_utterance(prefix + std::to_string(i), {"O"}));
  return make_dataset(prefix, utts);
}

}  // namespace

TEST_CASE("label map file") {
  const LabelMap m = parse(
      "# snips to unified\n"
      "[slots]\n"
      "timeRange\tdatetime\n"
      "spatial_relation\tlocation\n"
      "[intents]\n"
      "weather/checkSunny\tweather/find\n"
      "[trim]\n"
      "at\n");
  CHECK(m.slot("timeRange") == "datetime");
  CHECK(m.slot("other") == "other");
  CHECK(m.intent("weather/checkSunny") == "weather/find");
  CHECK(m.trim_tokens == std::set<std::string>{"at"});

  CHECK_THROWS_AS(parse("timeRange\tdatetime\n"), ParseError);
  CHECK_THROWS_AS(parse("[slots]\ntimeRange datetime\n"), ParseError);
  CHECK_THROWS_AS(parse("[slots]\na\tb c\n"), ParseError);
  CHECK_THROWS_AS(parse("[slots]\na\tb\na\tc\n"), ParseError);
  CHECK_THROWS_AS(parse("[other]\n"), ParseError);
}

TEST_CASE("apply_label_map renames labels and keeps boundaries") {
  const LabelMap m = parse("[slots]\ntimeRange\tdatetime\nstart\tdatetime\n[intents]\nweather/checkSunny\tweather/find\n");
  Dataset ds = make_dataset("d", {testing::make_utterance("1", {"B-timeRange", "I-timeRange", "O"}, "weather/checkSunny"),
                                  testing::make_utterance("2", {"B-start", "B-timeRange", "B-loc"}, "alarm/set")});
  const Dataset out = apply_label_map(ds, m);
  CHECK(out.utterances[0].slot_tags == Tags{"B-datetime", "I-datetime", "O"});
  CHECK(out.utterances[0].intent == "weather/find");
  // adjacent spans that now share a label stay two spans
  CHECK(out.utterances[1].slot_tags == Tags{"B-datetime", "B-datetime", "B-loc"});
  CHECK(out.utterances[1].intent == "alarm/set");
  CHECK(out.label_inventory == std::set<std::string>{"datetime", "loc"});
  CHECK(out.intent_inventory == std::set<std::string>{"alarm/set", "weather/find"});

  // intent-only map leaves tags alone
  const Dataset intents_only = apply_label_map(ds, parse("[intents]\nalarm/set\talarm/set_alarm\n"));
  CHECK(intents_only.utterances[1].slot_tags == ds.utterances[1].slot_tags);
  CHECK(intents_only.utterances[1].intent == "alarm/set_alarm");
}

TEST_CASE("property: label maps never move span boundaries") {
  Rng rng(51);
  const LabelMap m = parse("[slots]\nloc\tlocation\ndatetime\tlocation\ntodo\tdatetime\n");
  for (int trial = 0; trial < 500; ++trial) {
    const Tags t = testing::random_valid_tags(rng, rng.below(10));
    if (t.empty()) continue;
    const Dataset out = apply_label_map(make_dataset("d", {testing::make_utterance("1", t)}), m);
    const auto before = spans_from_tags(t);
    const auto after = spans_from_tags(out.utterances[0].slot_tags);
    REQUIRE(before.size() == after.size());
    for (std::size_t k = 0; k < before.size(); ++k) {
      CHECK(before[k].start == after[k].start);
      CHECK(before[k].end == after[k].end);
      CHECK(after[k].label == m.slot(before[k].label));
    }
  }
}

TEST_CASE("trim_span_prefixes") {
  Utterance u = testing::make_utterance("1", {"O", "B-datetime", "I-datetime", "B-loc"});
  u.tokens = {"wake", "At", "seven", "at"};
  const Dataset out = trim_span_prefixes(make_dataset("d", {u}), {"at"});
  CHECK(out.utterances[0].slot_tags == Tags{"O", "O", "B-datetime", "O"});
  CHECK(out.label_inventory == std::set<std::string>{"datetime"});
}

TEST_CASE("merge_shuffle") {
  const Dataset a = numbered("a", 3), b = numbered("b", 2);
  const Dataset m1 = merge_shuffle({a, b}, 7);
  const Dataset m2 = merge_shuffle({a, b}, 7);
  CHECK(m1.size() == 5);
  CHECK(ids(m1) == ids(m2));
  auto sorted = ids(m1);
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<std::string>{"a0", "a1", "a2", "b0", "b1"});
  CHECK(m1.name == "a+b");

  // a single dataset is permuted, not altered
  const Dataset big = numbered("x", 50);
  const Dataset shuffled = merge_shuffle({big}, 3);
  auto s = ids(shuffled);
  CHECK(s != ids(big));
  std::sort(s.begin(), s.end());
  auto orig = ids(big);
  std::sort(orig.begin(), orig.end());
  CHECK(s == orig);
  CHECK(ids(merge_shuffle({big}, 4)) != ids(shuffled));
}

TEST_CASE("merge_shuffle order is pinned for a fixed seed") {
  // Literal outputs guard reproducibility of the generator and shuffle
  // across builds.
  CHECK(Rng(7).next() == 14248999132371506123ull);
  const Dataset m = merge_shuffle({numbered("a", 3), numbered("b", 2)}, 7);
  const auto got = ids(m);
  CHECK(got == std::vector<std::string>{"a1", "b1", "a0", "a2", "b0"});
  // descending Fisher-Yates over the same generator
  std::vector<std::string> expect{"a0", "a1", "a2", "b0", "b1"};
  Rng rng(7);
  for (std::size_t i = expect.size(); i > 1; --i) std::swap(expect[i - 1], expect[rng.below(i)]);
  CHECK(got == expect);
}
