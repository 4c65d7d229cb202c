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

#include <string>
#include <vector>

#include "xslu/corpus.hpp"
#include "xslu/rng.hpp"

namespace xslu::testing {

struct Template {
  const char* intent;
  std::vector<std::string> words;  // "$label" marks a slot filler
};

inline const std::vector<Template>& templates() {
  static const std::vector<Template> t = {
      {"alarm/set_alarm", {"wake", "me", "up", "at", "$datetime"}},
      {"alarm/set_alarm", {"set", "an", "alarm", "for", "$datetime"}},
      {"weather/find", {"what", "is", "the", "weather", "in", "$location"}},
      {"weather/find", {"will", "it", "rain", "in", "$location", "$datetime"}},
      {"reminder/set_reminder", {"remind", "me", "to", "$reminder/todo", "$datetime"}},
      {"reminder/show_reminders", {"show", "my", "reminders"}},
  };
  return t;
}

inline const std::vector<std::vector<std::string>>& fillers(const std::string& label) {
  static const std::vector<std::vector<std::string>> datetime = {
      {"seven", "am"}, {"noon"}, {"tomorrow"}, {"friday", "morning"}, {"six", "thirty"}};
  static const std::vector<std::vector<std::string>> location = {
      {"berlin"}, {"new", "york"}, {"oslo"}, {"san", "jose"}};
  static const std::vector<std::vector<std::string>> todo = {
      {"call", "mom"}, {"buy", "milk"}, {"water", "the", "plants"}};
  if (label == "datetime") return datetime;
  if (label == "location") return location;
  return todo;
}

/// Small template-generated SLU corpus with three intents' worth of slots.
inline Dataset synthetic_corpus(std::size_t n, std::uint64_t seed, std::string name = "synthetic") {
  Rng rng(seed);
  std::vector<Utterance> out;
  for (std::size_t i = 0; i < n; ++i) {
    const Template& t = templates()[rng.below(templates().size())];
    Utterance u;
    u.id = name + "-" + std::to_string(i);
    u.intent = t.intent;
    for (const auto& w : t.words) {
      if (w[0] != '$') {
        u.tokens.push_back(w);
        u.slot_tags.push_back("O");
        continue;
      }
      const std::string label = w.substr(1);
      const auto& pool = fillers(label);
      const auto& fill = pool[rng.below(pool.size())];
      for (std::size_t k = 0; k < fill.size(); ++k) {
        u.tokens.push_back(fill[k]);
        u.slot_tags.push_back((k == 0 ? "B-" : "I-") + label);
      }
    }
    for (const auto& tok : u.tokens) u.text += (u.text.empty() ? "" : " ") + tok;
    out.push_back(std::move(u));
  }
  return make_dataset(std::move(name), std::move(out));
}

/// Raw token sequences from the same templates, for the MLM objective.
inline std::vector<std::vector<std::string>> synthetic_sentences(std::size_t n, std::uint64_t seed) {
  std::vector<std::vector<std::string>> out;
  for (const auto& u : synthetic_corpus(n, seed, "raw").utterances) out.push_back(u.tokens);
  return out;
}

}  // namespace xslu::testing
