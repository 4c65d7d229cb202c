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

#include "xslu/projection.hpp"

#include <fstream>
#include <unordered_map>

#include "json.hpp"

namespace xslu {

void check_record(const AlignmentRecord& rec) {
  const auto rows = static_cast<Eigen::Index>(rec.src_tokens.size());
  const auto cols = static_cast<Eigen::Index>(rec.tgt_tokens.size());
  if (rec.scores.rows() != rows || rec.scores.cols() != cols) {
    throw StructuralError("alignment '" + rec.id + "': score matrix is " +
                          std::to_string(rec.scores.rows()) + "x" +
                          std::to_string(rec.scores.cols()) + ", expected " +
                          std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!rec.scores.allFinite()) {
    throw StructuralError("alignment '" + rec.id + "': non-finite score");
  }
}

std::vector<std::string> project_labels(std::span<const std::string> src_tags,
                                        const AlignmentRecord& rec) {
  check_record(rec);
  if (src_tags.size() != rec.src_tokens.size()) {
    throw StructuralError("alignment '" + rec.id + "': " + std::to_string(src_tags.size()) +
                          " source tags for " + std::to_string(rec.src_tokens.size()) +
                          " source tokens");
  }
  return project_tags(src_tags, rec.scores);
}

namespace {

AlignmentRecord record_from_json(const nlohmann::json& j, std::size_t lineno) {
  AlignmentRecord rec;
  try {
    rec.id = j.at("id").get<std::string>();
    rec.src_tokens = j.at("src_tokens").get<std::vector<std::string>>();
    rec.tgt_tokens = j.at("tgt_tokens").get<std::vector<std::string>>();
    const auto& rows = j.at("scores");
    if (!rows.is_array()) throw ParseError(lineno, "'scores' is not an array");
    rec.scores.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rec.tgt_tokens.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (!row.is_array() || row.size() != rec.tgt_tokens.size()) {
        throw StructuralError(lineno, "alignment '" + rec.id + "': scores row " +
                                          std::to_string(i) + " has " +
                                          std::to_string(row.is_array() ? row.size() : 0) +
                                          " entries, expected " +
                                          std::to_string(rec.tgt_tokens.size()));
      }
      for (std::size_t k = 0; k < row.size(); ++k) {
        rec.scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
            row[k].get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(lineno, std::string("alignment record: ") + e.what());
  }
  try {
    check_record(rec);
  } catch (const StructuralError& e) {
    throw StructuralError(lineno, e.what());
  }
  return rec;
}

}  // namespace

std::vector<AlignmentRecord> parse_alignments(std::istream& in) {
  std::vector<AlignmentRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(lineno, std::string("malformed JSON: ") + e.what());
    }
    out.push_back(record_from_json(j, lineno));
  }
  return out;
}

std::vector<AlignmentRecord> read_alignments_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return parse_alignments(in);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

std::string write_alignment(const AlignmentRecord& rec) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < rec.scores.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < rec.scores.cols(); ++k) row.push_back(rec.scores(i, k));
    rows.push_back(std::move(row));
  }
  nlohmann::json j = {{"id", rec.id},
                      {"src_tokens", rec.src_tokens},
                      {"tgt_tokens", rec.tgt_tokens},
                      {"scores", std::move(rows)}};
  return j.dump();
}

Dataset project_dataset(const Dataset& src, const std::vector<AlignmentRecord>& alignments,
                        std::string target_name) {
  std::unordered_map<std::string, const AlignmentRecord*> by_id;
  for (const auto& rec : alignments) {
    if (!by_id.emplace(rec.id, &rec).second) {
      throw StructuralError("duplicate alignment record '" + rec.id + "'");
    }
  }
  std::vector<Utterance> out;
  out.reserve(src.size());
  for (const auto& u : src.utterances) {
    auto it = by_id.find(u.id);
    if (it == by_id.end()) throw StructuralError("no alignment record for utterance '" + u.id + "'");
    const AlignmentRecord& rec = *it->second;
    if (rec.tgt_tokens.empty()) {
      throw StructuralError("alignment '" + rec.id + "' has an empty target sentence");
    }
    Utterance t;
    t.id = u.id;
    t.tokens = rec.tgt_tokens;
    for (std::size_t i = 0; i < t.tokens.size(); ++i) {
      if (i) t.text += ' ';
      t.text += t.tokens[i];
    }
    t.slot_tags = project_labels(u.slot_tags, rec);
    t.intent = u.intent;
    out.push_back(std::move(t));
  }
  return make_dataset(std::move(target_name), std::move(out));
}

}  // namespace xslu
