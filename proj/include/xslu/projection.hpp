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

#include <cmath>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xslu/bio.hpp"
#include "xslu/corpus.hpp"
#include "xslu/errors.hpp"

namespace xslu {

/// Word-level alignment scores for one translated sentence pair, indexed
/// [source token][target token].
struct AlignmentRecord {
  std::string id;
  std::vector<std::string> src_tokens;
  std::vector<std::string> tgt_tokens;
  Eigen::MatrixXd scores;
};

/// Throws StructuralError naming the record id when the matrix does not
/// match the token lists or holds a non-finite value.
void check_record(const AlignmentRecord& rec);

/// Column of the highest score in `row`; ties go to the lowest index.
template <typename Derived>
Eigen::Index argmax_column(const Eigen::DenseBase<Derived>& row) {
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < row.size(); ++j) {
    if (row(j) > row(best)) best = j;
  }
  return best;
}

/// Moves every source token's tag onto its highest-scoring target token
/// and repairs the result into valid BIO.
///
/// Target tokens that no labeled source token selects stay O. When several
/// source tokens select the same target token the leftmost labeled one
/// wins, and O sources never overwrite a slot tag.
template <typename Derived>
std::vector<std::string> project_tags(std::span<const std::string> src_tags,
                                      const Eigen::MatrixBase<Derived>& scores) {
  if (static_cast<Eigen::Index>(src_tags.size()) != scores.rows()) {
    throw StructuralError("projection: " + std::to_string(src_tags.size()) +
                          " source tags but score matrix has " + std::to_string(scores.rows()) +
                          " rows");
  }
  if (!scores.allFinite()) throw NumericError("projection: non-finite alignment score");
  if (!is_valid_bio(src_tags)) throw TagError(0, "projection: source tags are not valid BIO");

  const auto n_tgt = static_cast<std::size_t>(scores.cols());
  std::vector<std::string> raw(n_tgt, "O");
  std::vector<bool> taken(n_tgt, false);
  if (n_tgt == 0) return raw;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const std::string& tag = src_tags[static_cast<std::size_t>(i)];
    if (tag == "O") continue;
    auto j = static_cast<std::size_t>(argmax_column(scores.row(i)));
    if (taken[j]) continue;
    taken[j] = true;
    raw[j] = tag;
  }
  return repair(raw);
}

std::vector<std::string> project_labels(std::span<const std::string> src_tags,
                                        const AlignmentRecord& rec);

/// Reads the JSON Lines alignment format:
/// {"id": str, "src_tokens": [str], "tgt_tokens": [str], "scores": [[float]]}.
/// Blank lines are skipped.
std::vector<AlignmentRecord> parse_alignments(std::istream& in);
std::vector<AlignmentRecord> read_alignments_file(const std::string& path);
std::string write_alignment(const AlignmentRecord& rec);

/// Projects every source utterance onto the target tokens of the alignment
/// record sharing its id. Intents are copied verbatim; the target text is
/// the target tokens joined by single spaces.
Dataset project_dataset(const Dataset& src, const std::vector<AlignmentRecord>& alignments,
                        std::string target_name = {});

}  // namespace xslu
