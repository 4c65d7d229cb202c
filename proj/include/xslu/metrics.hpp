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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xslu/corpus.hpp"
#include "xslu/errors.hpp"

namespace xslu {

enum class MatchRegime { kStrict, kUnlabeled, kLoose };

std::string_view to_string(MatchRegime regime);

/// Micro-averaged scores under one matching regime.
///
/// For strict and unlabeled matching `matched_pred == matched_gold == tp`.
/// For loose matching each predicted span is matched when it overlaps a gold
/// span with the same label, and each gold span symmetrically, so the two
/// counts may differ.
struct RegimeScores {
  std::size_t n_pred = 0;
  std::size_t n_gold = 0;
  std::size_t matched_pred = 0;
  std::size_t matched_gold = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct LabelScores {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::map<std::string, LabelScores> per_label;  // strict regime
  RegimeScores strict;
  RegimeScores unlabeled;
  RegimeScores loose;
  double intent_accuracy = 0.0;
  std::size_t n_utterances = 0;

  const RegimeScores& micro(MatchRegime regime) const;
};

/// Harmonic mean, defined as 0 when both inputs are 0.
inline double f1_score(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

/// Throws AlignmentError unless gold and pred have equal sizes and equal
/// token counts utterance by utterance.
void check_aligned(const Dataset& gold, const Dataset& pred);

/// Per-label and micro strict span scores. Gold must be valid BIO; predicted
/// tags are repaired before scoring. intent_accuracy and the relaxed regimes
/// are left at zero; see evaluate().
EvalReport strict_f1(const Dataset& gold, const Dataset& pred);
RegimeScores unlabeled_f1(const Dataset& gold, const Dataset& pred);
RegimeScores loose_f1(const Dataset& gold, const Dataset& pred);

/// Fraction of exact intent matches; throws on an empty dataset.
double intent_accuracy(const Dataset& gold, const Dataset& pred);

/// All three regimes plus intent accuracy.
EvalReport evaluate(const Dataset& gold, const Dataset& pred);

/// Flat `metric<TAB>value` text block, values with 4 decimals.
std::string format_report(const EvalReport& report);
std::string report_json(const EvalReport& report);

// Span-level scoring on already extracted spans, exposed for callers that do
// not go through Dataset.
RegimeScores score_spans(const std::vector<std::vector<SlotSpan>>& gold,
                         const std::vector<std::vector<SlotSpan>>& pred, MatchRegime regime);

/// Annotator votes: counts(i, j) is the number of annotators who put item i
/// in category j.
struct AgreementTable {
  Eigen::MatrixXi counts;

  std::size_t n_items() const { return static_cast<std::size_t>(counts.rows()); }
  std::size_t n_categories() const { return static_cast<std::size_t>(counts.cols()); }
  /// Annotators per item (taken from the first row).
  std::size_t n_annotators() const;
};

/// Builds the table from categorical labels, one row per item and one
/// column per annotator. Categories are sorted by name.
AgreementTable agreement_table(const std::vector<std::vector<std::string>>& votes);

/// Fleiss' kappa. Returns 1 when both observed and chance agreement are 1.
double fleiss_kappa(const AgreementTable& table);

/// Sample Pearson correlation. Throws on length mismatch, fewer than two
/// points, or zero variance.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar pearson(const Eigen::MatrixBase<DerivedX>& x,
                                  const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  if (x.size() != y.size()) throw AlignmentError("pearson: vectors differ in length");
  if (x.size() < 2) throw NumericError("pearson: need at least two points");
  auto xc = (x.array() - x.mean()).eval();
  auto yc = (y.array().template cast<Scalar>() - y.template cast<Scalar>().mean()).eval();
  const Scalar sxx = xc.square().sum();
  const Scalar syy = yc.square().sum();
  if (!(sxx > Scalar(0)) || !(syy > Scalar(0))) {
    throw NumericError("pearson: zero variance");
  }
  const Scalar r = (xc * yc).sum() / std::sqrt(sxx * syy);
  return std::clamp(r, Scalar(-1), Scalar(1));
}

/// Pairwise Pearson correlations between the columns of `data`.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> pearson_matrix(
    const Eigen::MatrixBase<Derived>& data) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index k = data.cols();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> r(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    r(i, i) = Scalar(1);
    for (Eigen::Index j = i + 1; j < k; ++j) {
      r(i, j) = r(j, i) = pearson(data.col(i), data.col(j));
    }
  }
  return r;
}

}  // namespace xslu
