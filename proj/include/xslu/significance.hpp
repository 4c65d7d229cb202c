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
#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace xslu {

/// Scores of one system on one metric, one value per random seed; higher is
/// better.
struct ScoreSample {
  std::string system;
  std::string metric;
  Eigen::VectorXd values;
};

struct AsoResult {
  double epsilon_hat = 0.5;
  double sigma_boot = 0.0;
  double epsilon_min = 0.5;
  double alpha_used = 0.05;
  bool dominant = false;
};

struct AsoOptions {
  double alpha = 0.05;
  std::size_t n_boot = 1000;
  std::uint64_t seed = 0;
  double threshold = 0.5;  // dominance iff epsilon_min < threshold
  unsigned threads = 1;
};

/// Inverse standard normal CDF (Wichura's AS241, PPND16; relative accuracy
/// about 1e-16). Throws outside (0, 1).
double normal_quantile(double p);
inline constexpr std::string_view kNormalQuantileAlgorithm = "AS241/PPND16";

/// Violation ratio of "a stochastically dominates b".
///
/// With F and G the empirical CDFs of a and b, returns
///   int max(G^-1(t) - F^-1(t), 0)^2 dt / int (F^-1(t) - G^-1(t))^2 dt
/// over t in (0, 1), integrated exactly: both quantile functions are step
/// functions with breaks at i/n and j/m. Returns 0.5 when the denominator
/// is zero (the quantile functions coincide).
double epsilon_w2(const Eigen::Ref<const Eigen::VectorXd>& a,
                  const Eigen::Ref<const Eigen::VectorXd>& b);

/// The integral pair behind epsilon_w2: (violation, total).
std::pair<double, double> w2_components(const Eigen::Ref<const Eigen::VectorXd>& a,
                                        const Eigen::Ref<const Eigen::VectorXd>& b);

/// Almost stochastic order test of a over b.
///
/// Bootstrap iteration k resamples a and b with replacement at their
/// original sizes from its own random stream (seed, k), so the result does
/// not depend on opts.threads. sigma_boot is the population standard
/// deviation of the bootstrap ratios and
///   epsilon_min = epsilon_hat - sigma_boot * normal_quantile(1 - alpha).
/// When the observed quantile functions coincide there is no evidence in
/// either direction: epsilon_hat = epsilon_min = 0.5, sigma_boot = 0 and the
/// bootstrap is skipped.
AsoResult aso(const Eigen::Ref<const Eigen::VectorXd>& a,
              const Eigen::Ref<const Eigen::VectorXd>& b, const AsoOptions& opts);

/// Scores keyed by (system, language) for a single metric.
using ScoreTable = std::map<std::pair<std::string, std::string>, ScoreSample>;

struct ComparisonRow {
  std::string system;
  std::string language;
  AsoResult result;
};

struct ComparisonTable {
  std::string metric;
  std::string baseline;
  double alpha = 0.05;
  double alpha_adjusted = 0.05;  // alpha / number of languages
  std::vector<std::string> languages;
  std::vector<ComparisonRow> rows;
  std::map<std::string, std::size_t> dominant_counts;  // per system
};

/// Tests every non-baseline system against the baseline in every language
/// at the Bonferroni-corrected level alpha / #languages. Each comparison
/// gets its own seed derived from opts.seed and the (system, language) pair.
ComparisonTable compare_table(const ScoreTable& scores, const std::string& baseline,
                              const AsoOptions& opts);

/// Reads `system,language,metric,seed,value` CSV (with that header) into
/// one ScoreTable per metric. Values within a sample are ordered by seed.
std::map<std::string, ScoreTable> parse_scores_csv(std::istream& in);
std::map<std::string, ScoreTable> read_scores_file(const std::string& path);

std::string format_comparison(const ComparisonTable& table);
std::string comparison_json(const std::vector<ComparisonTable>& tables);

}  // namespace xslu
