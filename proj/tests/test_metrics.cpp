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
#include <cmath>

#include "generators.hpp"
#include "xslu/metrics.hpp"

using namespace xslu;
using Tags = std::vector<std::string>;

namespace {

Dataset single(const Tags& tags, const std::string& intent = "x") {
  return make_dataset("d", {testing::make_utterance("1", tags, intent)});
}

Dataset from_spans(const std::vector<SlotSpan>& spans, std::size_t n) {
  return single(tags_from_spans(spans, n));
}

// Fleiss' kappa written out cell by cell, the way one would in a spreadsheet.
double spreadsheet_kappa(const std::vector<std::vector<int>>& rows) {
  const std::size_t items = rows.size(), cats = rows[0].size();
  int raters = 0;
  for (int v : rows[0]) raters += v;
  double p_bar = 0.0;
  for (const auto& row : rows) {
    double agree = 0.0;
    for (int v : row) agree += double(v) * double(v - 1);
    p_bar += agree / (double(raters) * double(raters - 1));
  }
  p_bar /= double(items);
  double p_e = 0.0;
  for (std::size_t j = 0; j < cats; ++j) {
    double col = 0.0;
    for (const auto& row : rows) col += row[j];
    const double pj = col / (double(items) * double(raters));
    p_e += pj * pj;
  }
  return (p_bar - p_e) / (1.0 - p_e);
}

AgreementTable to_table(const std::vector<std::vector<int>>& rows) {
  AgreementTable t{Eigen::MatrixXi(rows.size(), rows[0].size())};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) t.counts(i, j) = rows[i][j];
  }
  return t;
}

}  // namespace

TEST_CASE("strict F1 worked example") {
  const Dataset gold = from_spans({{0, 1, "loc"}, {3, 5, "datetime"}}, 5);
  const Dataset pred = from_spans({{0, 1, "loc"}, {3, 4, "datetime"}}, 5);
  const EvalReport r = strict_f1(gold, pred);
  CHECK(r.strict.matched_pred == 1);
  CHECK(r.strict.n_pred - r.strict.matched_pred == 1);  // fp
  CHECK(r.strict.n_gold - r.strict.matched_gold == 1);  // fn
  CHECK(r.strict.precision == 0.5);
  CHECK(r.strict.recall == 0.5);
  CHECK(r.strict.f1 == 0.5);
  CHECK(r.per_label.at("loc").tp == 1);
  CHECK(r.per_label.at("datetime").fp == 1);
  CHECK(r.per_label.at("datetime").fn == 1);
}

TEST_CASE("strict F1 edge cases") {
  const Dataset gold = from_spans({{0, 1, "loc"}}, 3);
  CHECK(strict_f1(gold, gold).strict.f1 == 1.0);
  const EvalReport none = strict_f1(gold, single({"O", "O", "O"}));
  CHECK(none.strict.precision == 0.0);
  CHECK(none.strict.recall == 0.0);
  CHECK(none.strict.f1 == 0.0);
  // Predictions are repaired before scoring.
  CHECK(strict_f1(gold, single({"I-loc", "O", "O"})).strict.f1 == 1.0);
  CHECK_THROWS_AS(strict_f1(gold, single({"O", "O"})), AlignmentError);
  CHECK_THROWS_AS(strict_f1(single({"O", "I-loc"}), single({"O", "O"})), StructuralError);
}

TEST_CASE("unlabeled F1") {
  CHECK(unlabeled_f1(from_spans({{0, 1, "time"}}, 2), from_spans({{0, 1, "loc"}}, 2)).f1 == 1.0);
  CHECK(unlabeled_f1(from_spans({{0, 1, "time"}}, 2), from_spans({{0, 2, "time"}}, 2)).f1 == 0.0);
}

TEST_CASE("loose F1") {
  CHECK(loose_f1(from_spans({{3, 5, "datetime"}}, 5), from_spans({{3, 4, "datetime"}}, 5)).f1 == 1.0);
  CHECK(loose_f1(from_spans({{3, 5, "datetime"}}, 5), from_spans({{3, 4, "loc"}}, 5)).f1 == 0.0);
  const RegimeScores s = loose_f1(from_spans({{0, 4, "a"}}, 4), from_spans({{0, 1, "a"}, {2, 3, "a"}}, 4));
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 1.0);
  CHECK(s.f1 == 1.0);
  // One prediction over two gold spans counts once on the precision side.
  const RegimeScores wide = loose_f1(from_spans({{0, 1, "a"}, {2, 3, "a"}}, 4), from_spans({{0, 4, "a"}}, 4));
  CHECK(wide.matched_pred == 1);
  CHECK(wide.matched_gold == 2);
  CHECK(wide.f1 == 1.0);
}

TEST_CASE("intent accuracy") {
  auto ds = [](std::vector<std::string> intents) {
    std::vector<Utterance> u;
    for (std::size_t i = 0; i < intents.size(); ++i) {
      u.push_back(testing::make_utterance(std::to_string(i), {"O"}, intents[i]));
    }
    return make_dataset("d", u);
  };
  CHECK(intent_accuracy(ds({"a", "b"}), ds({"a", "b"})) == 1.0);
  CHECK(intent_accuracy(ds({"a", "a", "a", "a"}), ds({"a", "b", "a", "a"})) == 0.75);
  CHECK_THROWS_AS(intent_accuracy(ds({}), ds({})), AlignmentError);
  CHECK_THROWS_AS(intent_accuracy(ds({"a"}), ds({"a", "b"})), AlignmentError);
}

TEST_CASE("report serialization") {
  const Dataset gold = from_spans({{0, 1, "loc"}}, 2);
  const std::string text = format_report(evaluate(gold, gold));
  CHECK(text.find("strict_f1\t1.0000\n") != std::string::npos);
  CHECK(text.find("intent_accuracy\t1.0000\n") != std::string::npos);
  CHECK(text.find("slot/loc/f1\t1.0000\n") != std::string::npos);
  const std::string json = report_json(evaluate(gold, gold));
  CHECK(json.find("\"strict\"") != std::string::npos);
}

TEST_CASE("property: strict matches the set-intersection oracle; relaxations dominate") {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Utterance> g, p;
    std::vector<Tags> gt, pt;
    const std::size_t n_utt = 1 + rng.below(4);
    for (std::size_t k = 0; k < n_utt; ++k) {
      const std::size_t n = 1 + rng.below(10);
      gt.push_back(testing::random_valid_tags(rng, n));
      pt.push_back(testing::random_tags(rng, n));
      g.push_back(testing::make_utterance(std::to_string(k), gt.back()));
      p.push_back(testing::make_utterance(std::to_string(k), pt.back()));
    }
    const Dataset gold = make_dataset("g", g), pred = make_dataset("p", p);
    const EvalReport r = evaluate(gold, pred);
    const auto oracle = testing::oracle_strict(gt, pt);
    CHECK(r.strict.matched_pred == oracle.tp);
    CHECK(r.strict.n_pred == oracle.n_pred);
    CHECK(r.strict.n_gold == oracle.n_gold);
    CHECK(r.strict.f1 == oracle.f1);
    CHECK(r.strict.f1 <= r.unlabeled.f1);
    CHECK(r.strict.f1 <= r.loose.f1);
    for (const auto* s : {&r.strict, &r.unlabeled, &r.loose}) {
      CHECK(s->precision <= 1.0);
      CHECK(s->recall <= 1.0);
    }
    // per-label counts add up to the micro counts
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& [label, s] : r.per_label) {
      tp += s.tp;
      fp += s.fp;
      fn += s.fn;
    }
    CHECK(tp == r.strict.matched_pred);
    CHECK(tp + fp == r.strict.n_pred);
    CHECK(tp + fn == r.strict.n_gold);

    // permutation invariance
    std::vector<std::size_t> perm(n_utt);
    for (std::size_t k = 0; k < n_utt; ++k) perm[k] = k;
    rng.shuffle(perm);
    std::vector<Utterance> g2, p2;
    for (auto k : perm) {
      g2.push_back(g[k]);
      p2.push_back(p[k]);
    }
    const EvalReport r2 = evaluate(make_dataset("g", g2), make_dataset("p", p2));
    CHECK(r2.strict.f1 == r.strict.f1);
    CHECK(r2.unlabeled.f1 == r.unlabeled.f1);
    CHECK(r2.loose.f1 == r.loose.f1);
  }
}

TEST_CASE("fleiss kappa") {
  CHECK(fleiss_kappa(to_table({{3, 0}, {0, 3}, {3, 0}})) == 1.0);
  CHECK(fleiss_kappa(to_table({{3, 0}, {3, 0}})) == 1.0);  // a single category used
  CHECK(fleiss_kappa(to_table({{3, 0}, {2, 1}, {1, 2}, {0, 3}})) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK_THROWS_AS(fleiss_kappa(to_table({{3, 0}, {2, 0}})), StructuralError);
  CHECK_THROWS_AS(fleiss_kappa(to_table({{1, 0}})), StructuralError);

  const AgreementTable t = agreement_table({{"a", "a", "b"}, {"b", "b", "b"}});
  CHECK(t.n_items() == 2);
  CHECK(t.n_annotators() == 3);
  CHECK(t.counts(0, 0) == 2);
  CHECK(t.counts(1, 1) == 3);
}

TEST_CASE("property: fleiss kappa matches the spreadsheet oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int raters = 2 + static_cast<int>(rng.below(5));
    const std::size_t items = 1 + rng.below(30), cats = 2 + rng.below(4);
    std::vector<std::vector<int>> rows(items, std::vector<int>(cats, 0));
    for (auto& row : rows) {
      for (int r = 0; r < raters; ++r) row[rng.below(cats)] += 1;
    }
    const double oracle = spreadsheet_kappa(rows);
    if (!std::isfinite(oracle)) continue;
    CHECK(fleiss_kappa(to_table(rows)) == doctest::Approx(oracle).epsilon(1e-12));
  }
  // identical vote distribution on every item
  const std::vector<std::vector<int>> same(10, std::vector<int>{2, 1, 1});
  CHECK(fleiss_kappa(to_table(same)) == doctest::Approx(spreadsheet_kappa(same)).epsilon(1e-12));
}

TEST_CASE("pearson") {
  Eigen::Vector3d x(1, 2, 3);
  CHECK(pearson(x, x) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pearson(x, Eigen::Vector3d(3, 2, 1)) == doctest::Approx(-1.0).epsilon(1e-15));
  // r = 3 / sqrt(2 * 14/3)
  CHECK(pearson(x, Eigen::Vector3d(1, 2, 4)) == doctest::Approx(0.9819805060619657).epsilon(1e-12));
  CHECK(std::fabs(pearson(x, Eigen::Vector3d(1, 2, 4)) - 0.9820) < 1e-4);
  CHECK_THROWS_AS(pearson(x, Eigen::Vector3d(2, 2, 2)), NumericError);
  CHECK_THROWS_AS(pearson(Eigen::VectorXd(x), Eigen::VectorXd(Eigen::Vector2d(1, 2))), AlignmentError);
  CHECK_THROWS_AS(pearson(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)), NumericError);

  Eigen::MatrixXd data(4, 3);
  data << 1, 2, 4, 2, 4, 3, 3, 6, 2, 4, 8, 1;
  const Eigen::MatrixXd r = pearson_matrix(data);
  CHECK(r(0, 1) == doctest::Approx(1.0));
  CHECK(r(0, 2) == doctest::Approx(-1.0));
  CHECK(r(2, 0) == r(0, 2));

  // float instantiation
  Eigen::Vector3f xf(1, 2, 3), yf(1, 2, 4);
  CHECK(pearson(xf, yf) == doctest::Approx(0.98198f).epsilon(1e-5));
}
