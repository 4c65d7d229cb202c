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

#include <sstream>

#include "generators.hpp"
#include "xslu/projection.hpp"

using namespace xslu;
using Tags = std::vector<std::string>;

namespace {

Eigen::MatrixXd random_scores(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform();
  }
  return m;
}

}  // namespace

TEST_CASE("identity alignment preserves tags") {
  const Tags src{"O", "B-loc", "I-loc", "B-datetime"};
  Eigen::MatrixXd scores = Eigen::MatrixXd::Constant(4, 4, 0.1);
  scores.diagonal().setConstant(0.7);
  CHECK(project_tags(src, scores) == src);
}

TEST_CASE("argmax column receives the label") {
  Eigen::MatrixXd scores(1, 3);
  scores << 0.1, 0.2, 0.7;
  CHECK(project_tags(Tags{"B-loc"}, scores) == Tags{"O", "O", "B-loc"});
}

TEST_CASE("swapped alignment is repaired") {
  Eigen::MatrixXd scores(2, 2);
  scores << 0.1, 0.9,
            0.8, 0.2;
  // raw [I-t, B-t]; the leading I has no chunk to continue
  CHECK(project_tags(Tags{"B-t", "I-t"}, scores) == Tags{"B-t", "B-t"});
}

TEST_CASE("collision and tie rules") {
  SUBCASE("ties go to the lowest target index") {
    Eigen::MatrixXd s(1, 3);
    s << 0.5, 0.5, 0.5;
    CHECK(project_tags(Tags{"B-a"}, s) == Tags{"B-a", "O", "O"});
  }
  SUBCASE("leftmost labelled source wins") {
    Eigen::MatrixXd s(2, 2);
    s << 0.9, 0.1,
         0.9, 0.1;
    CHECK(project_tags(Tags{"B-a", "B-b"}, s) == Tags{"B-a", "O"});
  }
  SUBCASE("O source does not overwrite a slot") {
    Eigen::MatrixXd s(2, 2);
    s << 0.9, 0.1,
         0.9, 0.1;
    CHECK(project_tags(Tags{"O", "B-b"}, s) == Tags{"B-b", "O"});
  }
}

TEST_CASE("projection errors") {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(project_tags(Tags{"O"}, s), StructuralError);
  s(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(project_tags(Tags{"O", "O"}, s), NumericError);
  AlignmentRecord rec{"r1", {"a", "b"}, {"x"}, Eigen::MatrixXd::Ones(2, 2)};
  CHECK_THROWS_WITH_AS(project_labels(Tags{"O", "O"}, rec), doctest::Contains("r1"), StructuralError);
}

TEST_CASE("parse_alignments") {
  std::istringstream one(
      R"({"id": "7", "src_tokens": ["set", "alarm"], "tgt_tokens": ["Wecker", "stellen"], "scores": [[0.1, 0.9], [0.8, 0.2]]})"
      "\n");
  const auto recs = parse_alignments(one);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].id == "7");
  CHECK(recs[0].scores(1, 0) == 0.8);
  CHECK(recs[0].tgt_tokens == std::vector<std::string>{"Wecker", "stellen"});

  std::istringstream empty("");
  CHECK(parse_alignments(empty).empty());

  std::istringstream bad_row(
      R"({"id": "q9", "src_tokens": ["a"], "tgt_tokens": ["x", "y"], "scores": [[0.1]]})");
  CHECK_THROWS_WITH_AS(parse_alignments(bad_row), doctest::Contains("q9"), StructuralError);

  std::istringstream bad_rows(R"({"id": "q8", "src_tokens": ["a"], "tgt_tokens": ["x"], "scores": []})");
  CHECK_THROWS_WITH_AS(parse_alignments(bad_rows), doctest::Contains("q8"), StructuralError);

  std::istringstream not_json("{id: 1");
  CHECK_THROWS_AS(parse_alignments(not_json), ParseError);

  // write/parse round trip
  std::istringstream again(write_alignment(recs[0]));
  const auto back = parse_alignments(again);
  CHECK(back[0].scores == recs[0].scores);
}

TEST_CASE("project_dataset copies intents and uses target tokens") {
  Utterance u = testing::make_utterance("1", {"B-todo", "O"}, "reminder/set");
  const Dataset src = make_dataset("en", {u});
  AlignmentRecord rec{"1", u.tokens, {"x", "y", "z"}, Eigen::MatrixXd::Zero(2, 3)};
  rec.scores(0, 1) = 1.0;
  const Dataset tgt = project_dataset(src, {rec}, "de");
  REQUIRE(tgt.size() == 1);
  CHECK(tgt.utterances[0].intent == "reminder/set");
  CHECK(tgt.utterances[0].tokens == std::vector<std::string>{"x", "y", "z"});
  CHECK(tgt.utterances[0].text == "x y z");
  CHECK(tgt.utterances[0].slot_tags == Tags{"O", "B-todo", "O"});
  CHECK(tgt.name == "de");
  AlignmentRecord other = rec;
  other.id = "2";
  CHECK_THROWS_AS(project_dataset(src, {other}), StructuralError);
}

TEST_CASE("property: fuzzed projections are valid, scale invariant and column equivariant") {
  Rng rng(41);
  for (int trial = 0; trial < 2000; ++trial) {
    const Eigen::Index n_src = 1 + static_cast<Eigen::Index>(rng.below(8));
    const Eigen::Index n_tgt = 1 + static_cast<Eigen::Index>(rng.below(8));
    const Tags src = testing::random_valid_tags(rng, static_cast<std::size_t>(n_src));
    const Eigen::MatrixXd s = random_scores(rng, n_src, n_tgt);
    const Tags out = project_tags(src, s);
    CHECK(out.size() == static_cast<std::size_t>(n_tgt));
    CHECK(is_valid_bio(out));
    CHECK(project_tags(src, (s * (0.01 + 100 * rng.uniform())).eval()) == out);

    // permuting columns permutes the raw placement; compare before repair
    // by using single-token spans so repair cannot merge neighbours
    Tags singles(static_cast<std::size_t>(n_src));
    for (auto& t : singles) t = rng.below(2) ? "O" : "B-" + testing::label_pool()[rng.below(4)];
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n_tgt));
    for (Eigen::Index j = 0; j < n_tgt; ++j) perm[static_cast<std::size_t>(j)] = j;
    rng.shuffle(perm);
    Eigen::MatrixXd permuted(n_src, n_tgt);
    for (Eigen::Index j = 0; j < n_tgt; ++j) permuted.col(j) = s.col(perm[static_cast<std::size_t>(j)]);
    const Tags a = project_tags(singles, s);
    const Tags b = project_tags(singles, permuted);
    for (Eigen::Index j = 0; j < n_tgt; ++j) {
      CHECK(b[static_cast<std::size_t>(j)] == a[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])]);
    }
  }
}
