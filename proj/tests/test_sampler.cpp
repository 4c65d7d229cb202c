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

#include <cmath>

#include "xslu/errors.hpp"
#include "xslu/sampler.hpp"

using namespace xslu;

TEST_CASE("sampling_weights") {
  const std::vector<std::size_t> equal{100, 100};
  CHECK(sampling_weights(equal, 0.5) == Eigen::Vector2d(0.5, 0.5));
  const std::vector<std::size_t> skewed{900, 100};
  const Eigen::VectorXd p = sampling_weights(skewed, 0.5);
  CHECK(p(0) == 0.75);
  CHECK(p(1) == 0.25);
  const std::vector<std::size_t> many{1, 7, 1000, 3};
  CHECK(sampling_weights(many, 0.0).isApprox(Eigen::Vector4d::Constant(0.25)));
  CHECK(std::fabs(sampling_weights(many, 0.37).sum() - 1.0) < 1e-12);
  CHECK(sampling_weights(many, 1.0)(2) == doctest::Approx(1000.0 / 1011.0));
  CHECK_THROWS_AS(sampling_weights(std::vector<std::size_t>{}, 0.5), StructuralError);
  CHECK_THROWS_AS(sampling_weights(std::vector<std::size_t>{0, 3}, 0.5), StructuralError);
  CHECK_THROWS_AS(sampling_weights(skewed, -1.0), StructuralError);
}

TEST_CASE("property: growing a task never lowers its probability") {
  Rng rng(61);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::size_t> sizes(2 + rng.below(4));
    for (auto& s : sizes) s = 1 + rng.below(1000);
    const double alpha = rng.uniform(0.0, 2.0);
    const std::size_t k = rng.below(sizes.size());
    const double before = sampling_weights(sizes, alpha)(static_cast<Eigen::Index>(k));
    sizes[k] += 1 + rng.below(100);
    CHECK(sampling_weights(sizes, alpha)(static_cast<Eigen::Index>(k)) >= before);
  }
}

TEST_CASE("schedule_epoch") {
  const std::vector<TaskSpec> one{{"slu", 10, 1.0}};
  const Schedule s1 = schedule_epoch(one, 25, 0.5, 1);
  CHECK(s1.batch_counts == std::vector<std::size_t>{25});
  for (std::size_t b = 0; b < s1.batches.size(); ++b) {
    CHECK(s1.batches[b].task == 0);
    CHECK(s1.batches[b].batch == b);
  }

  const std::vector<TaskSpec> two{{"slu", 500, 1.0}, {"mlm", 500, 0.01}};
  const Schedule a = schedule_epoch(two, 10000, 0.5, 9);
  const Schedule b = schedule_epoch(two, 10000, 0.5, 9);
  CHECK(a.batches == b.batches);
  CHECK(std::fabs(a.batch_counts[0] / 10000.0 - 0.5) <= 0.02);
  CHECK(a.batch_counts[0] + a.batch_counts[1] == 10000);
  CHECK(schedule_epoch(two, 10000, 0.5, 10).batches != a.batches);

  CHECK_THROWS_AS(schedule_epoch(two, 0, 0.5, 1), StructuralError);
  const std::vector<TaskSpec> bad{{"x", 3, -1.0}};
  CHECK_THROWS_AS(schedule_epoch(bad, 3, 0.5, 1), StructuralError);
}

TEST_CASE("property: draw frequencies stay within 3 sigma") {
  Rng rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TaskSpec> tasks;
    std::vector<std::size_t> sizes;
    for (std::size_t i = 0, n = 2 + rng.below(3); i < n; ++i) {
      sizes.push_back(1 + rng.below(5000));
      tasks.push_back({"t" + std::to_string(i), sizes.back(), 1.0});
    }
    const double alpha = 0.5;
    const std::size_t draws = 20000;
    const Schedule s = schedule_epoch(tasks, draws, alpha, 100 + static_cast<std::uint64_t>(trial));
    const Eigen::VectorXd p = sampling_weights(sizes, alpha);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const double pi = p(static_cast<Eigen::Index>(i));
      const double freq = static_cast<double>(s.batch_counts[i]) / draws;
      CHECK(std::fabs(freq - pi) < 3.0 * std::sqrt(pi * (1 - pi) / draws) + 1e-12);
    }
  }
}

TEST_CASE("TaskBatcher covers every instance once per pass") {
  TaskBatcher batcher(10, 5, 3);
  std::vector<int> seen(10, 0);
  for (int k = 0; k < 2; ++k) {
    for (auto i : batcher.next()) seen[i] += 1;
  }
  CHECK(seen == std::vector<int>(10, 1));
  CHECK(batcher.reshuffles() == 1);
  batcher.next();
  CHECK(batcher.reshuffles() == 2);

  TaskBatcher small(3, 8, 1);
  CHECK(small.next().size() == 3);

  TaskBatcher x(20, 4, 5), y(20, 4, 5);
  for (int k = 0; k < 12; ++k) CHECK(x.next() == y.next());
  CHECK_THROWS_AS(TaskBatcher(0, 1, 1), StructuralError);
}
