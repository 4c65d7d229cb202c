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
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xslu/rng.hpp"

namespace xslu {

/// One task of a multi-task run. loss_weight multiplies the task's mean
/// loss; the auxiliary MLM objective typically runs at 0.01 and each UD
/// subtask at 0.25.
struct TaskSpec {
  std::string name;
  std::size_t size = 0;
  double loss_weight = 1.0;
};

struct ScheduledBatch {
  std::size_t task = 0;   // index into the task list
  std::size_t batch = 0;  // running batch count within that task
  friend bool operator==(const ScheduledBatch&, const ScheduledBatch&) = default;
};

struct Schedule {
  std::vector<std::string> task_names;
  std::vector<ScheduledBatch> batches;
  std::vector<std::size_t> batch_counts;  // per task
  std::uint64_t seed = 0;
};

/// Multinomial task probabilities p_i = size_i^alpha / sum_j size_j^alpha.
Eigen::VectorXd sampling_weights(std::span<const std::size_t> sizes, double alpha);

/// Draws the task of every batch independently from sampling_weights.
Schedule schedule_epoch(std::span<const TaskSpec> tasks, std::size_t batches_per_epoch,
                        double alpha, std::uint64_t seed);

/// Hands out batches of instance indices for one task. Instance order is a
/// seeded permutation that is redrawn every time it runs out; a batch that
/// crosses the end continues in the next permutation.
class TaskBatcher {
 public:
  TaskBatcher(std::size_t size, std::size_t batch_size, std::uint64_t seed);

  std::vector<std::size_t> next();

  std::size_t size() const { return order_.size(); }
  std::size_t reshuffles() const { return reshuffles_; }

 private:
  void reshuffle();

  std::vector<std::size_t> order_;
  std::size_t batch_size_;
  std::size_t cursor_ = 0;
  std::size_t reshuffles_ = 0;
  Rng rng_;
};

}  // namespace xslu
