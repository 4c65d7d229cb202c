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

#include "xslu/sampler.hpp"

#include <cmath>
#include <numeric>

#include "xslu/errors.hpp"

namespace xslu {

Eigen::VectorXd sampling_weights(std::span<const std::size_t> sizes, double alpha) {
  if (sizes.empty()) throw StructuralError("sampling_weights: no tasks");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw StructuralError("sampling_weights: alpha must be finite and nonnegative");
  }
  Eigen::VectorXd p(static_cast<Eigen::Index>(sizes.size()));
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw StructuralError("sampling_weights: task " + std::to_string(i) + " is empty");
    p(static_cast<Eigen::Index>(i)) = std::pow(static_cast<double>(sizes[i]), alpha);
  }
  return p / p.sum();
}

Schedule schedule_epoch(std::span<const TaskSpec> tasks, std::size_t batches_per_epoch,
                        double alpha, std::uint64_t seed) {
  if (batches_per_epoch == 0) throw StructuralError("schedule_epoch: zero batches requested");
  std::vector<std::size_t> sizes;
  Schedule s;
  s.seed = seed;
  for (const auto& t : tasks) {
    if (!(t.loss_weight >= 0.0)) throw StructuralError("task '" + t.name + "': negative loss weight");
    sizes.push_back(t.size);
    s.task_names.push_back(t.name);
  }
  const Eigen::VectorXd p = sampling_weights(sizes, alpha);
  std::vector<double> cdf(sizes.size());
  std::partial_sum(p.data(), p.data() + p.size(), cdf.begin());

  Rng rng(seed);
  s.batch_counts.assign(tasks.size(), 0);
  s.batches.reserve(batches_per_epoch);
  for (std::size_t b = 0; b < batches_per_epoch; ++b) {
    const double u = rng.uniform();
    std::size_t task = 0;
    while (task + 1 < cdf.size() && u >= cdf[task]) ++task;
    s.batches.push_back({task, s.batch_counts[task]++});
  }
  return s;
}

TaskBatcher::TaskBatcher(std::size_t size, std::size_t batch_size, std::uint64_t seed)
    : order_(size), batch_size_(batch_size), rng_(seed) {
  if (size == 0) throw StructuralError("TaskBatcher: empty task");
  if (batch_size == 0) throw StructuralError("TaskBatcher: zero batch size");
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  reshuffle();
}

void TaskBatcher::reshuffle() {
  rng_.shuffle(order_);
  cursor_ = 0;
  ++reshuffles_;
}

std::vector<std::size_t> TaskBatcher::next() {
  const std::size_t n = std::min(batch_size_, order_.size());
  std::vector<std::size_t> batch;
  batch.reserve(n);
  while (batch.size() < n) {
    if (cursor_ == order_.size()) reshuffle();
    batch.push_back(order_[cursor_++]);
  }
  return batch;
}

}  // namespace xslu
