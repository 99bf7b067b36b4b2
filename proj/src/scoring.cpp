// Copyright 2026 The xeus-forge Authors.
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

#include "forge/scoring.hpp"

#include <stdexcept>

namespace forge {

double superb_score(std::span<const TaskScores> tasks) {
  if (tasks.empty()) {
    throw std::invalid_argument("score needs at least one task");
  }
  double task_sum = 0.0;
  for (const TaskScores& task : tasks) {
    if (task.metrics.empty()) {
      throw std::invalid_argument("task '" + task.name + "' has no metrics");
    }
    double metric_sum = 0.0;
    for (const MetricScores& metric : task.metrics) {
      const double denom = metric.sota - metric.filterbank;
      if (denom == 0.0) {
        throw std::invalid_argument("metric '" + metric.name +
                                    "' has equal best and baseline scores");
      }
      metric_sum += (metric.model - metric.filterbank) / denom;
    }
    task_sum += metric_sum / static_cast<double>(task.metrics.size());
  }
  return 1000.0 * task_sum / static_cast<double>(tasks.size());
}

}  // namespace forge
