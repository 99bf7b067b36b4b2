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

#ifndef FORGE_SCORING_HPP_
#define FORGE_SCORING_HPP_

#include <span>
#include <string>
#include <vector>

namespace forge {

// One metric with the evaluated model's score, the best published score and
// the trivial filterbank baseline.
struct MetricScores {
  std::string name;
  double model = 0.0;
  double sota = 0.0;
  double filterbank = 0.0;
};

struct TaskScores {
  std::string name;
  std::vector<MetricScores> metrics;
};

// Aggregate benchmark score: 1000/T * sum over tasks of the mean, over the
// task's metrics, of (model - filterbank) / (sota - filterbank).  Scoring
// 1000 means matching the best published result on every metric; 0 means
// matching the baseline.  Invariant under any affine rescaling of a
// metric.  Throws std::invalid_argument for an empty task list, a task
// without metrics, or a metric where sota equals the baseline.
double superb_score(std::span<const TaskScores> tasks);

}  // namespace forge

#endif  // FORGE_SCORING_HPP_
