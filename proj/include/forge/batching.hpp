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

#ifndef FORGE_BATCHING_HPP_
#define FORGE_BATCHING_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "forge/audio.hpp"
#include "forge/rng.hpp"

namespace forge {

struct UtteranceRef {
  std::string id;
  double duration_s = 0.0;
};

// A padded minibatch.  Every member is padded to the longest member, so the
// memory/compute footprint is members * max_len.
struct Batch {
  std::vector<UtteranceRef> members;
  double max_len_s = 0.0;

  double padded_footprint_s() const {
    return static_cast<double>(members.size()) * max_len_s;
  }
  double total_duration_s() const;
};

// Packs utterances into batches by first-fit over durations sorted
// descending, keeping every padded footprint within budget_s.  Sorting
// first means similar lengths land together, minimising padding.  Throws
// std::invalid_argument if any single utterance exceeds the budget.
std::vector<Batch> make_batches(std::span<const UtteranceRef> utts,
                                double budget_s = 100.0);

// Fraction of the summed padded footprint that is padding.  0 when all
// batch members have equal length; 0 for an empty set.
double padding_waste(std::span<const Batch> batches);

// Batch indices arranged into steps of `workers` slots; -1 marks an idle
// slot in the final step.
struct WorkerAssignment {
  int workers = 1;
  std::vector<std::vector<int>> steps;
};

// Batches sorted by max length descending (ties by index), dealt into
// consecutive steps, so each step holds batches of similar length.
WorkerAssignment distribute_length_aware(std::span<const Batch> batches,
                                         int workers);

// Fisher-Yates shuffle of the batch order, then the same dealing.
WorkerAssignment distribute_random(std::span<const Batch> batches, int workers,
                                   Rng& rng);

// Per-batch cost model for the simulators; the default is the padded
// footprint in seconds (compute scales with padded size).
using CostModel = std::function<double(const Batch&)>;
double default_cost(const Batch& b);

struct SimReport {
  double total_work_s = 0.0;       // sum of batch costs
  double total_sync_wait_s = 0.0;  // idle time spent at barriers
  double padding_waste = 0.0;
  std::vector<double> per_step_wait_s;
};

// Workers synchronise after every step: each worker idles for the gap to
// the slowest worker of its step.
SimReport simulate_sync_wait(const WorkerAssignment& assignment,
                             std::span<const Batch> batches,
                             const CostModel& cost = default_cost);

// Workers synchronise only every accum_steps steps (gradient accumulation);
// a final partial window still ends with a barrier.  accum_steps = 1
// reduces to simulate_sync_wait.
SimReport simulate_grad_accum(const WorkerAssignment& assignment,
                              std::span<const Batch> batches, int accum_steps,
                              const CostModel& cost = default_cost);

// Synthetic utterances with log-normal durations (median_s, sigma in log
// space), rejection-sampled to at most max_s.  Stream: (seed, "bench",
// "utterances").
std::vector<UtteranceRef> lognormal_utterances(size_t n, double median_s,
                                               double sigma, double max_s,
                                               uint64_t seed);

// Synthetic pre-packed batches for scheduler benchmarks: each batch has a
// log-normal max length and is filled to the budget with members between
// 60% and 100% of that length.  Stream: (seed, "bench", "batches").
std::vector<Batch> synthetic_batches(size_t n, double budget_s,
                                     double median_s, double sigma,
                                     uint64_t seed);

}  // namespace forge

#endif  // FORGE_BATCHING_HPP_
