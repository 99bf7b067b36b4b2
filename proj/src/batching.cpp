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

#include "forge/batching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace forge {

double Batch::total_duration_s() const {
  double s = 0.0;
  for (const UtteranceRef& u : members) s += u.duration_s;
  return s;
}

std::vector<Batch> make_batches(std::span<const UtteranceRef> utts,
                                double budget_s) {
  if (budget_s <= 0.0) {
    throw std::invalid_argument("batch budget must be positive");
  }
  for (const UtteranceRef& u : utts) {
    if (u.duration_s > budget_s) {
      throw std::invalid_argument("utterance '" + u.id + "' (" +
                                  std::to_string(u.duration_s) +
                                  " s) exceeds the batch budget of " +
                                  std::to_string(budget_s) + " s");
    }
    if (u.duration_s <= 0.0) {
      throw std::invalid_argument("utterance '" + u.id +
                                  "' has non-positive duration");
    }
  }

  std::vector<size_t> order(utts.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&utts](size_t a, size_t b) {
    if (utts[a].duration_s != utts[b].duration_s) {
      return utts[a].duration_s > utts[b].duration_s;
    }
    return utts[a].id < utts[b].id;
  });

  // First-fit over descending durations: because durations only shrink, a
  // batch's max length is fixed by its first member and the padded
  // footprint check is (members + 1) * max_len.
  std::vector<Batch> batches;
  for (size_t idx : order) {
    const UtteranceRef& u = utts[idx];
    bool placed = false;
    for (Batch& b : batches) {
      const double max_len = std::max(b.max_len_s, u.duration_s);
      if (static_cast<double>(b.members.size() + 1) * max_len <= budget_s) {
        b.members.push_back(u);
        b.max_len_s = max_len;
        placed = true;
        break;
      }
    }
    if (!placed) {
      batches.push_back({{u}, u.duration_s});
    }
  }
  return batches;
}

double padding_waste(std::span<const Batch> batches) {
  double footprint = 0.0;
  double duration = 0.0;
  for (const Batch& b : batches) {
    footprint += b.padded_footprint_s();
    duration += b.total_duration_s();
  }
  if (footprint <= 0.0) return 0.0;
  return 1.0 - duration / footprint;
}

namespace {

WorkerAssignment chunk_order(const std::vector<int>& order, int workers) {
  WorkerAssignment out;
  out.workers = workers;
  for (size_t i = 0; i < order.size(); i += static_cast<size_t>(workers)) {
    std::vector<int> row(order.begin() + i,
                         order.begin() +
                             std::min(order.size(), i + static_cast<size_t>(workers)));
    row.resize(static_cast<size_t>(workers), -1);
    out.steps.push_back(std::move(row));
  }
  return out;
}

void check_workers(int workers) {
  if (workers <= 0) {
    throw std::invalid_argument("worker count must be positive");
  }
}

// Every batch index must appear exactly once across the steps.
void check_assignment(const WorkerAssignment& assignment, size_t num_batches) {
  std::vector<char> seen(num_batches, 0);
  size_t count = 0;
  for (const auto& row : assignment.steps) {
    if (row.size() != static_cast<size_t>(assignment.workers)) {
      throw std::invalid_argument("assignment row width != worker count");
    }
    for (int b : row) {
      if (b < 0) continue;
      if (static_cast<size_t>(b) >= num_batches || seen[static_cast<size_t>(b)]) {
        throw std::invalid_argument("assignment is not a partition of batches");
      }
      seen[static_cast<size_t>(b)] = 1;
      ++count;
    }
  }
  if (count != num_batches) {
    throw std::invalid_argument("assignment misses some batches");
  }
}

}  // namespace

WorkerAssignment distribute_length_aware(std::span<const Batch> batches,
                                         int workers) {
  check_workers(workers);
  std::vector<int> order(batches.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&batches](int a, int b) {
    if (batches[static_cast<size_t>(a)].max_len_s !=
        batches[static_cast<size_t>(b)].max_len_s) {
      return batches[static_cast<size_t>(a)].max_len_s >
             batches[static_cast<size_t>(b)].max_len_s;
    }
    return a < b;
  });
  return chunk_order(order, workers);
}

WorkerAssignment distribute_random(std::span<const Batch> batches, int workers,
                                   Rng& rng) {
  check_workers(workers);
  std::vector<int> order(batches.size());
  std::iota(order.begin(), order.end(), 0);
  for (size_t i = 0; i + 1 < order.size(); ++i) {
    const size_t j = i + static_cast<size_t>(rng.next_below(order.size() - i));
    std::swap(order[i], order[j]);
  }
  return chunk_order(order, workers);
}

double default_cost(const Batch& b) { return b.padded_footprint_s(); }

SimReport simulate_grad_accum(const WorkerAssignment& assignment,
                              std::span<const Batch> batches, int accum_steps,
                              const CostModel& cost) {
  if (accum_steps <= 0) {
    throw std::invalid_argument("accum_steps must be positive");
  }
  check_assignment(assignment, batches.size());

  SimReport report;
  report.padding_waste = padding_waste(batches);
  for (const Batch& b : batches) report.total_work_s += cost(b);

  const size_t w = static_cast<size_t>(assignment.workers);
  const size_t window = static_cast<size_t>(accum_steps);
  for (size_t w0 = 0; w0 < assignment.steps.size(); w0 += window) {
    const size_t w1 = std::min(assignment.steps.size(), w0 + window);
    std::vector<double> sums(w, 0.0);
    for (size_t s = w0; s < w1; ++s) {
      for (size_t k = 0; k < w; ++k) {
        const int b = assignment.steps[s][k];
        if (b >= 0) sums[k] += cost(batches[static_cast<size_t>(b)]);
      }
    }
    const double slowest = *std::max_element(sums.begin(), sums.end());
    double wait = 0.0;
    for (double s : sums) wait += slowest - s;
    report.per_step_wait_s.push_back(wait);
    report.total_sync_wait_s += wait;
  }
  return report;
}

SimReport simulate_sync_wait(const WorkerAssignment& assignment,
                             std::span<const Batch> batches,
                             const CostModel& cost) {
  return simulate_grad_accum(assignment, batches, 1, cost);
}

std::vector<UtteranceRef> lognormal_utterances(size_t n, double median_s,
                                               double sigma, double max_s,
                                               uint64_t seed) {
  if (median_s <= 0.0 || sigma < 0.0 || max_s < median_s) {
    throw std::invalid_argument("bad log-normal duration parameters");
  }
  Rng rng = stream(seed, "bench", "utterances");
  const double mu = std::log(median_s);
  std::vector<UtteranceRef> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    double dur;
    do {
      dur = std::exp(mu + sigma * rng.gaussian());
    } while (dur > max_s);
    char id[16];
    std::snprintf(id, sizeof(id), "u%05zu", i);
    out.push_back({id, dur});
  }
  return out;
}

std::vector<Batch> synthetic_batches(size_t n, double budget_s,
                                     double median_s, double sigma,
                                     uint64_t seed) {
  if (median_s <= 0.0 || sigma < 0.0 || budget_s < median_s) {
    throw std::invalid_argument("bad synthetic batch parameters");
  }
  Rng rng = stream(seed, "bench", "batches");
  const double mu = std::log(median_s);
  std::vector<Batch> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    double max_len;
    do {
      max_len = std::exp(mu + sigma * rng.gaussian());
    } while (max_len > budget_s);
    const size_t count = static_cast<size_t>(
        std::max(1.0, std::floor(budget_s / max_len)));
    Batch b;
    b.max_len_s = max_len;
    b.members.reserve(count);
    for (size_t m = 0; m < count; ++m) {
      char id[24];
      std::snprintf(id, sizeof(id), "b%05zu.%03zu", i, m);
      const double dur = m == 0 ? max_len : max_len * rng.uniform(0.6, 1.0);
      b.members.push_back({id, dur});
    }
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace forge
