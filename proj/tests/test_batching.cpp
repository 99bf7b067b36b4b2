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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "forge/batching.hpp"
#include "forge/rng.hpp"

using forge::Batch;
using forge::UtteranceRef;
using forge::WorkerAssignment;

namespace {

std::vector<UtteranceRef> utts_of(const std::vector<double>& durations) {
  std::vector<UtteranceRef> out;
  for (size_t i = 0; i < durations.size(); ++i) {
    out.push_back({"u" + std::to_string(i), durations[i]});
  }
  return out;
}

// Every utterance lands in exactly one batch and footprints stay in budget.
void check_partition(std::span<const UtteranceRef> utts,
                     std::span<const Batch> batches, double budget) {
  std::multiset<std::string> in, out;
  for (const auto& u : utts) in.insert(u.id);
  for (const auto& b : batches) {
    REQUIRE(!b.members.empty());
    double max_len = 0.0;
    for (const auto& m : b.members) {
      out.insert(m.id);
      max_len = std::max(max_len, m.duration_s);
    }
    CHECK(b.max_len_s == doctest::Approx(max_len));
    CHECK(b.padded_footprint_s() <= budget + 1e-9);
  }
  CHECK(in == out);
}

}  // namespace

TEST_CASE("equal lengths pack into a single full batch") {
  const auto utts = utts_of(std::vector<double>(10, 10.0));
  const auto batches = forge::make_batches(utts, 100.0);
  REQUIRE(batches.size() == 1);
  CHECK(batches[0].members.size() == 10);
  CHECK(batches[0].max_len_s == doctest::Approx(10.0));
  CHECK(batches[0].padded_footprint_s() == doctest::Approx(100.0));
  CHECK(forge::padding_waste(batches) == doctest::Approx(0.0));
}

TEST_CASE("first fit over sorted durations groups similar lengths") {
  // Sorted: 40, 39, 2, 2.  40s batch takes 39 (2*40=80 <= 80); the 2s pair
  // opens a second batch because 3*40 > 80.
  const auto utts = utts_of({2.0, 40.0, 2.0, 39.0});
  const auto batches = forge::make_batches(utts, 80.0);
  REQUIRE(batches.size() == 2);
  CHECK(batches[0].members.size() == 2);
  CHECK(batches[0].max_len_s == doctest::Approx(40.0));
  CHECK(batches[0].members[0].duration_s == doctest::Approx(40.0));
  CHECK(batches[0].members[1].duration_s == doctest::Approx(39.0));
  CHECK(batches[1].members.size() == 2);
  CHECK(batches[1].max_len_s == doctest::Approx(2.0));
  check_partition(utts, batches, 80.0);
}

TEST_CASE("equal durations tie-break by id ascending") {
  std::vector<UtteranceRef> utts = {{"b", 5.0}, {"a", 5.0}, {"c", 5.0}};
  const auto batches = forge::make_batches(utts, 100.0);
  REQUIRE(batches.size() == 1);
  CHECK(batches[0].members[0].id == "a");
  CHECK(batches[0].members[1].id == "b");
  CHECK(batches[0].members[2].id == "c");
}

TEST_CASE("an utterance longer than the budget is rejected") {
  const auto utts = utts_of({5.0, 101.0});
  CHECK_THROWS_AS(forge::make_batches(utts, 100.0), std::invalid_argument);
}

TEST_CASE("random corpora always partition within budget") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    forge::Rng rng(seed);
    std::vector<double> durations;
    for (int i = 0; i < 300; ++i) {
      durations.push_back(0.5 + rng.uniform01() * 30.0);
    }
    const auto utts = utts_of(durations);
    const auto batches = forge::make_batches(utts, 100.0);
    check_partition(utts, batches, 100.0);
    const double waste = forge::padding_waste(batches);
    CHECK(waste >= 0.0);
    CHECK(waste < 1.0);
  }
}

TEST_CASE("padding waste is the padded fraction") {
  CHECK(forge::padding_waste({}) == doctest::Approx(0.0));

  Batch b;
  b.members = {{"a", 10.0}, {"b", 5.0}};
  b.max_len_s = 10.0;
  const std::vector<Batch> one = {b};
  // Footprint 20, content 15.
  CHECK(forge::padding_waste(one) == doctest::Approx(0.25));

  Batch c;
  c.members = {{"c", 10.0}};
  c.max_len_s = 10.0;
  const std::vector<Batch> two = {b, c};
  // Footprint 30, content 25.
  CHECK(forge::padding_waste(two) == doctest::Approx(1.0 - 25.0 / 30.0));
}

TEST_CASE("sorting before packing wastes no more than arrival order") {
  // Reference packer: identical first-fit but over the raw input order.
  const auto first_fit_unsorted = [](std::span<const UtteranceRef> utts,
                                     double budget) {
    std::vector<Batch> batches;
    for (const auto& u : utts) {
      bool placed = false;
      for (auto& b : batches) {
        const double max_len = std::max(b.max_len_s, u.duration_s);
        if (static_cast<double>(b.members.size() + 1) * max_len <= budget) {
          b.members.push_back(u);
          b.max_len_s = max_len;
          placed = true;
          break;
        }
      }
      if (!placed) batches.push_back({{u}, u.duration_s});
    }
    return batches;
  };

  for (uint64_t seed = 0; seed < 10; ++seed) {
    const auto utts = forge::lognormal_utterances(200, 8.0, 0.8, 40.0, seed);
    const auto sorted_batches = forge::make_batches(utts, 100.0);
    const auto arrival_batches = first_fit_unsorted(utts, 100.0);
    CHECK(forge::padding_waste(sorted_batches) <=
          forge::padding_waste(arrival_batches) + 1e-12);
  }
}

namespace {

Batch batch_of(double max_len, size_t members = 1) {
  Batch b;
  b.max_len_s = max_len;
  for (size_t i = 0; i < members; ++i) {
    b.members.push_back({"m" + std::to_string(i), max_len});
  }
  return b;
}

void check_assignment_shape(const WorkerAssignment& wa, size_t n_batches,
                            int workers) {
  CHECK(wa.workers == workers);
  std::vector<bool> seen(n_batches, false);
  size_t count = 0;
  for (const auto& step : wa.steps) {
    REQUIRE(step.size() == static_cast<size_t>(workers));
    for (const int idx : step) {
      if (idx < 0) continue;
      REQUIRE(static_cast<size_t>(idx) < n_batches);
      CHECK_FALSE(seen[idx]);
      seen[idx] = true;
      ++count;
    }
  }
  CHECK(count == n_batches);
}

}  // namespace

TEST_CASE("length aware distribution sorts by max length") {
  std::vector<Batch> batches = {batch_of(2.0), batch_of(30.0), batch_of(1.0),
                                batch_of(29.0)};
  const WorkerAssignment wa = forge::distribute_length_aware(batches, 2);
  REQUIRE(wa.steps.size() == 2);
  // Step 0 pairs the two long batches, step 1 the two short ones.
  CHECK(wa.steps[0] == std::vector<int>{1, 3});
  CHECK(wa.steps[1] == std::vector<int>{0, 2});
  check_assignment_shape(wa, batches.size(), 2);
}

TEST_CASE("length aware ties preserve input order") {
  std::vector<Batch> batches = {batch_of(5.0), batch_of(5.0), batch_of(5.0)};
  const WorkerAssignment wa = forge::distribute_length_aware(batches, 2);
  REQUIRE(wa.steps.size() == 2);
  CHECK(wa.steps[0] == std::vector<int>{0, 1});
  CHECK(wa.steps[1] == std::vector<int>{2, -1});
}

TEST_CASE("random distribution covers every batch exactly once") {
  std::vector<Batch> batches;
  for (int i = 0; i < 23; ++i) batches.push_back(batch_of(1.0 + i));
  forge::Rng rng(5);
  const WorkerAssignment wa = forge::distribute_random(batches, 4, rng);
  check_assignment_shape(wa, batches.size(), 4);
  REQUIRE(wa.steps.size() == 6);
  CHECK(wa.steps.back()[3] == -1);
}

TEST_CASE("a single worker never waits") {
  std::vector<Batch> batches = {batch_of(3.0), batch_of(1.0), batch_of(7.0)};
  const WorkerAssignment wa = forge::distribute_length_aware(batches, 1);
  const forge::SimReport rep = forge::simulate_sync_wait(wa, batches);
  CHECK(rep.total_sync_wait_s == doctest::Approx(0.0));
  CHECK(rep.total_work_s == doctest::Approx(11.0));
}

TEST_CASE("sync wait is the gap to the slowest worker") {
  std::vector<Batch> batches = {batch_of(3.0), batch_of(1.0)};
  WorkerAssignment wa;
  wa.workers = 2;
  wa.steps = {{0, 1}};
  const forge::SimReport rep = forge::simulate_sync_wait(wa, batches);
  CHECK(rep.total_work_s == doctest::Approx(4.0));
  CHECK(rep.total_sync_wait_s == doctest::Approx(2.0));
  REQUIRE(rep.per_step_wait_s.size() == 1);
  CHECK(rep.per_step_wait_s[0] == doctest::Approx(2.0));

  // Idle slots wait for the whole step.
  const std::vector<Batch> solo = {batch_of(3.0)};
  WorkerAssignment idle;
  idle.workers = 2;
  idle.steps = {{0, -1}};
  const forge::SimReport rep2 = forge::simulate_sync_wait(idle, solo);
  CHECK(rep2.total_sync_wait_s == doctest::Approx(3.0));
}

TEST_CASE("gradient accumulation amortises imbalance across the window") {
  // Two steps with opposite skew cancel when summed before the barrier.
  std::vector<Batch> batches = {batch_of(3.0), batch_of(1.0), batch_of(1.0),
                                batch_of(3.0)};
  WorkerAssignment wa;
  wa.workers = 2;
  wa.steps = {{0, 1}, {2, 3}};

  const forge::SimReport sync = forge::simulate_sync_wait(wa, batches);
  CHECK(sync.total_sync_wait_s == doctest::Approx(4.0));

  const forge::SimReport accum = forge::simulate_grad_accum(wa, batches, 2);
  CHECK(accum.total_sync_wait_s == doctest::Approx(0.0));
  CHECK(accum.total_work_s == doctest::Approx(8.0));
}

TEST_CASE("accumulation of one equals per-step synchronisation") {
  const auto batches = forge::synthetic_batches(60, 100.0, 8.0, 0.8, 3);
  forge::Rng rng(9);
  const WorkerAssignment wa = forge::distribute_random(batches, 4, rng);
  const forge::SimReport a = forge::simulate_sync_wait(wa, batches);
  const forge::SimReport b = forge::simulate_grad_accum(wa, batches, 1);
  CHECK(a.total_sync_wait_s == doctest::Approx(b.total_sync_wait_s));
  CHECK(a.total_work_s == doctest::Approx(b.total_work_s));
}

TEST_CASE("a partial trailing window still synchronises") {
  // 3 steps, accum 2: windows {0,1} and {2}.
  std::vector<Batch> batches = {batch_of(3.0), batch_of(1.0), batch_of(1.0),
                                batch_of(3.0), batch_of(5.0), batch_of(2.0)};
  WorkerAssignment wa;
  wa.workers = 2;
  wa.steps = {{0, 1}, {2, 3}, {4, 5}};
  const forge::SimReport rep = forge::simulate_grad_accum(wa, batches, 2);
  // Window 1: both workers sum to 4, no wait.  Window 2: 5 vs 2 -> wait 3.
  CHECK(rep.total_sync_wait_s == doctest::Approx(3.0));
}

TEST_CASE("longer accumulation windows never increase waiting") {
  const auto batches = forge::synthetic_batches(200, 100.0, 8.0, 0.8, 11);
  forge::Rng rng(13);
  const WorkerAssignment wa = forge::distribute_random(batches, 8, rng);
  double prev = forge::simulate_grad_accum(wa, batches, 1).total_sync_wait_s;
  for (const int accum : {2, 4, 8, 16}) {
    const double wait =
        forge::simulate_grad_accum(wa, batches, accum).total_sync_wait_s;
    CHECK(wait <= prev + 1e-9);
    prev = wait;
  }
}

TEST_CASE("invalid assignments are rejected by the simulator") {
  std::vector<Batch> batches = {batch_of(1.0), batch_of(2.0)};
  WorkerAssignment dup;
  dup.workers = 2;
  dup.steps = {{0, 0}};
  CHECK_THROWS_AS(forge::simulate_grad_accum(dup, batches, 1),
                  std::invalid_argument);

  WorkerAssignment missing;
  missing.workers = 2;
  missing.steps = {{0, -1}};
  CHECK_THROWS_AS(forge::simulate_grad_accum(missing, batches, 1),
                  std::invalid_argument);

  WorkerAssignment ragged;
  ragged.workers = 2;
  ragged.steps = {{0, 1, -1}};
  CHECK_THROWS_AS(forge::simulate_grad_accum(ragged, batches, 1),
                  std::invalid_argument);

  CHECK_THROWS_AS(forge::simulate_grad_accum(dup, batches, 0),
                  std::invalid_argument);
}

TEST_CASE("length aware scheduling beats random shuffling on skewed data") {
  const auto utts = forge::lognormal_utterances(600, 8.0, 0.8, 40.0, 21);
  const auto batches = forge::make_batches(utts, 100.0);
  REQUIRE(batches.size() >= 40);

  const WorkerAssignment aware_wa = forge::distribute_length_aware(batches, 8);
  const double aware_wait =
      forge::simulate_sync_wait(aware_wa, batches).total_sync_wait_s;

  double random_total = 0.0;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    forge::Rng rng(17 + seed);
    const WorkerAssignment wa = forge::distribute_random(batches, 8, rng);
    random_total += forge::simulate_sync_wait(wa, batches).total_sync_wait_s;
  }
  CHECK(aware_wait < random_total / 5.0);
}

TEST_CASE("synthetic utterances respect the duration cap") {
  const auto utts = forge::lognormal_utterances(500, 8.0, 0.8, 40.0, 0);
  REQUIRE(utts.size() == 500);
  CHECK(utts[0].id == "u00000");
  CHECK(utts[499].id == "u00499");
  double sum_log = 0.0;
  for (const auto& u : utts) {
    CHECK(u.duration_s > 0.0);
    CHECK(u.duration_s <= 40.0);
    sum_log += std::log(u.duration_s);
  }
  // Median 8s => mean log duration near log(8), loosely.
  CHECK(sum_log / 500.0 == doctest::Approx(std::log(8.0)).epsilon(0.1));

  // Deterministic in the seed.
  const auto again = forge::lognormal_utterances(500, 8.0, 0.8, 40.0, 0);
  for (size_t i = 0; i < utts.size(); ++i) {
    CHECK(utts[i].duration_s == again[i].duration_s);
  }
}

TEST_CASE("synthetic batches fill toward the budget") {
  const auto batches = forge::synthetic_batches(100, 100.0, 8.0, 0.8, 7);
  REQUIRE(batches.size() == 100);
  CHECK(batches[0].members[0].id == "b00000.000");
  for (const auto& b : batches) {
    REQUIRE(!b.members.empty());
    CHECK(b.padded_footprint_s() <= 100.0 + 1e-9);
    CHECK(b.members[0].duration_s == doctest::Approx(b.max_len_s));
    for (const auto& m : b.members) {
      CHECK(m.duration_s <= b.max_len_s + 1e-12);
      CHECK(m.duration_s >= 0.6 * b.max_len_s - 1e-9);
    }
  }
  // Every batch really uses most of the budget (count = floor(budget/max)).
  for (const auto& b : batches) {
    const double fp = b.padded_footprint_s();
    CHECK(fp > 100.0 - b.max_len_s - 1e-9);
  }
}
