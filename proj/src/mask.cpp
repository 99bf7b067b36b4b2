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

#include "forge/mask.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace forge {

size_t MaskSpec::covered_frames() const {
  size_t covered = 0;
  uint32_t open_end = 0;
  for (uint32_t s : span_starts) {
    const uint32_t end = std::min(num_frames, s + span_len);
    const uint32_t begin = std::max(s, open_end);
    if (end > begin) covered += end - begin;
    open_end = std::max(open_end, end);
  }
  return covered;
}

MaskSpec gen_mask(uint32_t num_frames, double p_mask, uint32_t span_len,
                  Rng& rng) {
  if (num_frames == 0) {
    throw std::invalid_argument("mask needs at least one frame");
  }
  if (p_mask < 0.0 || p_mask > 1.0) {
    throw std::invalid_argument("p_mask must lie in [0, 1]");
  }
  if (span_len == 0) {
    throw std::invalid_argument("span_len must be positive");
  }
  MaskSpec spec;
  spec.span_len = span_len;
  spec.num_frames = num_frames;

  const uint32_t count = static_cast<uint32_t>(
      std::llround(p_mask * num_frames / span_len));
  if (count == 0) return spec;

  // Partial Fisher-Yates: the first `count` slots hold a uniform sample of
  // start positions without replacement.
  std::vector<uint32_t> pool(num_frames);
  std::iota(pool.begin(), pool.end(), 0u);
  for (uint32_t i = 0; i < count; ++i) {
    const uint32_t j =
        i + static_cast<uint32_t>(rng.next_below(num_frames - i));
    std::swap(pool[i], pool[j]);
  }
  spec.span_starts.assign(pool.begin(), pool.begin() + count);
  std::sort(spec.span_starts.begin(), spec.span_starts.end());
  return spec;
}

ScheduleState schedule(uint64_t step) {
  ScheduleState st;
  st.step = step;
  if (step < kScheduleWarmupSteps) {
    st.p_mask = kPMaskWarmup;
    st.augmentation_enabled = false;
  } else {
    st.p_mask = kPMaskMain;
    st.augmentation_enabled = true;
  }
  return st;
}

}  // namespace forge
