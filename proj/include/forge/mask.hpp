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

#ifndef FORGE_MASK_HPP_
#define FORGE_MASK_HPP_

#include <cstdint>
#include <vector>

#include "forge/rng.hpp"

namespace forge {

// Span mask over a label sequence of num_frames frames.  Each start opens a
// span of span_len frames; spans may overlap and are clipped at the end of
// the sequence.
struct MaskSpec {
  std::vector<uint32_t> span_starts;  // sorted ascending, unique
  uint32_t span_len = 10;
  uint32_t num_frames = 0;

  // Number of frames covered by at least one span.
  size_t covered_frames() const;
};

// Draws round(p_mask * num_frames / span_len) distinct span starts without
// replacement via a partial Fisher-Yates shuffle, then sorts them.
// Requires num_frames > 0 and p_mask in [0, 1].
MaskSpec gen_mask(uint32_t num_frames, double p_mask, uint32_t span_len,
                  Rng& rng);

// Training-phase switch: the first warmup steps mask at a reduced
// probability with waveform augmentation disabled, after which the main
// masking probability applies and augmentation turns on.
struct ScheduleState {
  uint64_t step = 0;
  double p_mask = 0.8;
  bool augmentation_enabled = true;
};

ScheduleState schedule(uint64_t step);

inline constexpr uint64_t kScheduleWarmupSteps = 3000;
inline constexpr double kPMaskWarmup = 0.65;
inline constexpr double kPMaskMain = 0.8;

}  // namespace forge

#endif  // FORGE_MASK_HPP_
