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

#ifndef FORGE_VAD_HPP_
#define FORGE_VAD_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "forge/audio.hpp"

namespace forge {

// Half-open sample range [start, end) within a source recording.
struct Segment {
  int64_t start = 0;
  int64_t end = 0;

  int64_t length() const { return end - start; }
};

struct VadConfig {
  double frame_ms = 30.0;
  // Speech when frame energy > threshold_factor * noise floor, where the
  // floor is the 10th percentile of frame energies (at least 1e-10).
  double threshold_factor = 3.0;
  double min_speech_ms = 200.0;
  double min_gap_ms = 300.0;
  double pad_ms = 100.0;
};

// Energy-based voice activity detection.  Returns sorted, non-overlapping
// segments; scaling the signal by any positive constant leaves the result
// unchanged because the threshold is relative to the noise floor.
std::vector<Segment> vad(const Waveform& w, const VadConfig& cfg = {});

// Cuts segments out of a recording.  Utterance ids are
// "<id_prefix><4-digit ordinal>"; throws std::out_of_range when a segment
// does not fit inside the recording.
std::vector<Utterance> extract_utterances(const Waveform& w,
                                          std::span<const Segment> segments,
                                          const std::string& id_prefix,
                                          const std::string& language);

// Drops utterances longer than max_duration_s, preserving order.
std::vector<Utterance> filter_max_duration(std::vector<Utterance> utterances,
                                           double max_duration_s = 40.0);

// One JSON object per line: {"id": ..., "start_s": ..., "end_s": ...}.
void write_segments_jsonl(std::span<const Segment> segments, int sample_rate,
                          const std::string& id_prefix,
                          const std::filesystem::path& path);

}  // namespace forge

#endif  // FORGE_VAD_HPP_
