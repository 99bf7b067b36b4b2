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

#ifndef FORGE_AUDIO_HPP_
#define FORGE_AUDIO_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace forge {

// Mono audio buffer.  Samples are float32; corpus audio read from disk is
// clamped to [-1, 1], but intermediate augmentation results may exceed that
// range and are only re-clamped when written as PCM.
struct Waveform {
  std::vector<float> samples;
  int sample_rate = 0;

  size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

struct Utterance {
  std::string id;
  Waveform waveform;
  std::string language = "und";

  double duration_s() const { return waveform.duration_s(); }
};

// Throws std::invalid_argument if the waveform has a non-positive sample
// rate or non-finite samples.
void validate(const Waveform& w);

// Signal energy: sum of squared samples (double accumulator).
double energy(std::span<const float> samples);
double energy(const Waveform& w);

// Energies of consecutive frames of frame_len samples taken every hop
// samples.  The last frame is zero-padded, so the count is ceil(n / hop).
std::vector<double> frame_energies(std::span<const float> samples,
                                   size_t frame_len, size_t hop);

// Kaiser-windowed sinc resampler.  Output length is
// ceil(n * target_hz / source_hz); a no-op when rates already match.
Waveform resample(const Waveform& w, int target_hz);

}  // namespace forge

#endif  // FORGE_AUDIO_HPP_
