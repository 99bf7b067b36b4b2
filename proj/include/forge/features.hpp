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

#ifndef FORGE_FEATURES_HPP_
#define FORGE_FEATURES_HPP_

#include <cstddef>
#include <vector>

#include "forge/audio.hpp"

namespace forge {

struct LogMelConfig {
  int dim = 80;
  double window_ms = 25.0;
  double hop_ms = 20.0;
};

// Row-major frames x dim matrix of float features.
struct FeatureMatrix {
  size_t frames = 0;
  size_t dim = 0;
  double frame_hop_ms = 20.0;
  std::vector<float> data;

  float* row(size_t t) { return data.data() + t * dim; }
  const float* row(size_t t) const { return data.data() + t * dim; }
};

// Log mel filterbank energies.  Periodic Hann window, power spectrum over
// the next power of two above the window length, triangular filters equally
// spaced on the HTK mel scale (1127 * ln(1 + f/700)) from 0 to Nyquist,
// energies floored at 1e-10 before the log.  The frame count is
// ceil(n / hop): the tail is zero-padded, never dropped.
FeatureMatrix logmel(const Waveform& w, const LogMelConfig& cfg = {});

}  // namespace forge

#endif  // FORGE_FEATURES_HPP_
