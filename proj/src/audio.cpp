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

#include "forge/audio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace forge {

void validate(const Waveform& w) {
  if (w.sample_rate <= 0) {
    throw std::invalid_argument("waveform sample rate must be positive, got " +
                                std::to_string(w.sample_rate));
  }
  for (float s : w.samples) {
    if (!std::isfinite(s)) {
      throw std::invalid_argument("waveform contains a non-finite sample");
    }
  }
}

double energy(std::span<const float> samples) {
  double acc = 0.0;
  for (float s : samples) acc += static_cast<double>(s) * s;
  return acc;
}

double energy(const Waveform& w) { return energy(w.samples); }

std::vector<double> frame_energies(std::span<const float> samples,
                                   size_t frame_len, size_t hop) {
  if (frame_len == 0 || hop == 0) {
    throw std::invalid_argument("frame_len and hop must be positive");
  }
  const size_t n = samples.size();
  if (n == 0) return {};
  const size_t count = (n + hop - 1) / hop;
  std::vector<double> out(count);
  for (size_t f = 0; f < count; ++f) {
    const size_t begin = f * hop;
    const size_t end = std::min(begin + frame_len, n);
    out[f] = energy(samples.subspan(begin, end - begin));
  }
  return out;
}

namespace {

// Zero crossings kept on each side of the sinc kernel and the Kaiser shape
// parameter.  Values give > 80 dB stopband attenuation, plenty for speech.
constexpr double kZeroCrossings = 16.0;
constexpr double kKaiserBeta = 8.0;

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(x) / x;
}

}  // namespace

Waveform resample(const Waveform& w, int target_hz) {
  validate(w);
  if (target_hz <= 0) {
    throw std::invalid_argument("target sample rate must be positive");
  }
  if (target_hz == w.sample_rate) return w;
  const int64_t n = static_cast<int64_t>(w.samples.size());
  Waveform out;
  out.sample_rate = target_hz;
  if (n == 0) return out;

  const double src = w.sample_rate;
  const double dst = target_hz;
  // Cutoff relative to the source Nyquist; < 1 only when downsampling.
  const double cutoff = std::min(1.0, dst / src);
  const double half_width = kZeroCrossings / cutoff;
  const double i0_beta = std::cyl_bessel_i(0.0, kKaiserBeta);

  const int64_t out_len =
      (n * static_cast<int64_t>(target_hz) + w.sample_rate - 1) /
      w.sample_rate;
  out.samples.resize(static_cast<size_t>(out_len));

  for (int64_t j = 0; j < out_len; ++j) {
    const double t_in = static_cast<double>(j) * src / dst;
    const int64_t lo =
        std::max<int64_t>(0, static_cast<int64_t>(std::ceil(t_in - half_width)));
    const int64_t hi = std::min<int64_t>(
        n - 1, static_cast<int64_t>(std::floor(t_in + half_width)));
    double acc = 0.0;
    for (int64_t i = lo; i <= hi; ++i) {
      const double x = t_in - static_cast<double>(i);
      const double r = std::abs(x) / half_width;
      if (r >= 1.0) continue;
      const double window =
          std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - r * r)) /
          i0_beta;
      acc += static_cast<double>(w.samples[static_cast<size_t>(i)]) * cutoff *
             sinc(M_PI * cutoff * x) * window;
    }
    // Windowed-sinc interpolation can ring slightly past full scale.
    out.samples[static_cast<size_t>(j)] =
        static_cast<float>(std::clamp(acc, -1.0, 1.0));
  }
  return out;
}

}  // namespace forge
