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

#include "forge/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "forge/fft.hpp"

namespace forge {

namespace {

constexpr double kEnergyFloor = 1e-10;

double hz_to_mel(double hz) { return 1127.0 * std::log1p(hz / 700.0); }

// One triangular filter as a contiguous run of spectrum-bin weights.
struct MelFilter {
  size_t first_bin = 0;
  std::vector<double> weights;
};

std::vector<MelFilter> build_filterbank(int dim, size_t nfft, int sample_rate) {
  const size_t num_bins = nfft / 2 + 1;
  const double bin_hz = static_cast<double>(sample_rate) / nfft;
  const double mel_max = hz_to_mel(sample_rate / 2.0);
  // dim filters need dim + 2 equally spaced mel edge points.
  std::vector<double> edges(dim + 2);
  for (int i = 0; i < dim + 2; ++i) {
    edges[i] = mel_max * i / (dim + 1);
  }

  std::vector<MelFilter> bank(dim);
  for (int f = 0; f < dim; ++f) {
    const double left = edges[f], center = edges[f + 1], right = edges[f + 2];
    MelFilter filt;
    bool started = false;
    for (size_t k = 0; k < num_bins; ++k) {
      const double mel = hz_to_mel(k * bin_hz);
      double wgt = 0.0;
      if (mel > left && mel < right) {
        wgt = mel <= center ? (mel - left) / (center - left)
                            : (right - mel) / (right - center);
      }
      if (wgt > 0.0) {
        if (!started) {
          filt.first_bin = k;
          started = true;
        }
        filt.weights.push_back(wgt);
      } else if (started) {
        break;
      }
    }
    bank[f] = std::move(filt);
  }
  return bank;
}

}  // namespace

FeatureMatrix logmel(const Waveform& w, const LogMelConfig& cfg) {
  validate(w);
  if (cfg.dim <= 0) {
    throw std::invalid_argument("feature dim must be positive");
  }
  if (cfg.window_ms <= 0 || cfg.hop_ms <= 0) {
    throw std::invalid_argument("window and hop must be positive");
  }

  const size_t win = static_cast<size_t>(
      std::max<long>(1, std::lround(cfg.window_ms * w.sample_rate / 1000.0)));
  const size_t hop = static_cast<size_t>(
      std::max<long>(1, std::lround(cfg.hop_ms * w.sample_rate / 1000.0)));
  const size_t nfft = next_pow2(win);
  const size_t n = w.samples.size();

  FeatureMatrix out;
  out.dim = static_cast<size_t>(cfg.dim);
  out.frame_hop_ms = cfg.hop_ms;
  if (n == 0) return out;
  out.frames = (n + hop - 1) / hop;
  out.data.resize(out.frames * out.dim);

  std::vector<double> window(win);
  for (size_t i = 0; i < win; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / win);
  }
  const std::vector<MelFilter> bank =
      build_filterbank(cfg.dim, nfft, w.sample_rate);

  std::vector<std::complex<double>> buf(nfft);
  std::vector<double> power(nfft / 2 + 1);
  for (size_t t = 0; t < out.frames; ++t) {
    const size_t begin = t * hop;
    std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
    const size_t have = std::min(win, n - begin);
    for (size_t i = 0; i < have; ++i) {
      buf[i] = static_cast<double>(w.samples[begin + i]) * window[i];
    }
    fft(buf, false);
    for (size_t k = 0; k < power.size(); ++k) {
      power[k] = std::norm(buf[k]);
    }
    float* row = out.row(t);
    for (int f = 0; f < cfg.dim; ++f) {
      const MelFilter& filt = bank[f];
      double acc = 0.0;
      for (size_t k = 0; k < filt.weights.size(); ++k) {
        acc += filt.weights[k] * power[filt.first_bin + k];
      }
      row[f] = static_cast<float>(std::log(std::max(acc, kEnergyFloor)));
    }
  }
  return out;
}

}  // namespace forge
