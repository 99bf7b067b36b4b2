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

#ifndef FORGE_TESTS_SUPPORT_FIXTURES_HPP_
#define FORGE_TESTS_SUPPORT_FIXTURES_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "forge/audio.hpp"
#include "forge/reverb.hpp"
#include "forge/rng.hpp"

namespace forge::test {

// Self-deleting temporary directory.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const {
    return path_ / rel;
  }

 private:
  std::filesystem::path path_;
};

Waveform make_sine(double freq_hz, double duration_s, int sample_rate,
                   double amplitude = 0.5);

// Silence / tone / silence / tone / ... pattern; durations in seconds.
Waveform make_pattern(std::span<const double> durations_s,
                      std::span<const bool> is_tone, int sample_rate,
                      double freq_hz = 440.0, double amplitude = 0.5);

Waveform make_white_noise(size_t n, int sample_rate, double amplitude,
                          Rng& rng);

// Exponentially decaying impulse response whose largest tap sits at
// `delay` samples.
Rir make_rir(const std::string& id, size_t len, size_t delay, int sample_rate,
             Rng& rng);

// O(n*m) reference convolution in double precision.
std::vector<double> direct_convolve(std::span<const float> a,
                                    std::span<const float> b);

// Adjusted Rand index between two labelings of the same points; 1.0 for
// identical partitions (up to relabeling), ~0 for independent ones.
double adjusted_rand_index(std::span<const uint16_t> a,
                           std::span<const uint16_t> b);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace forge::test

#endif  // FORGE_TESTS_SUPPORT_FIXTURES_HPP_
