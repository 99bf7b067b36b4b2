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

#include "fixtures.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <stdexcept>

namespace forge::test {

TempDir::TempDir() {
  std::string templ =
      (std::filesystem::temp_directory_path() / "forge-test-XXXXXX").string();
  if (mkdtemp(templ.data()) == nullptr) {
    throw std::runtime_error("mkdtemp failed");
  }
  path_ = templ;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

Waveform make_sine(double freq_hz, double duration_s, int sample_rate,
                   double amplitude) {
  Waveform w;
  w.sample_rate = sample_rate;
  const size_t n = static_cast<size_t>(std::llround(duration_s * sample_rate));
  w.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    w.samples[i] = static_cast<float>(
        amplitude * std::sin(2.0 * M_PI * freq_hz * i / sample_rate));
  }
  return w;
}

Waveform make_pattern(std::span<const double> durations_s,
                      std::span<const bool> is_tone, int sample_rate,
                      double freq_hz, double amplitude) {
  Waveform w;
  w.sample_rate = sample_rate;
  for (size_t part = 0; part < durations_s.size(); ++part) {
    const size_t n =
        static_cast<size_t>(std::llround(durations_s[part] * sample_rate));
    for (size_t i = 0; i < n; ++i) {
      const double v =
          is_tone[part]
              ? amplitude * std::sin(2.0 * M_PI * freq_hz * i / sample_rate)
              : 0.0;
      w.samples.push_back(static_cast<float>(v));
    }
  }
  return w;
}

Waveform make_white_noise(size_t n, int sample_rate, double amplitude,
                          Rng& rng) {
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    w.samples[i] =
        static_cast<float>(amplitude * (2.0 * rng.uniform01() - 1.0));
  }
  return w;
}

Rir make_rir(const std::string& id, size_t len, size_t delay, int sample_rate,
             Rng& rng) {
  Rir rir;
  rir.id = id;
  rir.waveform.sample_rate = sample_rate;
  rir.waveform.samples.assign(len, 0.0f);
  rir.waveform.samples[delay] = 1.0f;
  for (size_t i = delay + 1; i < len; ++i) {
    const double decay =
        std::exp(-3.0 * static_cast<double>(i - delay) / len);
    rir.waveform.samples[i] = static_cast<float>(
        0.5 * decay * (2.0 * rng.uniform01() - 1.0));
  }
  return rir;
}

std::vector<double> direct_convolve(std::span<const float> a,
                                    std::span<const float> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) {
      out[i + j] += static_cast<double>(a[i]) * static_cast<double>(b[j]);
    }
  }
  return out;
}

double adjusted_rand_index(std::span<const uint16_t> a,
                           std::span<const uint16_t> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("labelings differ in length");
  }
  const double n = static_cast<double>(a.size());
  std::map<std::pair<uint16_t, uint16_t>, double> cont;
  std::map<uint16_t, double> rows, cols;
  for (size_t i = 0; i < a.size(); ++i) {
    cont[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double index = 0.0, row_sum = 0.0, col_sum = 0.0;
  for (const auto& [key, c] : cont) index += choose2(c);
  for (const auto& [key, c] : rows) row_sum += choose2(c);
  for (const auto& [key, c] : cols) col_sum += choose2(c);
  const double expected = row_sum * col_sum / choose2(n);
  const double max_index = (row_sum + col_sum) / 2.0;
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
    throw std::runtime_error("cannot write " + path.string());
  }
}

}  // namespace forge::test
