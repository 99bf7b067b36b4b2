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

#include "forge/reverb.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "forge/fft.hpp"
#include "forge/rng.hpp"
#include "forge/wav.hpp"

namespace forge {

int64_t estimate_delay(const Rir& rir) {
  double best = 0.0;
  int64_t best_idx = -1;
  for (size_t i = 0; i < rir.waveform.samples.size(); ++i) {
    const double a = std::abs(static_cast<double>(rir.waveform.samples[i]));
    if (a > best) {
      best = a;
      best_idx = static_cast<int64_t>(i);
    }
  }
  if (best_idx < 0) {
    throw std::invalid_argument("rir '" + rir.id + "' is silent");
  }
  return best_idx;
}

Waveform convolve_full(const Waveform& u, const Rir& rir) {
  if (u.sample_rate != rir.waveform.sample_rate) {
    throw std::invalid_argument(
        "sample rate mismatch: utterance " + std::to_string(u.sample_rate) +
        " vs rir " + std::to_string(rir.waveform.sample_rate));
  }
  const size_t n = u.samples.size();
  const size_t m = rir.waveform.samples.size();
  Waveform out;
  out.sample_rate = u.sample_rate;
  if (n == 0 || m == 0) return out;

  const size_t full = n + m - 1;
  const size_t size = next_pow2(full);
  std::vector<std::complex<double>> a(size), b(size);
  for (size_t i = 0; i < n; ++i) a[i] = u.samples[i];
  for (size_t i = 0; i < m; ++i) b[i] = rir.waveform.samples[i];
  fft(a, false);
  fft(b, false);
  for (size_t i = 0; i < size; ++i) a[i] *= b[i];
  fft(a, true);

  out.samples.resize(full);
  for (size_t i = 0; i < full; ++i) {
    out.samples[i] = static_cast<float>(a[i].real());
  }
  return out;
}

Waveform realign(const Waveform& r, int64_t dt, size_t target_len) {
  if (dt < 0 || dt >= static_cast<int64_t>(r.samples.size())) {
    throw std::out_of_range("realign delay " + std::to_string(dt) +
                            " outside signal of " +
                            std::to_string(r.samples.size()) + " samples");
  }
  Waveform out;
  out.sample_rate = r.sample_rate;
  out.samples.assign(target_len, 0.0f);
  const size_t avail = r.samples.size() - static_cast<size_t>(dt);
  const size_t copy = std::min(avail, target_len);
  std::copy_n(r.samples.begin() + dt, copy, out.samples.begin());
  return out;
}

Waveform rescale_energy(const Waveform& r, const Waveform& reference) {
  const double e_r = energy(r);
  const double e_ref = energy(reference);
  if (e_r == 0.0) {
    if (e_ref == 0.0) return r;
    throw std::domain_error("cannot rescale a zero-energy signal to energy " +
                            std::to_string(e_ref));
  }
  const double gain = std::sqrt(e_ref / e_r);
  Waveform out = r;
  for (float& s : out.samples) {
    s = static_cast<float>(static_cast<double>(s) * gain);
  }
  return out;
}

Utterance apply_reverb(const Utterance& u, const Rir& rir) {
  const int64_t dt = estimate_delay(rir);
  const Waveform conv = convolve_full(u.waveform, rir);
  const Waveform aligned = realign(conv, dt, u.waveform.samples.size());
  Utterance out = u;
  out.waveform = rescale_energy(aligned, u.waveform);
  return out;
}

std::vector<Utterance> apply_reverb_batch(std::vector<Utterance> batch,
                                          std::span<const Rir> rirs,
                                          const ReverbConfig& cfg,
                                          uint64_t seed,
                                          std::vector<ReverbEvent>* events) {
  if (cfg.p_r < 0.0 || cfg.p_r > 1.0) {
    throw std::invalid_argument("p_r must lie in [0, 1]");
  }
  if (cfg.p_r > 0.0 && rirs.empty()) {
    throw std::invalid_argument("reverb enabled but no impulse responses given");
  }
  if (events != nullptr) {
    events->assign(batch.size(), {});
  }
  for (size_t i = 0; i < batch.size(); ++i) {
    Rng rng = stream(seed, "reverb", batch[i].id);
    if (rng.uniform01() < cfg.p_r) {
      const size_t k = static_cast<size_t>(rng.next_below(rirs.size()));
      batch[i] = apply_reverb(batch[i], rirs[k]);
      if (events != nullptr) {
        (*events)[i] = {true, rirs[k].id};
      }
    }
  }
  return batch;
}

std::vector<Rir> load_rir_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  std::vector<Rir> rirs;
  rirs.reserve(paths.size());
  for (const auto& p : paths) {
    rirs.push_back({p.stem().string(), read_wav(p)});
  }
  return rirs;
}

}  // namespace forge
