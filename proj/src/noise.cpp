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

#include "forge/noise.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>
#include <stdexcept>

#include "forge/wav.hpp"

namespace forge {

namespace {

void check_config(const NoiseConfig& cfg) {
  if (cfg.p < 0.0 || cfg.p > 1.0) {
    throw std::invalid_argument("corruption probability must lie in [0, 1]");
  }
  if (cfg.snr_db_min > cfg.snr_db_max) {
    throw std::invalid_argument("snr_db_min exceeds snr_db_max");
  }
  if (cfg.max_overlap_fraction <= 0.0 || cfg.max_overlap_fraction > 1.0) {
    throw std::invalid_argument("max_overlap_fraction must lie in (0, 1]");
  }
}

double crop_energy(std::span<const float> src, size_t offset, size_t len) {
  double acc = 0.0;
  const size_t m = src.size();
  for (size_t i = 0; i < len; ++i) {
    const double s = src[(offset + i) % m];
    acc += s * s;
  }
  return acc;
}

// Walks the crop offset forward in steps of len until the crop has energy.
// The source is known to be non-silent, so at most ceil(m / len) + 1 steps
// visit every sample.
size_t find_live_offset(std::span<const float> src, size_t offset, size_t len) {
  const size_t m = src.size();
  const size_t max_steps = (m + len - 1) / len + 1;
  for (size_t step = 0; step <= max_steps; ++step) {
    if (crop_energy(src, offset, len) > 0.0) return offset;
    offset = (offset + len) % m;
  }
  throw std::domain_error("no non-silent crop found in noise source");
}

}  // namespace

CorruptionChoice sample_corruption(const NoiseConfig& cfg, Rng& rng) {
  check_config(cfg);
  const double v = rng.uniform01();
  if (v < cfg.p / 2.0) return CorruptionChoice::kAdditiveNoise;
  if (v < cfg.p) return CorruptionChoice::kInterferingUtterance;
  return CorruptionChoice::kNone;
}

Utterance mix_noise(const Utterance& u, const Waveform& noise, double snr_db,
                    Rng& rng) {
  if (u.waveform.sample_rate != noise.sample_rate) {
    throw std::invalid_argument("noise sample rate mismatch");
  }
  if (noise.empty()) {
    throw std::invalid_argument("noise source is empty");
  }
  const double e_u = energy(u.waveform);
  if (e_u == 0.0) {
    throw std::domain_error("cannot set an SNR against a silent utterance");
  }
  if (energy(noise) == 0.0) {
    throw std::domain_error("noise source is entirely silent");
  }
  const size_t n = u.waveform.samples.size();
  const size_t m = noise.samples.size();
  size_t offset = static_cast<size_t>(rng.next_below(m));
  offset = find_live_offset(noise.samples, offset, n);
  const double e_c = crop_energy(noise.samples, offset, n);
  const double gain = std::sqrt(e_u / (e_c * std::pow(10.0, snr_db / 10.0)));

  Utterance out = u;
  for (size_t i = 0; i < n; ++i) {
    out.waveform.samples[i] = static_cast<float>(
        static_cast<double>(u.waveform.samples[i]) +
        gain * static_cast<double>(noise.samples[(offset + i) % m]));
  }
  return out;
}

Utterance mix_utterance(const Utterance& u, const Utterance& interferer,
                        const NoiseConfig& cfg, Rng& rng, MixDetails* details) {
  check_config(cfg);
  if (u.waveform.sample_rate != interferer.waveform.sample_rate) {
    throw std::invalid_argument("interferer sample rate mismatch");
  }
  const size_t n = u.waveform.samples.size();
  const size_t max_len =
      static_cast<size_t>(std::floor(cfg.max_overlap_fraction * n));
  if (max_len == 0) {
    if (details != nullptr) *details = {};
    return u;
  }
  if (interferer.waveform.empty() || energy(interferer.waveform) == 0.0) {
    throw std::domain_error("interfering utterance is silent");
  }

  const size_t len = 1 + static_cast<size_t>(rng.next_below(max_len));
  const size_t pos = static_cast<size_t>(rng.next_below(n - len + 1));
  const size_t m = interferer.waveform.samples.size();
  size_t offset = static_cast<size_t>(rng.next_below(m));
  offset = find_live_offset(interferer.waveform.samples, offset, len);
  const double snr_db = rng.uniform(cfg.snr_db_min, cfg.snr_db_max);

  const double e_region =
      energy(std::span<const float>(u.waveform.samples).subspan(pos, len));
  const double e_c = crop_energy(interferer.waveform.samples, offset, len);
  // A silent target region keeps its silence: zero gain.
  const double gain =
      e_region == 0.0
          ? 0.0
          : std::sqrt(e_region / (e_c * std::pow(10.0, snr_db / 10.0)));

  Utterance out = u;
  for (size_t i = 0; i < len; ++i) {
    out.waveform.samples[pos + i] = static_cast<float>(
        static_cast<double>(u.waveform.samples[pos + i]) +
        gain * static_cast<double>(interferer.waveform.samples[(offset + i) % m]));
  }
  if (details != nullptr) {
    *details = {len, pos, offset, snr_db};
  }
  return out;
}

std::vector<Utterance> corrupt_batch(const std::vector<Utterance>& batch,
                                     std::span<const Waveform> noises,
                                     const NoiseConfig& cfg, uint64_t seed,
                                     std::vector<CorruptionEvent>* events) {
  check_config(cfg);
  if (cfg.p > 0.0 && noises.empty()) {
    throw std::invalid_argument("corruption enabled but no noise clips given");
  }
  std::vector<Utterance> out = batch;
  if (events != nullptr) {
    events->assign(batch.size(), {});
  }
  // Interferer draws index an id-sorted view of the batch, so the chosen
  // partner depends on the member set, never on batch order.
  std::vector<size_t> by_id(batch.size());
  std::iota(by_id.begin(), by_id.end(), size_t{0});
  std::sort(by_id.begin(), by_id.end(), [&](size_t a, size_t b) {
    return batch[a].id < batch[b].id;
  });
  std::vector<size_t> rank(batch.size());
  for (size_t pos = 0; pos < by_id.size(); ++pos) rank[by_id[pos]] = pos;
  for (size_t i = 0; i < batch.size(); ++i) {
    Rng rng = stream(seed, "noise", batch[i].id);
    CorruptionChoice choice = sample_corruption(cfg, rng);
    // Nothing to interfere with in a batch of one.
    if (choice == CorruptionChoice::kInterferingUtterance && batch.size() == 1) {
      choice = CorruptionChoice::kAdditiveNoise;
    }
    CorruptionEvent ev;
    ev.choice = choice;
    switch (choice) {
      case CorruptionChoice::kNone:
        break;
      case CorruptionChoice::kAdditiveNoise: {
        const size_t idx = static_cast<size_t>(rng.next_below(noises.size()));
        const double snr_db = rng.uniform(cfg.snr_db_min, cfg.snr_db_max);
        out[i] = mix_noise(batch[i], noises[idx], snr_db, rng);
        ev.source_index = static_cast<int>(idx);
        ev.snr_db = snr_db;
        break;
      }
      case CorruptionChoice::kInterferingUtterance: {
        size_t pos = static_cast<size_t>(rng.next_below(batch.size() - 1));
        if (pos >= rank[i]) ++pos;
        const size_t j = by_id[pos];
        MixDetails details;
        out[i] = mix_utterance(batch[i], batch[j], cfg, rng, &details);
        ev.source_index = static_cast<int>(j);
        ev.snr_db = details.snr_db;
        break;
      }
    }
    if (events != nullptr) (*events)[i] = ev;
  }
  return out;
}

NoiseBank load_noise_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  NoiseBank bank;
  for (const auto& p : paths) {
    bank.ids.push_back(p.stem().string());
    bank.clips.push_back(read_wav(p));
  }
  return bank;
}

}  // namespace forge
