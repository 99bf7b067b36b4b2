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

#ifndef FORGE_NOISE_HPP_
#define FORGE_NOISE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "forge/audio.hpp"
#include "forge/rng.hpp"

namespace forge {

struct NoiseConfig {
  // Probability that an utterance is corrupted at all; the corruption is
  // additive noise or an interfering utterance with equal probability.
  double p = 0.2;
  double snr_db_min = -5.0;
  double snr_db_max = 20.0;
  // Upper bound on the interfering chunk length as a fraction of the
  // target utterance.
  double max_overlap_fraction = 0.5;
};

enum class CorruptionChoice { kNone, kAdditiveNoise, kInterferingUtterance };

struct CorruptionEvent {
  CorruptionChoice choice = CorruptionChoice::kNone;
  // Index into the noise set (additive) or the batch (interfering).
  int source_index = -1;
  double snr_db = 0.0;
};

struct MixDetails {
  size_t chunk_len = 0;
  size_t position = 0;
  size_t source_offset = 0;
  double snr_db = 0.0;
};

// One draw decides the corruption type: v < p/2 additive noise,
// v < p interfering utterance, otherwise none.
CorruptionChoice sample_corruption(const NoiseConfig& cfg, Rng& rng);

// Adds a looped crop of `noise` to the whole utterance, scaled so the
// utterance-to-crop energy ratio equals snr_db.  The crop offset is drawn
// from rng; a zero-energy crop deterministically walks forward until a
// non-silent crop is found.  Throws std::domain_error for a silent
// utterance or an entirely silent noise source.
Utterance mix_noise(const Utterance& u, const Waveform& noise, double snr_db,
                    Rng& rng);

// Overlays a chunk of the interferer at a random position.  The chunk
// length is uniform on [1, floor(max_overlap_fraction * n)]; the SNR is
// drawn from the configured range and measured over the overlapped region
// only.  Samples outside the overlap are untouched.
Utterance mix_utterance(const Utterance& u, const Utterance& interferer,
                        const NoiseConfig& cfg, Rng& rng,
                        MixDetails* details = nullptr);

// Independently corrupts each utterance using a per-utterance stream derived
// from (seed, "noise", id); the interferer is drawn uniformly from the other
// *clean* batch members, so results are order- and parallelism-independent.
// A batch of one falls back to additive noise.  Throws when p > 0 and the
// noise set is empty.
std::vector<Utterance> corrupt_batch(const std::vector<Utterance>& batch,
                                     std::span<const Waveform> noises,
                                     const NoiseConfig& cfg, uint64_t seed,
                                     std::vector<CorruptionEvent>* events = nullptr);

struct NoiseBank {
  std::vector<std::string> ids;
  std::vector<Waveform> clips;
};

// Loads every .wav under dir (sorted by path); ids are file stems.
NoiseBank load_noise_dir(const std::filesystem::path& dir);

}  // namespace forge

#endif  // FORGE_NOISE_HPP_
