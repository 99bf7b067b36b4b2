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

#ifndef FORGE_REVERB_HPP_
#define FORGE_REVERB_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "forge/audio.hpp"

namespace forge {

// Room impulse response.
struct Rir {
  std::string id;
  Waveform waveform;
};

struct ReverbConfig {
  // Probability that an utterance is reverberated.
  double p_r = 0.3;
};

struct ReverbEvent {
  bool applied = false;
  std::string rir_id;
};

// Index of the first sample with maximal absolute amplitude, i.e. the
// direct-path arrival.  Throws std::invalid_argument for an all-zero RIR.
int64_t estimate_delay(const Rir& rir);

// Full linear convolution (length n + m - 1) computed via FFT.  Matches
// direct time-domain convolution to within 1e-5 absolute for unit-range
// inputs.  Sample rates must agree.
Waveform convolve_full(const Waveform& u, const Rir& rir);

// Drops the first dt samples and truncates or zero-pads to target_len.
// Requires 0 <= dt < r.size().
Waveform realign(const Waveform& r, int64_t dt, size_t target_len);

// Scales r so its energy matches the reference.  Throws std::domain_error
// when r has zero energy but the reference does not.
Waveform rescale_energy(const Waveform& r, const Waveform& reference);

// Reverberates one utterance: convolve, realign by the estimated direct-path
// delay, rescale to the dry energy.  Output length equals the input length;
// a scaled unit impulse as the RIR reproduces the input up to sign.
Utterance apply_reverb(const Utterance& u, const Rir& rir);

// Reverberates each utterance independently with probability cfg.p_r, using
// a per-utterance random stream derived from (seed, "reverb", id) so the
// result does not depend on batch order or thread count.  Throws
// std::invalid_argument when p_r > 0 and no RIRs were provided.
std::vector<Utterance> apply_reverb_batch(std::vector<Utterance> batch,
                                          std::span<const Rir> rirs,
                                          const ReverbConfig& cfg,
                                          uint64_t seed,
                                          std::vector<ReverbEvent>* events = nullptr);

// Loads every .wav under dir (sorted by path for determinism); ids are
// file stems.
std::vector<Rir> load_rir_dir(const std::filesystem::path& dir);

}  // namespace forge

#endif  // FORGE_REVERB_HPP_
