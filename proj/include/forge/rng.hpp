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

#ifndef FORGE_RNG_HPP_
#define FORGE_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <string_view>

namespace forge {

// Deterministic random source used throughout the pipeline.  SplitMix64
// with explicit output-to-float mappings so that results are identical
// across platforms and standard libraries; std::uniform_*_distribution is
// implementation-defined and would break byte-exact reruns.
//
// Independent streams are derived from (seed, domain, id) so per-utterance
// work is order- and parallelism-independent: every stage hashes its own
// domain tag, and every utterance gets its own stream.
class Rng {
 public:
  explicit Rng(uint64_t state) : state_(state) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a logarithm argument.
  double uniform01_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).  Lemire-style multiply-shift; the modulo
  // bias of ~n/2^64 is irrelevant next to the determinism requirement.
  uint64_t next_below(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  // Standard normal via Box-Muller (cosine branch only, so every call
  // consumes exactly two words of the stream).
  double gaussian() {
    double u1 = uniform01_open();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  uint64_t state_;
};

inline uint64_t fnv1a64(const void* data, size_t len,
                        uint64_t h = 0xCBF29CE484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Stream state for (seed, domain, id): FNV-1a over the little-endian seed,
// the domain tag, a 0x1f separator and the id.
inline uint64_t stream_state(uint64_t seed, std::string_view domain,
                             std::string_view id) {
  unsigned char seed_bytes[8];
  for (int i = 0; i < 8; ++i) seed_bytes[i] = static_cast<unsigned char>(seed >> (8 * i));
  uint64_t h = fnv1a64(seed_bytes, 8);
  h = fnv1a64(domain.data(), domain.size(), h);
  const unsigned char sep = 0x1F;
  h = fnv1a64(&sep, 1, h);
  h = fnv1a64(id.data(), id.size(), h);
  return h;
}

inline Rng stream(uint64_t seed, std::string_view domain, std::string_view id) {
  return Rng(stream_state(seed, domain, id));
}

}  // namespace forge

#endif  // FORGE_RNG_HPP_
