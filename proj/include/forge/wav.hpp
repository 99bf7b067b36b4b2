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

#ifndef FORGE_WAV_HPP_
#define FORGE_WAV_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>

#include "forge/audio.hpp"

namespace forge {

class WavError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed RIFF/WAVE structure.
class WavFormatError : public WavError {
  using WavError::WavError;
};

// Structurally valid file using a codec we do not decode.
class WavUnsupportedError : public WavError {
  using WavError::WavError;
};

// Data chunk shorter than its declared size.
class WavTruncatedError : public WavError {
  using WavError::WavError;
};

// Undecodable payload or an I/O failure while writing.
class WavDataError : public WavError {
  using WavError::WavError;
};

enum class WavCodec { kPcm16, kFloat32 };

// Reads a RIFF/WAVE file.  PCM16 and IEEE float32 are decoded; multichannel
// audio is downmixed to mono by averaging channels.  PCM16 samples map to
// v / 32768 and the result is clamped to [-1, 1].
Waveform read_wav(const std::filesystem::path& path);

// Writes a mono RIFF/WAVE file.  PCM16 encodes round(sample * 32767)
// clamped to the int16 range; float32 is written bit-exact, so a
// float32 write/read round trip is the identity for in-range samples.
void write_wav(const Waveform& w, const std::filesystem::path& path,
               WavCodec codec = WavCodec::kFloat32);

}  // namespace forge

#endif  // FORGE_WAV_HPP_
