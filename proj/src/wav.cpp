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

#include "forge/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "wav i/o assumes a little-endian host");

namespace forge {

namespace {

constexpr uint16_t kFormatPcm = 0x0001;
constexpr uint16_t kFormatFloat = 0x0003;
constexpr uint16_t kFormatExtensible = 0xFFFE;

struct Cursor {
  const unsigned char* data;
  size_t size;
  size_t pos = 0;

  size_t remaining() const { return size - pos; }

  void need(size_t n, const char* what) {
    if (remaining() < n) {
      throw WavFormatError(std::string("unexpected end of file while reading ") +
                           what);
    }
  }

  uint16_t u16(const char* what) {
    need(2, what);
    uint16_t v;
    std::memcpy(&v, data + pos, 2);
    pos += 2;
    return v;
  }

  uint32_t u32(const char* what) {
    need(4, what);
    uint32_t v;
    std::memcpy(&v, data + pos, 4);
    pos += 4;
    return v;
  }

  void tag(char out[4], const char* what) {
    need(4, what);
    std::memcpy(out, data + pos, 4);
    pos += 4;
  }
};

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw WavError("cannot open " + path.string());
  }
  in.seekg(0, std::ios::end);
  const auto len = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<unsigned char> buf(static_cast<size_t>(len));
  if (len > 0 && !in.read(reinterpret_cast<char*>(buf.data()), len)) {
    throw WavError("cannot read " + path.string());
  }
  return buf;
}

}  // namespace

Waveform read_wav(const std::filesystem::path& path) {
  const std::vector<unsigned char> buf = slurp(path);
  Cursor c{buf.data(), buf.size()};

  char tag[4];
  c.tag(tag, "RIFF tag");
  if (std::memcmp(tag, "RIFF", 4) != 0) {
    throw WavFormatError(path.string() + ": missing RIFF tag");
  }
  c.u32("RIFF size");
  c.tag(tag, "WAVE tag");
  if (std::memcmp(tag, "WAVE", 4) != 0) {
    throw WavFormatError(path.string() + ": missing WAVE tag");
  }

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
  uint32_t rate = 0;
  const unsigned char* pcm = nullptr;
  uint32_t pcm_size = 0;

  while (c.remaining() >= 8) {
    c.tag(tag, "chunk id");
    const uint32_t size = c.u32("chunk size");
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (size < 16) {
        throw WavFormatError(path.string() + ": fmt chunk too small");
      }
      Cursor f{c.data + c.pos, std::min<size_t>(size, c.remaining())};
      format = f.u16("format");
      channels = f.u16("channels");
      rate = f.u32("sample rate");
      f.u32("byte rate");
      block_align = f.u16("block align");
      bits = f.u16("bits per sample");
      if (format == kFormatExtensible) {
        // WAVE_FORMAT_EXTENSIBLE: the codec lives in the first two bytes of
        // the SubFormat GUID at offset 24 of the fmt payload.
        if (f.size < 26) {
          throw WavFormatError(path.string() + ": extensible fmt chunk too small");
        }
        f.pos = 24;
        format = f.u16("subformat");
      }
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (size > c.remaining()) {
        throw WavTruncatedError(path.string() + ": data chunk declares " +
                                std::to_string(size) + " bytes but only " +
                                std::to_string(c.remaining()) + " remain");
      }
      pcm = c.data + c.pos;
      pcm_size = size;
      break;
    }
    // Skip unknown chunk payload plus RIFF even-byte padding.
    const size_t skip = std::min<size_t>(size + (size & 1u), c.remaining());
    c.pos += skip;
  }

  if (!have_fmt) {
    throw WavFormatError(path.string() + ": no fmt chunk before data");
  }
  if (pcm == nullptr) {
    throw WavFormatError(path.string() + ": no data chunk");
  }
  if (channels == 0) {
    throw WavFormatError(path.string() + ": zero channels");
  }
  if (rate == 0) {
    throw WavFormatError(path.string() + ": zero sample rate");
  }

  WavCodec codec;
  if (format == kFormatPcm && bits == 16) {
    codec = WavCodec::kPcm16;
  } else if (format == kFormatFloat && bits == 32) {
    codec = WavCodec::kFloat32;
  } else {
    throw WavUnsupportedError(path.string() + ": unsupported codec (format " +
                              std::to_string(format) + ", " +
                              std::to_string(bits) + " bits)");
  }

  const uint32_t expect_align = channels * (bits / 8);
  if (block_align != expect_align) {
    throw WavFormatError(path.string() + ": block align " +
                         std::to_string(block_align) + " does not match " +
                         std::to_string(expect_align));
  }
  if (pcm_size % expect_align != 0) {
    throw WavTruncatedError(path.string() + ": data chunk ends mid-frame");
  }

  const size_t frames = pcm_size / expect_align;
  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  w.samples.resize(frames);
  for (size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (uint16_t ch = 0; ch < channels; ++ch) {
      const unsigned char* at = pcm + (i * channels + ch) * (bits / 8);
      if (codec == WavCodec::kPcm16) {
        int16_t v;
        std::memcpy(&v, at, 2);
        acc += static_cast<double>(v) / 32768.0;
      } else {
        float v;
        std::memcpy(&v, at, 4);
        if (!std::isfinite(v)) {
          throw WavDataError(path.string() + ": non-finite sample");
        }
        acc += v;
      }
    }
    acc /= channels;
    w.samples[i] = static_cast<float>(std::clamp(acc, -1.0, 1.0));
  }
  return w;
}

void write_wav(const Waveform& w, const std::filesystem::path& path,
               WavCodec codec) {
  validate(w);
  const uint16_t bits = codec == WavCodec::kPcm16 ? 16 : 32;
  const uint16_t format = codec == WavCodec::kPcm16 ? kFormatPcm : kFormatFloat;
  const uint32_t data_size = static_cast<uint32_t>(w.samples.size() * (bits / 8));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw WavDataError("cannot open " + path.string() + " for writing");
  }

  auto put16 = [&out](uint16_t v) { out.write(reinterpret_cast<const char*>(&v), 2); };
  auto put32 = [&out](uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };

  out.write("RIFF", 4);
  put32(36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put32(16);
  put16(format);
  put16(1);  // mono
  put32(static_cast<uint32_t>(w.sample_rate));
  put32(static_cast<uint32_t>(w.sample_rate) * (bits / 8));
  put16(bits / 8);
  put16(bits);
  out.write("data", 4);
  put32(data_size);

  if (codec == WavCodec::kPcm16) {
    for (float s : w.samples) {
      const long q = std::lround(static_cast<double>(s) * 32767.0);
      const int16_t v = static_cast<int16_t>(std::clamp<long>(q, -32768, 32767));
      put16(static_cast<uint16_t>(v));
    }
  } else {
    out.write(reinterpret_cast<const char*>(w.samples.data()), data_size);
  }
  out.flush();
  if (!out) {
    throw WavDataError("write failed for " + path.string());
  }
}

}  // namespace forge
