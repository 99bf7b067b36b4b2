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

#include <doctest.h>

#include <cstring>
#include <string>

#include "forge/rng.hpp"
#include "forge/wav.hpp"
#include "support/fixtures.hpp"

using forge::Waveform;
using forge::read_wav;
using forge::write_wav;
using forge::test::TempDir;

namespace {

void append16(std::string& s, uint16_t v) {
  s.append(reinterpret_cast<const char*>(&v), 2);
}
void append32(std::string& s, uint32_t v) {
  s.append(reinterpret_cast<const char*>(&v), 4);
}
void append_f32(std::string& s, float v) {
  s.append(reinterpret_cast<const char*>(&v), 4);
}

// Hand-assembled RIFF/WAVE container for byte-level decoder tests.
std::string build_wav(uint16_t format, uint16_t channels, uint32_t rate,
                      uint16_t bits, const std::string& data,
                      int declared_data_size = -1) {
  std::string body;
  body += "WAVE";
  body += "fmt ";
  append32(body, 16);
  append16(body, format);
  append16(body, channels);
  append32(body, rate);
  append32(body, rate * channels * (bits / 8));
  append16(body, static_cast<uint16_t>(channels * (bits / 8)));
  append16(body, bits);
  body += "data";
  append32(body, declared_data_size < 0
                     ? static_cast<uint32_t>(data.size())
                     : static_cast<uint32_t>(declared_data_size));
  body += data;

  std::string file;
  file += "RIFF";
  append32(file, static_cast<uint32_t>(body.size()));
  file += body;
  return file;
}

}  // namespace

TEST_CASE("float32 wav round trip is bit-exact") {
  TempDir dir;
  forge::Rng rng(4);
  Waveform w;
  w.sample_rate = 16000;
  w.samples.resize(4321);
  for (float& s : w.samples) {
    s = static_cast<float>(2.0 * rng.uniform01() - 1.0);
  }
  const auto path = dir / "f32.wav";
  write_wav(w, path, forge::WavCodec::kFloat32);
  const Waveform r = read_wav(path);
  CHECK(r.sample_rate == 16000);
  REQUIRE(r.samples.size() == w.samples.size());
  for (size_t i = 0; i < w.samples.size(); ++i) {
    CHECK(r.samples[i] == w.samples[i]);
  }
}

TEST_CASE("pcm16 round trip is exact to one quantization step") {
  TempDir dir;
  forge::Rng rng(6);
  Waveform w;
  w.sample_rate = 8000;
  w.samples.resize(2000);
  for (float& s : w.samples) {
    s = static_cast<float>(2.0 * rng.uniform01() - 1.0);
  }
  const auto path = dir / "p16.wav";
  write_wav(w, path, forge::WavCodec::kPcm16);
  const Waveform r = read_wav(path);
  REQUIRE(r.samples.size() == w.samples.size());
  // Encode scales by 32767, decode divides by 32768, so the round trip is
  // off by up to half an encode step plus the 1/32768 scale mismatch.
  for (size_t i = 0; i < w.samples.size(); ++i) {
    CHECK(std::abs(r.samples[i] - w.samples[i]) <= 1.5f / 32768.0f);
  }
}

TEST_CASE("pcm16 write clamps out-of-range samples") {
  TempDir dir;
  Waveform w;
  w.sample_rate = 8000;
  w.samples = {1.5f, -1.5f};
  const auto path = dir / "clip.wav";
  write_wav(w, path, forge::WavCodec::kPcm16);
  const Waveform r = read_wav(path);
  CHECK(r.samples[0] == doctest::Approx(32767.0 / 32768.0));
  CHECK(r.samples[1] == doctest::Approx(-1.0));
}

TEST_CASE("pcm16 decoding divides by 32768") {
  TempDir dir;
  std::string data;
  append16(data, 16384);
  const auto path = dir / "one.wav";
  forge::test::write_file(path, build_wav(1, 1, 16000, 16, data));
  const Waveform r = read_wav(path);
  REQUIRE(r.samples.size() == 1);
  CHECK(r.samples[0] == doctest::Approx(0.5));
}

TEST_CASE("stereo downmix averages channels") {
  TempDir dir;
  std::string data;
  append_f32(data, 1.0f);
  append_f32(data, 0.0f);
  const auto path = dir / "stereo.wav";
  forge::test::write_file(path, build_wav(3, 2, 44100, 32, data));
  const Waveform r = read_wav(path);
  REQUIRE(r.samples.size() == 1);
  CHECK(r.samples[0] == doctest::Approx(0.5));
  CHECK(r.sample_rate == 44100);
}

TEST_CASE("malformed headers raise the format error") {
  TempDir dir;
  const auto path = dir / "bad.wav";

  SUBCASE("not RIFF at all") {
    forge::test::write_file(path, "this is not audio");
    CHECK_THROWS_AS(read_wav(path), forge::WavFormatError);
  }
  SUBCASE("RIFF but no WAVE tag") {
    std::string s = "RIFF";
    append32(s, 4);
    s += "JUNK";
    forge::test::write_file(path, s);
    CHECK_THROWS_AS(read_wav(path), forge::WavFormatError);
  }
  SUBCASE("data chunk with no fmt chunk") {
    std::string body = "WAVE";
    body += "data";
    append32(body, 0);
    std::string s = "RIFF";
    append32(s, static_cast<uint32_t>(body.size()));
    s += body;
    forge::test::write_file(path, s);
    CHECK_THROWS_AS(read_wav(path), forge::WavFormatError);
  }
}

TEST_CASE("unsupported codecs are rejected as unsupported") {
  TempDir dir;
  const auto path = dir / "alaw.wav";
  // A-law (format 6) is structurally fine but not decodable here.
  forge::test::write_file(path, build_wav(6, 1, 8000, 8, std::string(8, 'x')));
  CHECK_THROWS_AS(read_wav(path), forge::WavUnsupportedError);
}

TEST_CASE("truncated data chunks are detected") {
  TempDir dir;
  const auto path = dir / "trunc.wav";
  std::string data;
  append16(data, 100);
  // Declares 100 bytes of samples but carries only 2.
  forge::test::write_file(path, build_wav(1, 1, 8000, 16, data, 100));
  CHECK_THROWS_AS(read_wav(path), forge::WavTruncatedError);
}

TEST_CASE("mid-frame data ends are truncation errors") {
  TempDir dir;
  const auto path = dir / "midframe.wav";
  // 6 bytes is one and a half stereo 16-bit frames.
  forge::test::write_file(path, build_wav(1, 2, 8000, 16, std::string(6, '\0'), 6));
  CHECK_THROWS_AS(read_wav(path), forge::WavTruncatedError);
}

TEST_CASE("partial trailing frame is rejected") {
  TempDir dir;
  const auto path = dir / "partial.wav";
  forge::test::write_file(path, build_wav(1, 1, 8000, 16, std::string(3, '\0')));
  CHECK_THROWS_AS(read_wav(path), forge::WavTruncatedError);
}

TEST_CASE("unknown chunks before data are skipped") {
  TempDir dir;
  std::string body = "WAVE";
  body += "LIST";
  append32(body, 5);
  body += "hello";
  body += '\0';  // pad to even
  body += "fmt ";
  append32(body, 16);
  append16(body, 1);
  append16(body, 1);
  append32(body, 16000);
  append32(body, 32000);
  append16(body, 2);
  append16(body, 16);
  body += "data";
  append32(body, 2);
  append16(body, 0x4000);
  std::string s = "RIFF";
  append32(s, static_cast<uint32_t>(body.size()));
  s += body;
  const auto path = dir / "list.wav";
  forge::test::write_file(path, s);
  const Waveform r = read_wav(path);
  REQUIRE(r.samples.size() == 1);
  CHECK(r.samples[0] == doctest::Approx(0.5));
}

TEST_CASE("reading a missing file fails cleanly") {
  CHECK_THROWS_AS(read_wav("/nonexistent/nowhere.wav"), forge::WavError);
}
