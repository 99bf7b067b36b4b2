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

#include <array>
#include <cmath>

#include "forge/rng.hpp"
#include "forge/vad.hpp"
#include "support/fixtures.hpp"

using forge::Segment;
using forge::VadConfig;
using forge::Waveform;
using forge::vad;

namespace {

// quiet / tone / quiet at 16 kHz with the default config.
Waveform tone_in_silence(double pre_s, double tone_s, double post_s) {
  const double durations[] = {pre_s, tone_s, post_s};
  const bool is_tone[] = {false, true, false};
  return forge::test::make_pattern(durations, is_tone, 16000);
}

}  // namespace

TEST_CASE("pure silence yields no segments") {
  Waveform w;
  w.sample_rate = 16000;
  w.samples.assign(16000, 0.0f);
  CHECK(vad(w).empty());
}

TEST_CASE("empty audio yields no segments") {
  Waveform w;
  w.sample_rate = 16000;
  CHECK(vad(w).empty());
}

TEST_CASE("a single burst becomes a single padded segment") {
  // 1 s silence, 1 s tone, 1 s silence at 16 kHz; 30 ms frames of 480
  // samples.  Digital silence puts the noise floor at the 1e-10 minimum,
  // so every frame touching the tone (frames 33..66) is speech.
  const Waveform w = tone_in_silence(1.0, 1.0, 1.0);
  const auto segments = vad(w);
  REQUIRE(segments.size() == 1);
  // Frame run [33, 67) -> samples [15840, 32160) with 100 ms (1600) pad.
  CHECK(segments[0].start == 15840 - 1600);
  CHECK(segments[0].end == 32160 + 1600);
}

TEST_CASE("bursts separated by a long gap stay separate") {
  const double durations[] = {1.0, 0.5, 1.0, 0.5, 1.0};
  const bool is_tone[] = {false, true, false, true, false};
  const Waveform w = forge::test::make_pattern(durations, is_tone, 16000);
  const auto segments = vad(w);
  CHECK(segments.size() == 2);
}

TEST_CASE("bursts separated by a short gap merge") {
  // 200 ms gap < the 300 ms minimum, so the bursts fuse.
  const double durations[] = {1.0, 0.5, 0.2, 0.5, 1.0};
  const bool is_tone[] = {false, true, false, true, false};
  const Waveform w = forge::test::make_pattern(durations, is_tone, 16000);
  const auto segments = vad(w);
  CHECK(segments.size() == 1);
}

TEST_CASE("bursts shorter than min_speech_ms are dropped") {
  // 90 ms of tone (3 frames) is under the 200 ms minimum.
  const double durations[] = {1.0, 0.09, 1.0};
  const bool is_tone[] = {false, true, false};
  const Waveform w = forge::test::make_pattern(durations, is_tone, 16000);
  CHECK(vad(w).empty());
}

TEST_CASE("vad is invariant to positive rescaling") {
  forge::Rng rng(21);
  Waveform w = tone_in_silence(0.8, 1.2, 0.9);
  // Low-level noise floor so the percentile is non-degenerate.
  for (float& s : w.samples) {
    s += static_cast<float>(1e-3 * (2.0 * rng.uniform01() - 1.0));
  }
  const auto base = vad(w);
  REQUIRE(!base.empty());
  for (double scale : {0.1, 7.3}) {
    Waveform scaled = w;
    for (float& s : scaled.samples) {
      s = static_cast<float>(s * scale);
    }
    const auto got = vad(scaled);
    REQUIRE(got.size() == base.size());
    for (size_t i = 0; i < base.size(); ++i) {
      CHECK(got[i].start == base[i].start);
      CHECK(got[i].end == base[i].end);
    }
  }
}

TEST_CASE("segments are sorted, disjoint and inside the recording") {
  forge::Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> durations;
    // Not vector<bool>: make_pattern takes a span over contiguous bools.
    std::array<bool, 9> is_tone{};
    for (int part = 0; part < 9; ++part) {
      durations.push_back(0.15 + rng.uniform01());
      is_tone[part] = (part % 2) == 1;
    }
    Waveform w = forge::test::make_pattern(durations, is_tone, 16000);
    for (float& s : w.samples) {
      s += static_cast<float>(5e-4 * (2.0 * rng.uniform01() - 1.0));
    }
    const auto segments = vad(w);
    int64_t prev_end = -1;
    for (const Segment& s : segments) {
      CHECK(s.start >= 0);
      CHECK(s.start < s.end);
      CHECK(s.end <= static_cast<int64_t>(w.samples.size()));
      CHECK(s.start > prev_end);
      prev_end = s.end;
    }
  }
}

TEST_CASE("extract_utterances slices exactly and names sequentially") {
  const Waveform w = tone_in_silence(0.5, 1.0, 0.5);
  const std::vector<Segment> segments = {{1000, 9000}, {12000, 20000}};
  const auto utts = forge::extract_utterances(w, segments, "rec-", "eng");
  REQUIRE(utts.size() == 2);
  CHECK(utts[0].id == "rec-0000");
  CHECK(utts[1].id == "rec-0001");
  CHECK(utts[0].language == "eng");
  CHECK(utts[0].waveform.samples.size() == 8000);
  CHECK(utts[0].waveform.sample_rate == 16000);
  for (size_t i = 0; i < 8000; ++i) {
    CHECK(utts[0].waveform.samples[i] == w.samples[1000 + i]);
  }
}

TEST_CASE("extract_utterances validates bounds") {
  const Waveform w = tone_in_silence(0.1, 0.1, 0.1);
  const std::vector<Segment> bad = {{0, static_cast<int64_t>(w.samples.size()) + 1}};
  CHECK_THROWS_AS(forge::extract_utterances(w, bad, "x-", "und"),
                  std::out_of_range);
  const std::vector<Segment> inverted = {{100, 100}};
  CHECK_THROWS_AS(forge::extract_utterances(w, inverted, "x-", "und"),
                  std::out_of_range);
}

TEST_CASE("filter_max_duration keeps the boundary and preserves order") {
  auto mk = [](const std::string& id, double dur) {
    forge::Utterance u;
    u.id = id;
    u.waveform.sample_rate = 1000;
    u.waveform.samples.assign(static_cast<size_t>(dur * 1000), 0.0f);
    return u;
  };
  std::vector<forge::Utterance> utts;
  utts.push_back(mk("a", 39.9));
  utts.push_back(mk("b", 40.0));
  utts.push_back(mk("c", 40.1));
  const auto kept = forge::filter_max_duration(std::move(utts), 40.0);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].id == "a");
  CHECK(kept[1].id == "b");
}

TEST_CASE("filter_max_duration is idempotent") {
  auto mk = [](double dur) {
    forge::Utterance u;
    u.waveform.sample_rate = 100;
    u.waveform.samples.assign(static_cast<size_t>(dur * 100), 0.0f);
    return u;
  };
  std::vector<forge::Utterance> utts{mk(10), mk(50), mk(39), mk(41)};
  auto once = forge::filter_max_duration(std::move(utts), 40.0);
  const size_t n = once.size();
  auto twice = forge::filter_max_duration(std::move(once), 40.0);
  CHECK(twice.size() == n);
}

TEST_CASE("segments jsonl lists one object per line") {
  forge::test::TempDir dir;
  const std::vector<Segment> segments = {{0, 16000}, {32000, 48000}};
  const auto path = dir / "segments.jsonl";
  forge::write_segments_jsonl(segments, 16000, "rec-", path);
  const std::string text = forge::test::read_file(path);
  CHECK(text ==
        "{\"end_s\":1.0,\"id\":\"rec-0000\",\"start_s\":0.0}\n"
        "{\"end_s\":3.0,\"id\":\"rec-0001\",\"start_s\":2.0}\n");
}
