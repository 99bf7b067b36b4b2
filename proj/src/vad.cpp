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

#include "forge/vad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace forge {

namespace {

constexpr double kNoiseFloorMin = 1e-10;

struct FrameRun {
  size_t begin = 0;  // frame indices, [begin, end)
  size_t end = 0;
};

}  // namespace

std::vector<Segment> vad(const Waveform& w, const VadConfig& cfg) {
  validate(w);
  if (cfg.frame_ms <= 0 || cfg.threshold_factor <= 0) {
    throw std::invalid_argument("vad frame_ms and threshold_factor must be positive");
  }
  if (cfg.min_speech_ms < 0 || cfg.min_gap_ms < 0 || cfg.pad_ms < 0) {
    throw std::invalid_argument("vad durations must be non-negative");
  }
  const int64_t n = static_cast<int64_t>(w.samples.size());
  if (n == 0) return {};

  const size_t frame_len = static_cast<size_t>(
      std::max<int64_t>(1, std::llround(cfg.frame_ms * w.sample_rate / 1000.0)));
  const std::vector<double> energies =
      frame_energies(w.samples, frame_len, frame_len);
  const size_t num_frames = energies.size();

  // Noise floor: 10th percentile (nearest rank) of frame energies.
  std::vector<double> sorted = energies;
  std::sort(sorted.begin(), sorted.end());
  const double floor_e =
      std::max(sorted[(num_frames - 1) / 10], kNoiseFloorMin);
  const double threshold = cfg.threshold_factor * floor_e;

  std::vector<FrameRun> runs;
  for (size_t f = 0; f < num_frames; ++f) {
    if (energies[f] > threshold) {
      if (!runs.empty() && runs.back().end == f) {
        runs.back().end = f + 1;
      } else {
        runs.push_back({f, f + 1});
      }
    }
  }

  // Merge runs separated by less than min_gap_ms, then drop short runs.
  const double frame_ms_actual = 1000.0 * frame_len / w.sample_rate;
  std::vector<FrameRun> merged;
  for (const FrameRun& r : runs) {
    if (!merged.empty() &&
        static_cast<double>(r.begin - merged.back().end) * frame_ms_actual <
            cfg.min_gap_ms) {
      merged.back().end = r.end;
    } else {
      merged.push_back(r);
    }
  }
  std::vector<FrameRun> kept;
  for (const FrameRun& r : merged) {
    if (static_cast<double>(r.end - r.begin) * frame_ms_actual >=
        cfg.min_speech_ms) {
      kept.push_back(r);
    }
  }

  // Convert to padded sample ranges and merge any overlap the padding made.
  const int64_t pad =
      std::llround(cfg.pad_ms * w.sample_rate / 1000.0);
  std::vector<Segment> segments;
  for (const FrameRun& r : kept) {
    const int64_t raw_start = static_cast<int64_t>(r.begin * frame_len);
    const int64_t raw_end =
        std::min<int64_t>(n, static_cast<int64_t>(r.end * frame_len));
    Segment s{std::max<int64_t>(0, raw_start - pad),
              std::min<int64_t>(n, raw_end + pad)};
    if (!segments.empty() && s.start <= segments.back().end) {
      segments.back().end = std::max(segments.back().end, s.end);
    } else {
      segments.push_back(s);
    }
  }
  return segments;
}

std::vector<Utterance> extract_utterances(const Waveform& w,
                                          std::span<const Segment> segments,
                                          const std::string& id_prefix,
                                          const std::string& language) {
  const int64_t n = static_cast<int64_t>(w.samples.size());
  std::vector<Utterance> out;
  out.reserve(segments.size());
  size_t ordinal = 0;
  for (const Segment& s : segments) {
    if (s.start < 0 || s.end > n || s.start >= s.end) {
      throw std::out_of_range("segment [" + std::to_string(s.start) + ", " +
                              std::to_string(s.end) +
                              ") does not fit a recording of " +
                              std::to_string(n) + " samples");
    }
    char suffix[8];
    std::snprintf(suffix, sizeof(suffix), "%04zu", ordinal++);
    Utterance u;
    u.id = id_prefix + suffix;
    u.language = language;
    u.waveform.sample_rate = w.sample_rate;
    u.waveform.samples.assign(w.samples.begin() + s.start,
                              w.samples.begin() + s.end);
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<Utterance> filter_max_duration(std::vector<Utterance> utterances,
                                           double max_duration_s) {
  std::erase_if(utterances, [max_duration_s](const Utterance& u) {
    return u.duration_s() > max_duration_s;
  });
  return utterances;
}

void write_segments_jsonl(std::span<const Segment> segments, int sample_rate,
                          const std::string& id_prefix,
                          const std::filesystem::path& path) {
  if (sample_rate <= 0) {
    throw std::invalid_argument("sample rate must be positive");
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  size_t ordinal = 0;
  for (const Segment& s : segments) {
    char suffix[8];
    std::snprintf(suffix, sizeof(suffix), "%04zu", ordinal++);
    nlohmann::json j;
    j["id"] = id_prefix + suffix;
    j["start_s"] = static_cast<double>(s.start) / sample_rate;
    j["end_s"] = static_cast<double>(s.end) / sample_rate;
    out << j.dump() << "\n";
  }
  if (!out.flush()) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

}  // namespace forge
