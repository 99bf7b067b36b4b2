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

#ifndef FORGE_CONFIG_HPP_
#define FORGE_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "forge/audio.hpp"
#include "forge/features.hpp"
#include "forge/noise.hpp"
#include "forge/reverb.hpp"
#include "forge/vad.hpp"

namespace forge {

// Everything the pipeline commands need, loaded from one JSON document.
// Unknown keys anywhere in the document are an error, so typos fail fast
// instead of silently running with defaults.
struct PipelineConfig {
  uint64_t seed = 0;
  int jobs = 1;

  struct Paths {
    std::string corpus_root;
    std::string rir_dir;
    std::string noise_dir;
    std::string output_dir = "out";
  } paths;

  struct SegmentParams {
    int sample_rate = 16000;
    double max_duration_s = 40.0;
  } segment;

  VadConfig vad;
  NoiseConfig noise;
  ReverbConfig reverb;
  LogMelConfig features;

  struct KMeansParams {
    uint32_t k = 64;
    uint32_t max_iters = 100;
    // Hour budgets per manifest source; empty means "use everything".
    std::map<std::string, double> subset_hours;
  } kmeans;

  struct MaskParams {
    uint32_t span_len = 10;
    // Offset added to the footprint-derived step counter, so short desk
    // runs can exercise the post-warmup regime.
    uint64_t schedule_start_step = 0;
  } mask;

  struct BatchParams {
    double budget_s = 100.0;
    int workers = 8;
  } batch;

  struct BenchParams {
    size_t num_batches = 1000;
    double median_s = 8.0;
    double sigma = 0.8;
    std::vector<int> accum_steps = {1, 4};
  } bench;

  struct StatsParams {
    bool exclude_und = false;
    size_t top_n = 50;
    double min_hours = 1.0;
  } stats;

  std::filesystem::path out(const std::string& rel) const {
    return std::filesystem::path(paths.output_dir) / rel;
  }
};

PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace forge

#endif  // FORGE_CONFIG_HPP_
