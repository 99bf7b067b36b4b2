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

#include "forge/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace forge {

namespace {

using nlohmann::json;

// Pulls known keys out of `j` and rejects everything else.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) {
      throw std::runtime_error("config section '" + name_ +
                               "' must be a JSON object");
    }
  }

  template <typename T>
  void get(const char* key, T& out) {
    known_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw std::runtime_error("config key '" + scoped(key) +
                               "': " + e.what());
    }
  }

  const json* sub(const char* key) {
    known_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  // Call after all get()/sub() calls.
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (known_.find(key) == known_.end()) {
        throw std::runtime_error("unknown config key '" + scoped(key) + "'");
      }
    }
  }

 private:
  std::string scoped(const std::string& key) const {
    return name_.empty() ? key : name_ + "." + key;
  }

  const json& j_;
  std::string name_;
  std::set<std::string> known_;
};

void check(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error("invalid config: " + what);
}

}  // namespace

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }

  PipelineConfig cfg;
  Section root(doc, "");
  root.get("seed", cfg.seed);
  root.get("jobs", cfg.jobs);

  if (const json* j = root.sub("paths")) {
    Section s(*j, "paths");
    s.get("corpus_root", cfg.paths.corpus_root);
    s.get("rir_dir", cfg.paths.rir_dir);
    s.get("noise_dir", cfg.paths.noise_dir);
    s.get("output_dir", cfg.paths.output_dir);
    s.finish();
  }
  if (const json* j = root.sub("segment")) {
    Section s(*j, "segment");
    s.get("sample_rate", cfg.segment.sample_rate);
    s.get("max_duration_s", cfg.segment.max_duration_s);
    s.finish();
  }
  if (const json* j = root.sub("vad")) {
    Section s(*j, "vad");
    s.get("frame_ms", cfg.vad.frame_ms);
    s.get("threshold_factor", cfg.vad.threshold_factor);
    s.get("min_speech_ms", cfg.vad.min_speech_ms);
    s.get("min_gap_ms", cfg.vad.min_gap_ms);
    s.get("pad_ms", cfg.vad.pad_ms);
    s.finish();
  }
  if (const json* j = root.sub("noise")) {
    Section s(*j, "noise");
    s.get("p", cfg.noise.p);
    s.get("snr_db_min", cfg.noise.snr_db_min);
    s.get("snr_db_max", cfg.noise.snr_db_max);
    s.get("max_overlap_fraction", cfg.noise.max_overlap_fraction);
    s.finish();
  }
  if (const json* j = root.sub("reverb")) {
    Section s(*j, "reverb");
    s.get("p_r", cfg.reverb.p_r);
    s.finish();
  }
  if (const json* j = root.sub("features")) {
    Section s(*j, "features");
    s.get("dim", cfg.features.dim);
    s.get("window_ms", cfg.features.window_ms);
    s.get("hop_ms", cfg.features.hop_ms);
    s.finish();
  }
  if (const json* j = root.sub("kmeans")) {
    Section s(*j, "kmeans");
    s.get("k", cfg.kmeans.k);
    s.get("max_iters", cfg.kmeans.max_iters);
    s.get("subset_hours", cfg.kmeans.subset_hours);
    s.finish();
  }
  if (const json* j = root.sub("mask")) {
    Section s(*j, "mask");
    s.get("span_len", cfg.mask.span_len);
    s.get("schedule_start_step", cfg.mask.schedule_start_step);
    s.finish();
  }
  if (const json* j = root.sub("batch")) {
    Section s(*j, "batch");
    s.get("budget_s", cfg.batch.budget_s);
    s.get("workers", cfg.batch.workers);
    s.finish();
  }
  if (const json* j = root.sub("bench")) {
    Section s(*j, "bench");
    s.get("num_batches", cfg.bench.num_batches);
    s.get("median_s", cfg.bench.median_s);
    s.get("sigma", cfg.bench.sigma);
    s.get("accum_steps", cfg.bench.accum_steps);
    s.finish();
  }
  if (const json* j = root.sub("stats")) {
    Section s(*j, "stats");
    s.get("exclude_und", cfg.stats.exclude_und);
    s.get("top_n", cfg.stats.top_n);
    s.get("min_hours", cfg.stats.min_hours);
    s.finish();
  }
  root.finish();

  check(cfg.jobs >= 1, "jobs must be >= 1");
  check(cfg.segment.sample_rate > 0, "segment.sample_rate must be positive");
  check(cfg.segment.max_duration_s > 0, "segment.max_duration_s must be positive");
  check(cfg.vad.frame_ms > 0, "vad.frame_ms must be positive");
  check(cfg.vad.threshold_factor > 0, "vad.threshold_factor must be positive");
  check(cfg.vad.min_speech_ms >= 0, "vad.min_speech_ms must be non-negative");
  check(cfg.vad.min_gap_ms >= 0, "vad.min_gap_ms must be non-negative");
  check(cfg.vad.pad_ms >= 0, "vad.pad_ms must be non-negative");
  check(cfg.noise.p >= 0 && cfg.noise.p <= 1, "noise.p must lie in [0, 1]");
  check(cfg.noise.snr_db_min <= cfg.noise.snr_db_max,
        "noise.snr_db_min exceeds snr_db_max");
  check(cfg.noise.max_overlap_fraction > 0 && cfg.noise.max_overlap_fraction <= 1,
        "noise.max_overlap_fraction must lie in (0, 1]");
  check(cfg.reverb.p_r >= 0 && cfg.reverb.p_r <= 1,
        "reverb.p_r must lie in [0, 1]");
  check(cfg.features.dim > 0, "features.dim must be positive");
  check(cfg.features.window_ms > 0 && cfg.features.hop_ms > 0,
        "features.window_ms and hop_ms must be positive");
  check(cfg.kmeans.k >= 1 && cfg.kmeans.k <= 65535,
        "kmeans.k must lie in [1, 65535]");
  check(cfg.kmeans.max_iters >= 1, "kmeans.max_iters must be >= 1");
  for (const auto& [source, hours] : cfg.kmeans.subset_hours) {
    check(hours >= 0, "kmeans.subset_hours['" + source + "'] must be >= 0");
  }
  check(cfg.mask.span_len >= 1, "mask.span_len must be >= 1");
  check(cfg.batch.budget_s > 0, "batch.budget_s must be positive");
  check(cfg.batch.workers >= 1, "batch.workers must be >= 1");
  check(cfg.bench.median_s > 0, "bench.median_s must be positive");
  check(cfg.bench.sigma >= 0, "bench.sigma must be non-negative");
  check(!cfg.bench.accum_steps.empty(), "bench.accum_steps must not be empty");
  for (int a : cfg.bench.accum_steps) {
    check(a >= 1, "bench.accum_steps entries must be >= 1");
  }
  return cfg;
}

}  // namespace forge
