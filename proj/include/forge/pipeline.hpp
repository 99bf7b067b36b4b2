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

#ifndef FORGE_PIPELINE_HPP_
#define FORGE_PIPELINE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "forge/config.hpp"

namespace forge {

// All commands write beneath cfg.paths.output_dir and are deterministic
// for a fixed config and seed, independent of cfg.jobs.

struct SegmentReport {
  size_t files_seen = 0;
  size_t files_failed = 0;
  size_t utterances = 0;
  // "path: error" per failed input file.
  std::vector<std::string> failures;
};

// Scans corpus_root for .wav files, resamples to the target rate, detects
// speech, and writes out utterance audio (utts/<id>.wav), manifest.jsonl
// and segments.jsonl.  Per-file failures are reported, not fatal.
SegmentReport run_segment(const PipelineConfig& cfg);

struct LabelReport {
  size_t subset_utterances = 0;
  size_t pooled_frames = 0;
  size_t labeled_utterances = 0;
  size_t iterations = 0;
  bool converged = false;
  double final_inertia = 0.0;
};

// Fits k-means on log-mel features of the (optionally subsetted) manifest
// audio, writes kmeans.xkmn, then labels every utterance into labels.xlab.
LabelReport run_label(const PipelineConfig& cfg);

struct AugmentReport {
  size_t batches = 0;
  size_t records = 0;
  size_t corrupted = 0;
  size_t reverberated = 0;
};

// Packs the manifest into batches and writes one trainer-ready shard per
// batch (shards/batch-<n>.xshd): augmented audio, clean-audio labels and
// mask spans.  The step counter advances once per budget's worth of padded
// audio, offset by mask.schedule_start_step; augmentation stays off while
// the schedule says so.
AugmentReport run_augment(const PipelineConfig& cfg);

struct BatchReport {
  size_t batches = 0;
  size_t steps = 0;
  double padding_waste = 0.0;
};

// Writes the batch plan (batch_plan.json): packed batches plus the
// length-aware worker assignment.
BatchReport run_batch(const PipelineConfig& cfg);

struct BenchRow {
  std::string strategy;
  int workers = 0;
  int accum = 0;
  double total_wait_s = 0.0;
  double padding_waste = 0.0;
  double relative_throughput = 0.0;
};

struct BenchReport {
  double total_work_s = 0.0;
  std::vector<BenchRow> rows;
};

// Scheduler benchmark on synthetic batches; writes bench.csv and returns
// the same rows.
BenchReport run_bench(const PipelineConfig& cfg);

struct StatsReport {
  double total_hours = 0.0;
  size_t num_languages = 0;
  double top_share = 0.0;
  size_t count_at_least = 0;
};

// Language-coverage statistics: languages.csv and stats.json.
StatsReport run_stats(const PipelineConfig& cfg);

}  // namespace forge

#endif  // FORGE_PIPELINE_HPP_
