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

// xeus-forge: speech pre-training data engine.
//
//   xeus-forge segment --config cfg.json   cut recordings into utterances
//   xeus-forge label   --config cfg.json   fit k-means, write pseudo-labels
//   xeus-forge augment --config cfg.json   write trainer-ready shards
//   xeus-forge batch   --config cfg.json   write the batch plan
//   xeus-forge bench   --config cfg.json   scheduler benchmark
//   xeus-forge stats   --config cfg.json   language coverage statistics
//
// Every subcommand accepts --seed and --jobs overrides; augment also
// accepts --p-noise, --p-reverb, --snr-min and --snr-max.  The log level
// comes from XEUS_FORGE_LOG.  Fatal errors print one JSON object on stderr
// and exit nonzero.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "forge/config.hpp"
#include "forge/log.hpp"
#include "forge/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<int> jobs;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "pipeline config (JSON)")
      ->required();
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--jobs", args.jobs, "override the worker thread count");
}

forge::PipelineConfig load(const CommonArgs& args) {
  forge::PipelineConfig cfg = forge::load_config(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (args.jobs) cfg.jobs = *args.jobs;
  return cfg;
}

int fail(const std::string& command, const std::string& message) {
  nlohmann::json j;
  j["command"] = command;
  j["error"] = message;
  std::cerr << j.dump() << std::endl;
  spdlog::error("{}: {}", command, message);
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  forge::init_logging_from_env();

  CLI::App app{"xeus-forge speech pre-training data engine"};
  app.require_subcommand(1);

  CommonArgs args;
  std::optional<double> p_noise, p_reverb, snr_min, snr_max;

  CLI::App* segment = app.add_subcommand("segment", "cut recordings into utterances");
  CLI::App* label = app.add_subcommand("label", "fit k-means and write pseudo-labels");
  CLI::App* augment = app.add_subcommand("augment", "write trainer-ready shards");
  CLI::App* batch = app.add_subcommand("batch", "write the batch plan");
  CLI::App* bench = app.add_subcommand("bench", "run the scheduler benchmark");
  CLI::App* stats = app.add_subcommand("stats", "language coverage statistics");
  for (CLI::App* cmd : {segment, label, augment, batch, bench, stats}) {
    add_common(cmd, args);
  }
  augment->add_option("--p-noise", p_noise, "override noise.p");
  augment->add_option("--p-reverb", p_reverb, "override reverb.p_r");
  augment->add_option("--snr-min", snr_min, "override noise.snr_db_min");
  augment->add_option("--snr-max", snr_max, "override noise.snr_db_max");

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    forge::PipelineConfig cfg = load(args);
    if (command == "segment") {
      const forge::SegmentReport report = forge::run_segment(cfg);
      if (report.files_failed > 0) {
        nlohmann::json j;
        j["command"] = command;
        j["error"] = std::to_string(report.files_failed) + " of " +
                     std::to_string(report.files_seen) + " files failed";
        j["failures"] = report.failures;
        std::cerr << j.dump() << std::endl;
        return 2;
      }
    } else if (command == "label") {
      forge::run_label(cfg);
    } else if (command == "augment") {
      if (p_noise) cfg.noise.p = *p_noise;
      if (p_reverb) cfg.reverb.p_r = *p_reverb;
      if (snr_min) cfg.noise.snr_db_min = *snr_min;
      if (snr_max) cfg.noise.snr_db_max = *snr_max;
      if (cfg.noise.p < 0 || cfg.noise.p > 1 || cfg.reverb.p_r < 0 ||
          cfg.reverb.p_r > 1) {
        throw std::runtime_error("probabilities must lie in [0, 1]");
      }
      if (cfg.noise.snr_db_min > cfg.noise.snr_db_max) {
        throw std::runtime_error("--snr-min exceeds --snr-max");
      }
      forge::run_augment(cfg);
    } else if (command == "batch") {
      forge::run_batch(cfg);
    } else if (command == "bench") {
      forge::run_bench(cfg);
    } else if (command == "stats") {
      forge::run_stats(cfg);
    }
  } catch (const std::exception& e) {
    return fail(command, e.what());
  }
  return 0;
}
