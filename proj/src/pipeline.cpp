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

#include "forge/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "forge/batching.hpp"
#include "forge/kmeans.hpp"
#include "forge/manifest.hpp"
#include "forge/mask.hpp"
#include "forge/noise.hpp"
#include "forge/parallel.hpp"
#include "forge/reverb.hpp"
#include "forge/shard.hpp"
#include "forge/subset.hpp"
#include "forge/vad.hpp"
#include "forge/wav.hpp"

namespace forge {

namespace {

namespace fs = std::filesystem;

std::string sanitize_id(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9');
    out.push_back(ok ? c : '-');
  }
  return out;
}

// Corpus layout conventions: the top-level directory under the corpus root
// names the source dataset, and the deepest directory that looks like an
// ISO 639-3 code names the language.
std::string infer_source(const fs::path& rel) {
  auto it = rel.begin();
  if (it == rel.end() || std::next(it) == rel.end()) return "local";
  return it->string();
}

std::string infer_language(const fs::path& rel) {
  std::string lang = "und";
  for (auto it = rel.begin(); it != rel.end(); ++it) {
    if (std::next(it) == rel.end()) break;  // skip the filename itself
    if (valid_language_code(it->string())) lang = it->string();
  }
  return lang;
}

std::vector<fs::path> find_wavs(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw std::runtime_error("corpus root " + root.string() +
                             " is not a directory");
  }
  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

size_t hop_samples(const LogMelConfig& cfg, int sample_rate) {
  return static_cast<size_t>(
      std::max<long>(1, std::lround(cfg.hop_ms * sample_rate / 1000.0)));
}

size_t expected_frames(size_t n_samples, size_t hop) {
  return n_samples == 0 ? 0 : (n_samples + hop - 1) / hop;
}

}  // namespace

SegmentReport run_segment(const PipelineConfig& cfg) {
  if (cfg.paths.corpus_root.empty()) {
    throw std::runtime_error("paths.corpus_root is not set");
  }
  const fs::path root(cfg.paths.corpus_root);
  const fs::path out_dir(cfg.paths.output_dir);
  fs::create_directories(out_dir / "utts");

  const std::vector<fs::path> paths = find_wavs(root);
  spdlog::info("segmenting {} files from {}", paths.size(), root.string());

  struct FileResult {
    std::vector<Utterance> utterances;
    std::vector<Segment> segments;  // parallel to utterances
    std::string source;
    std::string error;
  };
  std::vector<FileResult> results(paths.size());

  parallel_for(paths.size(), cfg.jobs, [&](size_t i) {
    FileResult& res = results[i];
    try {
      const fs::path rel = fs::relative(paths[i], root);
      const Waveform raw = read_wav(paths[i]);
      const Waveform wave = resample(raw, cfg.segment.sample_rate);
      const std::vector<Segment> segments = vad(wave, cfg.vad);
      const std::string prefix = sanitize_id(
          rel.parent_path().empty()
              ? rel.stem().string()
              : (rel.parent_path() / rel.stem()).string()) + "-";
      std::vector<Utterance> utts = extract_utterances(
          wave, segments, prefix, infer_language(rel));
      // Keep segment rows aligned with the surviving utterances.
      std::vector<Segment> kept_segments;
      std::vector<Utterance> kept;
      for (size_t u = 0; u < utts.size(); ++u) {
        if (utts[u].duration_s() <= cfg.segment.max_duration_s) {
          kept_segments.push_back(segments[u]);
          kept.push_back(std::move(utts[u]));
        }
      }
      res.utterances = std::move(kept);
      res.segments = std::move(kept_segments);
      res.source = infer_source(rel);
    } catch (const std::exception& e) {
      res.error = paths[i].string() + ": " + e.what();
    }
  });

  SegmentReport report;
  report.files_seen = paths.size();

  Manifest manifest;
  std::ofstream seg_out(out_dir / "segments.jsonl", std::ios::trunc);
  if (!seg_out) {
    throw std::runtime_error("cannot write segments.jsonl");
  }
  for (size_t i = 0; i < results.size(); ++i) {
    FileResult& res = results[i];
    if (!res.error.empty()) {
      spdlog::error("{}", res.error);
      report.failures.push_back(res.error);
      ++report.files_failed;
      continue;
    }
    for (size_t u = 0; u < res.utterances.size(); ++u) {
      const Utterance& utt = res.utterances[u];
      const std::string rel_path = "utts/" + utt.id + ".wav";
      write_wav(utt.waveform, out_dir / rel_path, WavCodec::kFloat32);

      ManifestEntry entry;
      entry.id = utt.id;
      entry.audio_path = rel_path;
      entry.duration_s = utt.duration_s();
      entry.language = utt.language;
      entry.source = res.source;
      manifest.entries.push_back(entry);

      nlohmann::json j;
      j["id"] = utt.id;
      j["start_s"] =
          static_cast<double>(res.segments[u].start) / cfg.segment.sample_rate;
      j["end_s"] =
          static_cast<double>(res.segments[u].end) / cfg.segment.sample_rate;
      seg_out << j.dump() << "\n";
      ++report.utterances;
    }
  }
  if (!seg_out.flush()) {
    throw std::runtime_error("write failed for segments.jsonl");
  }
  save_manifest(manifest, out_dir / "manifest.jsonl");
  spdlog::info("wrote {} utterances from {} files ({} failed)",
               report.utterances, report.files_seen, report.files_failed);
  return report;
}

LabelReport run_label(const PipelineConfig& cfg) {
  const fs::path out_dir(cfg.paths.output_dir);
  const Manifest manifest = load_manifest(out_dir / "manifest.jsonl");
  if (manifest.entries.empty()) {
    throw std::runtime_error("manifest is empty; run segment first");
  }

  std::vector<std::string> subset_ids;
  if (cfg.kmeans.subset_hours.empty()) {
    for (const ManifestEntry& e : manifest.entries) subset_ids.push_back(e.id);
  } else {
    subset_ids = sample_label_subset(manifest, cfg.kmeans.subset_hours, cfg.seed);
  }

  std::unordered_map<std::string, const ManifestEntry*> by_id;
  for (const ManifestEntry& e : manifest.entries) by_id[e.id] = &e;

  LabelReport report;
  report.subset_utterances = subset_ids.size();

  // Pooled features for fitting, in subset order.
  std::vector<FeatureMatrix> mats(subset_ids.size());
  parallel_for(subset_ids.size(), cfg.jobs, [&](size_t i) {
    const ManifestEntry* e = by_id.at(subset_ids[i]);
    const Waveform w = read_wav(out_dir / e->audio_path);
    mats[i] = logmel(w, cfg.features);
  });
  FeatureMatrix pooled;
  pooled.dim = static_cast<size_t>(cfg.features.dim);
  pooled.frame_hop_ms = cfg.features.hop_ms;
  for (const FeatureMatrix& m : mats) {
    pooled.frames += m.frames;
    pooled.data.insert(pooled.data.end(), m.data.begin(), m.data.end());
  }
  report.pooled_frames = pooled.frames;
  spdlog::info("fitting k-means: k={} on {} frames from {} utterances",
               cfg.kmeans.k, pooled.frames, subset_ids.size());

  KMeansStats stats;
  const KMeansModel model =
      kmeans_fit(pooled, cfg.kmeans.k, cfg.kmeans.max_iters, cfg.seed, &stats);
  report.iterations = stats.iterations;
  report.converged = stats.converged;
  report.final_inertia = stats.inertia.empty() ? 0.0 : stats.inertia.back();
  spdlog::info("k-means {} after {} iterations, inertia {:.6g}",
               stats.converged ? "converged" : "stopped", stats.iterations,
               report.final_inertia);
  save_kmeans(model, out_dir / "kmeans.xkmn");

  // Label the full manifest with the fitted model.
  std::vector<std::vector<uint16_t>> labels(manifest.entries.size());
  parallel_for(manifest.entries.size(), cfg.jobs, [&](size_t i) {
    const ManifestEntry& e = manifest.entries[i];
    const Waveform w = read_wav(out_dir / e.audio_path);
    labels[i] = assign(model, logmel(w, cfg.features)).labels;
  });
  LabelStore store;
  store.k = model.k;
  store.frame_hop_ms = cfg.features.hop_ms;
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    store.by_id.emplace(manifest.entries[i].id, std::move(labels[i]));
  }
  report.labeled_utterances = store.by_id.size();
  save_labels(store, out_dir / "labels.xlab");
  return report;
}

AugmentReport run_augment(const PipelineConfig& cfg) {
  const fs::path out_dir(cfg.paths.output_dir);
  const Manifest manifest = load_manifest(out_dir / "manifest.jsonl");
  if (manifest.entries.empty()) {
    throw std::runtime_error("manifest is empty; run segment first");
  }
  const LabelStore store = load_labels(out_dir / "labels.xlab");

  std::vector<Rir> rirs;
  if (!cfg.paths.rir_dir.empty()) rirs = load_rir_dir(cfg.paths.rir_dir);
  NoiseBank noises;
  if (!cfg.paths.noise_dir.empty()) noises = load_noise_dir(cfg.paths.noise_dir);

  std::vector<UtteranceRef> refs;
  refs.reserve(manifest.entries.size());
  for (const ManifestEntry& e : manifest.entries) {
    refs.push_back({e.id, e.duration_s});
  }
  const std::vector<Batch> batches = make_batches(refs, cfg.batch.budget_s);

  std::unordered_map<std::string, const ManifestEntry*> by_id;
  for (const ManifestEntry& e : manifest.entries) by_id[e.id] = &e;

  // One optimizer step per budget's worth of padded audio, so the
  // augmentation schedule can be evaluated per batch up front.
  std::vector<uint64_t> steps(batches.size());
  double cum_footprint = 0.0;
  for (size_t b = 0; b < batches.size(); ++b) {
    steps[b] = cfg.mask.schedule_start_step +
               static_cast<uint64_t>(cum_footprint / cfg.batch.budget_s);
    cum_footprint += batches[b].padded_footprint_s();
  }

  fs::create_directories(out_dir / "shards");
  std::vector<size_t> corrupted(batches.size(), 0);
  std::vector<size_t> reverberated(batches.size(), 0);

  parallel_for(batches.size(), cfg.jobs, [&](size_t b) {
    const Batch& batch = batches[b];
    const ScheduleState st = schedule(steps[b]);

    std::vector<Utterance> utts;
    utts.reserve(batch.members.size());
    for (const UtteranceRef& ref : batch.members) {
      const ManifestEntry* e = by_id.at(ref.id);
      Utterance u;
      u.id = e->id;
      u.language = e->language;
      u.waveform = read_wav(out_dir / e->audio_path);
      utts.push_back(std::move(u));
    }

    NoiseConfig noise_cfg = cfg.noise;
    ReverbConfig reverb_cfg = cfg.reverb;
    if (!st.augmentation_enabled) {
      noise_cfg.p = 0.0;
      reverb_cfg.p_r = 0.0;
    }
    std::vector<CorruptionEvent> cevents;
    std::vector<Utterance> mixed =
        corrupt_batch(utts, noises.clips, noise_cfg, cfg.seed, &cevents);
    std::vector<ReverbEvent> revents;
    mixed = apply_reverb_batch(std::move(mixed), rirs, reverb_cfg, cfg.seed,
                               &revents);

    char name[32];
    std::snprintf(name, sizeof(name), "batch-%05zu.xshd", b);
    ShardWriter writer(out_dir / "shards" / name);
    for (size_t i = 0; i < mixed.size(); ++i) {
      const Utterance& utt = mixed[i];
      const auto labels_it = store.by_id.find(utt.id);
      if (labels_it == store.by_id.end()) {
        throw std::runtime_error("no labels for '" + utt.id +
                                 "'; rerun label after segment");
      }
      const std::vector<uint16_t>& labels = labels_it->second;
      const size_t hop = hop_samples(cfg.features, utt.waveform.sample_rate);
      const size_t want = expected_frames(utt.waveform.samples.size(), hop);
      if (labels.size() != want) {
        throw std::runtime_error(
            "labels for '" + utt.id + "' cover " +
            std::to_string(labels.size()) + " frames, audio has " +
            std::to_string(want) + "; rerun label");
      }

      Rng mask_rng = stream(cfg.seed, "mask", utt.id);
      const MaskSpec mask = gen_mask(static_cast<uint32_t>(labels.size()),
                                     st.p_mask, cfg.mask.span_len, mask_rng);

      AugmentProvenance prov;
      prov.step = steps[b];
      prov.p_mask = st.p_mask;
      switch (cevents[i].choice) {
        case CorruptionChoice::kNone:
          break;
        case CorruptionChoice::kAdditiveNoise:
          prov.choice = "additive_noise";
          prov.noise_id = noises.ids[static_cast<size_t>(cevents[i].source_index)];
          prov.snr_db = cevents[i].snr_db;
          ++corrupted[b];
          break;
        case CorruptionChoice::kInterferingUtterance:
          prov.choice = "interfering_utterance";
          prov.interferer_id = utts[static_cast<size_t>(cevents[i].source_index)].id;
          prov.snr_db = cevents[i].snr_db;
          ++corrupted[b];
          break;
      }
      if (revents[i].applied) {
        prov.reverb = true;
        prov.rir_id = revents[i].rir_id;
        ++reverberated[b];
      }

      ShardRecord rec;
      rec.id = utt.id;
      rec.sample_rate = static_cast<uint32_t>(utt.waveform.sample_rate);
      rec.samples = utt.waveform.samples;
      rec.labels = labels;
      rec.span_len = static_cast<uint16_t>(cfg.mask.span_len);
      rec.mask_starts = mask.span_starts;
      rec.provenance_json = prov.to_json();
      writer.append(rec);
    }
    writer.close();
  });

  AugmentReport report;
  report.batches = batches.size();
  for (const Batch& b : batches) report.records += b.members.size();
  for (size_t c : corrupted) report.corrupted += c;
  for (size_t r : reverberated) report.reverberated += r;
  spdlog::info("wrote {} shards ({} records, {} corrupted, {} reverberated)",
               report.batches, report.records, report.corrupted,
               report.reverberated);
  return report;
}

BatchReport run_batch(const PipelineConfig& cfg) {
  const fs::path out_dir(cfg.paths.output_dir);
  const Manifest manifest = load_manifest(out_dir / "manifest.jsonl");
  std::vector<UtteranceRef> refs;
  refs.reserve(manifest.entries.size());
  for (const ManifestEntry& e : manifest.entries) {
    refs.push_back({e.id, e.duration_s});
  }
  const std::vector<Batch> batches = make_batches(refs, cfg.batch.budget_s);
  const WorkerAssignment assignment =
      distribute_length_aware(batches, cfg.batch.workers);

  nlohmann::json plan;
  plan["budget_s"] = cfg.batch.budget_s;
  plan["workers"] = cfg.batch.workers;
  plan["batches"] = nlohmann::json::array();
  for (const Batch& b : batches) {
    nlohmann::json jb;
    jb["ids"] = nlohmann::json::array();
    for (const UtteranceRef& u : b.members) jb["ids"].push_back(u.id);
    jb["max_len_s"] = b.max_len_s;
    jb["footprint_s"] = b.padded_footprint_s();
    jb["total_s"] = b.total_duration_s();
    plan["batches"].push_back(std::move(jb));
  }
  plan["steps"] = assignment.steps;

  fs::create_directories(out_dir);
  std::ofstream out(out_dir / "batch_plan.json", std::ios::trunc);
  if (!out || !(out << plan.dump(2) << "\n").flush()) {
    throw std::runtime_error("cannot write batch_plan.json");
  }

  BatchReport report;
  report.batches = batches.size();
  report.steps = assignment.steps.size();
  report.padding_waste = padding_waste(batches);
  spdlog::info("planned {} batches over {} steps, padding waste {:.4f}",
               report.batches, report.steps, report.padding_waste);
  return report;
}

BenchReport run_bench(const PipelineConfig& cfg) {
  const std::vector<Batch> batches =
      synthetic_batches(cfg.bench.num_batches, cfg.batch.budget_s,
                        cfg.bench.median_s, cfg.bench.sigma, cfg.seed);

  Rng shuffle_rng = stream(cfg.seed, "bench", "shuffle");
  const WorkerAssignment random_rows =
      distribute_random(batches, cfg.batch.workers, shuffle_rng);
  const WorkerAssignment aware_rows =
      distribute_length_aware(batches, cfg.batch.workers);

  const double baseline_wait =
      simulate_grad_accum(random_rows, batches, 1).total_sync_wait_s;

  BenchReport report;
  struct Strategy {
    const char* name;
    const WorkerAssignment* rows;
  };
  const Strategy strategies[] = {{"random", &random_rows},
                                 {"length_aware", &aware_rows}};
  for (const Strategy& strat : strategies) {
    for (int accum : cfg.bench.accum_steps) {
      const SimReport sim = simulate_grad_accum(*strat.rows, batches, accum);
      report.total_work_s = sim.total_work_s;
      BenchRow row;
      row.strategy = strat.name;
      row.workers = cfg.batch.workers;
      row.accum = accum;
      row.total_wait_s = sim.total_sync_wait_s;
      row.padding_waste = sim.padding_waste;
      row.relative_throughput = (sim.total_work_s + baseline_wait) /
                                (sim.total_work_s + sim.total_sync_wait_s);
      report.rows.push_back(std::move(row));
    }
  }

  const fs::path out_dir(cfg.paths.output_dir);
  fs::create_directories(out_dir);
  std::ofstream out(out_dir / "bench.csv", std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write bench.csv");
  }
  out << "strategy,workers,accum,total_wait_s,padding_waste,relative_throughput\n";
  for (const BenchRow& row : report.rows) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%.6f,%.6f,%.6f",
                  row.strategy.c_str(), row.workers, row.accum,
                  row.total_wait_s, row.padding_waste,
                  row.relative_throughput);
    out << buf << "\n";
    spdlog::info("bench {}", buf);
  }
  if (!out.flush()) {
    throw std::runtime_error("write failed for bench.csv");
  }
  return report;
}

StatsReport run_stats(const PipelineConfig& cfg) {
  const fs::path out_dir(cfg.paths.output_dir);
  const Manifest manifest = load_manifest(out_dir / "manifest.jsonl");
  const LanguageStats stats = language_stats(manifest, !cfg.stats.exclude_und);

  fs::create_directories(out_dir);
  write_language_csv(stats, out_dir / "languages.csv");

  StatsReport report;
  report.total_hours = stats.total_hours;
  report.num_languages = stats.hours_by_language.size();
  report.top_share = stats.top_share(cfg.stats.top_n);
  report.count_at_least = stats.count_at_least(cfg.stats.min_hours);

  nlohmann::json j;
  j["total_hours"] = report.total_hours;
  j["num_languages"] = report.num_languages;
  j["top_n"] = cfg.stats.top_n;
  j["top_share"] = report.top_share;
  j["min_hours"] = cfg.stats.min_hours;
  j["count_at_least"] = report.count_at_least;
  std::ofstream out(out_dir / "stats.json", std::ios::trunc);
  if (!out || !(out << j.dump(2) << "\n").flush()) {
    throw std::runtime_error("cannot write stats.json");
  }
  spdlog::info("{} languages, {:.3f} hours, top-{} share {:.4f}",
               report.num_languages, report.total_hours, cfg.stats.top_n,
               report.top_share);
  return report;
}

}  // namespace forge
