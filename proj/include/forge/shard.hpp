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

#ifndef FORGE_SHARD_HPP_
#define FORGE_SHARD_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace forge {

// How a shard record was produced; serialized as JSON inside the record so
// any consumer can audit the augmentation without this library.
struct AugmentProvenance {
  std::string choice = "none";  // none | additive_noise | interfering_utterance
  std::string noise_id;         // additive noise source, "" otherwise
  std::string interferer_id;    // interfering utterance, "" otherwise
  double snr_db = 0.0;
  bool reverb = false;
  std::string rir_id;
  uint64_t step = 0;
  double p_mask = 0.0;

  std::string to_json() const;
  static AugmentProvenance from_json(const std::string& text);
};

// One trainer-ready example: augmented audio, clean-audio pseudo-labels and
// the mask span starts.
struct ShardRecord {
  std::string id;
  uint32_t sample_rate = 0;
  std::vector<float> samples;
  std::vector<uint16_t> labels;
  uint16_t span_len = 0;
  std::vector<uint32_t> mask_starts;
  std::string provenance_json;
};

// Binary shard, little-endian throughout: "XSHD" magic, u32 version, then
// per record: u16 id length + id bytes, u32 sample rate, u32 sample count +
// float32 samples, u32 label count + u16 labels, u16 span_len, u32 start
// count + u32 starts, u32 provenance length + JSON bytes.
class ShardWriter {
 public:
  explicit ShardWriter(const std::filesystem::path& path);
  void append(const ShardRecord& record);
  // Flushes and closes; throws on I/O failure.  Called by the destructor,
  // which swallows errors, so call close() when you care.
  void close();
  ~ShardWriter();

  ShardWriter(const ShardWriter&) = delete;
  ShardWriter& operator=(const ShardWriter&) = delete;

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  bool open_ = false;
};

std::vector<ShardRecord> read_shard(const std::filesystem::path& path);

// Pseudo-label store for a whole corpus: "XLAB" magic, u32 version, u32 k,
// f64 frame hop in ms, then per utterance: u16 id length + id, u32 label
// count + u16 labels.
struct LabelStore {
  uint32_t k = 0;
  double frame_hop_ms = 20.0;
  std::map<std::string, std::vector<uint16_t>> by_id;
};

void save_labels(const LabelStore& store, const std::filesystem::path& path);
LabelStore load_labels(const std::filesystem::path& path);

}  // namespace forge

#endif  // FORGE_SHARD_HPP_
