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

#include "forge/shard.hpp"

#include <cstring>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace forge {

std::string AugmentProvenance::to_json() const {
  nlohmann::json j;
  j["choice"] = choice;
  j["noise_id"] = noise_id;
  j["interferer_id"] = interferer_id;
  j["snr_db"] = snr_db;
  j["reverb"] = reverb;
  j["rir_id"] = rir_id;
  j["step"] = step;
  j["p_mask"] = p_mask;
  return j.dump();
}

AugmentProvenance AugmentProvenance::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  AugmentProvenance p;
  p.choice = j.at("choice").get<std::string>();
  p.noise_id = j.at("noise_id").get<std::string>();
  p.interferer_id = j.at("interferer_id").get<std::string>();
  p.snr_db = j.at("snr_db").get<double>();
  p.reverb = j.at("reverb").get<bool>();
  p.rir_id = j.at("rir_id").get<std::string>();
  p.step = j.at("step").get<uint64_t>();
  p.p_mask = j.at("p_mask").get<double>();
  return p;
}

namespace {

constexpr char kShardMagic[4] = {'X', 'S', 'H', 'D'};
constexpr char kLabelMagic[4] = {'X', 'L', 'A', 'B'};
constexpr uint32_t kVersion = 1;

void put16(std::ofstream& out, uint16_t v) {
  out.write(reinterpret_cast<const char*>(&v), 2);
}
void put32(std::ofstream& out, uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), 4);
}

class Reader {
 public:
  Reader(const std::filesystem::path& path, const char magic[4],
         const char* kind)
      : path_(path), in_(path, std::ios::binary) {
    if (!in_) {
      throw std::runtime_error("cannot open " + path.string());
    }
    char got[4];
    if (!in_.read(got, 4) || std::memcmp(got, magic, 4) != 0) {
      throw std::runtime_error(path.string() + ": not a " + kind + " file");
    }
    const uint32_t version = u32("version");
    if (version != kVersion) {
      throw std::runtime_error(path.string() + ": unsupported version " +
                               std::to_string(version));
    }
  }

  bool at_eof() {
    in_.peek();
    return in_.eof();
  }

  uint16_t u16(const char* what) {
    uint16_t v;
    read(&v, 2, what);
    return v;
  }
  uint32_t u32(const char* what) {
    uint32_t v;
    read(&v, 4, what);
    return v;
  }
  double f64(const char* what) {
    double v;
    read(&v, 8, what);
    return v;
  }
  std::string str(size_t len, const char* what) {
    std::string s(len, '\0');
    read(s.data(), len, what);
    return s;
  }
  void read(void* dst, size_t len, const char* what) {
    if (!in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(len))) {
      throw std::runtime_error(path_.string() + ": truncated " +
                               std::string(what));
    }
  }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
};

}  // namespace

ShardWriter::ShardWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out_.write(kShardMagic, 4);
  put32(out_, kVersion);
  open_ = true;
}

void ShardWriter::append(const ShardRecord& record) {
  if (!open_) {
    throw std::logic_error("shard writer already closed");
  }
  if (record.id.empty() || record.id.size() > 0xFFFF) {
    throw std::invalid_argument("record id must be 1..65535 bytes");
  }
  put16(out_, static_cast<uint16_t>(record.id.size()));
  out_.write(record.id.data(), static_cast<std::streamsize>(record.id.size()));
  put32(out_, record.sample_rate);
  put32(out_, static_cast<uint32_t>(record.samples.size()));
  out_.write(reinterpret_cast<const char*>(record.samples.data()),
             static_cast<std::streamsize>(record.samples.size() * sizeof(float)));
  put32(out_, static_cast<uint32_t>(record.labels.size()));
  out_.write(reinterpret_cast<const char*>(record.labels.data()),
             static_cast<std::streamsize>(record.labels.size() * sizeof(uint16_t)));
  put16(out_, record.span_len);
  put32(out_, static_cast<uint32_t>(record.mask_starts.size()));
  out_.write(reinterpret_cast<const char*>(record.mask_starts.data()),
             static_cast<std::streamsize>(record.mask_starts.size() * sizeof(uint32_t)));
  put32(out_, static_cast<uint32_t>(record.provenance_json.size()));
  out_.write(record.provenance_json.data(),
             static_cast<std::streamsize>(record.provenance_json.size()));
  if (!out_) {
    throw std::runtime_error("write failed for " + path_.string());
  }
}

void ShardWriter::close() {
  if (!open_) return;
  open_ = false;
  out_.flush();
  if (!out_) {
    throw std::runtime_error("write failed for " + path_.string());
  }
  out_.close();
}

ShardWriter::~ShardWriter() {
  try {
    close();
  } catch (...) {
    // Destructors must not throw; call close() explicitly to see errors.
  }
}

std::vector<ShardRecord> read_shard(const std::filesystem::path& path) {
  Reader r(path, kShardMagic, "shard");
  std::vector<ShardRecord> records;
  while (!r.at_eof()) {
    ShardRecord rec;
    const uint16_t id_len = r.u16("id length");
    rec.id = r.str(id_len, "id");
    rec.sample_rate = r.u32("sample rate");
    const uint32_t n_samples = r.u32("sample count");
    rec.samples.resize(n_samples);
    r.read(rec.samples.data(), n_samples * sizeof(float), "samples");
    const uint32_t n_labels = r.u32("label count");
    rec.labels.resize(n_labels);
    r.read(rec.labels.data(), n_labels * sizeof(uint16_t), "labels");
    rec.span_len = r.u16("span length");
    const uint32_t n_starts = r.u32("mask start count");
    rec.mask_starts.resize(n_starts);
    r.read(rec.mask_starts.data(), n_starts * sizeof(uint32_t), "mask starts");
    const uint32_t prov_len = r.u32("provenance length");
    rec.provenance_json = r.str(prov_len, "provenance");
    records.push_back(std::move(rec));
  }
  return records;
}

void save_labels(const LabelStore& store, const std::filesystem::path& path) {
  // Validate up front so a bad store never leaves a partial file behind.
  for (const auto& [id, labels] : store.by_id) {
    if (id.empty() || id.size() > 0xFFFF) {
      throw std::invalid_argument("label id must be 1..65535 bytes");
    }
    for (uint16_t label : labels) {
      if (label >= store.k) {
        throw std::invalid_argument("label " + std::to_string(label) +
                                    " for '" + id + "' outside k=" +
                                    std::to_string(store.k));
      }
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out.write(kLabelMagic, 4);
  put32(out, kVersion);
  put32(out, store.k);
  out.write(reinterpret_cast<const char*>(&store.frame_hop_ms), 8);
  for (const auto& [id, labels] : store.by_id) {
    put16(out, static_cast<uint16_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
    put32(out, static_cast<uint32_t>(labels.size()));
    out.write(reinterpret_cast<const char*>(labels.data()),
              static_cast<std::streamsize>(labels.size() * sizeof(uint16_t)));
  }
  if (!out.flush()) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

LabelStore load_labels(const std::filesystem::path& path) {
  Reader r(path, kLabelMagic, "label store");
  LabelStore store;
  store.k = r.u32("k");
  store.frame_hop_ms = r.f64("frame hop");
  while (!r.at_eof()) {
    const uint16_t id_len = r.u16("id length");
    std::string id = r.str(id_len, "id");
    const uint32_t n = r.u32("label count");
    std::vector<uint16_t> labels(n);
    r.read(labels.data(), n * sizeof(uint16_t), "labels");
    for (uint16_t label : labels) {
      if (label >= store.k) {
        throw std::runtime_error(path.string() + ": label " +
                                 std::to_string(label) + " outside k=" +
                                 std::to_string(store.k));
      }
    }
    store.by_id.emplace(std::move(id), std::move(labels));
  }
  return store;
}

}  // namespace forge
