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

#include "forge/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace forge {

namespace {

const std::set<std::string> kKnownFields = {
    "id", "audio_path", "duration_s", "language", "source", "domain", "license"};

[[noreturn]] void fail(const std::filesystem::path& path, size_t line,
                       const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " +
                           what);
}

}  // namespace

bool valid_language_code(std::string_view code) {
  if (code.size() != 3) return false;
  for (char c : code) {
    if (c < 'a' || c > 'z') return false;
  }
  return true;
}

const ManifestEntry* Manifest::find(std::string_view id) const {
  for (const ManifestEntry& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

double Manifest::total_hours() const {
  double s = 0.0;
  for (const ManifestEntry& e : entries) s += e.duration_s;
  return s / 3600.0;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  Manifest m;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail(path, line_no, "entry is not a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (kKnownFields.find(key) == kKnownFields.end()) {
        fail(path, line_no, "unknown field '" + key + "'");
      }
    }
    ManifestEntry e;
    try {
      e.id = j.at("id").get<std::string>();
      e.audio_path = j.at("audio_path").get<std::string>();
      e.duration_s = j.at("duration_s").get<double>();
      e.language = j.value("language", "und");
      e.source = j.value("source", "");
      e.domain = j.value("domain", "");
      e.license = j.value("license", "");
    } catch (const nlohmann::json::exception& ex) {
      fail(path, line_no, std::string("bad entry: ") + ex.what());
    }
    if (e.id.empty()) fail(path, line_no, "empty id");
    if (!seen_ids.insert(e.id).second) {
      fail(path, line_no, "duplicate id '" + e.id + "'");
    }
    if (!(e.duration_s > 0.0) || !std::isfinite(e.duration_s)) {
      fail(path, line_no, "duration_s must be positive and finite");
    }
    if (e.language != "und" && !valid_language_code(e.language)) {
      fail(path, line_no, "malformed language code '" + e.language + "'");
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

void save_manifest(const Manifest& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  for (const ManifestEntry& e : m.entries) {
    nlohmann::json j;
    j["id"] = e.id;
    j["audio_path"] = e.audio_path;
    j["duration_s"] = e.duration_s;
    j["language"] = e.language;
    j["source"] = e.source;
    j["domain"] = e.domain;
    j["license"] = e.license;
    out << j.dump() << "\n";
  }
  if (!out.flush()) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

double LanguageStats::top_share(size_t n) const {
  if (total_hours <= 0.0) return 1.0;
  double top = 0.0;
  for (size_t i = 0; i < std::min(n, hours_by_language.size()); ++i) {
    top += hours_by_language[i].second;
  }
  return top / total_hours;
}

size_t LanguageStats::count_at_least(double min_hours) const {
  size_t count = 0;
  for (const auto& [lang, hours] : hours_by_language) {
    if (hours >= min_hours) ++count;
  }
  return count;
}

LanguageStats language_stats(const Manifest& m, bool include_und) {
  // std::map keeps accumulation order independent of entry order.
  std::map<std::string, double> seconds;
  for (const ManifestEntry& e : m.entries) {
    if (!include_und && e.language == "und") continue;
    seconds[e.language] += e.duration_s;
  }
  LanguageStats stats;
  for (const auto& [lang, sec] : seconds) {
    stats.hours_by_language.emplace_back(lang, sec / 3600.0);
    stats.total_hours += sec / 3600.0;
  }
  std::sort(stats.hours_by_language.begin(), stats.hours_by_language.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  return stats;
}

void write_language_csv(const LanguageStats& stats,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << "language,hours,log10_hours\n";
  for (const auto& [lang, hours] : stats.hours_by_language) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f", hours,
                  hours > 0.0 ? std::log10(hours) : -INFINITY);
    out << lang << "," << buf << "\n";
  }
  if (!out.flush()) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

}  // namespace forge
