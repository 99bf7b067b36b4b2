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

#ifndef FORGE_MANIFEST_HPP_
#define FORGE_MANIFEST_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

// One catalogued utterance.  language is an ISO 639-3 code or "und".
struct ManifestEntry {
  std::string id;
  std::string audio_path;
  double duration_s = 0.0;
  std::string language = "und";
  std::string source;
  std::string domain;
  std::string license;
};

struct Manifest {
  std::vector<ManifestEntry> entries;

  const ManifestEntry* find(std::string_view id) const;
  double total_hours() const;
};

// JSON Lines, one entry per line.  Required fields: id, audio_path,
// duration_s; optional: language, source, domain, license.  Rejects unknown
// fields, duplicate ids, non-positive durations and malformed language
// codes, citing the line number.
Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const Manifest& m, const std::filesystem::path& path);

bool valid_language_code(std::string_view code);

// Hours per language, sorted by hours descending (ties by code ascending).
struct LanguageStats {
  std::vector<std::pair<std::string, double>> hours_by_language;
  double total_hours = 0.0;

  // Fraction of all hours covered by the n largest languages (1 when empty).
  double top_share(size_t n) const;
  // Number of languages with at least min_hours catalogued.
  size_t count_at_least(double min_hours) const;
};

LanguageStats language_stats(const Manifest& m, bool include_und = true);

// CSV "language,hours,log10_hours" histogram, same order as the stats.
void write_language_csv(const LanguageStats& stats,
                        const std::filesystem::path& path);

}  // namespace forge

#endif  // FORGE_MANIFEST_HPP_
