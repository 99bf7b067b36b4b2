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

#include "forge/subset.hpp"

#include <stdexcept>
#include <utility>

#include "forge/rng.hpp"

namespace forge {

std::vector<std::string> sample_label_subset(
    const Manifest& m, const std::map<std::string, double>& hours_per_source,
    uint64_t seed) {
  std::vector<std::string> out;
  for (const auto& [source, hours] : hours_per_source) {
    if (hours <= 0.0) continue;
    std::vector<size_t> bucket;
    for (size_t i = 0; i < m.entries.size(); ++i) {
      if (m.entries[i].source == source) bucket.push_back(i);
    }
    if (bucket.empty()) {
      throw std::invalid_argument("no manifest entries for source '" + source +
                                  "'");
    }
    Rng rng = stream(seed, "subset", source);
    for (size_t i = 0; i + 1 < bucket.size(); ++i) {
      const size_t j =
          i + static_cast<size_t>(rng.next_below(bucket.size() - i));
      std::swap(bucket[i], bucket[j]);
    }
    const double budget_s = hours * 3600.0;
    double taken_s = 0.0;
    for (size_t idx : bucket) {
      if (taken_s >= budget_s) break;
      out.push_back(m.entries[idx].id);
      taken_s += m.entries[idx].duration_s;
    }
  }
  return out;
}

}  // namespace forge
