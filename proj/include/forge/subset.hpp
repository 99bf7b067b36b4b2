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

#ifndef FORGE_SUBSET_HPP_
#define FORGE_SUBSET_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "forge/manifest.hpp"

namespace forge {

// Samples utterance ids per source bucket for clustering.  Each bucket is
// shuffled with its own stream derived from (seed, "subset", source), then
// utterances are taken until the bucket's hour budget is reached (the final
// utterance may overshoot).  A budget at or above the bucket total selects
// the whole bucket regardless of seed.  Buckets with a non-positive budget
// are skipped; a budgeted source absent from the manifest is an error.
std::vector<std::string> sample_label_subset(
    const Manifest& m, const std::map<std::string, double>& hours_per_source,
    uint64_t seed);

}  // namespace forge

#endif  // FORGE_SUBSET_HPP_
