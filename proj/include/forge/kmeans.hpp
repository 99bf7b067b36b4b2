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

#ifndef FORGE_KMEANS_HPP_
#define FORGE_KMEANS_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "forge/features.hpp"

namespace forge {

struct KMeansModel {
  uint32_t k = 0;
  uint32_t dim = 0;
  uint64_t seed = 0;
  std::vector<float> centroids;  // row-major k x dim

  const float* centroid(uint32_t c) const { return centroids.data() + c * dim; }
};

struct KMeansStats {
  // Inertia after each assignment step; non-increasing by construction.
  std::vector<double> inertia;
  size_t iterations = 0;
  bool converged = false;
};

// Per-frame cluster ids for one utterance.
struct FrameLabels {
  std::vector<uint16_t> labels;
  double frame_hop_ms = 20.0;
};

// Lloyd's algorithm with k-means++ seeding.  Deterministic for a given
// seed: candidate sampling walks the cumulative weight array, distance ties
// resolve to the lowest cluster id, and empty clusters are reseeded to the
// point farthest from its assigned centroid.  Stops when the assignment
// reaches a fixpoint or after max_iters iterations.  Throws
// std::invalid_argument when there are fewer frames than clusters, k is 0
// or exceeds 65535, or features are non-finite.
KMeansModel kmeans_fit(const FeatureMatrix& features, uint32_t k,
                       uint32_t max_iters, uint64_t seed,
                       KMeansStats* stats = nullptr);

// Nearest-centroid assignment (ties to the lowest id).  Throws on a
// feature-dimension mismatch.
FrameLabels assign(const KMeansModel& model, const FeatureMatrix& features);

// Binary model format: "XKMN", u32 version, u32 k, u32 dim, k*dim float32
// centroids, u64 seed; all little-endian.
void save_kmeans(const KMeansModel& model, const std::filesystem::path& path);
KMeansModel load_kmeans(const std::filesystem::path& path);

}  // namespace forge

#endif  // FORGE_KMEANS_HPP_
