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

#include "forge/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "forge/rng.hpp"

namespace forge {

namespace {

double sq_dist(const float* a, const float* b, size_t dim) {
  double acc = 0.0;
  for (size_t d = 0; d < dim; ++d) {
    const double diff = static_cast<double>(a[d]) - static_cast<double>(b[d]);
    acc += diff * diff;
  }
  return acc;
}

// Samples an index with probability proportional to weights[i] by walking
// the cumulative sum.  Identical relative weights give identical picks for
// a fixed rng, which keeps seeding invariant under frame duplication.
size_t weighted_pick(const std::vector<double>& weights, double total,
                     Rng& rng) {
  const double r = rng.uniform01() * total;
  double cum = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (cum > r) return i;
  }
  // Numerical slack: fall back to the last positive weight.
  for (size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return weights.size() - 1;
}

}  // namespace

KMeansModel kmeans_fit(const FeatureMatrix& features, uint32_t k,
                       uint32_t max_iters, uint64_t seed, KMeansStats* stats) {
  const size_t n = features.frames;
  const size_t dim = features.dim;
  if (k == 0 || k > 65535) {
    throw std::invalid_argument("k must lie in [1, 65535], got " +
                                std::to_string(k));
  }
  if (n < k) {
    throw std::invalid_argument("k-means needs at least k frames: " +
                                std::to_string(n) + " < " + std::to_string(k));
  }
  if (dim == 0) {
    throw std::invalid_argument("feature dim must be positive");
  }
  for (float v : features.data) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("features contain a non-finite value");
    }
  }

  KMeansModel model;
  model.k = k;
  model.dim = static_cast<uint32_t>(dim);
  model.seed = seed;
  model.centroids.resize(static_cast<size_t>(k) * dim);

  Rng rng(seed);

  // k-means++ seeding: first center uniform, then proportional to the
  // squared distance to the nearest chosen center.
  std::vector<double> d2(n, 1.0);
  double total = static_cast<double>(n);
  for (uint32_t c = 0; c < k; ++c) {
    size_t pick;
    if (total > 0.0) {
      pick = weighted_pick(d2, total, rng);
    } else {
      // All remaining points coincide with existing centers.
      pick = static_cast<size_t>(rng.next_below(n));
    }
    float* center = model.centroids.data() + static_cast<size_t>(c) * dim;
    std::memcpy(center, features.row(pick), dim * sizeof(float));
    total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double dist = sq_dist(features.row(i), center, dim);
      if (c == 0 || dist < d2[i]) d2[i] = dist;
      total += d2[i];
    }
  }

  std::vector<uint32_t> assign_cur(n, 0), assign_prev(n, k);
  std::vector<double> min_dist(n, 0.0);
  std::vector<double> sums(static_cast<size_t>(k) * dim);
  std::vector<size_t> counts(k);
  if (stats != nullptr) *stats = {};

  bool converged = false;
  size_t iterations = 0;
  for (uint32_t iter = 0; iter < max_iters; ++iter) {
    ++iterations;
    // Assignment step (ties to the lowest cluster id).
    double inertia = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const float* x = features.row(i);
      double best = std::numeric_limits<double>::infinity();
      uint32_t best_c = 0;
      for (uint32_t c = 0; c < k; ++c) {
        const double dist = sq_dist(x, model.centroid(c), dim);
        if (dist < best) {
          best = dist;
          best_c = c;
        }
      }
      assign_cur[i] = best_c;
      min_dist[i] = best;
      inertia += best;
    }
    if (stats != nullptr) stats->inertia.push_back(inertia);
    if (assign_cur == assign_prev) {
      converged = true;
      break;
    }
    assign_prev = assign_cur;

    // Update step: means in double, accumulated in frame order.
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (size_t i = 0; i < n; ++i) {
      const float* x = features.row(i);
      double* s = sums.data() + static_cast<size_t>(assign_cur[i]) * dim;
      for (size_t d = 0; d < dim; ++d) s[d] += x[d];
      ++counts[assign_cur[i]];
    }
    // Empty clusters steal the point farthest from its current centroid;
    // each reseeded point is excluded from later picks this round.
    std::vector<double> steal = min_dist;
    for (uint32_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      size_t far_i = 0;
      double far_d = -1.0;
      for (size_t i = 0; i < n; ++i) {
        if (steal[i] > far_d) {
          far_d = steal[i];
          far_i = i;
        }
      }
      steal[far_i] = -1.0;
      const float* x = features.row(far_i);
      double* s = sums.data() + static_cast<size_t>(c) * dim;
      for (size_t d = 0; d < dim; ++d) s[d] = x[d];
      counts[c] = 1;
    }
    for (uint32_t c = 0; c < k; ++c) {
      float* center = model.centroids.data() + static_cast<size_t>(c) * dim;
      const double* s = sums.data() + static_cast<size_t>(c) * dim;
      for (size_t d = 0; d < dim; ++d) {
        center[d] = static_cast<float>(s[d] / counts[c]);
      }
    }
  }

  if (stats != nullptr) {
    stats->iterations = iterations;
    stats->converged = converged;
  }
  return model;
}

FrameLabels assign(const KMeansModel& model, const FeatureMatrix& features) {
  if (features.dim != model.dim) {
    throw std::invalid_argument("feature dim " + std::to_string(features.dim) +
                                " does not match model dim " +
                                std::to_string(model.dim));
  }
  FrameLabels out;
  out.frame_hop_ms = features.frame_hop_ms;
  out.labels.resize(features.frames);
  for (size_t i = 0; i < features.frames; ++i) {
    const float* x = features.row(i);
    double best = std::numeric_limits<double>::infinity();
    uint32_t best_c = 0;
    for (uint32_t c = 0; c < model.k; ++c) {
      const double dist = sq_dist(x, model.centroid(c), model.dim);
      if (dist < best) {
        best = dist;
        best_c = c;
      }
    }
    out.labels[i] = static_cast<uint16_t>(best_c);
  }
  return out;
}

namespace {

constexpr char kMagic[4] = {'X', 'K', 'M', 'N'};
constexpr uint32_t kVersion = 1;

}  // namespace

void save_kmeans(const KMeansModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out.write(kMagic, 4);
  auto put32 = [&out](uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  put32(kVersion);
  put32(model.k);
  put32(model.dim);
  out.write(reinterpret_cast<const char*>(model.centroids.data()),
            static_cast<std::streamsize>(model.centroids.size() * sizeof(float)));
  out.write(reinterpret_cast<const char*>(&model.seed), 8);
  if (!out.flush()) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

KMeansModel load_kmeans(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error(path.string() + ": not a k-means model file");
  }
  auto get32 = [&in, &path](const char* what) {
    uint32_t v;
    if (!in.read(reinterpret_cast<char*>(&v), 4)) {
      throw std::runtime_error(path.string() + ": truncated " + std::string(what));
    }
    return v;
  };
  const uint32_t version = get32("version");
  if (version != kVersion) {
    throw std::runtime_error(path.string() + ": unsupported model version " +
                             std::to_string(version));
  }
  KMeansModel model;
  model.k = get32("k");
  model.dim = get32("dim");
  if (model.k == 0 || model.dim == 0) {
    throw std::runtime_error(path.string() + ": zero k or dim");
  }
  model.centroids.resize(static_cast<size_t>(model.k) * model.dim);
  if (!in.read(reinterpret_cast<char*>(model.centroids.data()),
               static_cast<std::streamsize>(model.centroids.size() * sizeof(float)))) {
    throw std::runtime_error(path.string() + ": truncated centroids");
  }
  if (!in.read(reinterpret_cast<char*>(&model.seed), 8)) {
    throw std::runtime_error(path.string() + ": truncated seed");
  }
  in.peek();
  if (!in.eof()) {
    throw std::runtime_error(path.string() + ": trailing bytes after model");
  }
  return model;
}

}  // namespace forge
