/*
 * Copyright 2026 The rankfair Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rankfair/dataset.hpp"
#include "rankfair/error.hpp"
#include "rankfair/rng.hpp"

namespace rankfair {

struct SplitConfig {
  std::size_t images_per_identity = 10;  // l
  double probe_frac = 0.3;
  std::size_t k = 10;
  std::uint64_t seed = 0;

  /// Probes per eligible identity: floor(probe_frac * l).
  std::size_t probe_count() const {
    return static_cast<std::size_t>(
        std::floor(probe_frac * static_cast<double>(images_per_identity)));
  }

  void check() const {
    if (images_per_identity < 2)
      throw config_error("split: images_per_identity must be >= 2");
    if (!(probe_frac > 0.0 && probe_frac < 1.0))
      throw config_error("split: probe_frac must lie in (0, 1)");
    const std::size_t p = probe_count();
    if (p < 1 || p > images_per_identity - 1)
      throw config_error(
          "split: floor(probe_frac * l) must leave at least one probe and one "
          "gallery image");
    if (k < 1) throw config_error("split: k must be >= 1");
  }
};

/// Probe/gallery partition of a dataset. Holds indices into
/// Dataset::records; the dataset itself stays immutable and shared.
struct Split {
  std::vector<std::size_t> probes;  // record indices, stable probe order
  std::map<std::string, std::vector<std::size_t>> gallery_images;
  std::vector<std::string> eligible_identities;  // ascending identity_id
  std::size_t probes_per_identity = 0;
  std::size_t gallery_per_identity = 0;
};

/// Per-identity probe/gallery split.
///
/// Identities with fewer than l records are excluded. For each eligible
/// identity, exactly l records are drawn uniformly without replacement; the
/// first floor(probe_frac*l) become probes, the rest gallery images.
///
/// Determinism contract: identities are processed in ascending identity_id
/// order, records within an identity are pre-sorted by image_id, and all
/// randomness comes from one StableRng(seed) stream. Equal (dataset, config)
/// therefore yields a bit-identical Split on any platform.
inline Split split_probe_gallery(const Dataset& ds, const SplitConfig& cfg) {
  cfg.check();
  const std::size_t l = cfg.images_per_identity;
  const std::size_t n_probe = cfg.probe_count();

  std::map<std::string, std::vector<std::size_t>> by_identity;
  for (std::size_t i = 0; i < ds.records.size(); ++i)
    by_identity[ds.records[i].identity_id].push_back(i);

  Split split;
  split.probes_per_identity = n_probe;
  split.gallery_per_identity = l - n_probe;

  StableRng rng(cfg.seed);
  for (auto& [identity_id, indices] : by_identity) {
    if (indices.size() < l) continue;
    std::sort(indices.begin(), indices.end(),
              [&](std::size_t a, std::size_t b) {
                return ds.records[a].image_id < ds.records[b].image_id;
              });
    rng.shuffle_prefix(std::span<std::size_t>(indices), l);
    split.eligible_identities.push_back(identity_id);
    for (std::size_t i = 0; i < n_probe; ++i)
      split.probes.push_back(indices[i]);
    auto& gallery = split.gallery_images[identity_id];
    gallery.assign(indices.begin() + static_cast<std::ptrdiff_t>(n_probe),
                   indices.begin() + static_cast<std::ptrdiff_t>(l));
  }

  if (split.eligible_identities.empty())
    throw data_error("empty split: no identity has at least " +
                     std::to_string(l) + " records");
  return split;
}

}  // namespace rankfair
