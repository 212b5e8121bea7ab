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
#include <cstdint>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rankfair/dataset.hpp"
#include "rankfair/error.hpp"
#include "rankfair/rng.hpp"
#include "rankfair/scheme.hpp"
#include "rankfair/vec.hpp"

namespace rankfair {

/// Parameters of the clustered unit-sphere generator.
///
/// Geometry: one shared base direction; each group center is the base
/// perturbed by sigma_group (smaller => groups closer => higher inter-group
/// similarity); each identity center is its group center perturbed by the
/// group's sigma_id (smaller => tighter group => higher intra-group
/// similarity); each image is the identity center perturbed by sigma_img.
/// All points are renormalized onto the unit sphere.
struct SyntheticSpec {
  DemographicScheme scheme;
  std::size_t identities_per_group = 20;
  std::size_t images_per_identity = 10;
  std::size_t dim = 16;
  std::uint64_t seed = 0;
  double sigma_group = 0.4;
  double sigma_id = 0.25;
  std::map<std::string, double> sigma_id_overrides;  // group label -> sigma
  double sigma_img = 0.1;
  RangeTag range = RangeTag::long_range;

  double sigma_id_for(const std::string& group_label) const {
    auto it = sigma_id_overrides.find(group_label);
    return it == sigma_id_overrides.end() ? sigma_id : it->second;
  }

  void check() const {
    if (scheme.group_count() == 0)
      throw config_error("synthetic: scheme has no groups");
    if (dim < 2) throw config_error("synthetic: dim must be >= 2");
    if (identities_per_group < 1)
      throw config_error("synthetic: identities_per_group must be >= 1");
    if (images_per_identity < 1)
      throw config_error("synthetic: images_per_identity must be >= 1");
    if (sigma_group < 0.0 || sigma_id < 0.0 || sigma_img < 0.0)
      throw config_error("synthetic: dispersions must be non-negative");
    const auto labels = scheme.group_labels();
    for (const auto& [label, sigma] : sigma_id_overrides) {
      if (sigma < 0.0)
        throw config_error("synthetic: dispersions must be non-negative");
      if (std::find(labels.begin(), labels.end(), label) == labels.end())
        throw config_error("synthetic: sigma_id override for unknown group '" +
                           label + "'");
    }
  }
};

namespace detail {

// center + sigma * gaussian, renormalized. A zero sigma reproduces the
// center bit-for-bit without touching the RNG stream, so degenerate specs
// (e.g. sigma_img = 0) stay exactly collapsed.
inline std::vector<double> perturb_unit(StableRng& rng,
                                        std::span<const double> center,
                                        double sigma) {
  if (sigma == 0.0)
    return std::vector<double>(center.begin(), center.end());
  std::vector<double> v(center.size());
  while (true) {
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = center[i] + sigma * rng.gaussian();
    if (vec::norm(v) >= vec::kZeroNormThreshold) break;  // astronomically rare
  }
  vec::normalize_in_place(v);
  return v;
}

inline std::vector<double> random_unit(StableRng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  do {
    rng.fill_gaussian(v);
  } while (vec::norm(v) < vec::kZeroNormThreshold);
  vec::normalize_in_place(v);
  return v;
}

}  // namespace detail

/// Deterministic clustered embedding generator. Equal specs (including seed)
/// produce bit-identical datasets; generation order is fixed as
/// groups (flat index) -> identities -> images on a single RNG stream.
inline Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.check();
  StableRng rng(spec.seed);

  Dataset ds;
  ds.scheme = spec.scheme;
  ds.dim = spec.dim;
  ds.normalized = true;

  const std::size_t groups = spec.scheme.group_count();
  ds.records.reserve(groups * spec.identities_per_group *
                     spec.images_per_identity);

  const auto base = detail::random_unit(rng, spec.dim);
  char buf[64];
  for (std::uint32_t g = 0; g < groups; ++g) {
    const auto group_center = detail::perturb_unit(rng, base, spec.sigma_group);
    const double sigma_id = spec.sigma_id_for(spec.scheme.group_label(g));
    for (std::size_t i = 0; i < spec.identities_per_group; ++i) {
      std::snprintf(buf, sizeof(buf), "id-%03u-%04zu", g, i);
      const std::string identity_id = buf;
      IdentityInfo info;
      info.identity_id = identity_id;
      info.classes = spec.scheme.group_classes(g);
      info.group = g;
      ds.identities.emplace(identity_id, std::move(info));

      const auto id_center = detail::perturb_unit(rng, group_center, sigma_id);
      for (std::size_t j = 0; j < spec.images_per_identity; ++j) {
        std::snprintf(buf, sizeof(buf), "-img%03zu", j);
        EmbeddingRecord rec;
        rec.image_id = identity_id + buf;
        rec.identity_id = identity_id;
        rec.range = spec.range;
        rec.vector = detail::perturb_unit(rng, id_center, spec.sigma_img);
        ds.records.push_back(std::move(rec));
      }
    }
  }
  return ds;
}

}  // namespace rankfair
