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

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rankfair/error.hpp"
#include "rankfair/scheme.hpp"
#include "rankfair/vec.hpp"

namespace rankfair {

/// Capture range of an embedding's source image: close-range (original) or
/// long-range (degraded / at a distance).
enum class RangeTag : std::uint8_t { close, long_range };

inline std::string_view to_string(RangeTag tag) {
  return tag == RangeTag::close ? "close" : "long";
}

inline RangeTag range_tag_from(std::string_view s) {
  if (s == "close") return RangeTag::close;
  if (s == "long") return RangeTag::long_range;
  throw data_error("unknown range tag '" + std::string(s) +
                   "' (expected \"close\" or \"long\")");
}

struct EmbeddingRecord {
  std::string image_id;
  std::string identity_id;
  RangeTag range = RangeTag::long_range;
  std::vector<double> vector;
};

struct Dataset {
  DemographicScheme scheme;
  std::map<std::string, IdentityInfo> identities;  // keyed by identity_id
  std::vector<EmbeddingRecord> records;
  std::size_t dim = 0;
  bool normalized = false;

  const IdentityInfo& identity(const std::string& id) const {
    auto it = identities.find(id);
    if (it == identities.end())
      throw data_error("identity without metadata row: identity_id=" + id);
    return it->second;
  }
};

/// One detected invariant breach. Violations are data, not failures: a scan
/// over a corrupt dataset returns them all instead of stopping at the first.
struct Violation {
  std::string code;     // machine-readable, e.g. "orphan-record"
  std::string locator;  // e.g. "image_id=img_0042"
  std::string detail;
};

// after load with normalize on, | ||v|| - 1 | must stay within this bound
inline constexpr double kUnitNormTolerance = 1e-9;

/// Scans every type invariant and returns the breaches found (empty == valid).
inline std::vector<Violation> validate(const Dataset& ds) {
  std::vector<Violation> out;
  const std::size_t group_count = ds.scheme.group_count();

  for (const auto& [id, info] : ds.identities) {
    if (info.classes.size() != ds.scheme.attribute_count() ||
        info.group >= group_count) {
      out.push_back({"unknown-class", "identity_id=" + id,
                     "identity group does not resolve under the scheme"});
      continue;
    }
    for (std::size_t a = 0; a < info.classes.size(); ++a) {
      if (info.classes[a] >= ds.scheme.attributes()[a].classes.size())
        out.push_back({"unknown-class", "identity_id=" + id,
                       "class index out of range for attribute " +
                           ds.scheme.attributes()[a].name});
    }
  }

  std::unordered_set<std::string_view> seen_images;
  for (const auto& rec : ds.records) {
    const std::string locator = "image_id=" + rec.image_id;
    if (!seen_images.insert(rec.image_id).second)
      out.push_back({"duplicate-image-id", locator, "image_id is not unique"});
    if (!ds.identities.contains(rec.identity_id))
      out.push_back({"orphan-record", locator,
                     "identity_id=" + rec.identity_id + " has no metadata row"});
    if (rec.vector.size() != ds.dim)
      out.push_back({"dimension-mismatch", locator,
                     "expected dim " + std::to_string(ds.dim) + ", got " +
                         std::to_string(rec.vector.size())});
    if (!vec::all_finite(rec.vector)) {
      out.push_back({"non-finite-component", locator,
                     "vector contains NaN or Inf"});
      continue;
    }
    const double n = vec::norm(rec.vector);
    if (n < vec::kZeroNormThreshold) {
      out.push_back({"zero-norm-vector", locator, "Euclidean norm is zero"});
    } else if (ds.normalized && std::abs(n - 1.0) > kUnitNormTolerance) {
      out.push_back({"denormalized-vector", locator,
                     "norm deviates from 1 beyond tolerance"});
    }
  }
  return out;
}

/// Identity -> flat group index lookup plus the scheme's group labels.
/// Built once per dataset; metrics and stats operate through it.
struct GroupAssignment {
  std::size_t group_count = 0;
  std::vector<std::string> labels;  // size == group_count
  std::unordered_map<std::string, std::uint32_t> by_identity;

  std::uint32_t group_of(const std::string& identity_id) const {
    auto it = by_identity.find(identity_id);
    if (it == by_identity.end())
      throw data_error("missing demographic label for identity_id=" +
                       identity_id);
    return it->second;
  }
};

inline GroupAssignment make_group_assignment(const Dataset& ds) {
  GroupAssignment ga;
  ga.group_count = ds.scheme.group_count();
  ga.labels = ds.scheme.group_labels();
  ga.by_identity.reserve(ds.identities.size());
  for (const auto& [id, info] : ds.identities) ga.by_identity[id] = info.group;
  return ga;
}

}  // namespace rankfair
