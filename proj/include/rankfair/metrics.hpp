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
#include <optional>
#include <string>
#include <vector>

#include "rankfair/dataset.hpp"
#include "rankfair/error.hpp"
#include "rankfair/ranker.hpp"

namespace rankfair {

enum class MetricKind : std::uint8_t { visibility, exposure };

inline std::string_view to_string(MetricKind m) {
  return m == MetricKind::visibility ? "visibility" : "exposure";
}

/// Total position decay of a length-k ranking: sum over positions 1..k of
/// 1/log2(pos+1). Normalizing by it keeps exposure inside [0, 1].
inline double decay_norm(std::size_t k) {
  if (k < 1) throw config_error("decay_norm: k must be >= 1");
  double total = 0.0;
  for (std::size_t pos = 1; pos <= k; ++pos)
    total += 1.0 / std::log2(static_cast<double>(pos) + 1.0);
  return total;
}

namespace detail {

inline void check_metric_args(const RankingSet& rs, const GroupAssignment& ga,
                              std::uint32_t group, std::size_t k) {
  if (rs.rankings.empty()) throw config_error("metrics: empty ranking set");
  if (k < 1 || k > rs.k)
    throw config_error("metrics: k must lie in [1, rankings' k]");
  if (group >= ga.group_count)
    throw config_error("metrics: group index out of range");
}

}  // namespace detail

struct GroupMetrics {
  std::uint32_t group = 0;
  std::size_t k = 0;
  double visibility = 0.0;
  double exposure = 0.0;
};

/// Fraction of the n*k top-k slots held by identities of `group`. Rankings
/// shorter than k contribute only their existing positions; the denominator
/// stays n*k.
inline double visibility(const RankingSet& rs, const GroupAssignment& ga,
                         std::uint32_t group, std::size_t k) {
  detail::check_metric_args(rs, ga, group, k);
  std::size_t hits = 0;
  for (const auto& r : rs.rankings) {
    const std::size_t len = std::min(k, r.entries.size());
    for (std::size_t pos = 0; pos < len; ++pos)
      if (ga.group_of(r.entries[pos].identity_id) == group) ++hits;
  }
  return static_cast<double>(hits) /
         (static_cast<double>(rs.rankings.size()) * static_cast<double>(k));
}

/// Position-discounted share of the top-k slots held by `group`, normalized
/// by n * decay_norm(k). Missing positions of short rankings contribute zero
/// while the denominator keeps the nominal total decay.
inline double exposure(const RankingSet& rs, const GroupAssignment& ga,
                       std::uint32_t group, std::size_t k) {
  detail::check_metric_args(rs, ga, group, k);
  double gained = 0.0;
  for (const auto& r : rs.rankings) {
    const std::size_t len = std::min(k, r.entries.size());
    for (std::size_t pos = 0; pos < len; ++pos)
      if (ga.group_of(r.entries[pos].identity_id) == group)
        gained += 1.0 / std::log2(static_cast<double>(pos) + 2.0);
  }
  return gained /
         (static_cast<double>(rs.rankings.size()) * decay_norm(k));
}

struct ExposureDistribution {
  std::uint32_t group = 0;
  std::vector<double> per_ranking_values;  // one per ranking, in set order
};

/// Exposure of `group` computed on each ranking separately (n = 1). The mean
/// of the returned values equals exposure() up to floating-point roundoff.
inline ExposureDistribution per_ranking_exposure(const RankingSet& rs,
                                                 const GroupAssignment& ga,
                                                 std::uint32_t group,
                                                 std::size_t k) {
  detail::check_metric_args(rs, ga, group, k);
  const double total_decay = decay_norm(k);
  ExposureDistribution dist;
  dist.group = group;
  dist.per_ranking_values.reserve(rs.rankings.size());
  for (const auto& r : rs.rankings) {
    double gained = 0.0;
    const std::size_t len = std::min(k, r.entries.size());
    for (std::size_t pos = 0; pos < len; ++pos)
      if (ga.group_of(r.entries[pos].identity_id) == group)
        gained += 1.0 / std::log2(static_cast<double>(pos) + 2.0);
    dist.per_ranking_values.push_back(gained / total_decay);
  }
  return dist;
}

/// Absolute gap between two groups' visibility or exposure.
inline double disparate(const RankingSet& rs, const GroupAssignment& ga,
                        std::uint32_t group_a, std::uint32_t group_b,
                        std::size_t k, MetricKind metric) {
  const auto eval = [&](std::uint32_t g) {
    return metric == MetricKind::visibility ? visibility(rs, ga, g, k)
                                            : exposure(rs, ga, g, k);
  };
  return std::abs(eval(group_a) - eval(group_b));
}

/// Pairwise and averaged disparities across all unordered group pairs.
struct DisparityReport {
  std::size_t k = 0;
  // keyed by (min group, max group); symmetric by construction
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> pairwise_visibility;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> pairwise_exposure;
  double overall_visibility = 0.0;
  double overall_exposure = 0.0;

  static std::pair<std::uint32_t, std::uint32_t> key(std::uint32_t a,
                                                     std::uint32_t b) {
    return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
};

inline DisparityReport overall_disparity(const RankingSet& rs,
                                         const GroupAssignment& ga,
                                         std::size_t k) {
  if (ga.group_count < 2)
    throw config_error("overall_disparity: needs at least two groups");
  detail::check_metric_args(rs, ga, 0, k);

  std::vector<double> vis(ga.group_count), expo(ga.group_count);
  for (std::uint32_t g = 0; g < ga.group_count; ++g) {
    vis[g] = visibility(rs, ga, g, k);
    expo[g] = exposure(rs, ga, g, k);
  }

  DisparityReport report;
  report.k = k;
  double vis_sum = 0.0, expo_sum = 0.0;
  std::size_t pairs = 0;
  for (std::uint32_t i = 0; i < ga.group_count; ++i) {
    for (std::uint32_t j = i + 1; j < ga.group_count; ++j) {
      const double dv = std::abs(vis[i] - vis[j]);
      const double de = std::abs(expo[i] - expo[j]);
      report.pairwise_visibility[{i, j}] = dv;
      report.pairwise_exposure[{i, j}] = de;
      vis_sum += dv;
      expo_sum += de;
      ++pairs;
    }
  }
  report.overall_visibility = vis_sum / static_cast<double>(pairs);
  report.overall_exposure = expo_sum / static_cast<double>(pairs);
  return report;
}

/// Visibility or exposure of each gallery group, conditioned on the probe's
/// group. Cells for probe groups with no probes stay absent (nullopt) so a
/// report cannot be misread as a measured zero.
struct ProbeConditionedMatrix {
  MetricKind metric = MetricKind::visibility;
  bool exclude_mates = false;
  std::size_t k = 0;
  std::size_t group_count = 0;
  // row-major [probe_group][gallery_group]
  std::vector<std::optional<double>> cells;

  const std::optional<double>& at(std::uint32_t probe_group,
                                  std::uint32_t gallery_group) const {
    return cells.at(static_cast<std::size_t>(probe_group) * group_count +
                    gallery_group);
  }
};

/// Partitions rankings by the probe's group and applies the metric within
/// each partition. With exclude_mates set, positions holding the probe's own
/// identity contribute zero to every group's numerator; denominators (n*k,
/// n*decay) are unchanged.
inline ProbeConditionedMatrix probe_conditioned(const RankingSet& rs,
                                                const GroupAssignment& ga,
                                                MetricKind metric,
                                                std::size_t k,
                                                bool exclude_mates) {
  detail::check_metric_args(rs, ga, 0, k);

  ProbeConditionedMatrix matrix;
  matrix.metric = metric;
  matrix.exclude_mates = exclude_mates;
  matrix.k = k;
  matrix.group_count = ga.group_count;
  matrix.cells.assign(ga.group_count * ga.group_count, std::nullopt);

  const double total_decay = decay_norm(k);
  std::vector<std::size_t> probe_counts(ga.group_count, 0);
  std::vector<double> numerators(ga.group_count * ga.group_count, 0.0);

  for (const auto& r : rs.rankings) {
    const std::uint32_t probe_group = ga.group_of(r.probe_identity_id);
    ++probe_counts[probe_group];
    const std::size_t len = std::min(k, r.entries.size());
    for (std::size_t pos = 0; pos < len; ++pos) {
      const auto& entry = r.entries[pos];
      if (exclude_mates && entry.identity_id == r.probe_identity_id) continue;
      const std::uint32_t gallery_group = ga.group_of(entry.identity_id);
      const double gain =
          metric == MetricKind::visibility
              ? 1.0
              : 1.0 / std::log2(static_cast<double>(pos) + 2.0);
      numerators[static_cast<std::size_t>(probe_group) * ga.group_count +
                 gallery_group] += gain;
    }
  }

  for (std::uint32_t pg = 0; pg < ga.group_count; ++pg) {
    if (probe_counts[pg] == 0) continue;  // cells stay absent
    const double denom =
        static_cast<double>(probe_counts[pg]) *
        (metric == MetricKind::visibility ? static_cast<double>(k)
                                          : total_decay);
    for (std::uint32_t gg = 0; gg < ga.group_count; ++gg) {
      const std::size_t idx =
          static_cast<std::size_t>(pg) * ga.group_count + gg;
      matrix.cells[idx] = numerators[idx] / denom;
    }
  }
  return matrix;
}

struct HitRatioCurve {
  // points[i] = (k' = i+1, fraction of rankings whose probe identity appears
  // within the first k' positions); non-decreasing in k'
  std::vector<std::pair<std::size_t, double>> points;
};

inline HitRatioCurve hit_ratio_curve(const RankingSet& rs, std::size_t k) {
  if (rs.rankings.empty()) throw config_error("hit_ratio_curve: empty ranking set");
  if (k < 1 || k > rs.k)
    throw config_error("hit_ratio_curve: k must lie in [1, rankings' k]");

  std::vector<std::size_t> first_hit_at(k, 0);  // index pos-1
  for (const auto& r : rs.rankings) {
    const std::size_t len = std::min(k, r.entries.size());
    for (std::size_t pos = 0; pos < len; ++pos) {
      if (r.entries[pos].identity_id == r.probe_identity_id) {
        ++first_hit_at[pos];
        break;
      }
    }
  }

  HitRatioCurve curve;
  curve.points.reserve(k);
  std::size_t cumulative = 0;
  for (std::size_t i = 0; i < k; ++i) {
    cumulative += first_hit_at[i];
    curve.points.emplace_back(
        i + 1, static_cast<double>(cumulative) /
                   static_cast<double>(rs.rankings.size()));
  }
  return curve;
}

/// Visibility and exposure of every scheme group at cutoff k.
inline std::vector<GroupMetrics> group_metrics(const RankingSet& rs,
                                               const GroupAssignment& ga,
                                               std::size_t k) {
  std::vector<GroupMetrics> out;
  out.reserve(ga.group_count);
  for (std::uint32_t g = 0; g < ga.group_count; ++g)
    out.push_back({g, k, visibility(rs, ga, g, k), exposure(rs, ga, g, k)});
  return out;
}

}  // namespace rankfair
