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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rankfair/dataset.hpp"
#include "rankfair/error.hpp"
#include "rankfair/split.hpp"
#include "rankfair/vec.hpp"

namespace rankfair {

/// Cosine similarity, clamped to [-1, 1] against rounding.
inline double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw config_error("cosine: dimension mismatch (" +
                       std::to_string(u.size()) + " vs " +
                       std::to_string(v.size()) + ")");
  const double nu = vec::norm(u);
  const double nv = vec::norm(v);
  if (nu < vec::kZeroNormThreshold || nv < vec::kZeroNormThreshold)
    throw config_error("cosine: zero-norm input");
  return vec::clamp_unit_interval_signed(vec::dot(u, v) / (nu * nv));
}

/// Verification trial: accept iff similarity strictly exceeds tau.
inline bool verify(std::span<const double> probe,
                   std::span<const double> candidate, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw config_error("verify: tau must lie in [0, 1]");
  return cosine(probe, candidate) > tau;
}

struct ThresholdCalibration {
  double tau = 0.0;       // attained on the evaluated grid
  double accuracy = 0.0;  // empirical verification accuracy at tau
  std::size_t grid_size = 0;
};

struct ScoredPair {
  double score;  // precomputed similarity
  bool genuine;  // true when both sides share an identity
};

/// Grid search for the decision threshold maximizing empirical verification
/// accuracy: a genuine pair counts when score > tau, an impostor pair when
/// score <= tau. Evaluates grid_size evenly spaced tau values over [0, 1] and
/// returns the smallest maximizing one.
inline ThresholdCalibration calibrate_threshold_scores(
    std::span<const ScoredPair> pairs, std::size_t grid_size) {
  if (pairs.empty()) throw config_error("calibrate_threshold: no pairs");
  if (grid_size < 2)
    throw config_error("calibrate_threshold: grid_size must be >= 2");

  ThresholdCalibration best;
  best.grid_size = grid_size;
  best.accuracy = -1.0;
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double tau =
        static_cast<double>(j) / static_cast<double>(grid_size - 1);
    std::size_t correct = 0;
    for (const auto& p : pairs) {
      const bool accepted = p.score > tau;
      if (accepted == p.genuine) ++correct;
    }
    const double accuracy =
        static_cast<double>(correct) / static_cast<double>(pairs.size());
    if (accuracy > best.accuracy) {
      best.accuracy = accuracy;
      best.tau = tau;
    }
  }
  return best;
}

struct VerificationPair {
  std::vector<double> probe;
  std::vector<double> candidate;
  bool same_identity = false;
};

inline ThresholdCalibration calibrate_threshold(
    std::span<const VerificationPair> pairs, std::size_t grid_size = 1001) {
  std::vector<ScoredPair> scored;
  scored.reserve(pairs.size());
  for (const auto& p : pairs)
    scored.push_back({cosine(p.probe, p.candidate), p.same_identity});
  return calibrate_threshold_scores(scored, grid_size);
}

/// Single enrolled identity: the renormalized mean of its gallery embeddings.
struct GalleryEntry {
  std::string identity_id;
  std::vector<double> vector;  // unit norm
};

/// Averages each identity's (normalized) image embeddings and renormalizes.
/// Input vectors are normalized before averaging so no single high-norm image
/// can dominate. Output is sorted by identity_id.
inline std::vector<GalleryEntry> build_gallery(
    const std::map<std::string, std::vector<std::vector<double>>>& images) {
  std::vector<GalleryEntry> gallery;
  gallery.reserve(images.size());
  for (const auto& [identity_id, vectors] : images) {
    if (vectors.empty())
      throw data_error("build_gallery: identity without images: identity_id=" +
                       identity_id);
    std::vector<double> mean(vectors.front().size(), 0.0);
    for (const auto& v : vectors) {
      if (v.size() != mean.size())
        throw data_error("build_gallery: dimension mismatch: identity_id=" +
                         identity_id);
      const double n = vec::norm(v);
      if (n < vec::kZeroNormThreshold)
        throw data_error("build_gallery: zero-norm image: identity_id=" +
                         identity_id);
      for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += v[i] / n;
    }
    for (double& x : mean) x /= static_cast<double>(vectors.size());
    if (vec::norm(mean) < 1e-12)
      throw data_error(
          "build_gallery: degenerate (antipodal) mean: identity_id=" +
          identity_id);
    vec::normalize_in_place(mean);
    gallery.push_back({identity_id, std::move(mean)});
  }
  return gallery;  // std::map iteration is already ascending by identity_id
}

/// Gallery from a dataset split, keeping only images whose range matches
/// `range` when given. Identities left with no matching image are skipped and
/// reported through `dropped` when provided.
inline std::vector<GalleryEntry> build_gallery(
    const Dataset& ds, const Split& split,
    std::optional<RangeTag> range = std::nullopt,
    std::vector<std::string>* dropped = nullptr) {
  std::map<std::string, std::vector<std::vector<double>>> images;
  for (const auto& [identity_id, indices] : split.gallery_images) {
    auto& vectors = images[identity_id];
    for (std::size_t idx : indices) {
      const auto& rec = ds.records[idx];
      if (range && rec.range != *range) continue;
      vectors.push_back(rec.vector);
    }
    if (vectors.empty()) {
      if (dropped) dropped->push_back(identity_id);
      images.erase(identity_id);
    }
  }
  if (images.empty())
    throw data_error("build_gallery: no gallery images left after range filter");
  return build_gallery(images);
}

struct RankEntry {
  std::string identity_id;
  double score;
};

struct Ranking {
  std::string probe_image_id;
  std::string probe_identity_id;
  std::vector<RankEntry> entries;  // length min(k, gallery size)
};

struct RankingSet {
  std::vector<Ranking> rankings;
  std::size_t k = 0;
  RangeTag gallery_range = RangeTag::long_range;
};

/// Top-k identities by cosine similarity against the full gallery.
/// Ties are broken by ascending identity_id so rankings never depend on
/// gallery order or platform sort internals.
inline Ranking rank(std::span<const double> probe_vector,
                    std::string probe_image_id, std::string probe_identity_id,
                    const std::vector<GalleryEntry>& gallery, std::size_t k) {
  if (k < 1) throw config_error("rank: k must be >= 1");
  if (gallery.empty()) throw config_error("rank: empty gallery");

  const double probe_norm = vec::norm(probe_vector);
  if (probe_norm < vec::kZeroNormThreshold)
    throw config_error("cosine: zero-norm input");

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(gallery.size());
  for (std::size_t i = 0; i < gallery.size(); ++i) {
    const auto& entry = gallery[i];
    if (entry.vector.size() != probe_vector.size())
      throw config_error("rank: dimension mismatch against gallery entry " +
                         entry.identity_id);
    const double score = vec::clamp_unit_interval_signed(
        vec::dot(probe_vector, entry.vector) /
        (probe_norm * vec::norm(entry.vector)));
    scored.emplace_back(score, i);
  }

  const std::size_t take = std::min(k, scored.size());
  const auto better = [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return gallery[a.second].identity_id < gallery[b.second].identity_id;
  };
  std::partial_sort(scored.begin(),
                    scored.begin() + static_cast<std::ptrdiff_t>(take),
                    scored.end(), better);

  Ranking out;
  out.probe_image_id = std::move(probe_image_id);
  out.probe_identity_id = std::move(probe_identity_id);
  out.entries.reserve(take);
  for (std::size_t i = 0; i < take; ++i)
    out.entries.push_back(
        {gallery[scored[i].second].identity_id, scored[i].first});
  return out;
}

inline Ranking rank(const EmbeddingRecord& probe,
                    const std::vector<GalleryEntry>& gallery, std::size_t k) {
  return rank(probe.vector, probe.image_id, probe.identity_id, gallery, k);
}

/// Rankings for every probe of a split, in the split's probe order.
/// Probes are fanned out across `threads` workers (0 = hardware concurrency);
/// each worker writes disjoint slots, so output is schedule-independent.
inline RankingSet rank_all(const Dataset& ds, const Split& split,
                           const std::vector<GalleryEntry>& gallery,
                           std::size_t k, unsigned threads = 0) {
  if (split.probes.empty()) throw data_error("rank_all: split has no probes");
  RankingSet rs;
  rs.k = k;
  rs.rankings.resize(split.probes.size());

  unsigned n_threads = threads == 0 ? std::thread::hardware_concurrency() : threads;
  if (n_threads == 0) n_threads = 1;
  n_threads = static_cast<unsigned>(
      std::min<std::size_t>(n_threads, split.probes.size()));

  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      rs.rankings[i] = rank(ds.records[split.probes[i]], gallery, k);
  };

  if (n_threads <= 1) {
    work(0, split.probes.size());
    return rs;
  }
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  const std::size_t chunk =
      (split.probes.size() + n_threads - 1) / n_threads;
  for (unsigned t = 0; t < n_threads; ++t) {
    const std::size_t begin = static_cast<std::size_t>(t) * chunk;
    const std::size_t end = std::min(begin + chunk, split.probes.size());
    if (begin >= end) break;
    workers.emplace_back(work, begin, end);
  }
  for (auto& w : workers) w.join();
  return rs;
}

/// Fraction of probes whose top-1 identity matches the probe identity with a
/// similarity strictly above tau.
inline double rank1_identification_rate(const RankingSet& rs, double tau) {
  if (rs.rankings.empty())
    throw config_error("rank1_identification_rate: empty ranking set");
  std::size_t hits = 0;
  for (const auto& r : rs.rankings) {
    if (r.entries.empty()) continue;
    const auto& top = r.entries.front();
    if (top.identity_id == r.probe_identity_id && top.score > tau) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rs.rankings.size());
}

}  // namespace rankfair
