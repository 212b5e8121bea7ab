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

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "rankfair/dataset_io.hpp"
#include "rankfair/error.hpp"
#include "rankfair/ranker.hpp"
#include "rankfair/split.hpp"

namespace rankfair {

/// Similarity scores are interchanged at 9 significant digits.
inline std::string format_score(double score) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", score);
  return buf;
}

/// One JSON object per probe:
/// {"probe_image_id":..., "probe_identity_id":..., "entries":[{"identity_id":..., "score":...}, ...]}
inline void save_rankings(const RankingSet& rs, const std::string& path) {
  auto out = io_detail::open_output(path);
  for (const auto& r : rs.rankings) {
    out << "{\"probe_image_id\":" << nlohmann::json(r.probe_image_id).dump()
        << ",\"probe_identity_id\":"
        << nlohmann::json(r.probe_identity_id).dump() << ",\"entries\":[";
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
      if (i > 0) out << ',';
      out << "{\"identity_id\":"
          << nlohmann::json(r.entries[i].identity_id).dump()
          << ",\"score\":" << format_score(r.entries[i].score) << '}';
    }
    out << "]}\n";
  }
}

inline RankingSet load_rankings(const std::string& path) {
  auto in = io_detail::open_input(path);
  RankingSet rs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = io_detail::loc(path, line_no);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw data_error(where + ": invalid JSON: " + e.what());
    }
    if (!obj.contains("probe_image_id") || !obj.contains("probe_identity_id") ||
        !obj.contains("entries") || !obj["entries"].is_array())
      throw data_error(where + ": ranking record missing fields");
    Ranking r;
    r.probe_image_id = obj["probe_image_id"].get<std::string>();
    r.probe_identity_id = obj["probe_identity_id"].get<std::string>();
    for (const auto& item : obj["entries"]) {
      if (!item.contains("identity_id") || !item.contains("score"))
        throw data_error(where + ": ranking entry missing fields");
      r.entries.push_back(
          {item["identity_id"].get<std::string>(), item["score"].get<double>()});
    }
    rs.k = std::max(rs.k, r.entries.size());
    rs.rankings.push_back(std::move(r));
  }
  if (rs.rankings.empty()) throw data_error(path + ": no rankings");
  return rs;
}

/// Sidecar manifest making a rank run reproducible: which images were probes,
/// which formed each identity's gallery set, and what got dropped.
inline void save_split_manifest(const Dataset& ds, const Split& split,
                                const SplitConfig& cfg, RangeTag gallery_range,
                                const std::vector<std::string>& dropped,
                                const std::string& path) {
  nlohmann::ordered_json doc;
  doc["l"] = cfg.images_per_identity;
  doc["probe_frac"] = cfg.probe_frac;
  doc["k"] = cfg.k;
  doc["seed"] = cfg.seed;
  doc["gallery_range"] = std::string(to_string(gallery_range));
  doc["probes_per_identity"] = split.probes_per_identity;
  doc["gallery_per_identity"] = split.gallery_per_identity;
  doc["eligible_identities"] = split.eligible_identities;
  doc["dropped_after_range_filter"] = dropped;

  auto probes = nlohmann::ordered_json::array();
  for (std::size_t idx : split.probes)
    probes.push_back(ds.records[idx].image_id);
  doc["probe_image_ids"] = std::move(probes);

  auto gallery = nlohmann::ordered_json::object();
  for (const auto& [identity_id, indices] : split.gallery_images) {
    auto ids = nlohmann::ordered_json::array();
    for (std::size_t idx : indices) ids.push_back(ds.records[idx].image_id);
    gallery[identity_id] = std::move(ids);
  }
  doc["gallery_image_ids"] = std::move(gallery);

  auto out = io_detail::open_output(path);
  out << doc.dump(2) << '\n';
}

}  // namespace rankfair
