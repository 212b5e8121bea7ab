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

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rankfair/config.hpp"
#include "rankfair/metrics.hpp"
#include "rankfair/ranker.hpp"
#include "rankfair/ranking_io.hpp"
#include "rankfair/stats.hpp"
#include "rankfair/version.hpp"

namespace rankfair {

/// Every quantity an audit produces. The report is a pure function of
/// (input files, config): serializing it twice from the same inputs yields
/// byte-identical documents.
struct AuditReport {
  nlohmann::ordered_json config_echo;
  std::vector<std::pair<std::string, std::pair<std::string, std::string>>>
      inputs;  // (label, (path, sha256)), in a fixed order

  std::size_t n_identities = 0;
  std::size_t n_records = 0;
  std::size_t dim = 0;
  std::vector<std::string> group_labels;

  std::size_t n_probes = 0;
  std::size_t gallery_size = 0;
  std::size_t k = 0;
  RangeTag gallery_range = RangeTag::long_range;
  std::vector<std::string> probe_image_ids;

  ThresholdCalibration calibration;
  bool tau_was_fixed = false;
  double rank1_rate = 0.0;

  std::vector<GroupMetrics> per_group;
  DisparityReport disparity;  // empty pair maps when only one group exists
  std::vector<ProbeConditionedMatrix> matrices;  // both metrics x both flags
  HitRatioCurve hit_ratio;
  std::map<std::uint32_t, ExposureDistribution> distributions;
  std::optional<SignificanceMatrix> significance;  // absent for one group
  std::vector<std::string> warnings;
};

inline nlohmann::ordered_json report_to_json(const AuditReport& report) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  doc["config"] = report.config_echo;

  json inputs = json::object();
  for (const auto& [label, entry] : report.inputs)
    inputs[label] = {{"path", entry.first}, {"sha256", entry.second}};
  doc["inputs"] = std::move(inputs);

  doc["dataset"] = {{"identities", report.n_identities},
                    {"records", report.n_records},
                    {"dim", report.dim},
                    {"groups", report.group_labels}};
  doc["rankings"] = {
      {"probes", report.n_probes},
      {"gallery_size", report.gallery_size},
      {"k", report.k},
      {"gallery_range", std::string(to_string(report.gallery_range))},
      {"probe_image_ids", report.probe_image_ids}};
  doc["threshold"] = {{"tau", report.calibration.tau},
                      {"accuracy", report.calibration.accuracy},
                      {"grid_size", report.calibration.grid_size},
                      {"source", report.tau_was_fixed ? "fixed" : "calibrated"}};
  doc["rank1_identification_rate"] = report.rank1_rate;

  json per_group = json::array();
  for (const auto& gm : report.per_group)
    per_group.push_back({{"group", report.group_labels.at(gm.group)},
                         {"k", gm.k},
                         {"visibility", gm.visibility},
                         {"exposure", gm.exposure}});
  doc["per_group"] = std::move(per_group);

  json pairs = json::array();
  for (const auto& [key, dv] : report.disparity.pairwise_visibility) {
    const double de = report.disparity.pairwise_exposure.at(key);
    pairs.push_back({{"group_a", report.group_labels.at(key.first)},
                     {"group_b", report.group_labels.at(key.second)},
                     {"visibility", dv},
                     {"exposure", de}});
  }
  doc["disparity"] = {
      {"k", report.disparity.k},
      {"pairs", std::move(pairs)},
      {"overall_visibility", report.disparity.overall_visibility},
      {"overall_exposure", report.disparity.overall_exposure}};

  json matrices = json::array();
  for (const auto& m : report.matrices) {
    json rows = json::array();
    for (std::uint32_t pg = 0; pg < m.group_count; ++pg) {
      json row = json::array();
      for (std::uint32_t gg = 0; gg < m.group_count; ++gg) {
        const auto& cell = m.at(pg, gg);
        if (cell)
          row.push_back(*cell);
        else
          row.push_back(nullptr);  // probe group without probes
      }
      rows.push_back(std::move(row));
    }
    matrices.push_back({{"metric", std::string(to_string(m.metric))},
                        {"exclude_mates", m.exclude_mates},
                        {"k", m.k},
                        {"groups", report.group_labels},
                        {"cells", std::move(rows)}});
  }
  doc["probe_conditioned"] = std::move(matrices);

  json curve = json::array();
  for (const auto& [kk, ratio] : report.hit_ratio.points)
    curve.push_back({{"k", kk}, {"hit_ratio", ratio}});
  doc["hit_ratio"] = std::move(curve);

  json dists = json::object();
  for (const auto& [group, dist] : report.distributions)
    dists[report.group_labels.at(group)] = dist.per_ranking_values;
  doc["exposure_distributions"] = std::move(dists);

  if (report.significance) {
    json sig_pairs = json::array();
    for (const auto& [key, ks] : report.significance->cells) {
      sig_pairs.push_back(
          {{"group_a", report.group_labels.at(key.first)},
           {"group_b", report.group_labels.at(key.second)},
           {"statistic", ks.statistic},
           {"p_value", ks.p_value},
           {"n1", ks.n1},
           {"n2", ks.n2},
           {"significant", ks.p_value < report.significance->alpha}});
    }
    doc["significance"] = {
        {"alpha", report.significance->alpha},
        {"comparisons", report.significance->cells.size()},
        {"note",
         "raw pairwise p-values; no multiple-comparison correction applied"},
        {"pairs", std::move(sig_pairs)}};
  } else {
    doc["significance"] = nullptr;
  }

  doc["warnings"] = report.warnings;
  return doc;
}

namespace report_detail {

inline std::string csv_number(const nlohmann::json& value) {
  return format_score(value.get<double>());
}

}  // namespace report_detail

/// Plot-ready tables derived from a report document:
///   exposure_distribution.csv          rows: one value per (group, ranking)
///   hit_ratio.csv                      rows: one per k' = 1..k
///   visibility_by_probe_group.csv      |groups| x |groups| matrix
///   exposure_by_probe_group.csv        |groups| x |groups| matrix
/// Matrix tables use the mate-exclusion variant the config selected; absent
/// cells (probe groups without probes) are written as NA.
inline void write_report_csvs(const nlohmann::json& report_doc,
                              const std::string& out_dir) {
  const auto& groups = report_doc.at("dataset").at("groups");
  const bool exclude_mates =
      report_doc.at("config").at("metrics").at("exclude_mates").get<bool>();

  {
    auto out = io_detail::open_output(out_dir + "/exposure_distribution.csv");
    out << "group,probe_image_id,exposure\n";
    const auto& probe_ids = report_doc.at("rankings").at("probe_image_ids");
    const auto& dists = report_doc.at("exposure_distributions");
    for (const auto& group : groups) {
      const auto label = group.get<std::string>();
      const auto& values = dists.at(label);
      for (std::size_t i = 0; i < values.size(); ++i)
        out << label << ',' << probe_ids.at(i).get<std::string>() << ','
            << report_detail::csv_number(values.at(i)) << '\n';
    }
  }

  {
    auto out = io_detail::open_output(out_dir + "/hit_ratio.csv");
    out << "k,hit_ratio\n";
    for (const auto& point : report_doc.at("hit_ratio"))
      out << point.at("k").get<std::size_t>() << ','
          << report_detail::csv_number(point.at("hit_ratio")) << '\n';
  }

  for (const auto metric : {std::string("visibility"), std::string("exposure")}) {
    const nlohmann::json* matrix = nullptr;
    for (const auto& m : report_doc.at("probe_conditioned")) {
      if (m.at("metric").get<std::string>() == metric &&
          m.at("exclude_mates").get<bool>() == exclude_mates) {
        matrix = &m;
        break;
      }
    }
    if (matrix == nullptr)
      throw data_error("report document lacks the " + metric +
                       " probe-conditioned matrix");
    auto out =
        io_detail::open_output(out_dir + "/" + metric + "_by_probe_group.csv");
    out << "probe_group";
    for (const auto& group : groups) out << ',' << group.get<std::string>();
    out << '\n';
    const auto& cells = matrix->at("cells");
    for (std::size_t pg = 0; pg < groups.size(); ++pg) {
      out << groups.at(pg).get<std::string>();
      for (std::size_t gg = 0; gg < groups.size(); ++gg) {
        const auto& cell = cells.at(pg).at(gg);
        out << ',' << (cell.is_null() ? std::string("NA")
                                      : report_detail::csv_number(cell));
      }
      out << '\n';
    }
  }
}

}  // namespace rankfair
