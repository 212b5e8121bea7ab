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

#include <initializer_list>
#include <optional>
#include <string>

#include <json.hpp>

#include "rankfair/dataset_io.hpp"
#include "rankfair/error.hpp"
#include "rankfair/split.hpp"
#include "rankfair/synthetic.hpp"

namespace rankfair {

/// Everything one audit run depends on. A config (plus the input files it
/// references) fully determines every output byte, so audits are
/// reproducible artifacts rather than shell histories.
struct AuditConfig {
  DatasetFiles dataset;  // empty paths resolve to files under out_dir
  SplitConfig split;
  RangeTag gallery_range = RangeTag::long_range;

  bool exclude_mates = false;  // which matrix variant the CSV tables use
  double alpha = 0.05;
  std::size_t hit_ratio_max_k = 0;  // 0 = split.k
  std::optional<double> tau;        // fixed threshold; unset = calibrate
  std::size_t calibration_grid = 1001;

  std::string out_dir = ".";
  bool format_json = true;
  bool format_csv = true;
  unsigned threads = 0;  // 0 = hardware concurrency

  std::optional<SyntheticSpec> synthetic;

  std::size_t hit_ratio_k() const {
    return hit_ratio_max_k == 0 ? split.k : hit_ratio_max_k;
  }

  void check() const {
    split.check();
    if (!(alpha > 0.0 && alpha < 1.0))
      throw config_error("config: alpha must lie in (0, 1)");
    if (hit_ratio_k() < 1 || hit_ratio_k() > split.k)
      throw config_error("config: hit_ratio_max_k must lie in [1, k]");
    if (tau && !(*tau >= 0.0 && *tau <= 1.0))
      throw config_error("config: tau must lie in [0, 1]");
    if (calibration_grid < 2)
      throw config_error("config: calibration_grid must be >= 2");
    if (synthetic) synthetic->check();
  }
};

namespace config_detail {

inline void expect_keys(const nlohmann::json& obj,
                        std::initializer_list<const char*> allowed,
                        const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) {
        known = true;
        break;
      }
    if (!known)
      throw config_error("config: unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get_or(const nlohmann::json& obj, const char* key, T fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  try {
    return obj[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw config_error(std::string("config: bad value for '") + key + "'");
  }
}

}  // namespace config_detail

inline SyntheticSpec synthetic_spec_from_json(const nlohmann::json& obj) {
  using config_detail::get_or;
  config_detail::expect_keys(
      obj,
      {"scheme", "identities_per_group", "images_per_identity", "dim", "seed",
       "sigma_group", "sigma_id", "sigma_id_overrides", "sigma_img", "range"},
      "synthetic");
  SyntheticSpec spec;
  if (obj.contains("scheme")) spec.scheme = scheme_from_json(obj["scheme"]);
  spec.identities_per_group =
      get_or<std::size_t>(obj, "identities_per_group", spec.identities_per_group);
  spec.images_per_identity =
      get_or<std::size_t>(obj, "images_per_identity", spec.images_per_identity);
  spec.dim = get_or<std::size_t>(obj, "dim", spec.dim);
  spec.seed = get_or<std::uint64_t>(obj, "seed", spec.seed);
  spec.sigma_group = get_or<double>(obj, "sigma_group", spec.sigma_group);
  spec.sigma_id = get_or<double>(obj, "sigma_id", spec.sigma_id);
  spec.sigma_img = get_or<double>(obj, "sigma_img", spec.sigma_img);
  if (obj.contains("sigma_id_overrides")) {
    for (const auto& [label, sigma] : obj["sigma_id_overrides"].items())
      spec.sigma_id_overrides[label] = sigma.get<double>();
  }
  if (obj.contains("range"))
    spec.range = range_tag_from(obj["range"].get<std::string>());
  return spec;
}

inline nlohmann::ordered_json synthetic_spec_to_json(const SyntheticSpec& spec) {
  nlohmann::ordered_json obj;
  obj["scheme"] = scheme_to_json(spec.scheme);
  obj["identities_per_group"] = spec.identities_per_group;
  obj["images_per_identity"] = spec.images_per_identity;
  obj["dim"] = spec.dim;
  obj["seed"] = spec.seed;
  obj["sigma_group"] = spec.sigma_group;
  obj["sigma_id"] = spec.sigma_id;
  obj["sigma_id_overrides"] = spec.sigma_id_overrides;
  obj["sigma_img"] = spec.sigma_img;
  obj["range"] = std::string(to_string(spec.range));
  return obj;
}

/// The six-group gender x ethnicity layout most demographic face benchmarks
/// use; the out-of-the-box default for `synth`.
inline DemographicScheme default_six_group_scheme() {
  return DemographicScheme({{"gender", {"Men", "Women"}},
                            {"ethnicity", {"Asian", "Black", "Caucasian"}}});
}

inline AuditConfig default_config() {
  AuditConfig cfg;
  SyntheticSpec spec;
  spec.scheme = default_six_group_scheme();
  spec.identities_per_group = 40;
  cfg.synthetic = spec;
  return cfg;
}

inline AuditConfig config_from_json(const nlohmann::json& doc) {
  using config_detail::get_or;
  config_detail::expect_keys(doc,
                             {"dataset", "split", "gallery_range", "metrics",
                              "output", "threads", "synthetic"},
                             "top level");
  AuditConfig cfg = default_config();
  if (doc.contains("dataset")) {
    const auto& d = doc["dataset"];
    config_detail::expect_keys(d, {"embeddings", "identities", "scheme"},
                               "dataset");
    cfg.dataset.embeddings = get_or<std::string>(d, "embeddings", "");
    cfg.dataset.identities = get_or<std::string>(d, "identities", "");
    cfg.dataset.scheme = get_or<std::string>(d, "scheme", "");
  }
  if (doc.contains("split")) {
    const auto& s = doc["split"];
    config_detail::expect_keys(s, {"l", "probe_frac", "k", "seed"}, "split");
    cfg.split.images_per_identity =
        get_or<std::size_t>(s, "l", cfg.split.images_per_identity);
    cfg.split.probe_frac = get_or<double>(s, "probe_frac", cfg.split.probe_frac);
    cfg.split.k = get_or<std::size_t>(s, "k", cfg.split.k);
    cfg.split.seed = get_or<std::uint64_t>(s, "seed", cfg.split.seed);
  }
  if (doc.contains("gallery_range"))
    cfg.gallery_range = range_tag_from(doc["gallery_range"].get<std::string>());
  if (doc.contains("metrics")) {
    const auto& m = doc["metrics"];
    config_detail::expect_keys(
        m, {"exclude_mates", "alpha", "hit_ratio_max_k", "tau",
            "calibration_grid"},
        "metrics");
    cfg.exclude_mates = get_or<bool>(m, "exclude_mates", cfg.exclude_mates);
    cfg.alpha = get_or<double>(m, "alpha", cfg.alpha);
    cfg.hit_ratio_max_k =
        get_or<std::size_t>(m, "hit_ratio_max_k", cfg.hit_ratio_max_k);
    if (m.contains("tau") && !m["tau"].is_null())
      cfg.tau = m["tau"].get<double>();
    cfg.calibration_grid =
        get_or<std::size_t>(m, "calibration_grid", cfg.calibration_grid);
  }
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    config_detail::expect_keys(o, {"dir", "formats"}, "output");
    cfg.out_dir = get_or<std::string>(o, "dir", cfg.out_dir);
    if (o.contains("formats")) {
      cfg.format_json = false;
      cfg.format_csv = false;
      for (const auto& f : o["formats"]) {
        const auto name = f.get<std::string>();
        if (name == "json")
          cfg.format_json = true;
        else if (name == "csv")
          cfg.format_csv = true;
        else
          throw config_error("config: unknown report format '" + name + "'");
      }
    }
  }
  cfg.threads = get_or<unsigned>(doc, "threads", cfg.threads);
  if (doc.contains("synthetic"))
    cfg.synthetic = synthetic_spec_from_json(doc["synthetic"]);
  return cfg;
}

inline AuditConfig load_config(const std::string& path) {
  auto in = io_detail::open_input(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(path + ": invalid config JSON: " + e.what());
  }
  try {
    return config_from_json(doc);
  } catch (const config_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

/// Effective configuration, echoed verbatim into every report.
inline nlohmann::ordered_json config_to_json(const AuditConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["dataset"] = {{"embeddings", cfg.dataset.embeddings},
                    {"identities", cfg.dataset.identities},
                    {"scheme", cfg.dataset.scheme}};
  doc["split"] = {{"l", cfg.split.images_per_identity},
                  {"probe_frac", cfg.split.probe_frac},
                  {"k", cfg.split.k},
                  {"seed", cfg.split.seed}};
  doc["gallery_range"] = std::string(to_string(cfg.gallery_range));
  nlohmann::ordered_json metrics;
  metrics["exclude_mates"] = cfg.exclude_mates;
  metrics["alpha"] = cfg.alpha;
  metrics["hit_ratio_max_k"] = cfg.hit_ratio_k();
  if (cfg.tau)
    metrics["tau"] = *cfg.tau;
  else
    metrics["tau"] = nullptr;
  metrics["calibration_grid"] = cfg.calibration_grid;
  doc["metrics"] = std::move(metrics);
  nlohmann::ordered_json formats = nlohmann::ordered_json::array();
  if (cfg.format_json) formats.push_back("json");
  if (cfg.format_csv) formats.push_back("csv");
  doc["output"] = {{"dir", cfg.out_dir}, {"formats", std::move(formats)}};
  doc["threads"] = cfg.threads;
  if (cfg.synthetic) doc["synthetic"] = synthetic_spec_to_json(*cfg.synthetic);
  return doc;
}

}  // namespace rankfair
