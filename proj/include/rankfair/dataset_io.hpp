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
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rankfair/dataset.hpp"
#include "rankfair/error.hpp"
#include "rankfair/scheme.hpp"
#include "rankfair/vec.hpp"

namespace rankfair {

namespace io_detail {

inline std::string loc(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line);
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open file: " + path);
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open file for writing: " + path);
  return out;
}

// Minimal CSV row: fields must not contain commas, quotes or newlines.
inline std::vector<std::string> split_csv_row(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
    fields.back().pop_back();
  return fields;
}

inline void check_csv_safe(const std::string& value, const std::string& what) {
  if (value.find_first_of(",\"\n\r") != std::string::npos)
    throw config_error(what + " may not contain commas, quotes or newlines: '" +
                       value + "'");
}

}  // namespace io_detail

/// Scheme document: {"attributes": [{"name": ..., "classes": [...]}, ...]}.
inline DemographicScheme scheme_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("attributes") ||
      !doc["attributes"].is_array())
    throw data_error("scheme must be {\"attributes\": [...]}");
  std::vector<AttributeDef> attrs;
  for (const auto& item : doc["attributes"]) {
    if (!item.is_object() || !item.contains("name") ||
        !item.contains("classes") || !item["classes"].is_array())
      throw data_error("each scheme attribute needs a name and a class list");
    AttributeDef def;
    def.name = item["name"].get<std::string>();
    for (const auto& cls : item["classes"])
      def.classes.push_back(cls.get<std::string>());
    attrs.push_back(std::move(def));
  }
  try {
    return DemographicScheme(std::move(attrs));
  } catch (const config_error& e) {
    throw data_error(e.what());
  }
}

inline nlohmann::ordered_json scheme_to_json(const DemographicScheme& scheme) {
  nlohmann::ordered_json doc;
  doc["attributes"] = nlohmann::ordered_json::array();
  for (const auto& attr : scheme.attributes()) {
    nlohmann::ordered_json item;
    item["name"] = attr.name;
    item["classes"] = attr.classes;
    doc["attributes"].push_back(std::move(item));
  }
  return doc;
}

inline DemographicScheme load_scheme(const std::string& path) {
  auto in = io_detail::open_input(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw data_error(path + ": invalid scheme JSON: " + e.what());
  }
  try {
    return scheme_from_json(doc);
  } catch (const data_error& e) {
    throw data_error(path + ": " + e.what());
  }
}

inline void save_scheme(const std::string& path,
                        const DemographicScheme& scheme) {
  auto out = io_detail::open_output(path);
  out << scheme_to_json(scheme).dump(2) << '\n';
}

/// Identity metadata: CSV with header identity_id,<attr1>,<attr2>,... where
/// the attribute columns match the scheme's attributes in order.
inline std::map<std::string, IdentityInfo> load_identities(
    const std::string& path, const DemographicScheme& scheme) {
  auto in = io_detail::open_input(path);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line))
    throw data_error(path + ": empty identity metadata file");
  ++line_no;
  const auto header = io_detail::split_csv_row(line);
  if (header.empty() || header[0] != "identity_id")
    throw data_error(io_detail::loc(path, line_no) +
                     ": header must start with identity_id");
  if (header.size() != scheme.attribute_count() + 1)
    throw data_error(io_detail::loc(path, line_no) +
                     ": header has " + std::to_string(header.size() - 1) +
                     " attribute columns, scheme expects " +
                     std::to_string(scheme.attribute_count()));
  for (std::size_t a = 0; a < scheme.attribute_count(); ++a) {
    if (header[a + 1] != scheme.attributes()[a].name)
      throw data_error(io_detail::loc(path, line_no) + ": column '" +
                       header[a + 1] + "' does not match scheme attribute '" +
                       scheme.attributes()[a].name + "'");
  }

  std::map<std::string, IdentityInfo> identities;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = io_detail::split_csv_row(line);
    if (fields.size() != scheme.attribute_count() + 1)
      throw data_error(io_detail::loc(path, line_no) +
                       ": wrong number of fields");
    IdentityInfo info;
    info.identity_id = fields[0];
    if (info.identity_id.empty())
      throw data_error(io_detail::loc(path, line_no) + ": empty identity_id");
    info.classes.resize(scheme.attribute_count());
    for (std::size_t a = 0; a < scheme.attribute_count(); ++a) {
      try {
        info.classes[a] = scheme.class_index(a, fields[a + 1]);
      } catch (const data_error& e) {
        throw data_error(io_detail::loc(path, line_no) + ": " + e.what() +
                         " (identity_id=" + info.identity_id + ")");
      }
    }
    info.group = scheme.group_index(info.classes);
    if (!identities.emplace(info.identity_id, info).second)
      throw data_error(io_detail::loc(path, line_no) +
                       ": duplicate identity_id=" + info.identity_id);
  }
  return identities;
}

/// Loads an embedding dataset: JSONL embeddings plus identity metadata CSV.
/// Vectors are L2-normalized when `normalize` is set (the default); the
/// dimension is inferred from the first record and enforced on the rest.
inline Dataset load_dataset(const std::string& embeddings_path,
                            const std::string& identities_path,
                            const DemographicScheme& scheme,
                            bool normalize = true) {
  Dataset ds;
  ds.scheme = scheme;
  ds.identities = load_identities(identities_path, scheme);
  ds.normalized = normalize;

  auto in = io_detail::open_input(embeddings_path);
  std::string line;
  std::size_t line_no = 0;
  std::unordered_set<std::string> seen_images;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = io_detail::loc(embeddings_path, line_no);

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw data_error(where + ": invalid JSON: " + e.what());
    }
    if (!obj.is_object() || !obj.contains("image_id") ||
        !obj.contains("identity_id") || !obj.contains("range") ||
        !obj.contains("embedding") || !obj["embedding"].is_array())
      throw data_error(where +
                       ": record needs image_id, identity_id, range and an "
                       "embedding array");

    EmbeddingRecord rec;
    rec.image_id = obj["image_id"].get<std::string>();
    rec.identity_id = obj["identity_id"].get<std::string>();
    const std::string locator = where + " (image_id=" + rec.image_id + ")";
    try {
      rec.range = range_tag_from(obj["range"].get<std::string>());
    } catch (const data_error& e) {
      throw data_error(locator + ": " + e.what());
    }

    rec.vector.reserve(obj["embedding"].size());
    for (const auto& component : obj["embedding"]) {
      if (!component.is_number())
        throw data_error(locator + ": non-numeric embedding component");
      rec.vector.push_back(component.get<double>());
    }
    if (rec.vector.empty())
      throw data_error(locator + ": empty embedding");
    if (!vec::all_finite(rec.vector))
      throw data_error(locator + ": NaN or Inf embedding component");

    if (ds.dim == 0) {
      ds.dim = rec.vector.size();
    } else if (rec.vector.size() != ds.dim) {
      throw data_error(locator + ": dimension mismatch: expected " +
                       std::to_string(ds.dim) + ", got " +
                       std::to_string(rec.vector.size()));
    }
    if (vec::norm(rec.vector) < vec::kZeroNormThreshold)
      throw data_error("zero-norm vector at " + locator);
    if (!ds.identities.contains(rec.identity_id))
      throw data_error(locator + ": identity without metadata row: identity_id=" +
                       rec.identity_id);
    if (!seen_images.insert(rec.image_id).second)
      throw data_error(locator + ": duplicate image_id");

    if (normalize) vec::normalize_in_place(rec.vector);
    ds.records.push_back(std::move(rec));
  }
  if (ds.records.empty())
    throw data_error(embeddings_path + ": no embedding records");
  return ds;
}

struct DatasetFiles {
  std::string embeddings;
  std::string identities;
  std::string scheme;
};

/// Writes a dataset back out in the interchange layout. Output is
/// byte-deterministic: records in stored order, identities ascending.
inline void save_dataset(const Dataset& ds, const DatasetFiles& files) {
  for (const auto& attr : ds.scheme.attributes()) {
    io_detail::check_csv_safe(attr.name, "attribute name");
    for (const auto& cls : attr.classes)
      io_detail::check_csv_safe(cls, "class name");
  }
  save_scheme(files.scheme, ds.scheme);

  {
    auto out = io_detail::open_output(files.identities);
    out << "identity_id";
    for (const auto& attr : ds.scheme.attributes()) out << ',' << attr.name;
    out << '\n';
    for (const auto& [id, info] : ds.identities) {
      io_detail::check_csv_safe(id, "identity_id");
      out << id;
      for (std::size_t a = 0; a < info.classes.size(); ++a)
        out << ',' << ds.scheme.attributes()[a].classes[info.classes[a]];
      out << '\n';
    }
  }

  auto out = io_detail::open_output(files.embeddings);
  for (const auto& rec : ds.records) {
    nlohmann::ordered_json obj;
    obj["image_id"] = rec.image_id;
    obj["identity_id"] = rec.identity_id;
    obj["range"] = std::string(to_string(rec.range));
    obj["embedding"] = rec.vector;
    out << obj.dump() << '\n';
  }
}

}  // namespace rankfair
