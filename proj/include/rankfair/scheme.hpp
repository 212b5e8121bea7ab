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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rankfair/error.hpp"

namespace rankfair {

struct AttributeDef {
  std::string name;
  std::vector<std::string> classes;  // ordered; e.g. gender -> {Men, Women}
};

/// Ordered protected attributes and their class names. A demographic *group*
/// is one class per attribute; groups are addressed by a flat index over the
/// cartesian product, row-major with the first attribute most significant.
class DemographicScheme {
 public:
  DemographicScheme() = default;

  explicit DemographicScheme(std::vector<AttributeDef> attributes)
      : attrs_(std::move(attributes)) {
    if (attrs_.empty())
      throw config_error("scheme needs at least one attribute");
    std::unordered_set<std::string_view> attr_names;
    for (const auto& a : attrs_) {
      if (a.name.empty()) throw config_error("attribute with empty name");
      if (!attr_names.insert(a.name).second)
        throw config_error("duplicate attribute name: " + a.name);
      if (a.classes.empty())
        throw config_error("attribute has no classes: " + a.name);
      std::unordered_set<std::string_view> class_names;
      for (const auto& c : a.classes) {
        if (c.empty())
          throw config_error("empty class name in attribute " + a.name);
        if (!class_names.insert(c).second)
          throw config_error("duplicate class '" + c + "' in attribute " +
                             a.name);
      }
    }
    strides_.assign(attrs_.size(), 1);
    for (std::size_t i = attrs_.size(); i-- > 1;)
      strides_[i - 1] = strides_[i] * attrs_[i].classes.size();
  }

  const std::vector<AttributeDef>& attributes() const { return attrs_; }
  std::size_t attribute_count() const { return attrs_.size(); }

  std::size_t group_count() const {
    if (attrs_.empty()) return 0;
    return strides_[0] * attrs_[0].classes.size();
  }

  /// Index of class `cls` within attribute `attr`, or data_error.
  std::uint32_t class_index(std::size_t attr, std::string_view cls) const {
    const auto& classes = attrs_.at(attr).classes;
    for (std::size_t i = 0; i < classes.size(); ++i)
      if (classes[i] == cls) return static_cast<std::uint32_t>(i);
    throw data_error("unknown class '" + std::string(cls) + "' for attribute " +
                     attrs_.at(attr).name);
  }

  std::uint32_t group_index(std::span<const std::uint32_t> classes) const {
    if (classes.size() != attrs_.size())
      throw config_error("group tuple arity does not match scheme");
    std::size_t g = 0;
    for (std::size_t i = 0; i < attrs_.size(); ++i) {
      if (classes[i] >= attrs_[i].classes.size())
        throw config_error("class index out of range in group tuple");
      g += classes[i] * strides_[i];
    }
    return static_cast<std::uint32_t>(g);
  }

  std::vector<std::uint32_t> group_classes(std::uint32_t group) const {
    if (group >= group_count())
      throw config_error("group index out of range");
    std::vector<std::uint32_t> out(attrs_.size());
    std::size_t rest = group;
    for (std::size_t i = 0; i < attrs_.size(); ++i) {
      out[i] = static_cast<std::uint32_t>(rest / strides_[i]);
      rest %= strides_[i];
    }
    return out;
  }

  /// Human-readable label: class names joined with '|' in attribute order,
  /// e.g. "Men|Asian".
  std::string group_label(std::uint32_t group) const {
    const auto classes = group_classes(group);
    std::string label;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if (i > 0) label += '|';
      label += attrs_[i].classes[classes[i]];
    }
    return label;
  }

  std::vector<std::string> group_labels() const {
    std::vector<std::string> out;
    out.reserve(group_count());
    for (std::uint32_t g = 0; g < group_count(); ++g)
      out.push_back(group_label(g));
    return out;
  }

  bool operator==(const DemographicScheme& other) const {
    if (attrs_.size() != other.attrs_.size()) return false;
    for (std::size_t i = 0; i < attrs_.size(); ++i)
      if (attrs_[i].name != other.attrs_[i].name ||
          attrs_[i].classes != other.attrs_[i].classes)
        return false;
    return true;
  }

 private:
  std::vector<AttributeDef> attrs_;
  std::vector<std::size_t> strides_;
};

struct IdentityInfo {
  std::string identity_id;
  std::vector<std::uint32_t> classes;  // one class index per attribute
  std::uint32_t group = 0;             // flat group index under the scheme
};

}  // namespace rankfair
