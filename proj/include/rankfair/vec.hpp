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
#include <span>
#include <vector>

#include "rankfair/error.hpp"

namespace rankfair::vec {

// Norms below this are treated as zero: dividing by them would overflow
// into infinities and poison every similarity downstream.
inline constexpr double kZeroNormThreshold = 1e-150;

inline double dot(std::span<const double> u, std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
  return acc;
}

inline double norm(std::span<const double> u) {
  return std::sqrt(dot(u, u));
}

inline bool all_finite(std::span<const double> u) {
  for (double x : u) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

/// Scales `u` to unit Euclidean length. Throws data_error on (near-)zero norm.
inline void normalize_in_place(std::vector<double>& u) {
  const double n = norm(u);
  if (n < kZeroNormThreshold) throw data_error("cannot normalize zero-norm vector");
  for (double& x : u) x /= n;
}

inline std::vector<double> normalized(std::vector<double> u) {
  normalize_in_place(u);
  return u;
}

inline double clamp_unit_interval_signed(double x) {
  if (x > 1.0) return 1.0;
  if (x < -1.0) return -1.0;
  return x;
}

}  // namespace rankfair::vec
