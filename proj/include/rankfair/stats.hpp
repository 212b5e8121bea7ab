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
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "rankfair/error.hpp"
#include "rankfair/metrics.hpp"

namespace rankfair {

struct KSResult {
  double statistic = 0.0;  // sup |F_x - F_y|
  double p_value = 1.0;    // asymptotic Kolmogorov distribution
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

/// Complementary CDF of the Kolmogorov distribution,
/// Q(x) = 2 * sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2), truncated once terms
/// drop below 1e-12. Q(0+) = 1.
inline double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  const double e = -2.0 * x * x;
  double sum = 0.0;
  double sign = 1.0;
  for (std::size_t j = 1; j <= 100000; ++j) {
    const double term = std::exp(e * static_cast<double>(j) *
                                 static_cast<double>(j));
    sum += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// Two-sample Kolmogorov-Smirnov test.
///
/// The statistic is an exact sweep of |F_x - F_y| over the merged sorted
/// values; evaluating after each distinct value covers both one-sided gaps,
/// and advancing both pointers past ties before evaluating handles tied
/// values exactly. The p-value evaluates the asymptotic Kolmogorov
/// distribution at D * sqrt(n1*n2/(n1+n2)); for very small samples it is an
/// approximation.
inline KSResult ks_two_sample(std::span<const double> x,
                              std::span<const double> y) {
  if (x.empty() || y.empty())
    throw config_error("ks_two_sample: empty sample");

  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());

  const double n1 = static_cast<double>(xs.size());
  const double n2 = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double value = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] == value) ++i;
    while (j < ys.size() && ys[j] == value) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 -
                             static_cast<double>(j) / n2));
  }
  // one CDF saturated at 1; the largest remaining gap occurs right here
  d = std::max(d, std::abs(static_cast<double>(i) / n1 -
                           static_cast<double>(j) / n2));

  KSResult result;
  result.statistic = d;
  result.n1 = xs.size();
  result.n2 = ys.size();
  result.p_value = kolmogorov_survival(d * std::sqrt(n1 * n2 / (n1 + n2)));
  return result;
}

/// Pairwise KS results over the groups' exposure distributions.
struct SignificanceMatrix {
  double alpha = 0.05;
  // keyed by (min group, max group)
  std::map<std::pair<std::uint32_t, std::uint32_t>, KSResult> cells;

  const KSResult& at(std::uint32_t a, std::uint32_t b) const {
    const auto key = a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
    auto it = cells.find(key);
    if (it == cells.end())
      throw config_error("significance matrix: no such group pair");
    return it->second;
  }

  bool significant(std::uint32_t a, std::uint32_t b) const {
    return at(a, b).p_value < alpha;
  }
};

inline SignificanceMatrix significance_matrix(
    const std::map<std::uint32_t, ExposureDistribution>& distributions,
    double alpha = 0.05) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw config_error("significance_matrix: alpha must lie in (0, 1)");
  if (distributions.size() < 2)
    throw config_error("significance_matrix: needs at least two groups");
  for (const auto& [group, dist] : distributions)
    if (dist.per_ranking_values.empty())
      throw config_error("significance_matrix: empty distribution for group " +
                         std::to_string(group));

  SignificanceMatrix matrix;
  matrix.alpha = alpha;
  for (auto it = distributions.begin(); it != distributions.end(); ++it) {
    for (auto jt = std::next(it); jt != distributions.end(); ++jt) {
      matrix.cells[DisparityReport::key(it->first, jt->first)] =
          ks_two_sample(it->second.per_ranking_values,
                        jt->second.per_ranking_values);
    }
  }
  return matrix;
}

}  // namespace rankfair
