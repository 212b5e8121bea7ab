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
#include <numbers>
#include <random>
#include <span>

#include "rankfair/error.hpp"

namespace rankfair {

/// Seeded source of randomness with a fully pinned-down algorithm.
///
/// std::mt19937_64 output is specified bit-for-bit by the C++ standard, but
/// std::uniform_int_distribution, std::shuffle and std::normal_distribution
/// are not: their results vary across standard libraries. Every consumer of
/// randomness in this project (dataset splits, synthetic data) therefore goes
/// through this class, which derives values from the raw engine stream with
/// fixed algorithms:
///   - below(n): unbiased rejection sampling on 64-bit draws
///   - unit_double(): top 53 bits mapped to [0, 1)
///   - gaussian(): Box-Muller transform, two variates per two draws
///   - shuffle_prefix(): Fisher-Yates on the first l slots
class StableRng {
 public:
  explicit StableRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw config_error("StableRng::below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return draw % n;
  }

  /// Uniform double in [0, 1) with 53 bits of resolution.
  double unit_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal variate via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = unit_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard
    const double u2 = unit_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  void fill_gaussian(std::span<double> out) {
    for (double& x : out) x = gaussian();
  }

  /// Fisher-Yates over the first `prefix` positions of `items`: afterwards
  /// items[0..prefix) is a uniform draw without replacement from the whole
  /// span, in a uniformly random order.
  template <typename T>
  void shuffle_prefix(std::span<T> items, std::size_t prefix) {
    if (prefix > items.size())
      throw config_error("StableRng::shuffle_prefix: prefix exceeds size");
    for (std::size_t i = 0; i < prefix; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(below(items.size() - i));
      std::swap(items[i], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rankfair
