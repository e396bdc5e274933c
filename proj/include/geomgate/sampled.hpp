// Copyright 2026 The geomgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

#include "geomgate/errors.hpp"

namespace geomgate {

struct InterpolatedValue {
  double value;
  double slope;
};

/// Piecewise-cubic interpolation of a series sampled on a uniform grid that
/// is split into segments at `boundaries` (interior node indices). The
/// stored sample at a boundary node is the right limit; `left_values[j]`
/// holds the left limit at boundaries[j]. Stencils never straddle a
/// boundary, so jumps in the series are reproduced exactly.
inline InterpolatedValue interpolate_segmented(std::span<const double> times,
                                               std::span<const double> values,
                                               std::span<const std::size_t> boundaries,
                                               std::span<const double> left_values, double t) {
  const std::size_t n_nodes = times.size();
  if (n_nodes < 4 || values.size() != n_nodes || left_values.size() != boundaries.size()) {
    throw ValidationError("interpolation needs at least four consistent samples");
  }
  const std::size_t last = n_nodes - 1;
  const double t0 = times.front();
  const double span_len = times.back() - t0;
  const double h = span_len / static_cast<double>(last);
  const double tol = 1e-9 * std::max(1.0, span_len);
  if (t < t0 - tol || t > times.back() + tol) throw ValidationError("time outside the sampled span");
  const double u = std::clamp((t - t0) / h, 0.0, static_cast<double>(last));

  // Segment containing u; a boundary node opens the next segment.
  std::size_t seg = 0;
  while (seg < boundaries.size() && u >= static_cast<double>(boundaries[seg])) ++seg;
  const std::size_t a = seg == 0 ? 0 : boundaries[seg - 1];
  const std::size_t b = seg < boundaries.size() ? boundaries[seg] : last;
  const std::size_t n = b - a;
  if (n < 3) throw ValidationError("segment too short to interpolate");

  const double local = u - static_cast<double>(a);
  const auto k = static_cast<std::size_t>(std::min(std::floor(local), static_cast<double>(n - 1)));
  const std::size_t i0 = std::min(k == 0 ? 0 : k - 1, n - 3);
  auto node = [&](std::size_t l) {
    const std::size_t idx = a + l;
    if (idx == b && seg < boundaries.size()) return left_values[seg];
    return values[idx];
  };

  const double x = local - static_cast<double>(i0);
  double value = 0.0, slope = 0.0;
  for (int i = 0; i < 4; ++i) {
    double denom = 1.0, prod = 1.0, dprod = 0.0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      denom *= static_cast<double>(i - j);
      dprod = dprod * (x - j) + prod;
      prod *= (x - j);
    }
    const double yi = node(i0 + static_cast<std::size_t>(i));
    value += yi * prod / denom;
    slope += yi * dprod / denom;
  }
  return {value, slope / h};
}

}  // namespace geomgate
