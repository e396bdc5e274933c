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

#include <cmath>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "geomgate/errors.hpp"

namespace geomgate::bessel {

/// First maximum of J1 (first zero of J1'), ending its monotone branch.
inline constexpr double kJ1BranchEnd = 1.8411837813406593;

/// Bessel function of the first kind J1 for |x| <= 20: power series for
/// |x| <= 4, Miller backward recurrence normalized by
/// J0 + 2 sum_k J_{2k} = 1 beyond.
inline double bessel_j1(double x) {
  if (!std::isfinite(x) || std::abs(x) > 20.0) throw ValidationError("bessel_j1 argument must satisfy |x| <= 20");
  const double ax = std::abs(x);
  const double sign = x < 0 ? -1.0 : 1.0;
  if (ax == 0.0) return 0.0;
  if (ax <= 4.0) {
    const double half = 0.5 * ax;
    const double q = -half * half;
    double term = half;
    double sum = term;
    for (int k = 1; k < 60; ++k) {
      term *= q / (static_cast<double>(k) * static_cast<double>(k + 1));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sign * sum;
  }
  const int start = 2 * (static_cast<int>(ax) + 30);
  double next = 0.0, cur = 1e-30, j1 = 0.0, norm = 0.0;
  for (int n = start; n >= 1; --n) {
    const double prev = 2.0 * n / ax * cur - next;  // J_{n-1}
    next = cur;
    cur = prev;
    if (n - 1 == 1) j1 = cur;
    if ((n - 1) % 2 == 0) norm += (n - 1 == 0 ? 1.0 : 2.0) * cur;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      j1 *= 1e-250;
      norm *= 1e-250;
    }
  }
  return sign * j1 / norm;
}

/// Peak value J1(kJ1BranchEnd) ~ 0.5819.
inline double j1_branch_max() { return bessel_j1(kJ1BranchEnd); }

/// lambda in [0, kJ1BranchEnd] with J1(lambda) = y, by bracketed root finding
/// on the monotone branch.
inline double invert_j1(double y) {
  const double top = j1_branch_max();
  if (!std::isfinite(y) || y < 0.0 || y > top) {
    std::ostringstream msg;
    msg << "effective coupling exceeds J1 branch maximum (requested J1 = " << y << ", max " << top << ")";
    throw ValidationError(msg.str());
  }
  if (y == 0.0) return 0.0;
  if (y == top) return kJ1BranchEnd;
  auto f = [y](double x) { return bessel_j1(x) - y; };
  boost::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, 0.0, kJ1BranchEnd, -y, top - y,
                                                   boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace geomgate::bessel
