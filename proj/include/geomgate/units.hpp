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

#include <numbers>

namespace geomgate::units {

inline constexpr double kPi = std::numbers::pi;

// Internally every energy and rate is an angular frequency in rad/ns (hbar = 1).

/// 2*pi x f[MHz] expressed in rad/ns.
constexpr double two_pi_mhz(double megahertz) { return 2.0 * kPi * megahertz * 1e-3; }

/// 2*pi x f[kHz] expressed in rad/ns.
constexpr double two_pi_khz(double kilohertz) { return 2.0 * kPi * kilohertz * 1e-6; }

/// Inverse of two_pi_mhz.
constexpr double to_two_pi_mhz(double rad_per_ns) { return rad_per_ns / (2.0 * kPi * 1e-3); }

}  // namespace geomgate::units
