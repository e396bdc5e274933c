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

// Robustness of the geometric gates against a static fractional amplitude
// error Omega -> (1 + eps) Omega: perturbative overlap terms of the Z-path
// family f(chi) = eta (2 chi - sin 2 chi) and (eps, Gamma) fidelity sweeps.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "geomgate/errors.hpp"
#include "geomgate/geompath.hpp"
#include "geomgate/parallel.hpp"
#include "geomgate/qcore.hpp"
#include "geomgate/transmon1q.hpp"
#include "geomgate/units.hpp"

namespace geomgate::octrobust {

using geompath::EvolutionPath;
using geompath::PulseSchedule;

struct SystematicError {
  double epsilon = 0.0;

  void validate() const {
    if (!std::isfinite(epsilon) || std::abs(epsilon) > 0.5)
      throw ValidationError("systematic error epsilon must satisfy |epsilon| <= 0.5");
  }
};

/// Copy of `schedule` with every amplitude sample scaled by (1 + eps). The
/// declared cap is left as is, so the copy may exceed it.
inline PulseSchedule apply_error(const PulseSchedule& schedule, SystematicError err) {
  err.validate();
  PulseSchedule out = schedule;
  const double scale = 1.0 + err.epsilon;
  for (double& w : out.omega) w *= scale;
  for (double& w : out.omega_left) w *= scale;
  return out;
}

/// Second-order overlap term -eps^2 sin^2(eta pi) / (2 eta)^2, with the
/// eta -> 0 limit -pi^2 eps^2 / 4; exactly zero for integer eta > 0.
inline double o2_analytic(double eta, double epsilon) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be >= 0");
  if (eta == 0.0) return -units::kPi * units::kPi * epsilon * epsilon / 4.0;
  if (eta == std::floor(eta)) return 0.0;  // sin(k pi) is not exactly 0 in floating point
  const double s = std::sin(eta * units::kPi);
  return -epsilon * epsilon * s * s / (4.0 * eta * eta);
}

/// -eps^2 |int_0^pi e^{-i f(chi)} sin^2 chi dchi|^2 by adaptive Gauss-Kronrod.
inline double o2_numeric(double eta, double epsilon) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be >= 0");
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto f = [eta](double chi) { return eta * (2.0 * chi - std::sin(2.0 * chi)); };
  double err_re = 0.0, err_im = 0.0;
  const double re = Quad::integrate([&](double c) { return std::cos(f(c)) * std::sin(c) * std::sin(c); }, 0.0,
                                    units::kPi, 15, 1e-14, &err_re);
  const double im = Quad::integrate([&](double c) { return -std::sin(f(c)) * std::sin(c) * std::sin(c); }, 0.0,
                                    units::kPi, 15, 1e-14, &err_im);
  if (!(err_re <= 1e-11) || !(err_im <= 1e-11)) throw NumericalError("o2 quadrature did not converge");
  return -epsilon * epsilon * (re * re + im * im);
}

/// |<psi(tau/2)|psi_eps(tau/2)>|^2 for the Z-path schedule, both states started
/// from the path's initial state.
inline double perturbed_overlap(const EvolutionPath& path, const PulseSchedule& schedule, double epsilon,
                                double max_dt = 0.005) {
  if (path.family() != geompath::PathFamily::z_rotation)
    throw ValidationError("perturbed overlap is defined for the Z-rotation path family");
  const auto errored = apply_error(schedule, SystematicError{epsilon});
  const auto grid = TimeGrid::covering(0.0, 0.5 * schedule.tau, max_dt, 1);
  const auto u = propagate_schrodinger(geompath::two_level_hamiltonian(schedule), grid).matrix;
  const auto ue = propagate_schrodinger(geompath::two_level_hamiltonian(errored), grid).matrix;
  const Vector<2> psi0 = geompath::initial_state(path.chi0(), path.beta0());
  const double p = std::norm((u * psi0).dot(ue * psi0));
  return std::clamp(p, 0.0, 1.0);
}

/// dP/deps at eps = 0 by a centered difference of step h; the first-order
/// term is O1 = eps * dP/deps.
inline double first_order_slope(const EvolutionPath& path, const PulseSchedule& schedule, double h = 1e-4,
                                double max_dt = 0.005) {
  return (perturbed_overlap(path, schedule, h, max_dt) - perturbed_overlap(path, schedule, -h, max_dt)) / (2.0 * h);
}

struct SweepGrid {
  std::vector<double> epsilon_values;
  std::vector<double> gamma_values;  // rad/ns, applied as Gamma1 = Gamma2

  void validate() const {
    if (epsilon_values.empty() || gamma_values.empty()) throw ValidationError("sweep grid axes must be nonempty");
    if (!std::is_sorted(epsilon_values.begin(), epsilon_values.end()) ||
        !std::is_sorted(gamma_values.begin(), gamma_values.end()))
      throw ValidationError("sweep grid axes must be sorted");
    for (double e : epsilon_values) SystematicError{e}.validate();
    for (double g : gamma_values)
      if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("sweep decoherence rates must be >= 0");
  }
};

/// `count` evenly spaced values from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
  out.back() = hi;
  return out;
}

/// eps Omega_max over 2 pi x [-5, 5] MHz and Gamma over 2 pi x [0, 20] kHz.
inline SweepGrid default_sweep_grid(double omega_max, std::size_t eps_points = 41, std::size_t gamma_points = 21) {
  const double e = units::two_pi_mhz(5.0) / omega_max;
  return {linspace(-e, e, eps_points), linspace(0.0, units::two_pi_khz(20.0), gamma_points)};
}

struct GateSpec {
  geompath::PathFamily family = geompath::PathFamily::z_rotation;
  double gamma = -units::kPi / 8.0;
  double eta = 0.0;
  double alpha = units::two_pi_mhz(300.0);
  double omega_max = units::two_pi_mhz(16.0);
  transmon1q::DragConfig drag{};
  std::size_t samples = 20000;
  double max_dt = 0.01;

  EvolutionPath path() const {
    switch (family) {
      case geompath::PathFamily::x_rotation: return geompath::build_x_rotation_path(gamma);
      case geompath::PathFamily::z_rotation: return geompath::build_z_rotation_path(gamma, eta);
      case geompath::PathFamily::custom: break;
    }
    throw ValidationError("gate spec needs a built-in path family");
  }
};

struct SweepResult {
  SweepGrid grid;
  double tau = 0.0;                         // ns, unperturbed schedule
  std::vector<std::vector<double>> fidelity;  // [epsilon][gamma]
};

/// Gate fidelity on every (eps, Gamma) grid point. The schedule is synthesized
/// once; points run in parallel and land at fixed positions.
inline SweepResult robustness_sweep(const GateSpec& spec, const SweepGrid& grid) {
  grid.validate();
  transmon1q::TransmonParams base{spec.alpha, 0.0, 0.0, spec.omega_max};
  base.validate();
  const auto path = spec.path();
  const auto schedule = geompath::synthesize_pulse(path, spec.omega_max, spec.samples);
  const Matrix<2> target = geompath::target_gate(path.chi0(), path.beta0(), path.gamma());
  const std::size_t ne = grid.epsilon_values.size(), ng = grid.gamma_values.size();
  std::vector<double> flat(ne * ng);
  parallel_for(ne * ng, [&](std::size_t k) {
    const auto errored = apply_error(schedule, SystematicError{grid.epsilon_values[k / ng]});
    auto params = base;
    params.gamma1 = params.gamma2 = grid.gamma_values[k % ng];
    const auto channel = transmon1q::gate_channel(errored, params, spec.drag, spec.max_dt);
    flat[k] = transmon1q::gate_fidelity_1q(channel, target);
  });
  SweepResult out{grid, schedule.tau, {}};
  for (std::size_t i = 0; i < ne; ++i) out.fidelity.emplace_back(flat.begin() + i * ng, flat.begin() + (i + 1) * ng);
  return out;
}

}  // namespace geomgate::octrobust
