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

// Driven three-level transmon: qutrit Hamiltonian with the 1-2 leakage
// transition, optional first-order DRAG, open-system gate runs and averaged
// gate fidelities over the qubit subspace.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "geomgate/errors.hpp"
#include "geomgate/geompath.hpp"
#include "geomgate/qcore.hpp"
#include "geomgate/units.hpp"

namespace geomgate::transmon1q {

using geompath::PulseSchedule;

struct TransmonParams {
  double alpha;      // anharmonicity, rad/ns
  double gamma1;     // decay rate, rad/ns
  double gamma2;     // dephasing rate, rad/ns
  double omega_max;  // drive cap, rad/ns

  void validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be positive");
    if (!(gamma1 >= 0.0) || !std::isfinite(gamma1)) throw ValidationError("gamma1 must be >= 0");
    if (!(gamma2 >= 0.0) || !std::isfinite(gamma2)) throw ValidationError("gamma2 must be >= 0");
    if (!(omega_max > 0.0) || !std::isfinite(omega_max)) throw ValidationError("omega_max must be positive");
  }
};

/// Device constants used for the single-qubit gates throughout.
inline TransmonParams reference_transmon() {
  return {units::two_pi_mhz(300.0), units::two_pi_khz(2.0), units::two_pi_khz(2.0), units::two_pi_mhz(16.0)};
}

enum class DragMode { off, derivative };

/// Prefactor of the |1><2| coupling: `ladder` uses sqrt(2) Omega / 2, the
/// harmonic-ladder partner of the Omega / 2 qubit coupling; `literal` uses
/// sqrt(2) Omega; `decoupled` removes it (two-level limit).
enum class LeakageCoupling { ladder, literal, decoupled };

/// Derivative DRAG: E -> E + i k dE/dt / alpha. k = -1/2 cancels first-order
/// leakage for the ladder coupling in this sign convention (|2> at -alpha).
struct DragConfig {
  DragMode mode = DragMode::derivative;
  LeakageCoupling coupling = LeakageCoupling::ladder;
  double coefficient = -0.5;
};

inline std::string to_string(DragMode m) { return m == DragMode::off ? "off" : "derivative"; }
inline std::string to_string(LeakageCoupling c) {
  switch (c) {
    case LeakageCoupling::ladder: return "ladder";
    case LeakageCoupling::literal: return "literal";
    case LeakageCoupling::decoupled: return "decoupled";
  }
  return "?";
}

/// H = (E/2)|0><1| + c E |1><2| + h.c. - alpha |2><2| with E = Omega e^{i phi},
/// c = sqrt(2)/2 (ladder), sqrt(2) (literal) or 0 (decoupled). DRAG, when on,
/// modifies E on both transitions.
inline Matrix<3> qutrit_hamiltonian(const PulseSchedule& schedule, const TransmonParams& params,
                                    const DragConfig& drag, double t) {
  if (t < -1e-9 || t > schedule.tau + 1e-9) throw ValidationError("time outside the pulse schedule");
  Complex e = schedule.envelope(t);
  if (drag.mode == DragMode::derivative)
    e += Complex(0.0, drag.coefficient) * schedule.envelope_rate(t) / params.alpha;
  double c = 0.0;
  if (drag.coupling == LeakageCoupling::ladder) c = std::sqrt(2.0) / 2.0;
  if (drag.coupling == LeakageCoupling::literal) c = std::sqrt(2.0);
  Matrix<3> h = Matrix<3>::Zero();
  h(0, 1) = 0.5 * e;
  h(1, 0) = std::conj(h(0, 1));
  h(1, 2) = c * e;
  h(2, 1) = std::conj(h(1, 2));
  h(2, 2) = -params.alpha;
  return h;
}

/// sigma_1 = |0><1| + sqrt(2)|1><2| (decay) and sigma_2 = |1><1| + 2|2><2| (dephasing).
inline std::vector<CollapseChannel<3>> transmon_channels(const TransmonParams& params) {
  Matrix<3> lower = Matrix<3>::Zero();
  lower(0, 1) = 1.0;
  lower(1, 2) = std::sqrt(2.0);
  Matrix<3> number = Matrix<3>::Zero();
  number(1, 1) = 1.0;
  number(2, 2) = 2.0;
  return {CollapseChannel<3>(lower, params.gamma1), CollapseChannel<3>(number, params.gamma2)};
}

struct SimulationOptions {
  double max_dt = 0.01;  // ns
  std::size_t record_stride = 10;
};

inline auto hamiltonian_fn(const PulseSchedule& schedule, const TransmonParams& params, const DragConfig& drag) {
  return [&schedule, params, drag](double t) { return qutrit_hamiltonian(schedule, params, drag, t); };
}

/// Lindblad evolution of a qutrit state through the schedule.
inline LindbladTrajectory<3> simulate_gate(const PulseSchedule& schedule, const TransmonParams& params,
                                           const DragConfig& drag, const DensityOperator<3>& rho0,
                                           SimulationOptions options = {}) {
  params.validate();
  schedule.validate(false);
  const auto channels = transmon_channels(params);
  return propagate_lindblad(hamiltonian_fn(schedule, params, drag), channels, rho0,
                            geompath::schedule_grid(schedule, options.max_dt),
                            LindbladOptions{options.record_stride});
}

/// Channel of the gate on inputs supported in the qubit subspace {|0>, |1>}.
inline QuantumChannel<3> gate_channel(const PulseSchedule& schedule, const TransmonParams& params,
                                      const DragConfig& drag, double max_dt = 0.01) {
  params.validate();
  schedule.validate(false);
  return evolve_channel_basis(hamiltonian_fn(schedule, params, drag), transmon_channels(params),
                              geompath::schedule_grid(schedule, max_dt), 3, {0, 1});
}

/// Mean of <Phi_ideal| rho_out |Phi_ideal> over inputs cos(theta)|0> + sin(theta)|1>,
/// theta on a uniform grid of `theta_samples` points spanning [0, 2 pi].
inline double gate_fidelity_1q(const QuantumChannel<3>& channel, const Matrix<2>& target,
                               std::size_t theta_samples = 1001) {
  if (theta_samples < 2) throw ValidationError("gate fidelity needs at least two theta samples");
  double sum = 0.0;
  for (std::size_t k = 0; k < theta_samples; ++k) {
    const double theta = 2.0 * units::kPi * static_cast<double>(k) / static_cast<double>(theta_samples - 1);
    Vector<2> in2;
    in2 << std::cos(theta), std::sin(theta);
    const Vector<2> out2 = target * in2;
    Vector<3> in = Vector<3>::Zero(), out = Vector<3>::Zero();
    in.head<2>() = in2;
    out.head<2>() = out2;
    sum += channel.transition_fidelity(in, out);
  }
  return sum / static_cast<double>(theta_samples);
}

/// Embeds a qubit vector into the qutrit space.
inline Vector<3> embed(const Vector<2>& v) {
  Vector<3> out = Vector<3>::Zero();
  out.head<2>() = v;
  return out;
}

}  // namespace geomgate::transmon1q
