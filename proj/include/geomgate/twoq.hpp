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

// Two capacitively coupled transmons (A, B) with the frequency of A
// modulated as F(t) = lambda(t) sin(nu t + phi(t)). With nu = Delta - alpha_A
// the |11> <-> |20> transition becomes resonant with effective coupling
// g'(t) = 2 sqrt(2) g J1(lambda(t)); a Z-type geometric loop in that
// subspace imprints a phase on |11> only (control-phase gate).

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "geomgate/bessel.hpp"
#include "geomgate/errors.hpp"
#include "geomgate/geompath.hpp"
#include "geomgate/qcore.hpp"
#include "geomgate/sampled.hpp"
#include "geomgate/transmon1q.hpp"
#include "geomgate/units.hpp"

namespace geomgate::twoq {

using geompath::PulseSchedule;

/// Index of |a b> (transmon A first) in the 9-dimensional product space.
constexpr int level_index(int a, int b) { return 3 * a + b; }

struct TwoTransmonParams {
  double delta;    // omega_A - omega_B, rad/ns
  double alpha_a;  // rad/ns
  double alpha_b;  // rad/ns
  double g;        // static coupling, rad/ns
  double nu;       // modulation frequency, rad/ns
  double gamma1;   // per-transmon decay, rad/ns
  double gamma2;   // per-transmon dephasing, rad/ns
  bool allow_detuned_modulation = false;

  void validate() const {
    for (double v : {delta, alpha_a, alpha_b, g, nu, gamma1, gamma2})
      if (!std::isfinite(v)) throw ValidationError("two-transmon parameters must be finite");
    if (!(g > 0.0)) throw ValidationError("coupling g must be positive");
    if (!(nu > 0.0)) throw ValidationError("modulation frequency nu must be positive");
    if (gamma1 < 0.0 || gamma2 < 0.0) throw ValidationError("decoherence rates must be >= 0");
    if (!allow_detuned_modulation && std::abs(nu - (delta - alpha_a)) > 1e-9 * std::abs(nu)) {
      throw ValidationError("nu must equal delta - alpha_a for the resonant |11>-|20> configuration");
    }
  }

  /// Non-fatal diagnostics: the effective model assumes
  /// g << min(nu, Delta - nu, Delta + alpha_B - nu), checked at a factor 10.
  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    const double scale = std::min({nu, delta - nu, delta + alpha_b - nu});
    if (!(g <= scale / 10.0)) {
      std::ostringstream msg;
      msg << "rotating-wave approximation questionable: g = " << g << " rad/ns exceeds one tenth of "
          << "min(nu, Delta - nu, Delta + alpha_B - nu) = " << scale << " rad/ns";
      out.push_back(msg.str());
    }
    return out;
  }
};

inline TwoTransmonParams reference_two_transmon() {
  using units::two_pi_khz;
  using units::two_pi_mhz;
  return {two_pi_mhz(500.0), two_pi_mhz(320.0), two_pi_mhz(300.0), two_pi_mhz(5.0),
          two_pi_mhz(180.0), two_pi_khz(2.0),   two_pi_khz(2.0)};
}

/// Sampled modulation envelope lambda(t) and phase phi(t); same segmented
/// layout as a PulseSchedule.
struct ModulationDrive {
  std::vector<double> times;
  std::vector<double> lambda;
  std::vector<double> phi2;
  double nu = 0.0;
  std::vector<std::size_t> boundaries;
  std::vector<double> lambda_left;
  std::vector<double> phi2_left;

  double duration() const { return times.back(); }
  double lambda_at(double t) const {
    return interpolate_segmented(times, lambda, boundaries, lambda_left, t).value;
  }
  double phase_at(double t) const { return interpolate_segmented(times, phi2, boundaries, phi2_left, t).value; }

  /// F(t) = lambda(t) sin(nu t + phi(t)).
  double modulation(double t) const { return lambda_at(t) * std::sin(nu * t + phase_at(t)); }
};

/// (1/2) [[0, g' e^{i phi}], [g' e^{-i phi}, 0]] on the ordered basis {|11>, |20>}.
inline Matrix<2> effective_hamiltonian(double g_eff, double phi2) {
  if (!(g_eff >= 0.0) || !std::isfinite(g_eff)) throw ValidationError("effective coupling must be >= 0");
  Matrix<2> h;
  const Complex e = std::polar(0.5 * g_eff, phi2);
  h << 0.0, e, std::conj(e), 0.0;
  return h;
}

/// g' = 2 sqrt(2) g J1(lambda).
inline double effective_coupling(double g, double lambda) { return 2.0 * std::sqrt(2.0) * g * bessel::bessel_j1(lambda); }

/// Rotating-frame Hamiltonian
///   g [|10><01| e^{i Delta t} + sqrt2 |11><02| e^{i(Delta+alpha_B)t}
///      + sqrt2 |20><11| e^{i(Delta-alpha_A)t}] e^{-i F(t)} + h.c.
inline Matrix<9> full_hamiltonian(const TwoTransmonParams& params, const ModulationDrive& drive, double t) {
  if (t < -1e-9 || t > drive.duration() + 1e-9) throw ValidationError("time outside the modulation drive");
  const Complex i(0.0, 1.0);
  const Complex mod = std::exp(-i * drive.modulation(t));
  const double r2 = std::sqrt(2.0);
  Matrix<9> h = Matrix<9>::Zero();
  auto couple = [&](int row, int col, Complex value) {
    h(row, col) += value;
    h(col, row) += std::conj(value);
  };
  couple(level_index(1, 0), level_index(0, 1), params.g * std::exp(i * params.delta * t) * mod);
  couple(level_index(1, 1), level_index(0, 2),
         r2 * params.g * std::exp(i * (params.delta + params.alpha_b) * t) * mod);
  couple(level_index(2, 0), level_index(1, 1),
         r2 * params.g * std::exp(i * (params.delta - params.alpha_a) * t) * mod);
  return h;
}

inline Matrix<9> kron(const Matrix<3>& a, const Matrix<3>& b) {
  Matrix<9> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
  return out;
}

/// Each transmon gets the single-qubit decay and dephasing channels.
inline std::vector<CollapseChannel<9>> two_transmon_channels(const TwoTransmonParams& params) {
  const transmon1q::TransmonParams single{1.0, params.gamma1, params.gamma2, 1.0};
  const auto local = transmon1q::transmon_channels(single);
  const Matrix<3> id = Matrix<3>::Identity();
  std::vector<CollapseChannel<9>> out;
  for (const auto& ch : local) {
    out.emplace_back(kron(ch.op, id), ch.rate);
    out.emplace_back(kron(id, ch.op), ch.rate);
  }
  return out;
}

/// Drive and the geometric path it realizes.
struct CPhaseDrive {
  geompath::EvolutionPath path;
  PulseSchedule coupling;  // g'(t) as amplitude, phi(t) as phase
  ModulationDrive drive;
  double peak_coupling;    // max g', rad/ns
};

/// eta of the f(chi) gauge used for the two-qubit loop.
inline constexpr double kCPhaseEta = 0.2;

/// Builds the Z-type loop in {|11>, |20>} at fixed duration tau_prime and
/// converts g'(t) into lambda(t) = J1^{-1}(g'/(2 sqrt2 g)).
inline CPhaseDrive build_cphase_drive(double gamma_prime, double tau_prime, const TwoTransmonParams& params,
                                      std::size_t samples = 20000) {
  params.validate();
  auto path = geompath::build_z_rotation_path(gamma_prime, kCPhaseEta);
  auto sched = geompath::synthesize_pulse_with_duration(path, tau_prime, samples);
  const double scale = 2.0 * std::sqrt(2.0) * params.g;
  if (sched.omega_max / scale > bessel::j1_branch_max()) {
    std::ostringstream msg;
    msg << "required peak coupling " << units::to_two_pi_mhz(sched.omega_max)
        << " x 2pi MHz exceeds 2 sqrt2 g J1_max; use a longer gate duration";
    throw ValidationError(msg.str());
  }
  ModulationDrive drive;
  drive.times = sched.times;
  drive.nu = params.nu;
  drive.boundaries = sched.boundaries;
  drive.phi2 = sched.phi;
  drive.phi2_left = sched.phi_left;
  for (double w : sched.omega) drive.lambda.push_back(bessel::invert_j1(w / scale));
  for (double w : sched.omega_left) drive.lambda_left.push_back(bessel::invert_j1(w / scale));
  const double peak = sched.omega_max;
  return CPhaseDrive{std::move(path), std::move(sched), std::move(drive), peak};
}

inline auto hamiltonian_fn(const TwoTransmonParams& params, const ModulationDrive& drive) {
  return [params, &drive](double t) { return full_hamiltonian(params, drive, t); };
}

inline TimeGrid drive_grid(const ModulationDrive& drive, double max_dt) {
  return TimeGrid::covering(0.0, drive.duration(), max_dt, drive.boundaries.size() + 1);
}

struct SimulationOptions {
  double max_dt = 0.005;  // ns
  std::size_t record_stride = 100;
};

/// Lindblad evolution of the two-transmon system under the full Hamiltonian.
inline LindbladTrajectory<9> simulate_cphase(const TwoTransmonParams& params, const ModulationDrive& drive,
                                             const DensityOperator<9>& rho0, SimulationOptions options = {}) {
  params.validate();
  return propagate_lindblad(hamiltonian_fn(params, drive), two_transmon_channels(params), rho0,
                            drive_grid(drive, options.max_dt), LindbladOptions{options.record_stride});
}

/// Closed-system propagator of the full Hamiltonian (decoherence ignored).
inline Propagator<9> full_propagator(const TwoTransmonParams& params, const ModulationDrive& drive,
                                     double max_dt = 0.005) {
  return propagate_schrodinger(hamiltonian_fn(params, drive), drive_grid(drive, max_dt));
}

/// Computational-subspace indices |00>, |01>, |10>, |11>.
inline std::vector<int> computational_levels() {
  return {level_index(0, 0), level_index(0, 1), level_index(1, 0), level_index(1, 1)};
}

/// Gate channel on inputs supported in the computational subspace.
inline QuantumChannel<9> cphase_channel(const TwoTransmonParams& params, const ModulationDrive& drive,
                                        double max_dt = 0.005) {
  params.validate();
  return evolve_channel_basis(hamiltonian_fn(params, drive), two_transmon_channels(params),
                              drive_grid(drive, max_dt), 9, computational_levels());
}

/// diag(1, 1, 1, e^{i gamma'}).
inline Matrix<4> cphase_target(double gamma_prime) {
  Matrix<4> u = Matrix<4>::Identity();
  u(3, 3) = std::polar(1.0, gamma_prime);
  return u;
}

enum class SampleLayout {
  grid_plus_corner,   // n x n periodic grid on [0, 2pi)^2 plus the point (2pi, 2pi)
  inclusive_grid,     // (n+1) x (n+1) grid including both endpoints
};

/// Angle pairs for the two-qubit fidelity average. grid_plus_corner uses
/// n = floor(sqrt(samples - 1)) (10001 -> 100 x 100 + 1); inclusive_grid
/// uses n + 1 = round(sqrt(samples)) points per axis (10201 -> 101 x 101).
inline std::vector<std::pair<double, double>> fidelity_angles(std::size_t samples, SampleLayout layout) {
  if (samples < 4) throw ValidationError("two-qubit gate fidelity needs at least 4 samples");
  const double two_pi = 2.0 * units::kPi;
  std::vector<std::pair<double, double>> out;
  if (layout == SampleLayout::grid_plus_corner) {
    const auto n = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(samples - 1))));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        out.emplace_back(two_pi * static_cast<double>(a) / static_cast<double>(n),
                         two_pi * static_cast<double>(b) / static_cast<double>(n));
    out.emplace_back(two_pi, two_pi);
  } else {
    const auto m = static_cast<std::size_t>(std::round(std::sqrt(static_cast<double>(samples))));
    const std::size_t n = std::max<std::size_t>(m, 2) - 1;
    for (std::size_t a = 0; a <= n; ++a)
      for (std::size_t b = 0; b <= n; ++b)
        out.emplace_back(two_pi * static_cast<double>(a) / static_cast<double>(n),
                         two_pi * static_cast<double>(b) / static_cast<double>(n));
  }
  return out;
}

/// Mean of <Phi_ideal| rho_out |Phi_ideal> over product inputs
/// (cos t1 |0> + sin t1 |1>) (x) (cos t2 |0> + sin t2 |1>) with ideal outputs
/// cphase_target(gamma') |Phi(0)>.
inline double gate_fidelity_2q(const QuantumChannel<9>& channel, double gamma_prime, std::size_t samples = 10001,
                               SampleLayout layout = SampleLayout::grid_plus_corner) {
  const auto angles = fidelity_angles(samples, layout);
  const auto levels = computational_levels();
  const Matrix<4> target = cphase_target(gamma_prime);
  double sum = 0.0;
  for (const auto& [t1, t2] : angles) {
    Vector<4> in4;
    in4 << std::cos(t1) * std::cos(t2), std::cos(t1) * std::sin(t2), std::sin(t1) * std::cos(t2),
        std::sin(t1) * std::sin(t2);
    const Vector<4> out4 = target * in4;
    Vector<9> in = Vector<9>::Zero(), out = Vector<9>::Zero();
    for (int k = 0; k < 4; ++k) {
      in(levels[static_cast<std::size_t>(k)]) = in4(k);
      out(levels[static_cast<std::size_t>(k)]) = out4(k);
    }
    sum += channel.transition_fidelity(in, out);
  }
  return sum / static_cast<double>(angles.size());
}

}  // namespace geomgate::twoq
