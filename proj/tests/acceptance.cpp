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

// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
// Exit status is 0 only if every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "geomgate/bessel.hpp"
#include "geomgate/geompath.hpp"
#include "geomgate/octrobust.hpp"
#include "geomgate/qcore.hpp"
#include "geomgate/transmon1q.hpp"
#include "geomgate/twoq.hpp"
#include "geomgate/units.hpp"

using namespace geomgate;
using units::kPi;

namespace {

// Reference values and tolerances.
constexpr double kFN = 0.9987, kFT = 0.9980, kGN = 0.9987, kGT = 0.9984, kSingleTol = 0.0015;
constexpr double kF2 = 0.9953, kF2Tol = 0.0025;
constexpr double kTauNot = 102.0, kTauPhase = 125.0, kTauTol = 3.0;
constexpr double kTauFlat = 98.2, kTauFlatTol = 0.5, kTauOpt = 405.0, kTauOptTol = 10.0;
constexpr double kSingleRuntime = 60.0, kPairRuntime = 600.0;  // s

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Line {
  int id;
  bool pass;
  std::string detail;
};

std::vector<Line> lines;

void report(int id, bool pass, const std::string& detail) {
  lines.push_back({id, pass, detail});
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char b[128];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

bool near(double v, double ref, double tol) { return std::abs(v - ref) <= tol; }

const double kOmegaMax = units::two_pi_mhz(16.0);

struct SingleRun {
  double state = 0.0, gate = 0.0, seconds = 0.0, max_trace_drift = 0.0;
};

// State fidelity for one input, gate fidelity over the theta grid.
SingleRun single_gate(const geompath::EvolutionPath& path, const Vector<2>& input, const transmon1q::DragConfig& drag,
                      double dt) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto params = transmon1q::reference_transmon();
  const auto sched = geompath::synthesize_pulse(path, params.omega_max);
  const Matrix<2> target = geompath::target_gate(path.chi0(), path.beta0(), path.gamma());
  const auto traj = transmon1q::simulate_gate(sched, params, drag,
                                              DensityOperator<3>::pure(transmon1q::embed(input)), {dt, 10});
  SingleRun r;
  r.state = state_fidelity(traj.final_state(), Vector<2>(target * input));
  for (const auto& s : traj.states) r.max_trace_drift = std::max(r.max_trace_drift, std::abs(s.trace() - 1.0));
  r.gate = transmon1q::gate_fidelity_1q(transmon1q::gate_channel(sched, params, drag, dt), target);
  r.seconds = seconds_since(t0);
  return r;
}

}  // namespace

int main() {
  const auto not_path = geompath::build_x_rotation_path(kPi / 2);
  const auto phase_path = geompath::build_z_rotation_path(-kPi / 8, 0.2);
  const Vector<2> ket0(1.0, 0.0);
  const Vector<2> plus(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  const transmon1q::DragConfig drag{};  // derivative DRAG, ladder coupling
  double worst_trace = 0.0, worst_unitarity = 0.0;

  // 1 + 2: single-qubit fidelities.
  const auto n_run = single_gate(not_path, ket0, drag, 0.01);
  const auto t_run = single_gate(phase_path, plus, drag, 0.01);
  worst_trace = std::max({worst_trace, n_run.max_trace_drift, t_run.max_trace_drift});
  std::string closest;
  double closest_dev = 1e9;
  for (auto mode : {transmon1q::DragMode::off, transmon1q::DragMode::derivative})
    for (auto coupling : {transmon1q::LeakageCoupling::ladder, transmon1q::LeakageCoupling::literal}) {
      const transmon1q::DragConfig cfg{mode, coupling};
      const auto a = single_gate(not_path, ket0, cfg, 0.01);
      const auto b = single_gate(phase_path, plus, cfg, 0.01);
      const double dev = std::abs(a.state - kFN) + std::abs(b.state - kFT) + std::abs(a.gate - kGN) + std::abs(b.gate - kGT);
      std::printf("  flags drag=%s coupling=%s: F_N=%.5f F_T=%.5f F^G_N=%.5f F^G_T=%.5f (sum |dev| %.5f)\n",
                  transmon1q::to_string(mode).c_str(), transmon1q::to_string(coupling).c_str(), a.state, b.state,
                  a.gate, b.gate, dev);
      if (dev < closest_dev) {
        closest_dev = dev;
        closest = "drag=" + transmon1q::to_string(mode) + " coupling=" + transmon1q::to_string(coupling);
      }
    }
  report(1,
         near(n_run.state, kFN, kSingleTol) && near(t_run.state, kFT, kSingleTol) &&
             n_run.seconds <= kSingleRuntime && t_run.seconds <= kSingleRuntime,
         "F_N=" + fmt("%.5f", n_run.state) + " (0.9987+-0.0015) F_T=" + fmt("%.5f", t_run.state) +
             " (0.9980+-0.0015) runtime " + fmt("%.2f", n_run.seconds) + "s/" + fmt("%.2f", t_run.seconds) +
             "s; default drag=derivative coupling=ladder; closest flag pair: " + closest);
  report(2, near(n_run.gate, kGN, kSingleTol) && near(t_run.gate, kGT, kSingleTol),
         "F^G_N=" + fmt("%.5f", n_run.gate) + " (0.9987+-0.0015) F^G_T=" + fmt("%.5f", t_run.gate) +
             " (0.9984+-0.0015)");

  // 3: durations.
  const double tau_not = geompath::synthesize_pulse(not_path, kOmegaMax).tau;
  const double tau_phase = geompath::synthesize_pulse(phase_path, kOmegaMax).tau;
  const double tau_flat = geompath::synthesize_pulse(geompath::build_z_rotation_path(-kPi / 8, 0.0), kOmegaMax).tau;
  const double tau_opt = geompath::synthesize_pulse(geompath::build_z_rotation_path(-kPi / 8, 1.0), kOmegaMax).tau;
  report(3,
         near(tau_not, kTauNot, kTauTol) && near(tau_phase, kTauPhase, kTauTol) &&
             near(tau_flat, kTauFlat, kTauFlatTol) && near(tau_flat, kPi * kPi / kOmegaMax, 1e-6 * tau_flat) &&
             near(tau_opt, kTauOpt, kTauOptTol),
         "NOT " + fmt("%.2f", tau_not) + " ns, Phase " + fmt("%.2f", tau_phase) + " ns, eta=0 " + fmt("%.3f", tau_flat) +
             " ns (pi^2/Omega_max " + fmt("%.3f", kPi * kPi / kOmegaMax) + "), eta=1 " + fmt("%.2f", tau_opt) + " ns");

  // 4: perturbative formulas.
  {
    bool ok = octrobust::o2_analytic(1.0, 0.1) == 0.0 && octrobust::o2_analytic(1.0, 0.37) == 0.0;
    double worst_rel = 0.0, worst_o1 = 0.0, worst_overlap = 0.0;
    for (double eta : {0.0, 0.2, 0.5, 1.0, 2.0}) {
      const double an = octrobust::o2_analytic(eta, 0.1), nu = octrobust::o2_numeric(eta, 0.1);
      const double dev = std::abs(nu - an);
      ok = ok && dev <= 1e-6 * std::abs(an) + 1e-10;
      if (an != 0.0) worst_rel = std::max(worst_rel, dev / std::abs(an));
    }
    for (double eta : {0.0, 0.2, 1.0}) {
      const auto p = geompath::build_z_rotation_path(-kPi / 8, eta);
      const auto s = geompath::synthesize_pulse(p, kOmegaMax);
      worst_o1 = std::max(worst_o1, std::abs(0.01 * octrobust::first_order_slope(p, s)));
      worst_overlap = std::max(
          worst_overlap, std::abs(octrobust::perturbed_overlap(p, s, 0.01) - (1.0 + octrobust::o2_analytic(eta, 0.01))));
    }
    ok = ok && worst_o1 <= 1e-8 && worst_overlap <= 1e-6;
    report(4, ok,
           "max |O1| at eps=0.01 " + fmt("%.2e", worst_o1) + ", max rel |O2num-O2an| " + fmt("%.2e", worst_rel) +
               ", max |P-(1+O2)| " + fmt("%.2e", worst_overlap) + ", O2(eta=1)=0 exactly");
  }

  // 5: robustness ordering at Gamma = 0.
  {
    octrobust::GateSpec flat, opt;
    flat.eta = 0.0;
    opt.eta = 1.0;
    const auto grid = octrobust::default_sweep_grid(kOmegaMax, 41, 1);
    const auto a = octrobust::robustness_sweep(flat, grid);
    const auto b = octrobust::robustness_sweep(opt, grid);
    bool ordered = true;
    int points = 0;
    for (std::size_t i = 0; i < grid.epsilon_values.size(); ++i)
      if (std::abs(grid.epsilon_values[i] * kOmegaMax) >= units::two_pi_mhz(2.5) - 1e-12) {
        ++points;
        ordered = ordered && b.fidelity[i][0] > a.fidelity[i][0];
      }
    const octrobust::SweepGrid small{{-0.01, 0.0, 0.01}, {0.0}};
    const auto fa = octrobust::robustness_sweep(flat, small).fidelity;
    const auto fb = octrobust::robustness_sweep(opt, small).fidelity;
    const double d2a = fa[0][0] - 2.0 * fa[1][0] + fa[2][0], d2b = fb[0][0] - 2.0 * fb[1][0] + fb[2][0];
    const double d1b = (fb[2][0] - fb[0][0]) / (2.0 * 0.01);
    report(5, ordered && std::abs(d2b) < std::abs(d2a) && std::abs(d1b) <= 1e-4,
           "F(eta=1) > F(eta=0) on " + std::to_string(points) + " points with |eps Omega_max| >= 2pi x 2.5 MHz: " +
               (ordered ? "yes" : "no") + "; second difference eta=0 " + fmt("%.3e", d2a) + ", eta=1 " +
               fmt("%.3e", d2b) + "; eta=1 centered derivative " + fmt("%.1e", d1b));
  }

  // 6: two-qubit gate.
  double f2 = 0.0;
  const auto pair = twoq::reference_two_transmon();
  const auto cd = twoq::build_cphase_drive(kPi / 2, 250.0, pair);
  {
    const auto t0 = std::chrono::steady_clock::now();
    f2 = twoq::gate_fidelity_2q(twoq::cphase_channel(pair, cd.drive, 0.005), kPi / 2);
    const double secs = seconds_since(t0);
    report(6, near(f2, kF2, kF2Tol) && secs <= kPairRuntime,
           "F^G_2=" + fmt("%.5f", f2) + " (0.9953+-0.0025), peak g' " + fmt("%.3f", units::to_two_pi_mhz(cd.peak_coupling)) +
               " x 2pi MHz, runtime " + fmt("%.1f", secs) + "s");
  }

  // 7: structural oracles.
  {
    int combos = 0, good = 0;
    double worst_gd = 0.0;
    std::vector<geompath::EvolutionPath> paths;
    for (int k = 1; k <= 10; ++k) {
      const double gamma = -kPi + 2.0 * kPi * k / 10.0;
      paths.push_back(geompath::build_x_rotation_path(gamma));
      for (double eta : {0.0, 0.2, 1.0}) paths.push_back(geompath::build_z_rotation_path(gamma, eta));
    }
    for (const auto& p : paths) {
      const auto s = geompath::synthesize_pulse(p, kOmegaMax);
      const auto u = geompath::ideal_propagator(s);
      worst_unitarity = std::max(worst_unitarity, u.unitarity_defect());
      ++combos;
      good += unitary_overlap_fidelity(u.matrix, geompath::target_gate(p.chi0(), p.beta0(), p.gamma())) >= 1.0 - 1e-6;
      worst_gd = std::max(worst_gd, std::abs(geompath::dynamical_phase(p)));
    }
    bool residual_ok = true;
    double worst_res = 0.0, worst_ratio = 0.0;
    for (const auto& p : std::vector<geompath::EvolutionPath>{not_path, phase_path, geompath::build_z_rotation_path(-kPi / 8, 0.0),
                          geompath::build_z_rotation_path(-kPi / 8, 1.0)}) {
      const double r1 = geompath::constraint_residuals(geompath::synthesize_pulse(p, kOmegaMax, 10000), p).max_abs();
      const double r2 = geompath::constraint_residuals(geompath::synthesize_pulse(p, kOmegaMax, 20000), p).max_abs();
      residual_ok = residual_ok && r1 <= 1e-4 && r2 <= 0.5 * r1;
      worst_res = std::max(worst_res, r1);
      worst_ratio = std::max(worst_ratio, r2 / r1);
    }
    report(7, good == combos && combos >= 40 && worst_gd <= 1e-6 && residual_ok,
           std::to_string(good) + "/" + std::to_string(combos) + " gates >= 1-1e-6, max |gamma_D| " +
               fmt("%.1e", worst_gd) + " rad, max residual at 1e4 samples " + fmt("%.1e", worst_res) +
               " rad/ns, worst doubling ratio " + fmt("%.3f", worst_ratio));
  }

  // 8: numerical hygiene.
  {
    const auto u2 = twoq::full_propagator(pair, cd.drive, 0.005);
    worst_unitarity = std::max(worst_unitarity, u2.unitarity_defect());
    Vector<9> psi = Vector<9>::Zero();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) psi(twoq::level_index(a, b)) = 0.5;
    const auto traj = twoq::simulate_cphase(pair, cd.drive, DensityOperator<9>::pure(psi), {0.005, 500});
    for (const auto& s : traj.states) worst_trace = std::max(worst_trace, std::abs(s.trace() - 1.0));

    const auto n_half = single_gate(not_path, ket0, drag, 0.005);
    const auto t_half = single_gate(phase_path, plus, drag, 0.005);
    const double f2_half = twoq::gate_fidelity_2q(twoq::cphase_channel(pair, cd.drive, 0.0025), kPi / 2);
    const double dt_change = std::max({std::abs(n_half.state - n_run.state), std::abs(t_half.state - t_run.state),
                                       std::abs(n_half.gate - n_run.gate), std::abs(t_half.gate - t_run.gate),
                                       std::abs(f2_half - f2)});
    double worst_j1 = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double y = bessel::j1_branch_max() * k / 99.0;
      worst_j1 = std::max(worst_j1, std::abs(bessel::bessel_j1(bessel::invert_j1(y)) - y));
    }
    report(8, worst_trace <= 1e-8 && worst_unitarity <= 1e-8 && dt_change < 1e-5 && worst_j1 <= 1e-10,
           "trace drift " + fmt("%.1e", worst_trace) + ", unitarity defect " + fmt("%.1e", worst_unitarity) +
               ", max fidelity change under dt/2 " + fmt("%.1e", dt_change) + ", J1 round trip " + fmt("%.1e", worst_j1));
  }

  int passed = 0;
  for (const auto& l : lines) passed += l.pass;
  std::printf("acceptance summary: %d/8 criteria passed\n", passed);
  return passed == 8 ? 0 : 1;
}
