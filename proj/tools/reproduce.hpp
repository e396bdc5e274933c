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

// Figure reproduction for the xlab command line: builds the reference
// scenarios, writes their data files and compares headline numbers with the
// published values.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "geomgate/octrobust.hpp"
#include "geomgate/scenario.hpp"
#include "geomgate/units.hpp"

namespace xlab {

namespace fs = std::filesystem;
using geomgate::scenario::Artifact;
using geomgate::scenario::json;

struct Check {
  std::string quantity;
  double reference;
  double value;
  double tolerance;
  bool pass() const { return std::abs(value - reference) <= tolerance; }
};

struct PropertyCheck {
  std::string statement;
  bool holds;
};

struct Summary {
  std::vector<Check> checks;
  std::vector<PropertyCheck> properties;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass()) return false;
    for (const auto& p : properties)
      if (!p.holds) return false;
    return true;
  }

  std::string table() const {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-34s %12s %14s %10s  %s\n", "quantity", "reference", "value", "tol", "result");
    out += line;
    for (const auto& c : checks) {
      std::snprintf(line, sizeof line, "%-34s %12.6g %14.8g %10.3g  %s\n", c.quantity.c_str(), c.reference, c.value,
                    c.tolerance, c.pass() ? "PASS" : "FAIL");
      out += line;
    }
    for (const auto& p : properties) out += p.statement + "  " + (p.holds ? "PASS" : "FAIL") + "\n";
    return out;
  }
};

inline void write_files(const fs::path& dir, const std::vector<Artifact>& files) {
  fs::create_directories(dir);
  for (const auto& f : files) {
    std::ofstream out(dir / f.name, std::ios::binary);
    out << f.content;
    if (!out) throw geomgate::NumericalError("failed to write " + (dir / f.name).string());
  }
}

inline json single_qubit_config(const std::string& family, double gamma, double eta) {
  return {{"kind", "single-qubit-gate"},
          {"gate", {{"family", family}, {"gamma", gamma}, {"eta", eta}}},
          {"device", {{"units", "two_pi_mhz"}, {"alpha", 300.0}, {"omega_max", 16.0}, {"gamma1", 0.002}, {"gamma2", 0.002}}}};
}

inline Summary reproduce_fig2(const fs::path& out) {
  using geomgate::units::kPi;
  namespace sc = geomgate::scenario;
  const auto not_gate = sc::run_scenario(sc::parse_scenario(single_qubit_config("x-rotation", kPi / 2.0, 0.0)));
  const auto phase_gate = sc::run_scenario(sc::parse_scenario(single_qubit_config("z-rotation", -kPi / 8.0, 0.2)));
  write_files(out / "not", not_gate.files);
  write_files(out / "phase", phase_gate.files);
  Summary s;
  s.checks = {{"NOT duration tau (ns)", 102.0, not_gate.report.tau_ns, 3.0},
              {"Phase duration tau (ns)", 125.0, phase_gate.report.tau_ns, 3.0},
              {"NOT state fidelity F_N", 0.9987, *not_gate.report.state_fidelity, 0.0015},
              {"Phase state fidelity F_T", 0.9980, *phase_gate.report.state_fidelity, 0.0015},
              {"NOT gate fidelity F^G_N", 0.9987, *not_gate.report.gate_fidelity, 0.0015},
              {"Phase gate fidelity F^G_T", 0.9984, *phase_gate.report.gate_fidelity, 0.0015}};
  return s;
}

inline geomgate::octrobust::GateSpec phase_spec(double eta) {
  geomgate::octrobust::GateSpec spec;
  spec.family = geomgate::geompath::PathFamily::z_rotation;
  spec.gamma = -geomgate::units::kPi / 8.0;
  spec.eta = eta;
  return spec;
}

inline void write_sweep(const fs::path& dir, const std::string& stem, const geomgate::octrobust::SweepResult& r) {
  write_files(dir, {{stem + ".csv", geomgate::scenario::sweep_csv(r)}});
}

inline Summary reproduce_fig3a(const fs::path& out, std::size_t eps_points) {
  namespace oc = geomgate::octrobust;
  const double omax = geomgate::units::two_pi_mhz(16.0);
  auto grid = oc::default_sweep_grid(omax, eps_points, 1);
  const auto flat = oc::robustness_sweep(phase_spec(0.0), grid);
  const auto opt = oc::robustness_sweep(phase_spec(1.0), grid);
  write_sweep(out, "fig3a_eta0", flat);
  write_sweep(out, "fig3a_eta1", opt);
  bool better = true;
  for (std::size_t i = 0; i < grid.epsilon_values.size(); ++i)
    if (std::abs(grid.epsilon_values[i] * omax) >= geomgate::units::two_pi_mhz(2.5) - 1e-12)
      better = better && opt.fidelity[i][0] > flat.fidelity[i][0];
  Summary s;
  s.checks = {{"eta=0 duration (ns)", 98.2, flat.tau, 0.5}, {"eta=1 duration (ns)", 405.0, opt.tau, 10.0}};
  s.properties = {{"F(eta=1) > F(eta=0) wherever |eps Omega_max| >= 2pi x 2.5 MHz", better}};
  return s;
}

inline Summary reproduce_fig3bc(const fs::path& out, std::size_t eps_points, std::size_t gamma_points) {
  namespace oc = geomgate::octrobust;
  const double omax = geomgate::units::two_pi_mhz(16.0);
  const auto grid = oc::default_sweep_grid(omax, eps_points, gamma_points);
  const auto flat = oc::robustness_sweep(phase_spec(0.0), grid);
  const auto opt = oc::robustness_sweep(phase_spec(1.0), grid);
  write_sweep(out, "fig3b_eta0", flat);
  write_sweep(out, "fig3c_eta1", opt);
  // At the largest error the optimized gate should still win for weak decoherence.
  const std::size_t edge = grid.epsilon_values.size() - 1;
  Summary s;
  s.properties = {{"F(eta=1) > F(eta=0) at eps Omega_max = 2pi x 5 MHz, Gamma = " +
                       geomgate::scenario::fmt(grid.gamma_values.front()) + " rad/ns",
                   opt.fidelity[edge][0] > flat.fidelity[edge][0]}};
  return s;
}

inline Summary reproduce_fig4(const fs::path& out) {
  namespace sc = geomgate::scenario;
  const json cfg = {{"kind", "two-qubit-cphase"},
                    {"gate", {{"gamma", geomgate::units::kPi / 2.0}, {"tau_prime_ns", 250.0}}},
                    {"device",
                     {{"units", "two_pi_mhz"},
                      {"delta", 500.0},
                      {"alpha_a", 320.0},
                      {"alpha_b", 300.0},
                      {"g", 5.0},
                      {"nu", 180.0},
                      {"gamma1", 0.002},
                      {"gamma2", 0.002}}}};
  const auto res = sc::run_scenario(sc::parse_scenario(cfg));
  write_files(out, res.files);
  Summary s;
  s.checks = {{"peak g' (2pi MHz)", 8.0, geomgate::units::to_two_pi_mhz(res.report.peak_amplitude_rad_per_ns), 0.25},
              {"two-qubit gate fidelity F^G_2", 0.9953, *res.report.gate_fidelity, 0.0025}};
  return s;
}

}  // namespace xlab
