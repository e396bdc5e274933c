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

// Declarative scenarios (JSON with explicit unit tags), plot-ready CSV
// emitters and the serializable fidelity report. Everything is validated in
// parse_scenario; run_scenario returns file contents instead of writing them,
// so a failed run leaves nothing behind.

#pragma once

#include <cmath>
#include <cstdio>
#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "geomgate/errors.hpp"
#include "geomgate/geompath.hpp"
#include "geomgate/octrobust.hpp"
#include "geomgate/qcore.hpp"
#include "geomgate/transmon1q.hpp"
#include "geomgate/twoq.hpp"
#include "geomgate/units.hpp"

namespace geomgate::scenario {

using nlohmann::json;

// ---------------------------------------------------------------- formatting

/// Shortest form that round-trips a double exactly.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string pulse_csv(const geompath::PulseSchedule& s) {
  std::string out = "t_ns,omega_rad_per_ns,phi_rad\n";
  for (std::size_t k = 0; k < s.times.size(); ++k)
    out += fmt(s.times[k]) + "," + fmt(s.omega[k]) + "," + fmt(s.phi[k]) + "\n";
  return out;
}

/// Everything needed to rebuild the schedule, left limits at segment edges included.
inline json pulse_envelope(const geompath::PulseSchedule& s) {
  return {{"tau_ns", s.tau},
          {"omega_max_rad_per_ns", s.omega_max},
          {"samples", s.times.size()},
          {"boundaries", s.boundaries},
          {"omega_left", s.omega_left},
          {"phi_left", s.phi_left}};
}

inline std::string drive_csv(const twoq::CPhaseDrive& d, double g) {
  std::string out = "t_ns,lambda,phi2_rad,g_eff_rad_per_ns\n";
  const auto& m = d.drive;
  for (std::size_t k = 0; k < m.times.size(); ++k)
    out += fmt(m.times[k]) + "," + fmt(m.lambda[k]) + "," + fmt(m.phi2[k]) + "," +
           fmt(twoq::effective_coupling(g, m.lambda[k])) + "\n";
  return out;
}

/// First row: Gamma values (rad/ns); first column: epsilon; body: fidelities.
inline std::string sweep_csv(const octrobust::SweepResult& r) {
  std::string out = "epsilon\\gamma_rad_per_ns";
  for (double g : r.grid.gamma_values) out += "," + fmt(g);
  out += "\n";
  for (std::size_t i = 0; i < r.grid.epsilon_values.size(); ++i) {
    out += fmt(r.grid.epsilon_values[i]);
    for (double f : r.fidelity[i]) out += "," + fmt(f);
    out += "\n";
  }
  return out;
}

/// `t_ns,p<levels>...,fidelity` with fidelity against the ideal final state.
template <int N, int M>
std::string trajectory_csv(const LindbladTrajectory<N>& traj, const Vector<M>& ideal_final,
                           const std::vector<std::string>& level_names) {
  std::string out = "t_ns";
  for (const auto& n : level_names) out += ",p" + n;
  out += ",fidelity\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out += fmt(traj.times[k]);
    for (std::size_t l = 0; l < level_names.size(); ++l)
      out += "," + fmt(traj.states[k].population(static_cast<int>(l)));
    out += "," + fmt(state_fidelity(traj.states[k], ideal_final)) + "\n";
  }
  return out;
}

// -------------------------------------------------------------------- report

struct PhaseSummary {
  double total = 0.0;
  double dynamical = 0.0;
  double geometric = 0.0;
  bool operator==(const PhaseSummary&) const = default;
};

struct FidelityReport {
  std::string kind;
  json scenario;
  std::optional<double> state_fidelity;
  std::optional<double> gate_fidelity;
  std::optional<PhaseSummary> phases;
  double tau_ns = 0.0;
  double peak_amplitude_rad_per_ns = 0.0;
  std::optional<double> peak_lambda;
  double dt_ns = 0.0;
  std::size_t steps = 0;
  std::vector<std::string> warnings;
  bool operator==(const FidelityReport&) const = default;
};

namespace detail {
template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}
template <class T>
std::optional<T> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}
}  // namespace detail

inline json to_json(const FidelityReport& r) {
  json phases = nullptr;
  if (r.phases) phases = {{"total", r.phases->total}, {"dynamical", r.phases->dynamical}, {"geometric", r.phases->geometric}};
  return {{"kind", r.kind},
          {"scenario", r.scenario},
          {"fidelities", {{"state", detail::opt(r.state_fidelity)}, {"gate", detail::opt(r.gate_fidelity)}}},
          {"phases", phases},
          {"tau_ns", r.tau_ns},
          {"peak_amplitude_rad_per_ns", r.peak_amplitude_rad_per_ns},
          {"peak_lambda", detail::opt(r.peak_lambda)},
          {"solver", {{"dt_ns", r.dt_ns}, {"steps", r.steps}}},
          {"warnings", r.warnings}};
}

inline FidelityReport report_from_json(const json& j) {
  FidelityReport r;
  r.kind = j.at("kind").get<std::string>();
  r.scenario = j.at("scenario");
  r.state_fidelity = detail::opt_from<double>(j.at("fidelities"), "state");
  r.gate_fidelity = detail::opt_from<double>(j.at("fidelities"), "gate");
  if (!j.at("phases").is_null()) {
    const auto& p = j.at("phases");
    r.phases = PhaseSummary{p.at("total").get<double>(), p.at("dynamical").get<double>(), p.at("geometric").get<double>()};
  }
  r.tau_ns = j.at("tau_ns").get<double>();
  r.peak_amplitude_rad_per_ns = j.at("peak_amplitude_rad_per_ns").get<double>();
  r.peak_lambda = detail::opt_from<double>(j, "peak_lambda");
  r.dt_ns = j.at("solver").at("dt_ns").get<double>();
  r.steps = j.at("solver").at("steps").get<std::size_t>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

inline std::string emit(const FidelityReport& r) { return to_json(r).dump(2) + "\n"; }
inline FidelityReport parse_report(const std::string& text) { return report_from_json(json::parse(text)); }

// ------------------------------------------------------------------ scenario

enum class Kind { single_qubit_gate, robustness_sweep, two_qubit_cphase, pulse_synthesis };

inline std::string to_string(Kind k) {
  switch (k) {
    case Kind::single_qubit_gate: return "single-qubit-gate";
    case Kind::robustness_sweep: return "robustness-sweep";
    case Kind::two_qubit_cphase: return "two-qubit-cphase";
    case Kind::pulse_synthesis: return "pulse-synthesis";
  }
  return "?";
}

struct Scenario {
  Kind kind = Kind::single_qubit_gate;
  json source;
  geompath::PathFamily family = geompath::PathFamily::z_rotation;
  double gamma = 0.0;  // gamma, or gamma' for the two-qubit gate
  double eta = 0.0;
  transmon1q::TransmonParams device{units::two_pi_mhz(300.0), 0.0, 0.0, units::two_pi_mhz(16.0)};
  transmon1q::DragConfig drag{};
  twoq::TwoTransmonParams pair = twoq::reference_two_transmon();
  double tau_prime = 250.0;
  octrobust::SystematicError error{};
  octrobust::SweepGrid sweep{};
  double dt = 0.01;
  std::size_t samples = 20000;
  std::size_t theta_samples = 1001;
  std::size_t pair_samples = 10001;
  double theta_a = 0.0;
  double theta_b = 0.0;
  bool compute_gate_fidelity = true;
  std::string output = "out";

  geompath::EvolutionPath path() const {
    if (kind == Kind::two_qubit_cphase) return geompath::build_z_rotation_path(gamma, twoq::kCPhaseEta);
    if (family == geompath::PathFamily::x_rotation) return geompath::build_x_rotation_path(gamma);
    return geompath::build_z_rotation_path(gamma, eta);
  }
};

namespace detail {

[[noreturn]] inline void field_error(const std::string& field, const std::string& what) {
  throw ValidationError("config field '" + field + "': " + what);
}

inline void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) field_error(where.empty() ? "<root>" : where, "must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.contains(key)) field_error(where.empty() ? key : where + "." + key, "unknown field");
}

inline double number(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) field_error(where + "." + key, "required");
  const auto& v = j.at(key);
  if (!v.is_number()) field_error(where + "." + key, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) field_error(where + "." + key, "must be finite");
  return x;
}

inline double number_or(const json& j, const std::string& where, const char* key, double fallback) {
  return j.contains(key) ? number(j, where, key) : fallback;
}

inline std::size_t count_or(const json& j, const std::string& where, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) field_error(where + "." + key, "must be a positive integer");
  return v.get<std::size_t>();
}

/// Multiplier turning a value in the declared unit into rad/ns.
inline double unit_scale(const json& j, const std::string& where) {
  if (!j.contains("units")) field_error(where + ".units", "required (two_pi_mhz or rad_per_ns)");
  const auto& u = j.at("units");
  if (u == "two_pi_mhz") return units::two_pi_mhz(1.0);
  if (u == "rad_per_ns") return 1.0;
  field_error(where + ".units", "must be two_pi_mhz or rad_per_ns");
}

inline double rate(const json& j, const std::string& where, const char* key, double scale, bool positive) {
  const double v = number(j, where, key) * scale;
  if (positive ? !(v > 0.0) : !(v >= 0.0)) field_error(where + "." + key, positive ? "must be > 0" : "must be >= 0");
  return v;
}

inline std::vector<double> axis(const json& j, const std::string& where, double scale) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) field_error(where, "entries must be numbers");
      out.push_back(v.get<double>() * scale);
    }
  } else if (j.is_object()) {
    reject_unknown(j, where, {"from", "to", "count"});
    const double lo = number(j, where, "from"), hi = number(j, where, "to");
    out = octrobust::linspace(lo * scale, hi * scale, count_or(j, where, "count", 1));
  } else {
    field_error(where, "must be an array or {from, to, count}");
  }
  if (out.empty()) field_error(where, "must be nonempty");
  if (!std::is_sorted(out.begin(), out.end())) field_error(where, "must be sorted ascending");
  return out;
}

inline Kind parse_kind(const json& j) {
  if (!j.contains("kind") || !j.at("kind").is_string()) field_error("kind", "required string");
  const auto k = j.at("kind").get<std::string>();
  for (Kind c : {Kind::single_qubit_gate, Kind::robustness_sweep, Kind::two_qubit_cphase, Kind::pulse_synthesis})
    if (k == to_string(c)) return c;
  field_error("kind", "unknown kind '" + k + "'");
}

}  // namespace detail

/// Parses and fully validates a scenario; throws ValidationError naming the field.
inline Scenario parse_scenario(const json& j) {
  using namespace detail;
  reject_unknown(j, "", {"kind", "gate", "device", "drag", "error", "sweep", "grid", "initial_state", "output",
                         "gate_fidelity"});
  Scenario s;
  s.source = j;
  s.kind = parse_kind(j);
  const bool two = s.kind == Kind::two_qubit_cphase;

  if (!j.contains("gate")) field_error("gate", "required");
  const auto& gate = j.at("gate");
  reject_unknown(gate, "gate", {"family", "gamma", "eta", "tau_prime_ns"});
  s.gamma = number(gate, "gate", "gamma");
  if (two) {
    s.tau_prime = number_or(gate, "gate", "tau_prime_ns", 250.0);
    if (!(s.tau_prime > 0.0)) field_error("gate.tau_prime_ns", "must be > 0");
  } else {
    if (!gate.contains("family")) field_error("gate.family", "required (x-rotation or z-rotation)");
    const auto fam = gate.at("family");
    if (fam == "x-rotation") {
      s.family = geompath::PathFamily::x_rotation;
    } else if (fam == "z-rotation") {
      s.family = geompath::PathFamily::z_rotation;
    } else {
      field_error("gate.family", "must be x-rotation or z-rotation");
    }
    s.eta = number_or(gate, "gate", "eta", 0.0);
    if (!(s.eta >= 0.0)) field_error("gate.eta", "must be >= 0");
    if (gate.contains("tau_prime_ns")) field_error("gate.tau_prime_ns", "only valid for two-qubit-cphase");
  }

  if (!j.contains("device")) field_error("device", "required");
  const auto& dev = j.at("device");
  const double scale = unit_scale(dev, "device");
  if (two) {
    reject_unknown(dev, "device", {"units", "delta", "alpha_a", "alpha_b", "g", "nu", "gamma1", "gamma2",
                                   "allow_detuned_modulation"});
    s.pair.delta = number(dev, "device", "delta") * scale;
    s.pair.alpha_a = number(dev, "device", "alpha_a") * scale;
    s.pair.alpha_b = number(dev, "device", "alpha_b") * scale;
    s.pair.g = rate(dev, "device", "g", scale, true);
    s.pair.nu = rate(dev, "device", "nu", scale, true);
    s.pair.gamma1 = rate(dev, "device", "gamma1", scale, false);
    s.pair.gamma2 = rate(dev, "device", "gamma2", scale, false);
    if (dev.contains("allow_detuned_modulation")) {
      if (!dev.at("allow_detuned_modulation").is_boolean()) field_error("device.allow_detuned_modulation", "must be a boolean");
      s.pair.allow_detuned_modulation = dev.at("allow_detuned_modulation").get<bool>();
    }
    s.pair.validate();
  } else {
    reject_unknown(dev, "device", {"units", "alpha", "omega_max", "gamma1", "gamma2"});
    s.device.omega_max = rate(dev, "device", "omega_max", scale, true);
    if (s.kind != Kind::pulse_synthesis) s.device.alpha = rate(dev, "device", "alpha", scale, true);
    if (s.kind == Kind::single_qubit_gate) {
      s.device.gamma1 = rate(dev, "device", "gamma1", scale, false);
      s.device.gamma2 = rate(dev, "device", "gamma2", scale, false);
    }
    s.device.validate();
  }

  if (j.contains("drag")) {
    const auto& d = j.at("drag");
    reject_unknown(d, "drag", {"mode", "coupling", "coefficient"});
    if (d.contains("mode")) {
      if (d.at("mode") == "off") s.drag.mode = transmon1q::DragMode::off;
      else if (d.at("mode") == "derivative") s.drag.mode = transmon1q::DragMode::derivative;
      else field_error("drag.mode", "must be off or derivative");
    }
    if (d.contains("coupling")) {
      if (d.at("coupling") == "ladder") s.drag.coupling = transmon1q::LeakageCoupling::ladder;
      else if (d.at("coupling") == "literal") s.drag.coupling = transmon1q::LeakageCoupling::literal;
      else if (d.at("coupling") == "decoupled") s.drag.coupling = transmon1q::LeakageCoupling::decoupled;
      else field_error("drag.coupling", "must be ladder, literal or decoupled");
    }
    s.drag.coefficient = number_or(d, "drag", "coefficient", s.drag.coefficient);
  }

  if (j.contains("error")) {
    reject_unknown(j.at("error"), "error", {"epsilon"});
    s.error.epsilon = number(j.at("error"), "error", "epsilon");
    if (std::abs(s.error.epsilon) > 0.5) field_error("error.epsilon", "must satisfy |epsilon| <= 0.5");
  }

  if (s.kind == Kind::robustness_sweep) {
    if (!j.contains("sweep")) field_error("sweep", "required for robustness-sweep");
    const auto& sw = j.at("sweep");
    reject_unknown(sw, "sweep", {"epsilon", "gamma", "units"});
    if (!sw.contains("epsilon")) field_error("sweep.epsilon", "required");
    s.sweep.epsilon_values = axis(sw.at("epsilon"), "sweep.epsilon", 1.0);
    for (double e : s.sweep.epsilon_values)
      if (std::abs(e) > 0.5) field_error("sweep.epsilon", "entries must satisfy |epsilon| <= 0.5");
    if (sw.contains("gamma")) {
      s.sweep.gamma_values = axis(sw.at("gamma"), "sweep.gamma", unit_scale(sw, "sweep"));
      for (double g : s.sweep.gamma_values)
        if (g < 0.0) field_error("sweep.gamma", "entries must be >= 0");
    } else {
      s.sweep.gamma_values = {0.0};
    }
    s.sweep.validate();
  } else if (j.contains("sweep")) {
    field_error("sweep", "only valid for robustness-sweep");
  }

  s.dt = two ? 0.005 : 0.01;
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    reject_unknown(g, "grid", {"dt_ns", "samples", "theta_samples", "pair_samples"});
    s.dt = number_or(g, "grid", "dt_ns", s.dt);
    if (!(s.dt > 0.0) || s.dt > 1.0) field_error("grid.dt_ns", "must be in (0, 1]");
    s.samples = count_or(g, "grid", "samples", s.samples);
    if (s.samples < 1000) field_error("grid.samples", "must be >= 1000");
    s.theta_samples = count_or(g, "grid", "theta_samples", s.theta_samples);
    if (s.theta_samples < 2) field_error("grid.theta_samples", "must be >= 2");
    s.pair_samples = count_or(g, "grid", "pair_samples", s.pair_samples);
    if (s.pair_samples < 5) field_error("grid.pair_samples", "must be >= 5");
  }

  s.theta_a = s.family == geompath::PathFamily::x_rotation || two ? 0.0 : units::kPi / 4.0;
  if (two) s.theta_a = s.theta_b = units::kPi / 4.0;
  if (j.contains("initial_state")) {
    const auto& st = j.at("initial_state");
    reject_unknown(st, "initial_state", {"theta", "theta_b"});
    s.theta_a = number_or(st, "initial_state", "theta", s.theta_a);
    s.theta_b = number_or(st, "initial_state", "theta_b", s.theta_b);
    if (!two && st.contains("theta_b")) field_error("initial_state.theta_b", "only valid for two-qubit-cphase");
  }
  if (j.contains("gate_fidelity")) {
    if (!j.at("gate_fidelity").is_boolean()) field_error("gate_fidelity", "must be a boolean");
    s.compute_gate_fidelity = j.at("gate_fidelity").get<bool>();
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string() || j.at("output").get<std::string>().empty())
      field_error("output", "must be a nonempty path string");
    s.output = j.at("output").get<std::string>();
  }

  // Builds the path so that geometric problems surface before any compute.
  try {
    (void)s.path();
  } catch (const ValidationError& e) {
    field_error("gate", e.what());
  }
  return s;
}

inline Scenario load_scenario(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open config file '" + file + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config file '" + file + "' is not valid JSON: " + e.what());
  }
  return parse_scenario(j);
}

// --------------------------------------------------------------------- run

struct Artifact {
  std::string name;
  std::string content;
};

struct ScenarioResult {
  FidelityReport report;
  std::vector<Artifact> files;  // report.json included
};

namespace detail {

inline Vector<2> qubit_state(double theta) {
  Vector<2> v;
  v << std::cos(theta), std::sin(theta);
  return v;
}

inline FidelityReport base_report(const Scenario& s) {
  FidelityReport r;
  r.kind = to_string(s.kind);
  r.scenario = s.source;
  r.dt_ns = s.dt;
  return r;
}

inline void finish(ScenarioResult& out) { out.files.push_back({"report.json", emit(out.report)}); }

inline ScenarioResult run_pulse_synthesis(const Scenario& s) {
  const auto path = s.path();
  const auto sched = geompath::synthesize_pulse(path, s.device.omega_max, s.samples);
  const auto ph = geompath::phase_decomposition(path, sched, s.dt);
  ScenarioResult out{base_report(s), {}};
  auto& r = out.report;
  r.phases = PhaseSummary{ph.total, ph.dynamical, ph.geometric};
  r.tau_ns = sched.tau;
  r.peak_amplitude_rad_per_ns = sched.peak_amplitude();
  r.steps = geompath::schedule_grid(sched, s.dt).steps();
  if (s.gamma == 0.0) r.warnings.push_back("gamma = 0: the cyclic evolution implements the identity gate");
  json env = pulse_envelope(sched);
  env["gate"] = {{"family", geompath::to_string(path.family())}, {"gamma", path.gamma()}, {"eta", path.eta()}};
  out.files.push_back({"pulse.csv", pulse_csv(sched)});
  out.files.push_back({"pulse.json", env.dump(2) + "\n"});
  finish(out);
  return out;
}

inline ScenarioResult run_single_qubit(const Scenario& s) {
  auto out = run_pulse_synthesis(s);
  out.files.pop_back();
  const auto path = s.path();
  const auto clean = geompath::synthesize_pulse(path, s.device.omega_max, s.samples);
  const auto sched = octrobust::apply_error(clean, s.error);
  const Matrix<2> target = geompath::target_gate(path.chi0(), path.beta0(), path.gamma());
  const Vector<2> in = qubit_state(s.theta_a);
  const Vector<2> ideal = target * in;
  const auto rho0 = DensityOperator<3>::pure(transmon1q::embed(in));
  const auto traj = transmon1q::simulate_gate(sched, s.device, s.drag, rho0, {s.dt, 10});
  auto& r = out.report;
  r.state_fidelity = state_fidelity(traj.final_state(), ideal);
  if (s.compute_gate_fidelity) {
    const auto ch = transmon1q::gate_channel(sched, s.device, s.drag, s.dt);
    r.gate_fidelity = transmon1q::gate_fidelity_1q(ch, target, s.theta_samples);
  }
  if (s.error.epsilon != 0.0) r.peak_amplitude_rad_per_ns = sched.peak_amplitude();
  out.files.push_back({"trajectory.csv", trajectory_csv(traj, ideal, {"0", "1", "2"})});
  finish(out);
  return out;
}

inline ScenarioResult run_sweep(const Scenario& s) {
  octrobust::GateSpec spec;
  spec.family = s.family;
  spec.gamma = s.gamma;
  spec.eta = s.eta;
  spec.alpha = s.device.alpha;
  spec.omega_max = s.device.omega_max;
  spec.drag = s.drag;
  spec.samples = s.samples;
  spec.max_dt = s.dt;
  const auto res = octrobust::robustness_sweep(spec, s.sweep);
  ScenarioResult out{base_report(s), {}};
  auto& r = out.report;
  r.tau_ns = res.tau;
  r.peak_amplitude_rad_per_ns = s.device.omega_max;
  r.steps = TimeGrid::covering(0.0, res.tau, s.dt, spec.family == geompath::PathFamily::x_rotation ? 4 : 2).steps();
  json prov = {{"gate", {{"family", geompath::to_string(s.family)}, {"gamma", s.gamma}, {"eta", s.eta}}},
               {"alpha_rad_per_ns", s.device.alpha},
               {"omega_max_rad_per_ns", s.device.omega_max},
               {"drag", {{"mode", transmon1q::to_string(s.drag.mode)},
                         {"coupling", transmon1q::to_string(s.drag.coupling)},
                         {"coefficient", s.drag.coefficient}}},
               {"dt_ns", s.dt},
               {"samples", s.samples},
               {"theta_samples", 1001},
               {"tau_ns", res.tau},
               {"seeds", json::array()},
               {"epsilon", res.grid.epsilon_values},
               {"gamma_rad_per_ns", res.grid.gamma_values},
               {"fidelity", res.fidelity}};
  out.files.push_back({"sweep.csv", sweep_csv(res)});
  out.files.push_back({"sweep.json", prov.dump(2) + "\n"});
  finish(out);
  return out;
}

inline std::vector<std::string> pair_level_names() {
  std::vector<std::string> names;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) names.push_back(std::to_string(a) + std::to_string(b));
  return names;
}

inline ScenarioResult run_two_qubit(const Scenario& s) {
  const auto cd = twoq::build_cphase_drive(s.gamma, s.tau_prime, s.pair, s.samples);
  ScenarioResult out{base_report(s), {}};
  auto& r = out.report;
  r.warnings = s.pair.warnings();
  r.tau_ns = cd.coupling.tau;
  r.peak_amplitude_rad_per_ns = cd.peak_coupling;
  r.peak_lambda = *std::max_element(cd.drive.lambda.begin(), cd.drive.lambda.end());
  r.steps = twoq::drive_grid(cd.drive, s.dt).steps();
  const Vector<2> a = qubit_state(s.theta_a), b = qubit_state(s.theta_b);
  Vector<9> in = Vector<9>::Zero();
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) in(twoq::level_index(i, k)) = a(i) * b(k);
  Vector<9> ideal = in;
  ideal(twoq::level_index(1, 1)) *= std::polar(1.0, s.gamma);
  const auto traj = twoq::simulate_cphase(s.pair, cd.drive, DensityOperator<9>::pure(in), {s.dt, 200});
  r.state_fidelity = state_fidelity(traj.final_state(), ideal);
  if (s.compute_gate_fidelity) {
    const auto ch = twoq::cphase_channel(s.pair, cd.drive, s.dt);
    r.gate_fidelity = twoq::gate_fidelity_2q(ch, s.gamma, s.pair_samples);
  }
  out.files.push_back({"drive.csv", drive_csv(cd, s.pair.g)});
  out.files.push_back({"pulse.csv", pulse_csv(cd.coupling)});
  out.files.push_back({"trajectory.csv", trajectory_csv(traj, ideal, pair_level_names())});
  finish(out);
  return out;
}

}  // namespace detail

/// Executes a validated scenario; nothing touches the filesystem.
inline ScenarioResult run_scenario(const Scenario& s) {
  switch (s.kind) {
    case Kind::pulse_synthesis: return detail::run_pulse_synthesis(s);
    case Kind::single_qubit_gate: return detail::run_single_qubit(s);
    case Kind::robustness_sweep: return detail::run_sweep(s);
    case Kind::two_qubit_cphase: return detail::run_two_qubit(s);
  }
  throw ValidationError("unknown scenario kind");
}

}  // namespace geomgate::scenario
