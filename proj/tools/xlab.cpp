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

// xlab: run scenarios, reproduce figures, synthesize pulses, run sweeps.
// Exit codes: 0 ok, 2 invalid input, 3 numerical failure, 4 reproduction
// outside tolerance.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "geomgate/errors.hpp"
#include "geomgate/geompath.hpp"
#include "geomgate/scenario.hpp"
#include "geomgate/units.hpp"
#include "reproduce.hpp"

namespace {

namespace fs = std::filesystem;
namespace sc = geomgate::scenario;

void print_report(const sc::FidelityReport& r) {
  std::printf("kind            %s\n", r.kind.c_str());
  std::printf("tau             %.6f ns\n", r.tau_ns);
  std::printf("peak amplitude  %.6f x 2pi MHz\n", geomgate::units::to_two_pi_mhz(r.peak_amplitude_rad_per_ns));
  if (r.phases)
    std::printf("phase           total %.9f  dynamical %.3e  geometric %.9f rad\n", r.phases->total,
                r.phases->dynamical, r.phases->geometric);
  if (r.state_fidelity) std::printf("state fidelity  %.6f\n", *r.state_fidelity);
  if (r.gate_fidelity) std::printf("gate fidelity   %.6f\n", *r.gate_fidelity);
  for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

int run_config(const std::string& file, const std::string& out_override, bool sweep_only) {
  auto scenario = sc::load_scenario(file);
  if (sweep_only && scenario.kind != sc::Kind::robustness_sweep)
    throw geomgate::ValidationError("config field 'kind': sweep expects robustness-sweep");
  const fs::path out = out_override.empty() ? fs::path(scenario.output) : fs::path(out_override);
  const auto result = sc::run_scenario(scenario);
  xlab::write_files(out, result.files);
  print_report(result.report);
  std::printf("wrote %zu files to %s\n", result.files.size(), out.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xlab - geometric gate synthesis and simulation"};
  app.require_subcommand(1);

  std::string config, out_dir;
  auto* run = app.add_subcommand("run", "Execute a scenario config (JSON)");
  run->add_option("config", config, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides the config)");

  auto* sweep = app.add_subcommand("sweep", "Execute a robustness-sweep config");
  sweep->add_option("config", config, "Scenario file")->required();
  sweep->add_option("--out", out_dir, "Output directory (overrides the config)");

  std::string figure;
  std::size_t eps_points = 41, gamma_points = 21;
  auto* repro = app.add_subcommand("reproduce", "Regenerate a figure's data and compare with published values");
  repro->add_option("figure", figure, "fig2 | fig3a | fig3bc | fig4")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3a", "fig3bc", "fig4"}));
  repro->add_option("--out", out_dir, "Output directory (default out/<figure>)");
  repro->add_option("--eps-points", eps_points, "Epsilon grid points for fig3 sweeps")->check(CLI::Range(2, 1001));
  repro->add_option("--gamma-points", gamma_points, "Gamma grid points for fig3bc")->check(CLI::Range(1, 1001));

  std::string gate = "z";
  double gamma = 0.0, eta = 0.0, omega_max = 16.0;
  std::size_t samples = 20000;
  auto* synth = app.add_subcommand("synth", "Synthesize a pulse and print its duration and phases");
  synth->add_option("--gate", gate, "x or z")->check(CLI::IsMember({"x", "z"}));
  synth->add_option("--gamma", gamma, "Geometric phase gamma (rad)")->required();
  auto* eta_opt = synth->add_option("--eta", eta, "Gauge parameter eta of the z path (>= 0)");
  synth->add_option("--omega-max", omega_max, "Amplitude cap (x 2pi MHz)");
  synth->add_option("--samples", samples, "Pulse samples");
  synth->add_option("--out", out_dir, "Output directory (default out/synth)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) return run_config(config, out_dir, false);
    if (*sweep) return run_config(config, out_dir, true);
    if (*synth) {
      if (gate == "x" && eta_opt->count() > 0) throw geomgate::ValidationError("--eta applies only to --gate z");
      sc::json cfg = {{"kind", "pulse-synthesis"},
                      {"gate", {{"family", gate == "x" ? "x-rotation" : "z-rotation"}, {"gamma", gamma}}},
                      {"device", {{"units", "two_pi_mhz"}, {"omega_max", omega_max}}},
                      {"grid", {{"samples", samples}}}};
      if (gate == "z") cfg["gate"]["eta"] = eta;
      const auto result = sc::run_scenario(sc::parse_scenario(cfg));
      const fs::path out = out_dir.empty() ? fs::path("out/synth") : fs::path(out_dir);
      xlab::write_files(out, result.files);
      print_report(result.report);
      return 0;
    }
    const fs::path out = out_dir.empty() ? fs::path("out") / figure : fs::path(out_dir);
    xlab::Summary summary;
    if (figure == "fig2") summary = xlab::reproduce_fig2(out);
    if (figure == "fig3a") summary = xlab::reproduce_fig3a(out, eps_points);
    if (figure == "fig3bc") summary = xlab::reproduce_fig3bc(out, eps_points, gamma_points);
    if (figure == "fig4") summary = xlab::reproduce_fig4(out);
    std::fputs(summary.table().c_str(), stdout);
    return summary.all_pass() ? 0 : 4;
  } catch (const geomgate::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const geomgate::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failure: %s\n", e.what());
    return 3;
  }
}
