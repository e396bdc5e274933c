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

#include <catch_amalgamated.hpp>

#include <cmath>

#include <boost/math/special_functions/bessel.hpp>

#include "geomgate/bessel.hpp"
#include "geomgate/geompath.hpp"
#include "geomgate/twoq.hpp"

using namespace geomgate;
using units::kPi;
using namespace geomgate::twoq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const CPhaseDrive& reference_drive() {
  static const auto d = build_cphase_drive(kPi / 2, 250.0, reference_two_transmon());
  return d;
}

}  // namespace

TEST_CASE("J1 agrees with the Boost reference") {
  for (double x = -20.0; x <= 20.0; x += 0.173) {
    CHECK_THAT(bessel::bessel_j1(x), WithinAbs(boost::math::cyl_bessel_j(1, x), 1e-14));
  }
  for (double x : {0.0, 1e-8, 3.999, 4.0, 4.001, 19.999, 20.0})
    CHECK_THAT(bessel::bessel_j1(x), WithinAbs(boost::math::cyl_bessel_j(1, x), 1e-14));
  CHECK_THROWS_AS(bessel::bessel_j1(20.5), ValidationError);
  CHECK_THAT(bessel::j1_branch_max(), WithinAbs(0.58186522, 1e-8));
}

TEST_CASE("J1 inversion round-trips on the monotone branch") {
  for (int k = 0; k < 100; ++k) {
    const double y = bessel::j1_branch_max() * k / 99.0;
    const double lambda = bessel::invert_j1(y);
    CHECK(lambda >= 0.0);
    CHECK(lambda <= bessel::kJ1BranchEnd);
    CHECK(std::abs(bessel::bessel_j1(lambda) - y) <= 1e-10);
  }
  CHECK_THROWS_AS(bessel::invert_j1(0.59), ValidationError);
  CHECK_THROWS_AS(bessel::invert_j1(-0.01), ValidationError);
}

TEST_CASE("effective Hamiltonian on {|11>, |20>}") {
  const auto h = effective_hamiltonian(0.4, 0.3);
  CHECK(std::abs(h(0, 1) - 0.2 * std::exp(Complex(0.0, 0.3))) < 1e-15);
  CHECK(std::abs(h(1, 0) - 0.2 * std::exp(Complex(0.0, -0.3))) < 1e-15);
  CHECK(h(0, 0) == Complex(0.0));
  CHECK_THROWS_AS(effective_hamiltonian(-0.1, 0.0), ValidationError);
  CHECK_THAT(effective_coupling(units::two_pi_mhz(5.0), 1.0),
             WithinAbs(2.0 * std::sqrt(2.0) * units::two_pi_mhz(5.0) * boost::math::cyl_bessel_j(1, 1.0), 1e-15));
}

TEST_CASE("full Hamiltonian has only the listed couplings") {
  const auto p = reference_two_transmon();
  const auto& d = reference_drive().drive;
  const double t = 61.3;
  const auto h = full_hamiltonian(p, d, t);
  CHECK((h - h.adjoint()).norm() < 1e-15);
  const Complex i(0.0, 1.0);
  const Complex mod = std::exp(-i * d.lambda_at(t) * std::sin(p.nu * t + d.phase_at(t)));
  const double r2 = std::sqrt(2.0);
  CHECK(std::abs(h(level_index(1, 0), level_index(0, 1)) - p.g * std::exp(i * p.delta * t) * mod) < 1e-13);
  CHECK(std::abs(h(level_index(1, 1), level_index(0, 2)) - r2 * p.g * std::exp(i * (p.delta + p.alpha_b) * t) * mod) < 1e-13);
  CHECK(std::abs(h(level_index(2, 0), level_index(1, 1)) - r2 * p.g * std::exp(i * (p.delta - p.alpha_a) * t) * mod) < 1e-13);
  int nonzero = 0;
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) nonzero += h(r, c) != Complex(0.0);
  CHECK(nonzero == 6);
  CHECK_THAT(std::abs(h(level_index(2, 0), level_index(1, 1))), WithinAbs(r2 * p.g, 1e-15));
}

TEST_CASE("parameter validation and diagnostics") {
  auto p = reference_two_transmon();
  CHECK_NOTHROW(p.validate());
  CHECK(p.warnings().empty());
  p.nu = units::two_pi_mhz(170.0);
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.allow_detuned_modulation = true;
  CHECK_NOTHROW(p.validate());
  auto strong = reference_two_transmon();
  strong.g = units::two_pi_mhz(40.0);
  CHECK(strong.warnings().size() == 1);
  auto bad = reference_two_transmon();
  bad.gamma2 = -1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("control-phase drive follows the fixed-duration Z loop") {
  const auto& d = reference_drive();
  CHECK_THAT(d.coupling.tau, WithinAbs(250.0, 1e-12));
  CHECK_THAT(units::to_two_pi_mhz(d.peak_coupling), WithinAbs(8.05, 0.02));
  const double g = reference_two_transmon().g;
  for (std::size_t k = 0; k < d.drive.times.size(); k += 613) {
    CHECK(std::abs(effective_coupling(g, d.drive.lambda[k]) - d.coupling.omega[k]) <= 1e-10);
    CHECK(d.drive.phi2[k] == d.coupling.phi[k]);
  }
  CHECK_THROWS_AS(build_cphase_drive(kPi / 2, 100.0, reference_two_transmon()), ValidationError);
}

TEST_CASE("effective model driven through lambda realizes the control phase") {
  const auto& d = reference_drive();
  const double g = reference_two_transmon().g;
  auto h = [&](double t) { return effective_hamiltonian(effective_coupling(g, d.drive.lambda_at(t)), d.drive.phase_at(t)); };
  const auto u = propagate_schrodinger(h, drive_grid(d.drive, 0.01)).matrix;
  CHECK(std::abs(u(0, 0) - std::exp(Complex(0.0, kPi / 2))) < 1e-7);
  CHECK(std::abs(u(0, 1)) < 1e-7);
}

TEST_CASE("full closed-system propagator approximates the control phase") {
  const auto u = full_propagator(reference_two_transmon(), reference_drive().drive);
  CHECK(u.unitarity_defect() < 1e-8);
  CHECK(std::abs(u.matrix(0, 0) - Complex(1.0)) < 1e-12);  // |00> is uncoupled
  const double rel = std::arg(u.matrix(level_index(1, 1), level_index(1, 1)));
  CHECK_THAT(rel, WithinAbs(kPi / 2, 0.1));
  CHECK(std::norm(u.matrix(level_index(2, 0), level_index(1, 1))) < 0.02);
}

TEST_CASE("fidelity sampling layouts") {
  CHECK(fidelity_angles(10001, SampleLayout::grid_plus_corner).size() == 10001);
  CHECK(fidelity_angles(10201, SampleLayout::inclusive_grid).size() == 10201);
  CHECK_THROWS_AS(fidelity_angles(3, SampleLayout::grid_plus_corner), ValidationError);

  // Identity channel vs the phase target: |1 - |c11|^2 (1 - e^{i g})|^2 averaged.
  const double gp = kPi / 2;
  const auto id = QuantumChannel<9>::identity(9, computational_levels());
  const auto angles = fidelity_angles(10001, SampleLayout::grid_plus_corner);
  double expect = 0.0;
  for (const auto& [a, b] : angles) {
    const double p11 = std::pow(std::sin(a) * std::sin(b), 2);
    expect += std::norm(1.0 - p11 * (1.0 - std::exp(Complex(0.0, gp))));
  }
  expect /= static_cast<double>(angles.size());
  CHECK_THAT(gate_fidelity_2q(id, gp), WithinAbs(expect, 1e-12));
  CHECK_THAT(gate_fidelity_2q(id, 0.0), WithinAbs(1.0, 1e-14));
}
