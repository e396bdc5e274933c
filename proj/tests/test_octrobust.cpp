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

#include "geomgate/octrobust.hpp"
#include "geomgate/transmon1q.hpp"

using namespace geomgate;
using units::kPi;
using namespace geomgate::octrobust;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kOmegaMax = units::two_pi_mhz(16.0);

// |int_0^pi e^{-i eta (2c - sin 2c)} sin^2 c dc|^2 by composite Simpson.
double simpson_overlap(double eta) {
  const int n = 20000;
  const double h = kPi / n;
  Complex acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double c = k * h;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    acc += w * std::exp(Complex(0.0, -eta * (2.0 * c - std::sin(2.0 * c)))) * std::pow(std::sin(c), 2);
  }
  return std::norm(acc * h / 3.0);
}

}  // namespace

TEST_CASE("systematic error scales amplitudes only") {
  const auto s = geompath::synthesize_pulse(geompath::build_z_rotation_path(-kPi / 8, 0.2), kOmegaMax);
  const auto same = apply_error(s, {0.0});
  CHECK(same.omega == s.omega);
  const auto hot = apply_error(s, {0.3125});
  CHECK_THAT(units::to_two_pi_mhz(hot.peak_amplitude()), WithinAbs(21.0, 1e-9));
  CHECK(hot.phi == s.phi);
  CHECK(hot.tau == s.tau);
  const auto twice = apply_error(apply_error(s, {0.1}), {0.2});
  for (std::size_t k = 0; k < s.omega.size(); k += 997) CHECK_THAT(twice.omega[k], WithinRel(s.omega[k] * 1.32, 1e-14));
  CHECK_THROWS_AS(apply_error(s, {0.6}), ValidationError);
}

TEST_CASE("second-order term closed form") {
  CHECK(o2_analytic(1.0, 0.3) == 0.0);
  CHECK(o2_analytic(2.0, 0.3) == 0.0);
  CHECK_THAT(o2_analytic(0.0, 0.1), WithinAbs(-0.024674011, 1e-9));
  CHECK_THAT(o2_analytic(0.2, 0.1), WithinAbs(-0.021596, 1e-5));
  for (double eta : {0.0, 0.3, 1.5}) CHECK(o2_analytic(eta, 0.07) == o2_analytic(eta, -0.07));
  CHECK_THROWS_AS(o2_analytic(-0.1, 0.1), ValidationError);
}

TEST_CASE("second-order term by quadrature") {
  for (double eta : {0.0, 0.2, 0.5, 1.0, 1.5, 2.0}) {
    const double q = o2_numeric(eta, 0.1);
    CHECK(std::abs(q - o2_analytic(eta, 0.1)) <= 1e-6 * std::abs(o2_analytic(eta, 0.1)) + 1e-10);
    CHECK_THAT(q, WithinAbs(-0.01 * simpson_overlap(eta), 1e-12));
  }
  CHECK(std::abs(o2_numeric(1.0, 0.1)) <= 1e-10);
}

TEST_CASE("perturbed overlap against the perturbative expansion") {
  for (double eta : {0.0, 0.2, 1.0}) {
    const auto path = geompath::build_z_rotation_path(-kPi / 8, eta);
    const auto sched = geompath::synthesize_pulse(path, kOmegaMax);
    CHECK_THAT(perturbed_overlap(path, sched, 0.0), WithinAbs(1.0, 1e-10));
    CHECK(std::abs(perturbed_overlap(path, sched, 0.01) - (1.0 + o2_analytic(eta, 0.01))) <= 1e-6);
    CHECK(std::abs(0.01 * first_order_slope(path, sched)) <= 1e-8);
    const double p = perturbed_overlap(path, sched, 0.4);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
  // eta = 0: the half loop is a plain rotation by pi (1 + eps).
  const auto flat = geompath::build_z_rotation_path(-kPi / 8, 0.0);
  const auto flat_s = geompath::synthesize_pulse(flat, kOmegaMax);
  CHECK_THAT(perturbed_overlap(flat, flat_s, 0.05), WithinAbs(std::pow(std::cos(kPi * 0.05 / 2), 2), 1e-9));
  const auto opt = geompath::build_z_rotation_path(-kPi / 8, 1.0);
  CHECK(perturbed_overlap(opt, geompath::synthesize_pulse(opt, kOmegaMax), 0.05) >= 1.0 - 1e-4);
  const auto x = geompath::build_x_rotation_path(1.0);
  CHECK_THROWS_AS(perturbed_overlap(x, geompath::synthesize_pulse(x, kOmegaMax), 0.01), ValidationError);
}

TEST_CASE("sweep grids validate") {
  CHECK_THROWS_AS((SweepGrid{{}, {0.0}}.validate()), ValidationError);
  CHECK_THROWS_AS((SweepGrid{{0.1, -0.1}, {0.0}}.validate()), ValidationError);
  CHECK_THROWS_AS((SweepGrid{{0.1}, {-1e-6}}.validate()), ValidationError);
  CHECK_THROWS_AS((SweepGrid{{0.7}, {0.0}}.validate()), ValidationError);
  const auto g = default_sweep_grid(kOmegaMax);
  CHECK(g.epsilon_values.size() == 41);
  CHECK(g.gamma_values.size() == 21);
  CHECK_THAT(g.epsilon_values.front(), WithinAbs(-0.3125, 1e-15));
  CHECK(g.gamma_values.front() == 0.0);
}

TEST_CASE("robustness sweep matches standalone runs and orders eta") {
  GateSpec flat;
  flat.eta = 0.0;
  GateSpec opt;
  opt.eta = 1.0;
  const SweepGrid edge{{-0.3125, 0.3125}, {0.0}};
  const auto a = robustness_sweep(flat, edge);
  const auto b = robustness_sweep(opt, edge);
  CHECK_THAT(a.tau, WithinAbs(98.17, 0.05));
  CHECK_THAT(b.tau, WithinAbs(404.8, 0.5));
  for (int i = 0; i < 2; ++i) CHECK(b.fidelity[i][0] > a.fidelity[i][0]);

  const SweepGrid one{{0.0}, {0.0}};
  const auto single = robustness_sweep(flat, one);
  REQUIRE(single.fidelity.size() == 1);
  REQUIRE(single.fidelity[0].size() == 1);
  CHECK(single.fidelity[0][0] >= 0.9999);

  const auto path = flat.path();
  const auto sched = geompath::synthesize_pulse(path, flat.omega_max, flat.samples);
  const auto channel = transmon1q::gate_channel(sched, {flat.alpha, 0.0, 0.0, flat.omega_max}, flat.drag, flat.max_dt);
  CHECK(single.fidelity[0][0] ==
        transmon1q::gate_fidelity_1q(channel, geompath::target_gate(path.chi0(), path.beta0(), path.gamma())));
}

TEST_CASE("sweep assembly does not depend on worker count") {
  GateSpec spec;
  spec.eta = 0.2;
  const SweepGrid g{{-0.1, 0.0, 0.2}, {0.0, units::two_pi_khz(5.0)}};
  setenv("GEOMGATE_THREADS", "1", 1);
  const auto serial = robustness_sweep(spec, g);
  setenv("GEOMGATE_THREADS", "3", 1);
  const auto threaded = robustness_sweep(spec, g);
  unsetenv("GEOMGATE_THREADS");
  CHECK(serial.fidelity == threaded.fidelity);
  CHECK(serial.fidelity[0][1] < serial.fidelity[0][0]);
}
