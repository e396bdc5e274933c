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

// Cyclic evolution paths (chi, beta, f) on the Bloch sphere, inverse
// engineering of the resonant drive (Omega, phi) that realizes them, and the
// phase bookkeeping of the resulting geometric gates.
//
// The driven state is
//   |psi> = e^{-if/2} [cos(chi/2) e^{-i beta/2} |0> + sin(chi/2) e^{i beta/2} |1>]
// under H = (1/2) [[0, Omega e^{i phi}], [Omega e^{-i phi}, 0]], which holds
// exactly when
//   f'  = -beta' / cos(chi)
//   chi' = -Omega sin(beta + phi)
//   beta' = -Omega cot(chi) cos(beta + phi).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "geomgate/errors.hpp"
#include "geomgate/qcore.hpp"
#include "geomgate/sampled.hpp"
#include "geomgate/units.hpp"

namespace geomgate::geompath {

using units::kPi;

/// One smooth piece of a path on the dimensionless time s in [s_start, s_end].
/// f is a function of chi within the segment; beta follows from
/// beta' = -f' cos(chi) starting from the previous segment's end value plus
/// `beta_jump_at_start`.
struct PathSegment {
  double s_start;
  double s_end;
  std::function<double(double)> chi;       // s -> chi
  std::function<double(double)> chi_rate;  // s -> d chi / ds (analytic)
  std::function<double(double)> f;        // chi -> f
  std::function<double(double)> f_slope;  // chi -> d f / d chi
  double beta_jump_at_start = 0.0;
};

enum class PathFamily { x_rotation, z_rotation, custom };

inline std::string to_string(PathFamily family) {
  switch (family) {
    case PathFamily::x_rotation: return "x-rotation";
    case PathFamily::z_rotation: return "z-rotation";
    case PathFamily::custom: return "custom";
  }
  return "custom";
}

/// (chi, beta, f) at one point of a path.
struct PathPoint {
  double chi;
  double chi_rate;  // per unit s
  double beta;
  double f;
};

class EvolutionPath {
 public:
  EvolutionPath(std::vector<PathSegment> segments, double chi0, double beta0, double gamma,
                PathFamily family = PathFamily::custom, double eta = 0.0)
      : segments_(std::move(segments)), chi0_(chi0), beta0_(beta0), gamma_(gamma), family_(family),
        eta_(eta) {
    validate_and_accumulate();
  }

  const std::vector<PathSegment>& segments() const { return segments_; }
  double chi0() const { return chi0_; }
  double beta0() const { return beta0_; }
  double gamma() const { return gamma_; }
  double eta() const { return eta_; }
  PathFamily family() const { return family_; }
  bool built_in() const { return family_ != PathFamily::custom; }

  /// Index of the segment owning s; a shared edge belongs to the later one.
  std::size_t segment_index(double s) const {
    for (std::size_t j = 0; j + 1 < segments_.size(); ++j)
      if (s < segments_[j + 1].s_start) return j;
    return segments_.size() - 1;
  }

  /// Path point evaluated inside segment j (also valid at its edges, giving
  /// one-sided limits).
  PathPoint point_in(std::size_t j, double s) const {
    const auto& seg = segments_[j];
    const double chi = seg.chi(s);
    return {chi, seg.chi_rate(s), beta_start_[j] - beta_increment(seg, chi),
            seg.f(chi) + f_offset_[j]};
  }

  PathPoint point(double s) const { return point_in(segment_index(s), s); }

  /// d beta / ds inside segment j.
  double beta_rate_in(std::size_t j, double s) const {
    const auto& seg = segments_[j];
    const double chi = seg.chi(s);
    return -seg.f_slope(chi) * seg.chi_rate(s) * std::cos(chi);
  }

  /// Direction of chi travel in segment j (+1 or -1).
  double direction(std::size_t j) const { return direction_[j]; }

  /// beta at the start of segment j (after its jump).
  double beta_at_segment_start(std::size_t j) const { return beta_start_[j]; }

 private:
  static double beta_increment(const PathSegment& seg, double chi) {
    const double chi_a = seg.chi(seg.s_start);
    if (chi == chi_a) return 0.0;
    return boost::math::quadrature::gauss<double, 30>::integrate(
        [&](double c) { return seg.f_slope(c) * std::cos(c); }, chi_a, chi);
  }

  void validate_and_accumulate() {
    if (segments_.empty()) throw ValidationError("path needs at least one segment");
    if (std::abs(segments_.front().s_start) > 1e-12 || std::abs(segments_.back().s_end - 1.0) > 1e-12) {
      throw ValidationError("path segments must cover s in [0, 1]");
    }
    if (segments_.front().beta_jump_at_start != 0.0) {
      throw ValidationError("the first segment cannot start with a beta jump; fold it into beta0");
    }
    for (std::size_t j = 0; j < segments_.size(); ++j) {
      const auto& seg = segments_[j];
      if (!seg.chi || !seg.chi_rate || !seg.f || !seg.f_slope) {
        throw ValidationError("path segment is missing a shape function");
      }
      if (!(seg.s_end > seg.s_start)) throw ValidationError("path segments must have positive length");
      if (j > 0) {
        const auto& prev = segments_[j - 1];
        if (std::abs(prev.s_end - seg.s_start) > 1e-12) {
          throw ValidationError("path segments must be contiguous");
        }
        if (std::abs(prev.chi(prev.s_end) - seg.chi(seg.s_start)) > 1e-9) {
          throw ValidationError("chi must be continuous across segment boundaries");
        }
      }
    }
    if (std::abs(segments_.front().chi(0.0) - chi0_) > 1e-9) {
      throw ValidationError("chi0 does not match the first segment");
    }
    if (std::abs(segments_.back().chi(1.0) - chi0_) > 1e-9) {
      throw ValidationError("path is not cyclic: chi(1) != chi(0)");
    }

    beta_start_.assign(segments_.size(), 0.0);
    f_offset_.assign(segments_.size(), 0.0);
    direction_.assign(segments_.size(), 1.0);
    beta_start_[0] = beta0_;
    for (std::size_t j = 0; j < segments_.size(); ++j) {
      const auto& seg = segments_[j];
      const double travel = seg.chi(seg.s_end) - seg.chi(seg.s_start);
      if (travel != 0.0) {
        direction_[j] = travel > 0 ? 1.0 : -1.0;
      } else {
        direction_[j] = seg.chi_rate(0.5 * (seg.s_start + seg.s_end)) >= 0 ? 1.0 : -1.0;
      }
      if (j == 0) continue;
      const auto& prev = segments_[j - 1];
      const double chi_b = prev.chi(prev.s_end);
      const double beta_end = beta_start_[j - 1] - beta_increment(prev, chi_b);
      const double f_end = prev.f(chi_b) + f_offset_[j - 1];
      const double jump = seg.beta_jump_at_start;
      // State continuity across a beta jump at angle chi: delta f = -delta beta / cos chi.
      double f_jump = 0.0;
      if (jump != 0.0) {
        if (std::abs(std::cos(chi_b)) < 1e-12) {
          throw ValidationError("beta jump on the equator (cos chi = 0) cannot be continuous");
        }
        f_jump = -jump / std::cos(chi_b);
      }
      beta_start_[j] = beta_end + jump;
      f_offset_[j] = f_end + f_jump - seg.f(seg.chi(seg.s_start));
    }
  }

  std::vector<PathSegment> segments_;
  double chi0_;
  double beta0_;
  double gamma_;
  PathFamily family_;
  double eta_;
  std::vector<double> beta_start_;
  std::vector<double> f_offset_;
  std::vector<double> direction_;
};

/// Four-segment loop through the poles with f = cos(2 chi) / 5; beta jumps
/// by -gamma at s = 1/4 and +gamma at s = 3/4. Realizes exp(i gamma sigma_x).
inline EvolutionPath build_x_rotation_path(double gamma) {
  if (!(gamma > -kPi - 1e-12 && gamma <= kPi + 1e-12)) {
    throw ValidationError("rotation angle gamma must lie in (-pi, pi]");
  }
  auto up = [](double s) { return 0.5 * kPi * (1.0 + std::pow(std::sin(2.0 * kPi * s), 2)); };
  auto up_rate = [](double s) { return kPi * kPi * std::sin(4.0 * kPi * s); };
  auto down = [](double s) { return 0.5 * kPi * (1.0 - std::pow(std::sin(2.0 * kPi * s), 2)); };
  auto down_rate = [](double s) { return -kPi * kPi * std::sin(4.0 * kPi * s); };
  auto f = [](double chi) { return std::cos(2.0 * chi) / 5.0; };
  auto f_slope = [](double chi) { return -2.0 * std::sin(2.0 * chi) / 5.0; };

  std::vector<PathSegment> segs{
      {0.00, 0.25, up, up_rate, f, f_slope, 0.0},
      {0.25, 0.50, up, up_rate, f, f_slope, -gamma},
      {0.50, 0.75, down, down_rate, f, f_slope, 0.0},
      {0.75, 1.00, down, down_rate, f, f_slope, +gamma},
  };
  return EvolutionPath(std::move(segs), 0.5 * kPi, 0.0, gamma, PathFamily::x_rotation, 0.0);
}

/// Two-segment pole-to-pole loop chi = pi sin^2(pi s) with
/// f = eta [2 chi - sin(2 chi)]; beta jumps by -gamma at s = 1/2. Realizes
/// exp(i gamma sigma_z). eta = 0 is the conventional constant-phase scheme.
inline EvolutionPath build_z_rotation_path(double gamma, double eta) {
  if (!(gamma > -kPi - 1e-12 && gamma <= kPi + 1e-12)) {
    throw ValidationError("rotation angle gamma must lie in (-pi, pi]");
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be finite and >= 0");
  auto chi = [](double s) { return kPi * std::pow(std::sin(kPi * s), 2); };
  auto chi_rate = [](double s) { return kPi * kPi * std::sin(2.0 * kPi * s); };
  auto f = [eta](double c) { return eta * (2.0 * c - std::sin(2.0 * c)); };
  auto f_slope = [eta](double c) { return 4.0 * eta * std::pow(std::sin(c), 2); };
  std::vector<PathSegment> segs{
      {0.0, 0.5, chi, chi_rate, f, f_slope, 0.0},
      {0.5, 1.0, chi, chi_rate, f, f_slope, -gamma},
  };
  return EvolutionPath(std::move(segs), 0.0, 0.0, gamma, PathFamily::z_rotation, eta);
}

/// exp(i gamma n.sigma) with n = (sin chi0 cos beta0, sin chi0 sin beta0, cos chi0).
inline Matrix<2> target_gate(double chi0, double beta0, double gamma) {
  const Complex i(0.0, 1.0);
  const double c = std::cos(gamma), s = std::sin(gamma);
  Matrix<2> u;
  u << c + i * std::cos(chi0) * s, i * s * std::sin(chi0) * std::exp(-i * beta0),
      i * s * std::sin(chi0) * std::exp(i * beta0), c - i * std::cos(chi0) * s;
  return u;
}

/// |psi(0)> for (chi0, beta0), without the f phase.
inline Vector<2> initial_state(double chi0, double beta0) {
  const Complex i(0.0, 1.0);
  Vector<2> v;
  v << std::cos(0.5 * chi0) * std::exp(-0.5 * i * beta0), std::sin(0.5 * chi0) * std::exp(0.5 * i * beta0);
  return v;
}

/// Drive amplitude and phase sampled on a uniform time grid.
struct PulseSchedule {
  std::vector<double> times;  // ns, uniform from 0 to tau
  std::vector<double> omega;  // rad/ns
  std::vector<double> phi;    // rad, unwrapped within each segment
  double tau = 0.0;           // ns
  double omega_max = 0.0;     // declared amplitude cap, rad/ns
  // Interior segment edges (node indices) and left limits there; stored
  // samples at an edge are the right limits.
  std::vector<std::size_t> boundaries;
  std::vector<double> omega_left;
  std::vector<double> phi_left;

  std::size_t segment_count() const { return boundaries.size() + 1; }
  double dt() const { return tau / static_cast<double>(times.size() - 1); }

  double peak_amplitude() const {
    double peak = 0.0;
    for (double w : omega) peak = std::max(peak, std::abs(w));
    for (double w : omega_left) peak = std::max(peak, std::abs(w));
    return peak;
  }

  InterpolatedValue amplitude_at(double t) const {
    return interpolate_segmented(times, omega, boundaries, omega_left, t);
  }
  InterpolatedValue phase_at(double t) const {
    return interpolate_segmented(times, phi, boundaries, phi_left, t);
  }

  /// Complex envelope E = Omega e^{i phi}.
  Complex envelope(double t) const {
    const auto a = amplitude_at(t);
    return std::polar(a.value, phase_at(t).value);
  }

  /// dE/dt.
  Complex envelope_rate(double t) const {
    const auto a = amplitude_at(t);
    const auto p = phase_at(t);
    return Complex(a.slope, a.value * p.slope) * std::polar(1.0, p.value);
  }

  /// Checks sample consistency; the amplitude cap can be waived for
  /// deliberately mis-scaled copies.
  void validate(bool check_cap = true) const {
    if (times.size() < 4 || omega.size() != times.size() || phi.size() != times.size()) {
      throw ValidationError("pulse schedule sample arrays are inconsistent");
    }
    if (omega_left.size() != boundaries.size() || phi_left.size() != boundaries.size()) {
      throw ValidationError("pulse schedule boundary data is inconsistent");
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (!std::isfinite(times[k]) || !std::isfinite(omega[k]) || !std::isfinite(phi[k])) {
        throw ValidationError("pulse schedule has non-finite samples");
      }
    }
    if (check_cap && peak_amplitude() > omega_max + 1e-9) {
      throw ValidationError("pulse amplitude exceeds the declared maximum");
    }
  }
};

namespace detail {

/// Drive per unit dimensionless time at s inside segment j:
/// Omega = |chi'| sqrt(1 + (f'(chi) sin chi)^2) and
/// beta + phi = atan2(-chi', f'(chi) chi' sin chi), with the sign of chi'
/// fixed to the segment direction so phi stays continuous where chi' = 0.
struct DriveSample {
  double omega;
  double phi;
};

inline DriveSample drive_in(const EvolutionPath& path, std::size_t j, double s) {
  const auto& seg = path.segments()[j];
  const auto p = path.point_in(j, s);
  const double twist = seg.f_slope(p.chi) * std::sin(p.chi);
  const double sigma = path.direction(j);
  const double omega = std::abs(p.chi_rate) * std::sqrt(1.0 + twist * twist);
  const double phase_sum = std::atan2(-sigma, sigma * twist);
  return {omega, phase_sum - p.beta};
}

struct DimensionlessPulse {
  std::vector<double> s;
  std::vector<double> omega;
  std::vector<double> phi;
  std::vector<std::size_t> boundaries;
  std::vector<double> omega_left;
  std::vector<double> phi_left;
  double peak = 0.0;  // largest sampled omega
};

inline std::vector<std::size_t> boundary_nodes(const EvolutionPath& path, std::size_t intervals) {
  std::vector<std::size_t> out;
  const auto& segs = path.segments();
  for (std::size_t j = 1; j < segs.size(); ++j) {
    const double pos = segs[j].s_start * static_cast<double>(intervals);
    const double rounded = std::round(pos);
    if (std::abs(pos - rounded) > 1e-6) {
      throw ValidationError("segment boundary does not fall on the sample grid");
    }
    out.push_back(static_cast<std::size_t>(rounded));
  }
  return out;
}

inline DimensionlessPulse synthesize_dimensionless(const EvolutionPath& path, std::size_t samples) {
  const std::size_t nseg = path.segments().size();
  const std::size_t intervals = ((samples + nseg - 1) / nseg) * nseg;
  DimensionlessPulse out;
  out.boundaries = boundary_nodes(path, intervals);
  out.s.resize(intervals + 1);
  out.omega.resize(intervals + 1);
  out.phi.resize(intervals + 1);

  auto check = [](const DriveSample& d, double s) {
    if (!std::isfinite(d.omega) || !std::isfinite(d.phi)) {
      std::ostringstream msg;
      msg << "pulse synthesis produced a non-finite drive at s = " << s;
      throw NumericalError(msg.str());
    }
  };

  std::size_t best = 0;
  for (std::size_t k = 0; k <= intervals; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(intervals);
    const auto d = drive_in(path, path.segment_index(s), s);
    check(d, s);
    out.s[k] = s;
    out.omega[k] = d.omega;
    out.phi[k] = d.phi;
    if (d.omega > out.omega[best]) best = k;
  }
  for (std::size_t j = 0; j < out.boundaries.size(); ++j) {
    const double s = out.s[out.boundaries[j]];
    const auto d = drive_in(path, j, s);
    check(d, s);
    out.omega_left.push_back(d.omega);
    out.phi_left.push_back(d.phi);
    if (d.omega > out.omega[best]) best = out.boundaries[j];
  }

  out.peak = out.omega[best];
  return out;
}

inline PulseSchedule scale_to_duration(const DimensionlessPulse& d, double tau, double omega_cap) {
  PulseSchedule p;
  p.tau = tau;
  p.omega_max = omega_cap;
  p.boundaries = d.boundaries;
  p.times.resize(d.s.size());
  p.omega.resize(d.s.size());
  for (std::size_t k = 0; k < d.s.size(); ++k) {
    p.times[k] = d.s[k] * tau;
    p.omega[k] = d.omega[k] / tau;
  }
  p.times.back() = tau;
  p.phi = d.phi;
  for (double w : d.omega_left) p.omega_left.push_back(w / tau);
  p.phi_left = d.phi_left;
  return p;
}

}  // namespace detail

/// Inverse-engineers (Omega, phi) for a path and rescales time so the peak
/// amplitude equals omega_max. `samples` is the number of grid intervals
/// (rounded up to a multiple of the segment count).
inline PulseSchedule synthesize_pulse(const EvolutionPath& path, double omega_max,
                                      std::size_t samples = 20000) {
  if (!(omega_max > 0.0) || !std::isfinite(omega_max)) throw ValidationError("omega_max must be positive");
  if (samples < 1000) throw ValidationError("synthesis needs at least 1000 samples");
  const auto d = detail::synthesize_dimensionless(path, samples);
  if (!(d.peak > 0.0)) throw NumericalError("path has no motion; drive amplitude is identically zero");
  return detail::scale_to_duration(d, d.peak / omega_max, omega_max);
}

/// Same inversion with a prescribed duration; omega_max of the result is the
/// realized peak amplitude.
inline PulseSchedule synthesize_pulse_with_duration(const EvolutionPath& path, double tau,
                                                    std::size_t samples = 20000) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("duration must be positive");
  if (samples < 1000) throw ValidationError("synthesis needs at least 1000 samples");
  const auto d = detail::synthesize_dimensionless(path, samples);
  return detail::scale_to_duration(d, tau, d.peak / tau);
}

/// Two-level drive Hamiltonian of a schedule.
inline auto two_level_hamiltonian(const PulseSchedule& schedule) {
  return [&schedule](double t) {
    const Complex e = schedule.envelope(t);
    Matrix<2> h;
    h << 0.0, 0.5 * e, 0.5 * std::conj(e), 0.0;
    return h;
  };
}

/// Grid over [0, tau] with nodes on every segment edge.
inline TimeGrid schedule_grid(const PulseSchedule& schedule, double max_dt) {
  return TimeGrid::covering(0.0, schedule.tau, max_dt, schedule.segment_count());
}

/// Ideal two-level propagator of a schedule.
inline Propagator<2> ideal_propagator(const PulseSchedule& schedule, double max_dt = 0.01) {
  return propagate_schrodinger(two_level_hamiltonian(schedule), schedule_grid(schedule, max_dt));
}

/// Finite-difference residuals of the three path constraints on the sample
/// grid. The f relation is checked as f' cos chi + beta' (finite at the
/// equator). Points next to chi in {0, pi} are excluded from the beta
/// relation, where cot chi is singular.
struct ConstraintResiduals {
  std::vector<double> times;
  std::vector<double> f_relation;
  std::vector<double> chi_relation;
  std::vector<double> beta_relation;
  std::vector<bool> excluded;

  double max_abs() const {
    double m = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      m = std::max({m, std::abs(f_relation[k]), std::abs(chi_relation[k])});
      if (!excluded[k]) m = std::max(m, std::abs(beta_relation[k]));
    }
    return m;
  }
};

inline ConstraintResiduals constraint_residuals(const PulseSchedule& schedule, const EvolutionPath& path) {
  schedule.validate(false);
  const std::size_t intervals = schedule.times.size() - 1;
  if (schedule.segment_count() != path.segments().size() ||
      detail::boundary_nodes(path, intervals) != schedule.boundaries) {
    throw ValidationError("schedule grid does not match the path segmentation");
  }
  const double h = schedule.dt();
  const std::size_t n = intervals + 1;
  ConstraintResiduals r;
  r.times = schedule.times;
  r.f_relation.assign(n, 0.0);
  r.chi_relation.assign(n, 0.0);
  r.beta_relation.assign(n, 0.0);
  r.excluded.assign(n, false);

  std::vector<std::size_t> edges{0};
  edges.insert(edges.end(), schedule.boundaries.begin(), schedule.boundaries.end());
  edges.push_back(intervals);

  for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
    const std::size_t a = edges[j], b = edges[j + 1];
    std::vector<double> chi, beta, f;
    for (std::size_t k = a; k <= b; ++k) {
      const auto p = path.point_in(j, schedule.times[k] / schedule.tau);
      chi.push_back(p.chi);
      beta.push_back(p.beta);
      f.push_back(p.f);
    }
    const std::size_t m = b - a;
    auto deriv = [&](const std::vector<double>& x, std::size_t l) {
      if (l == 0) return (-3.0 * x[0] + 4.0 * x[1] - x[2]) / (2.0 * h);
      if (l == m) return (3.0 * x[m] - 4.0 * x[m - 1] + x[m - 2]) / (2.0 * h);
      return (x[l + 1] - x[l - 1]) / (2.0 * h);
    };
    // The edge node b belongs to the next segment unless it is the last one.
    const std::size_t last = (j + 2 == edges.size()) ? m : m - 1;
    for (std::size_t l = 0; l <= last; ++l) {
      const std::size_t k = a + l;
      const double chi_dot = deriv(chi, l), beta_dot = deriv(beta, l), f_dot = deriv(f, l);
      const double w = schedule.omega[k];
      const double sum = beta[l] + schedule.phi[k];
      r.f_relation[k] = f_dot * std::cos(chi[l]) + beta_dot;
      r.chi_relation[k] = chi_dot + w * std::sin(sum);
      const double sn = std::sin(chi[l]);
      r.beta_relation[k] = sn == 0.0 ? 0.0 : beta_dot + w * std::cos(chi[l]) / sn * std::cos(sum);
    }
    // Exclude neighbourhoods of the poles for the beta relation.
    for (std::size_t l = 0; l <= m; ++l) {
      const double sn = std::abs(std::sin(chi[l]));
      const bool local_min = (l == 0 || sn <= std::abs(std::sin(chi[l - 1]))) &&
                             (l == m || sn <= std::abs(std::sin(chi[l + 1])));
      if (local_min && sn < 1e-3) {
        for (std::size_t q = (l == 0 ? 0 : l - 1); q <= std::min(l + 1, m); ++q) r.excluded[a + q] = true;
      }
    }
  }
  return r;
}

/// Dynamical phase (1/2) \oint beta' sin^2 chi / cos chi dt plus the jump
/// terms (1/2) delta beta sin^2 chi / cos chi. Invariant under time rescaling,
/// so it is integrated on the dimensionless time.
inline double dynamical_phase(const EvolutionPath& path) {
  using boost::math::quadrature::gauss_kronrod;
  const auto& segs = path.segments();
  double total = 0.0;
  for (std::size_t j = 0; j < segs.size(); ++j) {
    auto integrand = [&](double s) {
      const double chi = segs[j].chi(s);
      const double c = std::cos(chi);
      const double beta_dot = path.beta_rate_in(j, s);
      double ratio;
      if (std::abs(c) > 1e-9) {
        ratio = beta_dot / c;
      } else {
        // beta' = -f' chi' cos chi vanishes with cos chi; take the limit.
        ratio = -segs[j].f_slope(chi) * segs[j].chi_rate(s);
        if (!std::isfinite(ratio)) throw NumericalError("dynamical phase integrand diverges");
      }
      return 0.5 * ratio * std::sin(chi) * std::sin(chi);
    };
    double err = 0.0;
    total += gauss_kronrod<double, 31>::integrate(integrand, segs[j].s_start, segs[j].s_end, 15, 1e-13, &err);
    if (!std::isfinite(total)) throw NumericalError("dynamical phase quadrature failed");
    if (j > 0 && segs[j].beta_jump_at_start != 0.0) {
      const double chi = segs[j].chi(segs[j].s_start);
      const double sn2 = std::sin(chi) * std::sin(chi);
      if (sn2 == 0.0) continue;
      if (std::abs(std::cos(chi)) < 1e-12) {
        throw NumericalError("dynamical phase diverges: beta jump on the equator");
      }
      total += 0.5 * segs[j].beta_jump_at_start * sn2 / std::cos(chi);
    }
  }
  return total;
}

/// The line integral (1/2) \oint beta' cos chi dt with jump terms
/// (1/2) delta beta cos chi, taken literally. For paths whose beta does not
/// close (single jump) it differs from the gauge-closed geometric phase.
inline double geometric_line_integral(const EvolutionPath& path) {
  using boost::math::quadrature::gauss_kronrod;
  const auto& segs = path.segments();
  double total = 0.0;
  for (std::size_t j = 0; j < segs.size(); ++j) {
    auto integrand = [&](double s) { return 0.5 * path.beta_rate_in(j, s) * std::cos(segs[j].chi(s)); };
    total += gauss_kronrod<double, 31>::integrate(integrand, segs[j].s_start, segs[j].s_end, 15, 1e-13);
    if (j > 0) total += 0.5 * segs[j].beta_jump_at_start * std::cos(segs[j].chi(segs[j].s_start));
  }
  return total;
}

struct PhaseDecomposition {
  double total;                    // arg <psi(0)|U(tau)|psi(0)>
  double dynamical;                // gamma_D
  double geometric;                // total - gamma_D
  double literal_line_integral;    // see geometric_line_integral
};

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

/// Splits the cyclic phase of |psi(0)> into dynamical and geometric parts.
/// The total comes from the ideal propagator, so it is gauge-closed even
/// when beta(tau) != beta(0).
inline PhaseDecomposition phase_decomposition(const EvolutionPath& path, const PulseSchedule& schedule,
                                              double max_dt = 0.01) {
  const auto u = ideal_propagator(schedule, max_dt);
  const Vector<2> psi0 = initial_state(path.chi0(), path.beta0());
  const Complex overlap = psi0.dot(u.matrix * psi0);
  if (std::abs(std::abs(overlap) - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "non-cyclic evolution: |<psi(0)|U|psi(0)>| = " << std::abs(overlap);
    throw NumericalError(msg.str());
  }
  PhaseDecomposition out{};
  out.total = std::arg(overlap);
  if (path.built_in()) {
    out.total = path.gamma() + wrap_angle(out.total - path.gamma());
    if (std::abs(out.total - path.gamma()) > 1e-6) {
      std::ostringstream msg;
      msg << "accumulated phase " << out.total << " differs from gamma = " << path.gamma();
      throw NumericalError(msg.str());
    }
  }
  out.dynamical = dynamical_phase(path);
  out.geometric = out.total - out.dynamical;
  out.literal_line_integral = geometric_line_integral(path);
  return out;
}

}  // namespace geomgate::geompath
