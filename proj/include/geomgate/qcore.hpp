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

// Dense complex linear algebra for small Hilbert spaces (dim <= 9):
// fixed-step RK4 propagation of the Schroedinger equation, a Lindblad
// master-equation integrator, and quantum channels assembled from evolved
// operator bases. hbar = 1; energies and rates in rad/ns.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geomgate/errors.hpp"
#include "geomgate/parallel.hpp"

namespace geomgate {

using Complex = std::complex<double>;

template <int N>
using Matrix = Eigen::Matrix<Complex, N, N>;

template <int N>
using Vector = Eigen::Matrix<Complex, N, 1>;

inline constexpr int kMaxDim = 9;

namespace detail {

template <class M>
bool all_finite(const M& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

template <class M>
double max_abs(const M& m) {
  double out = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) out = std::max(out, std::abs(m.data()[i]));
  return out;
}

template <int N>
double hermiticity_defect(const Matrix<N>& m) {
  return max_abs(Matrix<N>(m - m.adjoint()));
}

template <int N>
void check_hamiltonian(const Matrix<N>& h, double t) {
  if (h.rows() != h.cols() || h.rows() < 1 || h.rows() > kMaxDim) {
    throw ValidationError("hamiltonian must be square with dimension in [1, 9]");
  }
  if (!all_finite(h)) {
    std::ostringstream msg;
    msg << "hamiltonian has non-finite entries at t = " << t << " ns";
    throw ValidationError(msg.str());
  }
  if (hermiticity_defect<N>(h) > 1e-10) {
    std::ostringstream msg;
    msg << "hamiltonian is not Hermitian at t = " << t << " ns (asymmetry "
        << hermiticity_defect<N>(h) << ")";
    throw ValidationError(msg.str());
  }
}

}  // namespace detail

/// Dimension (compile-time, possibly Eigen::Dynamic) of the matrices returned
/// by a Hamiltonian callable.
template <class HamiltonianFn>
inline constexpr int hamiltonian_dim_v =
    std::remove_cvref_t<std::invoke_result_t<HamiltonianFn, double>>::RowsAtCompileTime;

/// Uniform time grid [t_start, t_end] split into `steps` intervals.
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, std::size_t steps)
      : t_start_(t_start), t_end_(t_end), steps_(steps) {
    if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start)) {
      throw ValidationError("time grid requires finite t_end > t_start");
    }
    if (steps == 0) throw ValidationError("time grid requires at least one step");
  }

  /// Smallest grid whose step does not exceed max_dt and whose step count is
  /// a multiple of `multiple` (used to put nodes on pulse-segment edges).
  static TimeGrid covering(double t_start, double t_end, double max_dt, std::size_t multiple = 1) {
    if (!(max_dt > 0.0)) throw ValidationError("time step must be positive");
    if (multiple == 0) multiple = 1;
    auto steps = static_cast<std::size_t>(std::ceil((t_end - t_start) / max_dt - 1e-9));
    steps = std::max<std::size_t>(steps, 1);
    steps = ((steps + multiple - 1) / multiple) * multiple;
    return TimeGrid(t_start, t_end, steps);
  }

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  std::size_t steps() const { return steps_; }
  double dt() const { return (t_end_ - t_start_) / static_cast<double>(steps_); }
  double time(std::size_t k) const {
    if (k == steps_) return t_end_;
    return t_start_ + (t_end_ - t_start_) * static_cast<double>(k) / static_cast<double>(steps_);
  }

 private:
  double t_start_;
  double t_end_;
  std::size_t steps_;
};

/// Closed-system evolution operator U(t_end, t_start).
template <int N>
struct Propagator {
  Matrix<N> matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }

  /// max |U^dagger U - I|.
  double unitarity_defect() const {
    Matrix<N> id = Matrix<N>::Identity(matrix.rows(), matrix.cols());
    return detail::max_abs(Matrix<N>(matrix.adjoint() * matrix - id));
  }
};

/// Validated density matrix: Hermitian, unit trace, numerically positive.
template <int N>
class DensityOperator {
 public:
  explicit DensityOperator(Matrix<N> m) : m_(std::move(m)) { validate(); }

  static DensityOperator pure(const Vector<N>& psi) {
    const double norm = psi.norm();
    if (std::abs(norm - 1.0) > 1e-8) throw ValidationError("pure state must be normalized");
    return DensityOperator(Matrix<N>(psi * psi.adjoint()));
  }

  /// Wraps a matrix produced by the integrators without re-running the
  /// eigenvalue check on every trajectory sample.
  static DensityOperator unchecked(Matrix<N> m) { return DensityOperator(std::move(m), Unchecked{}); }

  const Matrix<N>& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  double trace() const { return m_.trace().real(); }
  double population(int level) const { return m_(level, level).real(); }

 private:
  struct Unchecked {};
  DensityOperator(Matrix<N> m, Unchecked) : m_(std::move(m)) {}

  void validate() const {
    if (m_.rows() != m_.cols() || m_.rows() < 1 || m_.rows() > kMaxDim) {
      throw ValidationError("density operator must be square with dimension in [1, 9]");
    }
    if (!detail::all_finite(m_)) throw ValidationError("density operator has non-finite entries");
    if (detail::hermiticity_defect<N>(m_) > 1e-12) {
      throw ValidationError("density operator is not Hermitian");
    }
    if (std::abs(m_.trace() - Complex(1.0)) > 1e-10) {
      throw ValidationError("density operator trace differs from 1");
    }
    Matrix<N> herm = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix<N>> eig(herm, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-8) {
      throw ValidationError("density operator has a negative eigenvalue");
    }
  }

  Matrix<N> m_;
};

/// Dissipative channel A with rate Gamma (rad/ns), entering as Gamma L(A).
template <int N>
struct CollapseChannel {
  CollapseChannel(Matrix<N> op, double rate) : op(std::move(op)), rate(rate) {
    if (!std::isfinite(rate) || rate < 0.0) throw ValidationError("collapse rate must be >= 0");
    if (!detail::all_finite(this->op)) throw ValidationError("collapse operator is not finite");
  }

  Matrix<N> op;
  double rate;
};

/// Time-ordered propagator U(t_end, t_start) of i dU/dt = H(t) U, integrated
/// with classical fixed-step RK4.
template <class HamiltonianFn>
Propagator<hamiltonian_dim_v<HamiltonianFn>> propagate_schrodinger(HamiltonianFn&& hamiltonian,
                                                                   const TimeGrid& grid) {
  constexpr int N = hamiltonian_dim_v<HamiltonianFn>;
  const Complex minus_i(0.0, -1.0);
  const double h = grid.dt();

  Matrix<N> h_start = hamiltonian(grid.t_start());
  detail::check_hamiltonian<N>(h_start, grid.t_start());
  const auto dim = h_start.rows();
  Matrix<N> u = Matrix<N>::Identity(dim, dim);
  Matrix<N> k1, k2, k3, k4;

  for (std::size_t step = 0; step < grid.steps(); ++step) {
    const double t = grid.time(step);
    const double t_next = grid.time(step + 1);
    Matrix<N> h_mid = hamiltonian(0.5 * (t + t_next));
    Matrix<N> h_end = hamiltonian(t_next);
    detail::check_hamiltonian<N>(h_mid, 0.5 * (t + t_next));
    detail::check_hamiltonian<N>(h_end, t_next);
    if (h_mid.rows() != dim || h_end.rows() != dim) {
      throw ValidationError("hamiltonian dimension changed during propagation");
    }
    k1.noalias() = minus_i * (h_start * u);
    k2.noalias() = minus_i * (h_mid * (u + 0.5 * h * k1));
    k3.noalias() = minus_i * (h_mid * (u + 0.5 * h * k2));
    k4.noalias() = minus_i * (h_end * (u + h * k3));
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    h_start = std::move(h_end);
  }
  return Propagator<N>{std::move(u)};
}

/// Density-matrix samples of a Lindblad run, endpoints included.
template <int N>
struct LindbladTrajectory {
  std::vector<double> times;
  std::vector<DensityOperator<N>> states;

  const DensityOperator<N>& final_state() const { return states.back(); }
};

struct LindbladOptions {
  /// Record every `record_stride` steps; the final state is always recorded.
  std::size_t record_stride = 1;
};

namespace detail {

/// Right-hand side of drho/dt = i[rho, H] + sum_k Gamma_k L(A_k), written
/// with the effective non-Hermitian H_eff = H - (i/2) sum Gamma A^dag A.
/// Valid for Hermitian rho, which every evolved operator here is.
template <int N>
class LindbladRhs {
 public:
  LindbladRhs(std::span<const CollapseChannel<N>> channels, Eigen::Index dim) {
    decay_ = Matrix<N>::Zero(dim, dim);
    for (const auto& ch : channels) {
      if (ch.op.rows() != dim || ch.op.cols() != dim) {
        throw ValidationError("collapse operator dimension does not match the hamiltonian");
      }
      if (ch.rate == 0.0) continue;
      // Ladder and number operators are very sparse; A rho A^dag is
      // accumulated entry by entry.
      std::vector<Entry> entries;
      const Matrix<N> jump = std::sqrt(ch.rate) * ch.op;
      for (Eigen::Index c = 0; c < dim; ++c)
        for (Eigen::Index r = 0; r < dim; ++r)
          if (jump(r, c) != Complex(0.0)) entries.push_back({r, c, jump(r, c)});
      jumps_.push_back(std::move(entries));
      decay_ += 0.5 * ch.rate * (ch.op.adjoint() * ch.op);
    }
  }

  Matrix<N> effective(const Matrix<N>& h) const { return h - Complex(0.0, 1.0) * decay_; }

  void operator()(const Matrix<N>& h_eff, const Matrix<N>& rho, Matrix<N>& out) {
    scratch_.noalias() = h_eff * rho;
    out = Complex(0.0, -1.0) * scratch_;
    out += Complex(0.0, 1.0) * scratch_.adjoint();
    for (const auto& entries : jumps_)
      for (const auto& a : entries)
        for (const auto& b : entries) out(a.row, b.row) += a.value * rho(a.col, b.col) * std::conj(b.value);
  }

 private:
  struct Entry {
    Eigen::Index row, col;
    Complex value;
  };
  std::vector<std::vector<Entry>> jumps_;
  Matrix<N> decay_;
  Matrix<N> scratch_;
};

/// Evolves a batch of Hermitian operators in lock step so each Hamiltonian
/// evaluation is shared. `observer(step, states)` runs after every step.
template <int N, class HamiltonianFn, class Observer>
void lindblad_batch(HamiltonianFn& hamiltonian, std::span<const CollapseChannel<N>> channels,
                    std::vector<Matrix<N>>& states, const TimeGrid& grid, Observer&& observer) {
  if (states.empty()) return;
  Matrix<N> h_start = hamiltonian(grid.t_start());
  check_hamiltonian<N>(h_start, grid.t_start());
  const auto dim = h_start.rows();
  for (const auto& s : states) {
    if (s.rows() != dim || s.cols() != dim) {
      throw ValidationError("initial state dimension does not match the hamiltonian");
    }
  }
  LindbladRhs<N> rhs(channels, dim);
  std::vector<Complex> initial_trace;
  for (const auto& s : states) initial_trace.push_back(s.trace());

  const double h = grid.dt();
  Matrix<N> k1, k2, k3, k4, tmp;
  for (std::size_t step = 0; step < grid.steps(); ++step) {
    const double t = grid.time(step);
    const double t_next = grid.time(step + 1);
    Matrix<N> h_mid = hamiltonian(0.5 * (t + t_next));
    Matrix<N> h_end = hamiltonian(t_next);
    check_hamiltonian<N>(h_mid, 0.5 * (t + t_next));
    check_hamiltonian<N>(h_end, t_next);
    const Matrix<N> e_start = rhs.effective(h_start);
    const Matrix<N> e_mid = rhs.effective(h_mid);
    const Matrix<N> e_end = rhs.effective(h_end);
    for (auto& rho : states) {
      rhs(e_start, rho, k1);
      tmp = rho + 0.5 * h * k1;
      rhs(e_mid, tmp, k2);
      tmp = rho + 0.5 * h * k2;
      rhs(e_mid, tmp, k3);
      tmp = rho + h * k3;
      rhs(e_end, tmp, k4);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    h_start = std::move(h_end);
    observer(step + 1, std::as_const(states));
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double drift = std::abs(states[i].trace() - initial_trace[i]);
    if (!(drift <= 1e-6)) {
      std::ostringstream msg;
      msg << "lindblad integration lost trace (drift " << drift
          << "); reduce the time step";
      throw NumericalError(msg.str());
    }
  }
}

}  // namespace detail

/// Integrates the Lindblad master equation from rho0 over the grid and
/// returns the sampled trajectory, both endpoints included.
template <class HamiltonianFn, int N = hamiltonian_dim_v<HamiltonianFn>>
LindbladTrajectory<N> propagate_lindblad(HamiltonianFn&& hamiltonian,
                                         std::span<const CollapseChannel<N>> channels,
                                         const DensityOperator<N>& rho0, const TimeGrid& grid,
                                         LindbladOptions options = {}) {
  const std::size_t stride = std::max<std::size_t>(options.record_stride, 1);
  LindbladTrajectory<N> traj;
  traj.times.push_back(grid.t_start());
  traj.states.push_back(rho0);
  std::vector<Matrix<N>> states{rho0.matrix()};
  detail::lindblad_batch<N>(hamiltonian, channels, states, grid,
                            [&](std::size_t step, const std::vector<Matrix<N>>& s) {
                              if (step % stride == 0 || step == grid.steps()) {
                                traj.times.push_back(grid.time(step));
                                traj.states.push_back(DensityOperator<N>::unchecked(s.front()));
                              }
                            });
  return traj;
}

template <class HamiltonianFn, int N = hamiltonian_dim_v<HamiltonianFn>>
LindbladTrajectory<N> propagate_lindblad(HamiltonianFn&& hamiltonian,
                                         const std::vector<CollapseChannel<N>>& channels,
                                         const DensityOperator<N>& rho0, const TimeGrid& grid,
                                         LindbladOptions options = {}) {
  return propagate_lindblad(std::forward<HamiltonianFn>(hamiltonian),
                            std::span<const CollapseChannel<N>>(channels), rho0, grid, options);
}

/// <psi|rho|psi>. psi may live on the leading subspace of rho's space and is
/// zero-padded.
template <int N, int M>
double state_fidelity(const DensityOperator<N>& rho, const Vector<M>& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-8) throw ValidationError("state vector must be normalized");
  if (psi.size() > rho.dim()) throw ValidationError("state vector larger than density operator");
  Vector<N> full = Vector<N>::Zero(rho.dim());
  full.head(psi.size()) = psi;
  const Complex f = full.dot(rho.matrix() * full);
  if (std::abs(f.imag()) > 1e-10) throw NumericalError("fidelity has a non-negligible imaginary part");
  return std::clamp(f.real(), 0.0, 1.0);
}

/// Linear map on operators supported on span{|s>: s in support}, stored as
/// the images of the matrix units |a><b|.
template <int N>
class QuantumChannel {
 public:
  QuantumChannel(int dim, std::vector<int> support, std::vector<Matrix<N>> images)
      : dim_(dim), support_(std::move(support)), images_(std::move(images)) {
    const auto m = support_.size();
    if (images_.size() != m * m) throw ValidationError("channel image count mismatch");
  }

  static QuantumChannel identity(int dim, std::vector<int> support) {
    std::vector<Matrix<N>> images;
    for (int a : support) {
      for (int b : support) {
        Matrix<N> e = Matrix<N>::Zero(dim, dim);
        e(a, b) = 1.0;
        images.push_back(e);
      }
    }
    return QuantumChannel(dim, std::move(support), std::move(images));
  }

  int dim() const { return dim_; }
  const std::vector<int>& support() const { return support_; }
  const Matrix<N>& image(std::size_t a, std::size_t b) const {
    return images_[a * support_.size() + b];
  }

  /// Output for an input operator, reconstructed by linearity.
  Matrix<N> apply(const Matrix<N>& rho) const {
    check_support(rho);
    Matrix<N> out = Matrix<N>::Zero(dim_, dim_);
    const auto m = support_.size();
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) out += rho(support_[a], support_[b]) * image(a, b);
    return out;
  }

  /// <out| Phi(|in><in|) |out>, computed without forming the full output.
  double transition_fidelity(const Vector<N>& in, const Vector<N>& out) const {
    const auto m = support_.size();
    Complex acc = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      const Complex ca = in(support_[a]);
      if (ca == Complex(0.0)) continue;
      for (std::size_t b = 0; b < m; ++b) {
        const Complex cb = std::conj(in(support_[b]));
        if (cb == Complex(0.0)) continue;
        acc += ca * cb * out.dot(image(a, b) * out);
      }
    }
    return std::clamp(acc.real(), 0.0, 1.0);
  }

 private:
  void check_support(const Matrix<N>& rho) const {
    if (rho.rows() != dim_ || rho.cols() != dim_) throw ValidationError("channel input has wrong dimension");
    std::vector<bool> in(static_cast<std::size_t>(dim_), false);
    for (int s : support_) in[static_cast<std::size_t>(s)] = true;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        if ((!in[static_cast<std::size_t>(i)] || !in[static_cast<std::size_t>(j)]) &&
            std::abs(rho(i, j)) > 1e-12) {
          throw ValidationError("channel input has weight outside the evolved support");
        }
  }

  int dim_;
  std::vector<int> support_;
  std::vector<Matrix<N>> images_;
};

/// Evolves a Hermitian operator basis of span{|a><b| : a, b in support}
/// through the master equation and returns the resulting channel. An empty
/// support means the full space (dim^2 trajectories). Basis trajectories are
/// split across worker threads; the result does not depend on the split.
template <class HamiltonianFn, int N = hamiltonian_dim_v<HamiltonianFn>>
QuantumChannel<N> evolve_channel_basis(const HamiltonianFn& hamiltonian,
                                       const std::vector<CollapseChannel<N>>& channels,
                                       const TimeGrid& grid, int dim, std::vector<int> support = {}) {
  if (dim < 1 || dim > kMaxDim) throw ValidationError("channel dimension must be in [1, 9]");
  if (support.empty()) {
    for (int i = 0; i < dim; ++i) support.push_back(i);
  }
  for (int s : support)
    if (s < 0 || s >= dim) throw ValidationError("channel support index out of range");
  const std::size_t m = support.size();

  // Closed system: one propagator gives every image exactly.
  const bool closed = std::all_of(channels.begin(), channels.end(), [](const auto& c) { return c.rate == 0.0; });
  if (closed) {
    const Matrix<N> u = propagate_schrodinger(hamiltonian, grid).matrix;
    std::vector<Matrix<N>> images(m * m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        images[a * m + b] = u.col(support[a]) * u.col(support[b]).adjoint();
    return QuantumChannel<N>(dim, std::move(support), std::move(images));
  }

  // Hermitian basis: |a><a|, |a><b| + |b><a|, -i|a><b| + i|b><a| (a < b).
  struct Item {
    std::size_t a, b;
    int kind;  // 0 diagonal, 1 symmetric, 2 antisymmetric
  };
  std::vector<Item> items;
  for (std::size_t a = 0; a < m; ++a) items.push_back({a, a, 0});
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      items.push_back({a, b, 1});
      items.push_back({a, b, 2});
    }
  auto basis_element = [&](const Item& it) {
    Matrix<N> e = Matrix<N>::Zero(dim, dim);
    const int i = support[it.a], j = support[it.b];
    if (it.kind == 0) {
      e(i, i) = 1.0;
    } else if (it.kind == 1) {
      e(i, j) = 1.0;
      e(j, i) = 1.0;
    } else {
      e(i, j) = Complex(0.0, -1.0);
      e(j, i) = Complex(0.0, 1.0);
    }
    return e;
  };

  const std::size_t workers = std::min(worker_count(), items.size());
  std::vector<std::vector<Matrix<N>>> chunks(workers);
  parallel_for(workers, [&](std::size_t w) {
    std::vector<Matrix<N>> states;
    for (std::size_t k = w; k < items.size(); k += workers) states.push_back(basis_element(items[k]));
    auto h = hamiltonian;
    detail::lindblad_batch<N>(h, std::span<const CollapseChannel<N>>(channels), states, grid,
                              [](std::size_t, const std::vector<Matrix<N>>&) {});
    chunks[w] = std::move(states);
  }, workers);

  std::vector<Matrix<N>> evolved(items.size());
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t pos = 0;
    for (std::size_t k = w; k < items.size(); k += workers) evolved[k] = std::move(chunks[w][pos++]);
  }

  std::vector<Matrix<N>> images(m * m);
  const Complex i_unit(0.0, 1.0);
  for (std::size_t k = 0; k < items.size(); ++k) {
    const auto& it = items[k];
    if (it.kind == 0) {
      images[it.a * m + it.a] = evolved[k];
    } else if (it.kind == 1) {
      const Matrix<N>& sym = evolved[k];
      const Matrix<N>& anti = evolved[k + 1];
      images[it.a * m + it.b] = 0.5 * (sym + i_unit * anti);
      images[it.b * m + it.a] = 0.5 * (sym - i_unit * anti);
    }
  }
  return QuantumChannel<N>(dim, std::move(support), std::move(images));
}

/// |tr(V^dagger U)|^2 / d^2, insensitive to global phase.
template <class A, class B>
double unitary_overlap_fidelity(const A& u, const B& target) {
  const double d = static_cast<double>(u.rows());
  const Complex tr = (target.adjoint() * u).trace();
  return std::norm(tr) / (d * d);
}

}  // namespace geomgate
