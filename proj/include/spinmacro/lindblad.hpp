// Copyright 2026 The spinmacro Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Collective-decay and dephasing master equations, integrated with fixed-step
// RK4 either in the full 2^N space or in the (N+1)-dimensional symmetric
// (Dicke) subspace, plus the Dicke-subspace evaluation of I and F.
//
//   d rho/dt = -i (Omega/2) [J_+ + J_-, rho]
//              + (gamma/2) (2 J_- rho J_+ - J_+ J_- rho - rho J_+ J_-)
//
// with J_+- = sum_i sigma_+-^(i) and sigma_+ = |0><1|. The dephasing channel
// is gamma (A rho A - {A^2, rho}/2).

#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "spinmacro/macromeasure.hpp"
#include "spinmacro/numfmt.hpp"
#include "spinmacro/spincore.hpp"

namespace spinmacro {

enum class Channel { CollectiveDecay, Dephasing };

struct LindbladSpec {
  double rabi_frequency = 0.0;
  double dissipation_rate = 0.0;
  Channel channel = Channel::CollectiveDecay;
  std::optional<DirectionField> dephasing_field;
  OperatorKind dephasing_kind = OperatorKind::PauliOps;

  void validate(const SystemDescriptor& desc) const {
    if (!(dissipation_rate >= 0.0)) throw InvalidArgument("LindbladSpec: dissipation rate must be >= 0");
    if (!std::isfinite(rabi_frequency)) throw InvalidArgument("LindbladSpec: Rabi frequency must be finite");
    if (channel == Channel::Dephasing) {
      if (!dephasing_field) throw InvalidArgument("LindbladSpec: dephasing channel needs a direction field");
      if (dephasing_field->size() != desc.num_sites()) {
        throw InvalidArgument("LindbladSpec: dephasing field size does not match the system");
      }
      check_kind(dephasing_kind, desc.twice_spin());
    } else if (desc.twice_spin() != 1) {
      throw InvalidArgument("LindbladSpec: collective decay is defined for spin-1/2 sites");
    }
  }
};

/// State on the symmetric subspace |J = N/2, m>, m = N/2 ... -N/2.
class DickeState {
 public:
  DickeState(int num_sites, CMatrix entries) : n_(num_sites), rho_(std::move(entries)) {
    if (num_sites < 1) throw InvalidState("DickeState: N must be >= 1");
    if (rho_.rows() != num_sites + 1 || rho_.cols() != num_sites + 1) {
      throw InvalidState("DickeState: matrix must be (N+1) x (N+1)");
    }
    check_density_invariants(rho_);
    rho_ = (0.5 * (rho_ + rho_.adjoint())).eval();
  }

  int num_sites() const noexcept { return n_; }
  const CMatrix& matrix() const noexcept { return rho_; }
  double purity() const { return rho_.squaredNorm(); }

 private:
  int n_;
  CMatrix rho_;
};

/// (|m=N/2> + |m=-N/2>)/sqrt(2) in the Dicke basis.
inline DickeState dicke_ghz(int num_sites) {
  CMatrix m = CMatrix::Zero(num_sites + 1, num_sites + 1);
  m(0, 0) = m(0, num_sites) = m(num_sites, 0) = m(num_sites, num_sites) = 0.5;
  return DickeState(num_sites, m);
}

/// |J = N/2, m> with m = N/2 - k.
inline DickeState dicke_basis_state(int num_sites, int k) {
  if (k < 0 || k > num_sites) throw InvalidArgument("dicke_basis_state: k out of range");
  CMatrix m = CMatrix::Zero(num_sites + 1, num_sites + 1);
  m(k, k) = 1.0;
  return DickeState(num_sites, m);
}

/// D x (N+1) isometry whose column k is the normalized symmetric sum of all
/// basis states with k spins down.
inline RMatrix dicke_isometry(int num_sites) {
  const SystemDescriptor desc(num_sites, 1);
  std::vector<double> norm(static_cast<std::size_t>(num_sites + 1));
  double binom = 1.0;
  for (int k = 0; k <= num_sites; ++k) {
    norm[static_cast<std::size_t>(k)] = 1.0 / std::sqrt(binom);
    binom = binom * (num_sites - k) / (k + 1.0);
  }
  RMatrix e = RMatrix::Zero(desc.dim(), num_sites + 1);
  for (Index n = 0; n < desc.dim(); ++n) {
    const int k = std::popcount(static_cast<unsigned long long>(n));
    e(n, k) = norm[static_cast<std::size_t>(k)];
  }
  return e;
}

inline DensityMatrix embed_dicke(const DickeState& state) {
  const int n = state.num_sites();
  const RMatrix e = dicke_isometry(n);
  const CMatrix ec = e.cast<Complex>();
  return DensityMatrix::trusted(SystemDescriptor(n, 1), ec * state.matrix() * ec.transpose());
}

/// Restriction of a permutation-symmetric full-space state; throws
/// InvalidState if weight outside the subspace exceeds 1e-10.
inline DickeState project_dicke(const DensityMatrix& rho) {
  const SystemDescriptor& desc = rho.descriptor();
  if (desc.twice_spin() != 1) throw InvalidArgument("project_dicke: qubit system required");
  const CMatrix ec = dicke_isometry(desc.num_sites()).cast<Complex>();
  CMatrix m = ec.transpose() * rho.matrix() * ec;
  const double leak = 1.0 - m.trace().real();
  if (std::abs(leak) > 1e-10) {
    throw InvalidState("project_dicke: state has weight " + std::to_string(leak) + " outside the symmetric subspace");
  }
  return DickeState(desc.num_sites(), m);
}

// ---------------------------------------------------------------------------
// Right-hand sides

namespace detail {

/// sum_i local^(i) M, or with `right`, M sum_i local^(i).
inline CMatrix collective_apply(const SystemDescriptor& desc, const std::vector<CMatrix>& locals,
                                const CMatrix& m, bool right) {
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  for (int i = 0; i < desc.num_sites(); ++i) {
    const CMatrix& l = locals[static_cast<std::size_t>(i)];
    out += right ? apply_site_right(desc, i, l, m) : apply_site_left(desc, i, l, m);
  }
  return out;
}

inline CMatrix sigma_plus() {
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

/// Generic Eq.-of-motion evaluation given left/right multiplication by J_-,
/// J_+ (collective decay) or A (dephasing).
template <typename Left, typename Right>
CMatrix collective_decay_rhs(const CMatrix& rho, double omega, double gamma, Left&& left, Right&& right) {
  // left(op, M) = op M, right(M, op) = M op with op in {+1: J_+, -1: J_-}.
  const CMatrix jm_rho = left(-1, rho);
  const CMatrix rho_jp = right(rho, +1);
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  if (omega != 0.0) {
    const CMatrix jx_rho = left(+1, rho) + jm_rho;
    const CMatrix rho_jx = rho_jp + right(rho, -1);
    out += Complex(0.0, -0.5 * omega) * (jx_rho - rho_jx);
  }
  if (gamma != 0.0) {
    const CMatrix jm_rho_jp = right(jm_rho, +1);
    const CMatrix jp_jm_rho = left(+1, jm_rho);
    const CMatrix rho_jp_jm = right(rho_jp, -1);
    out += (0.5 * gamma) * (2.0 * jm_rho_jp - jp_jm_rho - rho_jp_jm);
  }
  return out;
}

}  // namespace detail

/// d rho / dt for the full-space state, using only site-local products
/// (O(N D^2 d) per evaluation).
inline CMatrix lindblad_rhs(const CMatrix& rho, const LindbladSpec& spec, const SystemDescriptor& desc) {
  spec.validate(desc);
  if (spec.channel == Channel::CollectiveDecay) {
    const CMatrix sp = detail::sigma_plus();
    const std::vector<CMatrix> plus(static_cast<std::size_t>(desc.num_sites()), sp);
    const std::vector<CMatrix> minus(static_cast<std::size_t>(desc.num_sites()), CMatrix(sp.adjoint()));
    auto left = [&](int which, const CMatrix& m) {
      return detail::collective_apply(desc, which > 0 ? plus : minus, m, false);
    };
    auto right = [&](const CMatrix& m, int which) {
      return detail::collective_apply(desc, which > 0 ? plus : minus, m, true);
    };
    return detail::collective_decay_rhs(rho, spec.rabi_frequency, spec.dissipation_rate, left, right);
  }
  const auto ops = site_operators(desc.twice_spin(), spec.dephasing_kind);
  std::vector<CMatrix> locals;
  for (int i = 0; i < desc.num_sites(); ++i) {
    const Eigen::Vector3d& v = (*spec.dephasing_field)[i];
    locals.push_back(v.x() * ops[0] + v.y() * ops[1] + v.z() * ops[2]);
  }
  const CMatrix a_rho = detail::collective_apply(desc, locals, rho, false);
  const CMatrix a_rho_a = detail::collective_apply(desc, locals, a_rho, true);
  const CMatrix a2_rho = detail::collective_apply(desc, locals, a_rho, false);
  const CMatrix rho_a2 = a2_rho.adjoint();
  return spec.dissipation_rate * (a_rho_a - 0.5 * (a2_rho + rho_a2));
}

inline CMatrix lindblad_rhs(const DensityMatrix& rho, const LindbladSpec& spec) {
  return lindblad_rhs(rho.matrix(), spec, rho.descriptor());
}

/// Collective-decay right-hand side on the Dicke subspace, where J_+- act as
/// the spin-N/2 ladder operators.
inline CMatrix dicke_rhs(const CMatrix& rho, const LindbladSpec& spec, int num_sites) {
  if (spec.channel != Channel::CollectiveDecay) {
    throw InvalidArgument("dicke_rhs: only the collective-decay channel preserves the symmetric subspace");
  }
  if (!(spec.dissipation_rate >= 0.0)) throw InvalidArgument("dicke_rhs: dissipation rate must be >= 0");
  const SpinMatrices j = spin_matrices(num_sites);
  auto left = [&](int which, const CMatrix& m) -> CMatrix { return (which > 0 ? j.plus : j.minus) * m; };
  auto right = [&](const CMatrix& m, int which) -> CMatrix { return m * (which > 0 ? j.plus : j.minus); };
  return detail::collective_decay_rhs(rho, spec.rabi_frequency, spec.dissipation_rate, left, right);
}

// ---------------------------------------------------------------------------
// Integration

template <typename State>
struct Trajectory {
  std::string method = "rk4";
  double dt = 0.0;
  bool dicke_subspace = false;
  std::vector<double> times;
  std::vector<State> states;
  std::vector<double> purity;
  std::vector<double> I;
  std::vector<double> F;
};

namespace detail {

inline void check_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw InvalidArgument("time grid is empty");
  if (!(t_grid.front() >= 0.0)) throw InvalidArgument("time grid must start at t >= 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw InvalidArgument("time grid must be strictly increasing");
  }
}

inline void check_step(double dt, double gamma, int num_sites) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (gamma > 0.0 && dt > 0.1 / (gamma * (num_sites + 1)) * (1.0 + 1e-12)) {
    throw InvalidArgument("time step " + format_double(dt) + " exceeds the stability bound 0.1/(gamma (N+1)) = " +
                          format_double(0.1 / (gamma * (num_sites + 1))));
  }
}

/// Fixed-step RK4 from t_grid.front(); the step inside each save interval is
/// the largest h <= dt that lands exactly on the save time. Emits the state at
/// every grid time through `save(t, rho)`.
template <typename Rhs, typename Save>
void rk4_integrate(CMatrix rho, const std::vector<double>& t_grid, double dt, Rhs&& rhs, Save&& save) {
  double t = t_grid.front();
  save(t, rho);
  for (std::size_t g = 1; g < t_grid.size(); ++g) {
    const double span = t_grid[g] - t;
    const auto steps = static_cast<long long>(std::ceil(span / dt - 1e-9));
    const double h = span / static_cast<double>(std::max<long long>(steps, 1));
    for (long long s = 0; s < std::max<long long>(steps, 1); ++s) {
      const CMatrix k1 = rhs(rho);
      const CMatrix k2 = rhs(CMatrix(rho + (0.5 * h) * k1));
      const CMatrix k3 = rhs(CMatrix(rho + (0.5 * h) * k2));
      const CMatrix k4 = rhs(CMatrix(rho + h * k3));
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      rho = (0.5 * (rho + rho.adjoint())).eval();
      const double tr = rho.trace().real();
      if (std::abs(tr - 1.0) > 1e-12) rho /= tr;
    }
    t = t_grid[g];
    save(t, rho);
  }
}

inline void check_psd_at(const CMatrix& rho, double t) {
  CMatrix shifted = rho;
  shifted.diagonal().array() += 1e-8;
  Eigen::LLT<CMatrix> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("integrator lost positivity at t = " + format_double(t) +
                           " (smallest eigenvalue below -1e-8); reduce dt");
  }
}

}  // namespace detail

/// Full-space evolution. Requires dt <= 0.1 / (gamma (N+1)).
inline Trajectory<DensityMatrix> evolve(const DensityMatrix& rho0, const LindbladSpec& spec,
                                        const std::vector<double>& t_grid, double dt) {
  const SystemDescriptor& desc = rho0.descriptor();
  spec.validate(desc);
  detail::check_grid(t_grid);
  detail::check_step(dt, spec.dissipation_rate, desc.num_sites());
  Trajectory<DensityMatrix> traj;
  traj.dt = dt;
  auto rhs = [&](const CMatrix& r) { return lindblad_rhs(r, spec, desc); };
  detail::rk4_integrate(rho0.matrix(), t_grid, dt, rhs, [&](double t, const CMatrix& r) {
    detail::check_psd_at(r, t);
    traj.times.push_back(t);
    traj.states.push_back(DensityMatrix::trusted(desc, r));
    traj.purity.push_back(r.squaredNorm());
    traj.I.push_back(std::numeric_limits<double>::quiet_NaN());
    traj.F.push_back(std::numeric_limits<double>::quiet_NaN());
  });
  return traj;
}

/// Evolution restricted to the symmetric subspace (collective decay only).
inline Trajectory<DickeState> dicke_evolve(const DickeState& dicke0, const LindbladSpec& spec,
                                           const std::vector<double>& t_grid, double dt) {
  const int n = dicke0.num_sites();
  if (spec.channel != Channel::CollectiveDecay) {
    throw InvalidArgument("dicke_evolve: only the collective-decay channel is supported");
  }
  if (!(spec.dissipation_rate >= 0.0)) throw InvalidArgument("dicke_evolve: dissipation rate must be >= 0");
  detail::check_grid(t_grid);
  detail::check_step(dt, spec.dissipation_rate, n);
  Trajectory<DickeState> traj;
  traj.dt = dt;
  traj.dicke_subspace = true;
  auto rhs = [&](const CMatrix& r) { return dicke_rhs(r, spec, n); };
  detail::rk4_integrate(dicke0.matrix(), t_grid, dt, rhs, [&](double t, const CMatrix& r) {
    detail::check_psd_at(r, t);
    traj.times.push_back(t);
    CMatrix normalized = r / r.trace().real();
    traj.states.emplace_back(n, normalized);
    traj.purity.push_back(normalized.squaredNorm());
    traj.I.push_back(std::numeric_limits<double>::quiet_NaN());
    traj.F.push_back(std::numeric_limits<double>::quiet_NaN());
  });
  return traj;
}

// ---------------------------------------------------------------------------
// Measures in the symmetric subspace

struct DickeMeasures {
  double I = 0.0;
  double F = 0.0;
};

/// Site-diagonal (D) and off-site (O) 3x3 blocks of V and W, qubit-normalized.
struct DickeBlocks {
  Eigen::Matrix3d vd, vo, wd, wo;
};

/// Blocks of V and W for a symmetric state from (N+1)-dimensional quantities
/// only. With P the projector onto the subspace and J_a the
/// collective spin:
///   P s_a^i P           = (2/N) J_a
///   P s_a^i s_b^i P     = delta_ab + (2i/N) eps_abc J_c
///   P s_a^i s_b^j P     = (4 J_a J_b - N delta_ab - 2i eps_abc J_c) / (N (N-1)),  i != j
/// W pairs with one index outside the subspace contribute
/// pi_k (<k|X_ab|k> - (4/N^2) <k|J_a J_b|k>) plus the (b, a) counterpart.
inline DickeBlocks dicke_blocks(const DickeState& state) {
  const int n = state.num_sites();
  const CMatrix& rho = state.matrix();
  const SpinMatrices js = spin_matrices(n);
  const std::array<CMatrix, 3> j = {js.x, js.y, js.z};
  const Index dim = n + 1;
  const CMatrix id = CMatrix::Identity(dim, dim);
  const double nn = n;

  auto eps = [](int a, int b, int c) -> double {
    if (a == b || b == c || a == c) return 0.0;
    return ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
  };
  // Projected same-site and different-site products.
  std::array<std::array<CMatrix, 3>, 3> same, diff;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      CMatrix cross = CMatrix::Zero(dim, dim);
      for (int c = 0; c < 3; ++c) {
        const double e = eps(a, b, c);
        if (e != 0.0) cross += e * j[static_cast<std::size_t>(c)];
      }
      const double delta = a == b ? 1.0 : 0.0;
      same[a][b] = delta * id + (2.0 * kI / nn) * cross;
      if (n >= 2) {
        diff[a][b] = (4.0 * j[a] * j[b] - nn * delta * id - 2.0 * kI * cross) / (nn * (nn - 1.0));
      }
    }
  }

  const double p = rho.squaredNorm();
  const CMatrix rho2 = rho * rho;
  Eigen::Matrix3d vd, vo, wd, wo;

  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  if (es.info() != Eigen::Success) throw NumericalFailure("dicke_measures: eigensolver failed");
  const Eigen::VectorXd pi = es.eigenvalues().cwiseMax(0.0);
  const CMatrix& u = es.eigenvectors();
  std::array<CMatrix, 3> jt;
  for (int a = 0; a < 3; ++a) jt[a] = u.adjoint() * j[a] * u;
  RMatrix wk(dim, dim);
  for (Index l = 0; l < dim; ++l) {
    for (Index k = 0; k < dim; ++k) {
      const double s = pi(k) + pi(l);
      wk(k, l) = s <= 1e-14 ? 0.0 : (pi(k) - pi(l)) * (pi(k) - pi(l)) / s;
    }
  }
  // <k|X|k> weighted by pi_k is Tr[rho X].
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double cross_term = (rho * j[a] * rho * j[b]).trace().real() * 4.0 / (nn * nn);
      vd(a, b) = ((rho2 * same[a][b]).trace().real() - cross_term) / (nn * p);
      vo(a, b) = n >= 2 ? ((rho2 * diff[a][b]).trace().real() - cross_term) / (nn * p) : 0.0;

      const double inside = (wk.cast<Complex>().array() * jt[a].array() * jt[b].transpose().array()).sum().real() *
                            4.0 / (nn * nn);
      const double jj = (rho * (j[a] * j[b] + j[b] * j[a])).trace().real() * 4.0 / (nn * nn);
      const double comp_same = (rho * (same[a][b] + same[b][a])).trace().real() - jj;
      wd(a, b) = (inside + comp_same) / (2.0 * nn);
      if (n >= 2) {
        const double comp_diff = (rho * (diff[a][b] + diff[b][a])).trace().real() - jj;
        wo(a, b) = (inside + comp_diff) / (2.0 * nn);
      } else {
        wo(a, b) = 0.0;
      }
    }
  }
  return {vd, vo, wd, wo};
}

/// I and F (qubit-normalized) of a symmetric state, optimized over all fields.
inline DickeMeasures dicke_measures(const DickeState& state, const OptimizerOptions& opt = {}) {
  const DickeBlocks b = dicke_blocks(state);
  const int n = state.num_sites();
  return {symmetric_optimum(b.vd, b.vo, n, MeasureKind::V, Convention::QubitNormalized, opt).value,
          symmetric_optimum(b.wd, b.wo, n, MeasureKind::W, Convention::QubitNormalized, opt).value};
}

/// Fills I and F (qubit-normalized) at every `every`-th saved time.
inline void measure_trajectory(Trajectory<DickeState>& traj, const OptimizerOptions& opt = {}, int every = 1) {
  if (every < 1) throw InvalidArgument("measure cadence must be >= 1");
  for (std::size_t i = 0; i < traj.states.size(); i += static_cast<std::size_t>(every)) {
    const DickeMeasures m = dicke_measures(traj.states[i], opt);
    traj.I[i] = m.I;
    traj.F[i] = m.F;
  }
}

inline void measure_trajectory(Trajectory<DensityMatrix>& traj, const OptimizerOptions& opt, int every = 1) {
  if (every < 1) throw InvalidArgument("measure cadence must be >= 1");
  for (std::size_t i = 0; i < traj.states.size(); i += static_cast<std::size_t>(every)) {
    traj.I[i] = measure_I(traj.states[i], Convention::QubitNormalized, opt).value;
    traj.F[i] = measure_F(traj.states[i], Convention::QubitNormalized, opt).value;
  }
}

/// CSV with header t,purity,I,F; unmeasured rows leave I and F empty.
template <typename State>
void write_trajectory_csv(std::ostream& out, const Trajectory<State>& traj) {
  out << "t,purity,I,F\n";
  auto cell = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out << format_double(traj.times[i]) << ',' << format_double(traj.purity[i]) << ',' << cell(traj.I[i]) << ','
        << cell(traj.F[i]) << '\n';
  }
}

/// Uniform grid t0, t0 + step, ..., up to and including tmax.
inline std::vector<double> uniform_grid(double tmax, double step) {
  if (!(step > 0.0) || !(tmax >= 0.0)) throw InvalidArgument("uniform_grid: need step > 0, tmax >= 0");
  const auto count = static_cast<long long>(std::floor(tmax / step + 1e-9));
  std::vector<double> g;
  for (long long i = 0; i <= count; ++i) g.push_back(static_cast<double>(i) * step);
  if (tmax - g.back() > 1e-12 * std::max(1.0, tmax)) g.push_back(tmax);
  return g;
}

}  // namespace spinmacro
