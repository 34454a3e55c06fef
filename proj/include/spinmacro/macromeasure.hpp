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

// The macroscopicity measures I (purity-normalized dephasing rate) and F
// (quantum Fisher information per particle), both written as quadratic forms
// <alpha, M alpha> over one unit vector per site:
//
//   V_{ia,jb} = Tr[rho^2 X_a^i X_b^j - rho X_a^i rho X_b^j] / (N s P)
//   W_{ia,jb} = sum_{k,l} (pi_k - pi_l)^2 / (pi_k + pi_l) <k|X_a^i|l><l|X_b^j|k> / (2 N s)
//
// X are the site operators of the chosen OperatorKind and s their operator
// norm (S for spin matrices, 1 for Pauli matrices). SpinOps therefore yields
// the Raw scale (maximum N S) and PauliOps the qubit-normalized scale
// (maximum N); requesting the other convention rescales by 2.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "spinmacro/detail/parallel.hpp"
#include "spinmacro/spincore.hpp"

namespace spinmacro {

enum class Convention {
  Raw,              ///< Maximum N S.
  QubitNormalized,  ///< Spin-1/2 only; Raw times 2, maximum N.
};

inline const char* to_string(Convention c) { return c == Convention::Raw ? "raw" : "qubit"; }

inline Convention default_convention(int twice_spin) {
  return twice_spin == 1 ? Convention::QubitNormalized : Convention::Raw;
}

/// Natural operator set for a convention.
inline OperatorKind kind_for(Convention c) {
  return c == Convention::QubitNormalized ? OperatorKind::PauliOps : OperatorKind::SpinOps;
}

/// Factor converting a value computed with `kind` into `convention`.
inline double convention_factor(OperatorKind kind, Convention convention, int twice_spin) {
  check_kind(kind, twice_spin);
  if (convention == Convention::QubitNormalized && twice_spin != 1) {
    throw InvalidArgument("QubitNormalized convention requires spin-1/2 sites");
  }
  const Convention native = kind == OperatorKind::PauliOps ? Convention::QubitNormalized : Convention::Raw;
  if (native == convention) return 1.0;
  return convention == Convention::QubitNormalized ? 2.0 : 0.5;
}

enum class MeasureKind { V, W };

/// 3N x 3N quadratic-form matrix, indexed (3 i + a, 3 j + b).
struct MeasureMatrix {
  MeasureKind kind;
  RMatrix values;
  int num_sites;
  int twice_spin;
  OperatorKind operators;
  Convention convention;

  double quadratic_form(const DirectionField& field) const {
    if (field.size() != num_sites) throw InvalidArgument("quadratic_form: field size mismatch");
    const Eigen::VectorXd a = field.stacked();
    return a.dot(values * a);
  }
};

// ---------------------------------------------------------------------------
// Matrix construction

namespace detail {

/// Columns per chunk so that `buffers` stacks of D x chunk x P complex values
/// stay near 64 MB.
inline Index chunk_columns(Index dim, Index p, Index buffers) {
  const double budget = 64.0 * 1024.0 * 1024.0;
  const double per_col = static_cast<double>(dim) * static_cast<double>(p) * 16.0 * buffers;
  return std::clamp<Index>(static_cast<Index>(budget / per_col), 1, dim);
}

inline void check_sites(const SystemDescriptor& desc, const std::vector<int>& sites) {
  if (sites.empty()) throw InvalidArgument("site list is empty");
  for (int s : sites) desc.check_site(s);
}

/// Re(Tr[rho^2 X_p X_q] - Tr[rho X_p rho X_q]) over the listed sites.
///
/// With B_p = rho X_p and C_p = X_p rho both traces are Frobenius products,
/// Tr[B_p^dag B_q] and Tr[B_p^dag C_q], so the matrix is the real part of two
/// Gram products accumulated over column chunks. Columns of B_p gather d
/// columns of rho; C_p is a site-local row mix of rho. Cost O((3K)^2 D^2).
inline RMatrix v_traces(const CMatrix& rho, const SystemDescriptor& desc, const std::vector<int>& sites,
                        const std::array<CMatrix, 3>& ops) {
  check_sites(desc, sites);
  const Index dim = desc.dim();
  const Index d = desc.local_dim();
  const Index p_count = 3 * static_cast<Index>(sites.size());
  const Index chunk = chunk_columns(dim, p_count, 2);
  CMatrix g1 = CMatrix::Zero(p_count, p_count);
  CMatrix g2 = CMatrix::Zero(p_count, p_count);
  CMatrix bs(dim * chunk, p_count);
  CMatrix cs(dim * chunk, p_count);
  for (Index c0 = 0; c0 < dim; c0 += chunk) {
    const Index cw = std::min(chunk, dim - c0);
    for (std::size_t k = 0; k < sites.size(); ++k) {
      const int site = sites[k];
      const Index stride = desc.stride(site);
      for (int a = 0; a < 3; ++a) {
        const Index p = 3 * static_cast<Index>(k) + a;
        const CMatrix& x = ops[static_cast<std::size_t>(a)];
        Eigen::Map<CMatrix> b(bs.col(p).data(), dim, cw);
        Eigen::Map<CMatrix> c(cs.col(p).data(), dim, cw);
        for (Index n = c0; n < c0 + cw; ++n) {
          const Index s = (n / stride) % d;
          auto col = b.col(n - c0);
          col.setZero();
          for (Index t = 0; t < d; ++t) {
            const Complex coeff = x(t, s);
            if (coeff == Complex(0.0, 0.0)) continue;
            col += coeff * rho.col(n + (t - s) * stride);
          }
        }
        c = apply_site_left(desc, site, x, rho.middleCols(c0, cw));
      }
    }
    const Index rows = dim * cw;
    g1.noalias() += bs.topRows(rows).adjoint() * bs.topRows(rows);
    g2.noalias() += bs.topRows(rows).adjoint() * cs.topRows(rows);
  }
  RMatrix out = (g1 - g2).real();
  return 0.5 * (out + out.transpose());
}

/// Spectral weights sqrt((pi_k - pi_l)^2 / (pi_k + pi_l)); zero when the
/// denominator is at most 1e-14.
inline RMatrix fisher_root_weights(const Eigen::VectorXd& pi) {
  const Index dim = pi.size();
  RMatrix w(dim, dim);
  for (Index l = 0; l < dim; ++l) {
    for (Index k = 0; k < dim; ++k) {
      const double sum = pi(k) + pi(l);
      w(k, l) = sum <= 1e-14 ? 0.0 : std::abs(pi(k) - pi(l)) / std::sqrt(sum);
    }
  }
  return w;
}

/// Clipped spectrum and eigenvectors of a density matrix.
struct Spectrum {
  Eigen::VectorXd values;
  CMatrix vectors;
};

inline Spectrum spectrum(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  if (es.info() != Eigen::Success) throw NumericalFailure("eigensolver failed on the density matrix");
  Spectrum out{es.eigenvalues().cwiseMax(0.0), es.eigenvectors()};
  return out;
}

/// sum_{k,l} w_kl <k|X_p|l><l|X_q|k> with w given through its square root.
///
/// In the eigenbasis U, grouping the rows of U by the local index t of the
/// site (blocks U_t) turns every site operator into sums of U_s^dag U_t:
/// S_z -> sum_t m_t U_t^dag U_t and S_+ -> sum_t c_t U_{t-1}^dag U_t. Each
/// chunk of columns of X_p in the eigenbasis is scaled entrywise by sqrt(w)
/// and the result Gram-accumulated.
inline RMatrix w_sums(const Spectrum& spec, const SystemDescriptor& desc, const std::vector<int>& sites,
                      double op_scale, const RMatrix& root_w) {
  check_sites(desc, sites);
  const Index dim = desc.dim();
  const Index d = desc.local_dim();
  const SpinMatrices sm = spin_matrices(desc.twice_spin());
  const Index p_count = 3 * static_cast<Index>(sites.size());
  const Index chunk = chunk_columns(dim, p_count, 1);
  const CMatrix& u = spec.vectors;
  const double m_last = sm.z(d - 1, d - 1).real();

  std::vector<std::vector<std::vector<Index>>> rows(sites.size());
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const Index stride = desc.stride(sites[k]);
    rows[k].assign(static_cast<std::size_t>(d), {});
    for (Index n = 0; n < dim; ++n) rows[k][static_cast<std::size_t>((n / stride) % d)].push_back(n);
  }

  CMatrix gram = CMatrix::Zero(p_count, p_count);
  CMatrix zs(dim * chunk, p_count);
  std::vector<CMatrix> left(static_cast<std::size_t>(d));
  std::vector<CMatrix> right(static_cast<std::size_t>(d));
  for (Index c0 = 0; c0 < dim; c0 += chunk) {
    const Index cw = std::min(chunk, dim - c0);
    for (std::size_t k = 0; k < sites.size(); ++k) {
      for (Index t = 0; t < d; ++t) {
        const auto& idx = rows[k][static_cast<std::size_t>(t)];
        left[static_cast<std::size_t>(t)] = u(idx, Eigen::all).adjoint();
        right[static_cast<std::size_t>(t)] = u(idx, Eigen::seqN(c0, cw));
      }
      CMatrix xz = CMatrix::Zero(dim, cw);
      for (Index j = 0; j < cw; ++j) xz(c0 + j, j) = m_last;
      CMatrix xp = CMatrix::Zero(dim, cw);
      CMatrix xm = CMatrix::Zero(dim, cw);
      for (Index t = 0; t < d; ++t) {
        const auto ts = static_cast<std::size_t>(t);
        if (t < d - 1) {
          const double dm = sm.z(t, t).real() - m_last;
          xz.noalias() += dm * (left[ts] * right[ts]);
        }
        if (t >= 1) {
          const double c = sm.plus(t - 1, t).real();
          xp.noalias() += c * (left[ts - 1] * right[ts]);
          xm.noalias() += c * (left[ts] * right[ts - 1]);
        }
      }
      const auto w = root_w.middleCols(c0, cw).array();
      const Index p0 = 3 * static_cast<Index>(k);
      Eigen::Map<CMatrix>(zs.col(p0).data(), dim, cw) = (0.5 * op_scale) * ((xp + xm).array() * w).matrix();
      Eigen::Map<CMatrix>(zs.col(p0 + 1).data(), dim, cw) =
          (op_scale / (2.0 * kI)) * ((xp - xm).array() * w).matrix();
      Eigen::Map<CMatrix>(zs.col(p0 + 2).data(), dim, cw) = op_scale * (xz.array() * w).matrix();
    }
    const Index r = dim * cw;
    gram.noalias() += zs.topRows(r).adjoint() * zs.topRows(r);
  }
  RMatrix out = gram.real();
  return 0.5 * (out + out.transpose());
}

inline std::vector<int> all_sites(const SystemDescriptor& desc) {
  std::vector<int> s(static_cast<std::size_t>(desc.num_sites()));
  std::iota(s.begin(), s.end(), 0);
  return s;
}

inline RMatrix build_V_sites(const DensityMatrix& rho, OperatorKind kind, Convention convention,
                             const std::vector<int>& sites) {
  const SystemDescriptor& desc = rho.descriptor();
  const double factor = convention_factor(kind, convention, desc.twice_spin());
  const auto ops = site_operators(desc.twice_spin(), kind);
  const double s = site_operator_norm(kind, desc.twice_spin());
  const double p = purity(rho);
  return v_traces(rho.matrix(), desc, sites, ops) * (factor / (desc.num_sites() * s * p));
}

inline RMatrix build_W_sites(const DensityMatrix& rho, OperatorKind kind, Convention convention,
                             const std::vector<int>& sites) {
  const SystemDescriptor& desc = rho.descriptor();
  const double factor = convention_factor(kind, convention, desc.twice_spin());
  const double s = site_operator_norm(kind, desc.twice_spin());
  const double op_scale = kind == OperatorKind::PauliOps ? 2.0 : 1.0;
  const Spectrum spec = spectrum(rho.matrix());
  const RMatrix root_w = fisher_root_weights(spec.values);
  return w_sums(spec, desc, sites, op_scale, root_w) * (factor / (2.0 * desc.num_sites() * s));
}

}  // namespace detail

inline MeasureMatrix build_V(const DensityMatrix& rho, OperatorKind kind, Convention convention) {
  const SystemDescriptor& desc = rho.descriptor();
  return {MeasureKind::V, detail::build_V_sites(rho, kind, convention, detail::all_sites(desc)),
          desc.num_sites(), desc.twice_spin(), kind, convention};
}

inline MeasureMatrix build_W(const DensityMatrix& rho, OperatorKind kind, Convention convention) {
  const SystemDescriptor& desc = rho.descriptor();
  return {MeasureKind::W, detail::build_W_sites(rho, kind, convention, detail::all_sites(desc)),
          desc.num_sites(), desc.twice_spin(), kind, convention};
}

/// V for a pure state: the connected correlator
/// (<X_p X_q> - <X_p><X_q>) / (N s), at O((3N)^2 D) cost. For pure states W
/// coincides with this matrix.
inline MeasureMatrix build_V_pure(const PureState& state, OperatorKind kind, Convention convention) {
  const SystemDescriptor& desc = state.descriptor();
  const double factor = convention_factor(kind, convention, desc.twice_spin());
  const auto ops = site_operators(desc.twice_spin(), kind);
  const double s = site_operator_norm(kind, desc.twice_spin());
  const Index p_count = 3 * desc.num_sites();
  const CMatrix psi = state.vector();
  CMatrix phi(desc.dim(), p_count);
  for (int i = 0; i < desc.num_sites(); ++i) {
    for (int a = 0; a < 3; ++a) {
      phi.col(3 * i + a) = apply_site_left(desc, i, ops[static_cast<std::size_t>(a)], psi);
    }
  }
  const CMatrix g = phi.adjoint() * phi;
  const Eigen::VectorXd mean = (psi.adjoint() * phi).real().transpose();
  RMatrix v = g.real() - mean * mean.transpose();
  v = 0.5 * (v + v.transpose());
  v *= factor / (desc.num_sites() * s);
  return {MeasureKind::V, std::move(v), desc.num_sites(), desc.twice_spin(), kind, convention};
}

// ---------------------------------------------------------------------------
// Optimization

struct OptimizerOptions {
  int restarts = 200;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  int max_iterations = 5000;
  unsigned threads = 0;
};

struct MeasureResult {
  std::string measure;
  Convention convention = Convention::Raw;
  double value = 0.0;
  DirectionField optimal_field{std::vector<Eigen::Vector3d>{}};
  int restarts_used = 0;
  int converged_restarts = 0;
  int best_restart_index = -1;
  double gradient_norm = 0.0;
  double spread = 0.0;
  std::uint64_t seed = 0;
};

/// Norm of the tangential part of the gradient 2 M alpha on the product of spheres.
inline double riemannian_gradient_norm(const RMatrix& m, const Eigen::VectorXd& alpha) {
  Eigen::VectorXd g = 2.0 * (m * alpha);
  for (Index i = 0; i < alpha.size() / 3; ++i) {
    const Eigen::Vector3d a = alpha.segment<3>(3 * i);
    Eigen::Vector3d gi = g.segment<3>(3 * i);
    gi -= gi.dot(a) * a;
    g.segment<3>(3 * i) = gi;
  }
  return g.norm();
}

namespace detail {

struct Ascent {
  double value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd alpha;
  double grad_norm = std::numeric_limits<double>::infinity();
  bool converged = false;
};

/// Orthonormal right-handed frame whose first column is `a`.
inline Eigen::Matrix3d frame_for(const Eigen::Vector3d& a) {
  Index k = 0;
  a.cwiseAbs().minCoeff(&k);
  Eigen::Vector3d h = Eigen::Vector3d::Zero();
  h(k) = 1.0;
  Eigen::Vector3d e2 = (h - h.dot(a) * a).normalized();
  Eigen::Matrix3d r;
  r.col(0) = a;
  r.col(1) = e2;
  r.col(2) = a.cross(e2);
  return r;
}

/// BFGS ascent on per-site spherical angles measured in local frames. A site
/// whose polar angle drifts near its frame's pole is re-framed so the
/// parametrization stays regular; the inverse Hessian is reset when that
/// happens.
inline Ascent ascend(const RMatrix& m, Eigen::VectorXd alpha0, double tol, int max_iterations) {
  const Index sites = alpha0.size() / 3;
  const Index n = 2 * sites;
  std::vector<Eigen::Matrix3d> frames(static_cast<std::size_t>(sites));
  Eigen::VectorXd x(n);
  for (Index i = 0; i < sites; ++i) {
    frames[static_cast<std::size_t>(i)] = frame_for(alpha0.segment<3>(3 * i).normalized());
    x(2 * i) = 0.5 * std::numbers::pi;
    x(2 * i + 1) = 0.0;
  }

  auto to_alpha = [&](const Eigen::VectorXd& xv) {
    Eigen::VectorXd a(3 * sites);
    for (Index i = 0; i < sites; ++i) {
      const double th = xv(2 * i), ph = xv(2 * i + 1);
      const Eigen::Vector3d local(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
      a.segment<3>(3 * i) = frames[static_cast<std::size_t>(i)] * local;
    }
    return a;
  };
  // Objective is -<alpha, M alpha>; returns value and gradient in x.
  auto evaluate = [&](const Eigen::VectorXd& xv, Eigen::VectorXd& grad) {
    const Eigen::VectorXd a = to_alpha(xv);
    const Eigen::VectorXd g = -2.0 * (m * a);
    grad.resize(n);
    for (Index i = 0; i < sites; ++i) {
      const double th = xv(2 * i), ph = xv(2 * i + 1);
      const Eigen::Matrix3d& r = frames[static_cast<std::size_t>(i)];
      const Eigen::Vector3d dth = r * Eigen::Vector3d(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th));
      const Eigen::Vector3d dph = r * Eigen::Vector3d(-std::sin(th) * std::sin(ph), std::sin(th) * std::cos(ph), 0.0);
      const Eigen::Vector3d gi = g.segment<3>(3 * i);
      grad(2 * i) = gi.dot(dth);
      grad(2 * i + 1) = gi.dot(dph);
    }
    return -a.dot(m * a);
  };

  Ascent out;
  RMatrix h = RMatrix::Identity(n, n);
  bool fresh = true;
  Eigen::VectorXd grad;
  double f = evaluate(x, grad);
  for (int iter = 0; iter < max_iterations; ++iter) {
    const Eigen::VectorXd a = to_alpha(x);
    const double rg = riemannian_gradient_norm(m, a);
    out.value = -f;
    out.alpha = a;
    out.grad_norm = rg;
    if (rg <= tol) {
      out.converged = true;
      return out;
    }
    Eigen::VectorXd dir = -(h * grad);
    double slope = grad.dot(dir);
    if (!(slope < 0.0)) {
      h.setIdentity();
      fresh = true;
      dir = -grad;
      slope = grad.dot(dir);
    }
    // Once the predicted change is below the resolution of f, take the
    // quasi-Newton step unguarded.
    const bool roundoff = -slope < 1e-13 * (1.0 + std::abs(f));
    double step = 1.0;
    Eigen::VectorXd x_new, grad_new;
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * dir;
      f_new = evaluate(x_new, grad_new);
      if (roundoff || f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (fresh) break;
      h.setIdentity();
      fresh = true;
      continue;
    }
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm() && sy > 0.0) {
      if (fresh) h *= sy / y.squaredNorm();
      const double r = 1.0 / sy;
      const Eigen::VectorXd hy = h * y;
      h += ((sy + y.dot(hy)) * r * r) * (s * s.transpose()) - r * (hy * s.transpose() + s * hy.transpose());
      fresh = false;
    }
    x = x_new;
    f = f_new;
    grad = grad_new;

    bool reframed = false;
    for (Index i = 0; i < sites; ++i) {
      if (std::abs(std::cos(x(2 * i))) > 0.9) {
        const Eigen::VectorXd cur = to_alpha(x);
        frames[static_cast<std::size_t>(i)] = frame_for(cur.segment<3>(3 * i).normalized());
        x(2 * i) = 0.5 * std::numbers::pi;
        x(2 * i + 1) = 0.0;
        reframed = true;
      }
    }
    if (reframed) {
      h.setIdentity();
      fresh = true;
      f = evaluate(x, grad);
    }
  }
  const Eigen::VectorXd a = to_alpha(x);
  out.value = a.dot(m * a);
  out.alpha = a;
  out.grad_norm = riemannian_gradient_norm(m, a);
  out.converged = out.grad_norm <= tol;
  return out;
}

inline Eigen::VectorXd random_start(Index sites, Rng& rng) {
  Eigen::VectorXd a(3 * sites);
  for (Index i = 0; i < sites; ++i) {
    const double z = 2.0 * rng.uniform() - 1.0;
    const double ph = 2.0 * std::numbers::pi * rng.uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    a.segment<3>(3 * i) = Eigen::Vector3d(r * std::cos(ph), r * std::sin(ph), z);
  }
  return a;
}

}  // namespace detail

/// Maximizes <alpha, M alpha> subject to |alpha^(i)| = 1 by multistart BFGS.
/// Restart r starts from a point drawn with Rng(seed, r). Among converged
/// restarts whose value is within 1e-9 of the best, the lowest index wins.
inline MeasureResult optimize_direction(const MeasureMatrix& mm, const OptimizerOptions& opt = {}) {
  const RMatrix& m = mm.values;
  if (m.rows() != m.cols() || m.rows() != 3 * mm.num_sites || mm.num_sites < 1) {
    throw InvalidArgument("optimize_direction: matrix must be 3N x 3N");
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("optimize_direction: matrix is not symmetric");
  }
  if (opt.restarts < 1) throw InvalidArgument("optimize_direction: restarts must be >= 1");
  const Index sites = mm.num_sites;
  std::vector<detail::Ascent> runs(static_cast<std::size_t>(opt.restarts));
  detail::parallel_for(runs.size(), opt.threads, [&](std::size_t r) {
    Rng rng(opt.seed, r);
    runs[r] = detail::ascend(m, detail::random_start(sites, rng), opt.tol, opt.max_iterations);
  });

  double best = -std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  double best_any = -std::numeric_limits<double>::infinity();
  int converged = 0;
  for (const auto& run : runs) {
    best_any = std::max(best_any, run.value);
    if (!run.converged) continue;
    ++converged;
    best = std::max(best, run.value);
    worst = std::min(worst, run.value);
  }
  if (converged == 0) {
    throw NumericalFailure("optimizer: no restart reached gradient norm " + std::to_string(opt.tol), best_any);
  }
  int pick = -1;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (runs[r].converged && runs[r].value >= best - 1e-9) {
      pick = static_cast<int>(r);
      break;
    }
  }
  const detail::Ascent& win = runs[static_cast<std::size_t>(pick)];
  MeasureResult res;
  res.measure = mm.kind == MeasureKind::V ? "I" : "F";
  res.convention = mm.convention;
  res.optimal_field = DirectionField::from_stacked(win.alpha);
  res.value = mm.quadratic_form(res.optimal_field);
  res.restarts_used = opt.restarts;
  res.converged_restarts = converged;
  res.best_restart_index = pick;
  res.gradient_norm = win.grad_norm;
  res.spread = best - worst;
  res.seed = opt.seed;
  return res;
}

inline MeasureResult measure_I(const DensityMatrix& rho, Convention convention, const OptimizerOptions& opt = {}) {
  return optimize_direction(build_V(rho, kind_for(convention), convention), opt);
}

inline MeasureResult measure_I(const DensityMatrix& rho, const OptimizerOptions& opt = {}) {
  return measure_I(rho, default_convention(rho.descriptor().twice_spin()), opt);
}

inline MeasureResult measure_F(const DensityMatrix& rho, Convention convention, const OptimizerOptions& opt = {}) {
  return optimize_direction(build_W(rho, kind_for(convention), convention), opt);
}

inline MeasureResult measure_F(const DensityMatrix& rho, const OptimizerOptions& opt = {}) {
  return measure_F(rho, default_convention(rho.descriptor().twice_spin()), opt);
}

/// Maximum variance per particle of a pure state (I = F for pure states).
inline MeasureResult measure_pure(const PureState& state, Convention convention, const OptimizerOptions& opt = {}) {
  return optimize_direction(build_V_pure(state, kind_for(convention), convention), opt);
}

// ---------------------------------------------------------------------------
// Fixed-field forms

/// Tr[rho^2 A^2 - rho A rho A] / (N s P) in the requested convention.
inline double trace_form_I(const DensityMatrix& rho, const DirectionField& field, OperatorKind kind,
                           Convention convention) {
  const SystemDescriptor& desc = rho.descriptor();
  const double factor = convention_factor(kind, convention, desc.twice_spin());
  const CMatrix a = collective_operator(desc, field, kind);
  const CMatrix& r = rho.matrix();
  const CMatrix ra = r * a;
  const double t1 = (ra.adjoint() * ra).trace().real();  // Tr[A rho rho A]
  const double t2 = (ra * ra).trace().real();
  const double s = site_operator_norm(kind, desc.twice_spin());
  return factor * (t1 - t2) / (desc.num_sites() * s * purity(rho));
}

/// sum_{i,j} (pi_i - pi_j)^2 |<i|A|j>|^2 / (2 N s P), the eigenbasis form of I.
inline double spectral_I(const DensityMatrix& rho, const DirectionField& field, OperatorKind kind,
                         Convention convention) {
  const SystemDescriptor& desc = rho.descriptor();
  const double factor = convention_factor(kind, convention, desc.twice_spin());
  const detail::Spectrum spec = detail::spectrum(rho.matrix());
  const CMatrix a = spec.vectors.adjoint() * collective_operator(desc, field, kind) * spec.vectors;
  const Eigen::VectorXd& pi = spec.values;
  double acc = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) acc += (pi(i) - pi(j)) * (pi(i) - pi(j)) * std::norm(a(i, j));
  }
  const double s = site_operator_norm(kind, desc.twice_spin());
  return factor * acc / (2.0 * desc.num_sites() * s * pi.squaredNorm());
}

/// sum_{i,j} (pi_i - pi_j)^2 / (pi_i + pi_j) |<i|A|j>|^2 / (2 N s), i.e. F(rho, A) / (4 N s).
inline double spectral_F(const DensityMatrix& rho, const DirectionField& field, OperatorKind kind,
                         Convention convention) {
  const SystemDescriptor& desc = rho.descriptor();
  const double factor = convention_factor(kind, convention, desc.twice_spin());
  const detail::Spectrum spec = detail::spectrum(rho.matrix());
  const CMatrix a = spec.vectors.adjoint() * collective_operator(desc, field, kind) * spec.vectors;
  const Eigen::VectorXd& pi = spec.values;
  double acc = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      const double sum = pi(i) + pi(j);
      if (sum <= 1e-14) continue;
      acc += (pi(i) - pi(j)) * (pi(i) - pi(j)) / sum * std::norm(a(i, j));
    }
  }
  const double s = site_operator_norm(kind, desc.twice_spin());
  return factor * acc / (2.0 * desc.num_sites() * s);
}

// ---------------------------------------------------------------------------
// Permutation-symmetric shortcut

/// max |rho - SWAP_{01} rho SWAP_{01}| over entries.
inline double swap_asymmetry(const DensityMatrix& rho) {
  const SystemDescriptor& desc = rho.descriptor();
  if (desc.num_sites() < 2) return 0.0;
  const Index d = desc.local_dim();
  const Index s0 = desc.stride(0), s1 = desc.stride(1);
  std::vector<Index> perm(static_cast<std::size_t>(desc.dim()));
  for (Index n = 0; n < desc.dim(); ++n) {
    const Index t0 = (n / s0) % d, t1 = (n / s1) % d;
    perm[static_cast<std::size_t>(n)] = n + (t1 - t0) * s0 + (t0 - t1) * s1;
  }
  const CMatrix& m = rho.matrix();
  double worst = 0.0;
  for (Index j = 0; j < desc.dim(); ++j) {
    for (Index i = 0; i < desc.dim(); ++i) {
      worst = std::max(worst, std::abs(m(i, j) - m(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)])));
    }
  }
  return worst;
}

/// N lambda_max(D + (N-1) O) for site-diagonal block D and off-site block O;
/// the optimum over uniform fields.
inline double symmetric_value(const Eigen::Matrix3d& diag_block, const Eigen::Matrix3d& off_block, int num_sites) {
  Eigen::Matrix3d k = diag_block + (num_sites - 1.0) * off_block;
  k = 0.5 * (k + k.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(k);
  return num_sites * es.eigenvalues().maxCoeff();
}

/// 3N x 3N matrix with D on the site-diagonal blocks and O on all others.
inline RMatrix expand_symmetric(const Eigen::Matrix3d& diag_block, const Eigen::Matrix3d& off_block, int num_sites) {
  if (num_sites < 1) throw InvalidArgument("expand_symmetric: N must be >= 1");
  const Index n = num_sites;
  RMatrix m(3 * n, 3 * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m.block<3, 3>(3 * i, 3 * j) = i == j ? diag_block : off_block;
  }
  return 0.5 * (m + m.transpose());
}

/// Maximum over all direction fields of the block-symmetric form. The uniform
/// optimum can be beaten by fields that differ between sites (for instance
/// +n and -n on alternating sites gives N n.(D - O)n), so ascents start from
/// the uniform optimum, from that staggered field, and from opt.restarts
/// random fields.
inline MeasureResult symmetric_optimum(const Eigen::Matrix3d& diag_block, const Eigen::Matrix3d& off_block,
                                       int num_sites, MeasureKind kind, Convention convention,
                                       const OptimizerOptions& opt = {}) {
  const MeasureMatrix mm{kind, expand_symmetric(diag_block, off_block, num_sites), num_sites, 1,
                         kind_for(convention), convention};
  MeasureResult res = optimize_direction(mm, opt);
  auto top = [](Eigen::Matrix3d k) {
    k = 0.5 * (k + k.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(k);
    return Eigen::Vector3d(es.eigenvectors().col(2));
  };
  const Eigen::Vector3d u = top(diag_block + (num_sites - 1.0) * off_block);
  const Eigen::Vector3d st = top(diag_block - off_block);
  Eigen::VectorXd uniform(3 * num_sites), staggered(3 * num_sites);
  for (int i = 0; i < num_sites; ++i) {
    uniform.segment<3>(3 * i) = u;
    staggered.segment<3>(3 * i) = i % 2 == 0 ? st : Eigen::Vector3d(-st);
  }
  for (const Eigen::VectorXd& start : {uniform, staggered}) {
    const detail::Ascent run = detail::ascend(mm.values, start, opt.tol, opt.max_iterations);
    if (run.converged && run.value > res.value + 1e-9) {
      res.optimal_field = DirectionField::from_stacked(run.alpha);
      res.value = mm.quadratic_form(res.optimal_field);
      res.gradient_norm = run.grad_norm;
      res.best_restart_index = -1;
    }
  }
  return res;
}

/// Site-{0,1} blocks (D, O) of V or W for a permutation-symmetric state; the
/// remaining sites are never built.
inline std::pair<Eigen::Matrix3d, Eigen::Matrix3d> symmetric_blocks(const DensityMatrix& rho, MeasureKind kind,
                                                                    Convention convention) {
  const SystemDescriptor& desc = rho.descriptor();
  const double asym = swap_asymmetry(rho);
  if (asym > 1e-9) {
    throw InvalidState("symmetric_measure: state is not swap-invariant (deviation " + std::to_string(asym) + ")");
  }
  const std::vector<int> sites = desc.num_sites() >= 2 ? std::vector<int>{0, 1} : std::vector<int>{0};
  const OperatorKind ops = kind_for(convention);
  const RMatrix m = kind == MeasureKind::V ? detail::build_V_sites(rho, ops, convention, sites)
                                           : detail::build_W_sites(rho, ops, convention, sites);
  const Eigen::Matrix3d dblock = m.topLeftCorner<3, 3>();
  const Eigen::Matrix3d oblock = desc.num_sites() >= 2 ? Eigen::Matrix3d(m.block<3, 3>(0, 3)) : Eigen::Matrix3d::Zero();
  return {dblock, oblock};
}

/// I (MeasureKind::V) or F (MeasureKind::W) of a permutation-symmetric
/// state, optimized over all fields from the site-{0,1} blocks.
inline MeasureResult symmetric_measure(const DensityMatrix& rho, MeasureKind kind, Convention convention,
                                       const OptimizerOptions& opt = {}) {
  const auto [d, o] = symmetric_blocks(rho, kind, convention);
  return symmetric_optimum(d, o, rho.descriptor().num_sites(), kind, convention, opt);
}

// ---------------------------------------------------------------------------
// Dephasing

/// gamma (A rho A - (A^2 rho + rho A^2) / 2) for Hermitian A.
inline CMatrix dephasing_generator(const CMatrix& rho, const CMatrix& a, double gamma) {
  const CMatrix a2 = a * a;
  return gamma * (a * rho * a - 0.5 * (a2 * rho + rho * a2));
}

/// gamma Tr[rho^2 A^2 - rho A rho A] / (N s P), which equals
/// -(1 / (2 N s)) d/dt ln Tr rho^2 under dephasing_generator.
inline double dephasing_purity_rate(const DensityMatrix& rho, const DirectionField& field, OperatorKind kind,
                                    double gamma) {
  const Convention native = kind == OperatorKind::PauliOps ? Convention::QubitNormalized : Convention::Raw;
  return gamma * trace_form_I(rho, field, kind, native);
}

}  // namespace spinmacro
