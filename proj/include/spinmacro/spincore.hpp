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

// Spin-system descriptors, single-site operators, density matrices and the
// canonical states used throughout the library.
//
// Basis convention: each site uses |S,m> ordered m = S, S-1, ..., -S (local
// index t <-> m = S - t). A multi-site basis index is row-major over sites
// with site 0 the slowest-varying digit. For qubits |0> = |1/2,1/2> (up) and
// |1> = |1/2,-1/2> (down).

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "spinmacro/error.hpp"
#include "spinmacro/rng.hpp"

namespace spinmacro {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Largest total dimension accepted for dense storage.
inline constexpr Index kMaxDenseDim = Index{1} << 20;

/// N sites of uniform spin S = twice_spin / 2.
class SystemDescriptor {
 public:
  SystemDescriptor(int num_sites, int twice_spin) : num_sites_(num_sites), twice_spin_(twice_spin) {
    if (num_sites < 1) throw InvalidArgument("SystemDescriptor: num_sites must be >= 1");
    if (twice_spin < 1) throw InvalidArgument("SystemDescriptor: twice_spin must be >= 1");
    const Index d = twice_spin + 1;
    Index total = 1;
    for (int i = 0; i < num_sites; ++i) {
      if (total > kMaxDenseDim / d) {
        throw InvalidArgument("SystemDescriptor: dimension exceeds the dense limit 2^20");
      }
      total *= d;
    }
    dim_ = total;
  }

  int num_sites() const noexcept { return num_sites_; }
  int twice_spin() const noexcept { return twice_spin_; }
  double spin() const noexcept { return 0.5 * twice_spin_; }
  Index local_dim() const noexcept { return twice_spin_ + 1; }
  Index dim() const noexcept { return dim_; }

  /// Index distance between basis states differing by one in the digit of `site`.
  Index stride(int site) const {
    check_site(site);
    Index s = 1;
    for (int i = site + 1; i < num_sites_; ++i) s *= local_dim();
    return s;
  }

  /// Local index (0 <=> m = S) of `site` within basis state `index`.
  Index digit(Index index, int site) const { return (index / stride(site)) % local_dim(); }

  void check_site(int site) const {
    if (site < 0 || site >= num_sites_) {
      throw InvalidArgument("site index " + std::to_string(site) + " out of range [0, " +
                            std::to_string(num_sites_) + ")");
    }
  }

  friend bool operator==(const SystemDescriptor& a, const SystemDescriptor& b) {
    return a.num_sites_ == b.num_sites_ && a.twice_spin_ == b.twice_spin_;
  }

 private:
  int num_sites_;
  int twice_spin_;
  Index dim_ = 1;
};

// ---------------------------------------------------------------------------
// Validation

struct StateTolerances {
  double hermitian_rel = 1e-12;
  double trace = 1e-10;
  double psd = 1e-10;
};

/// Throws InvalidState unless `m` is Hermitian, unit-trace and positive
/// semidefinite within `tol`. Positivity is tested with a Cholesky
/// factorization of m + tol.psd * Id, which succeeds iff the smallest
/// eigenvalue exceeds -tol.psd (up to backward error).
inline void check_density_invariants(const CMatrix& m, const StateTolerances& tol = {}) {
  if (m.rows() != m.cols()) throw InvalidState("density matrix is not square");
  const double scale = m.cwiseAbs().maxCoeff();
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!(herm <= tol.hermitian_rel * std::max(scale, 1e-300))) {
    throw InvalidState("density matrix is not Hermitian (residual " + std::to_string(herm) + ")");
  }
  const Complex tr = m.trace();
  if (!(std::abs(tr - Complex(1.0, 0.0)) <= tol.trace)) {
    throw InvalidState("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  }
  CMatrix shifted = 0.5 * (m + m.adjoint());
  shifted.diagonal().array() += tol.psd;
  Eigen::LLT<CMatrix> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw InvalidState("density matrix is not positive semidefinite");
  }
}

/// Hermitian, unit-trace, PSD operator on a described system.
class DensityMatrix {
 public:
  DensityMatrix(SystemDescriptor desc, CMatrix entries) : desc_(desc), rho_(std::move(entries)) {
    if (rho_.rows() != desc_.dim() || rho_.cols() != desc_.dim()) {
      throw InvalidState("density matrix shape does not match descriptor dimension " +
                         std::to_string(desc_.dim()));
    }
    check_density_invariants(rho_);
    rho_ = (0.5 * (rho_ + rho_.adjoint())).eval();
  }

  /// Skips the PSD factorization; for constructions that are positive by
  /// design (Gram products, projectors). Hermiticity and trace are still
  /// enforced.
  static DensityMatrix trusted(SystemDescriptor desc, CMatrix entries) {
    DensityMatrix out(desc);
    if (entries.rows() != desc.dim() || entries.cols() != desc.dim()) {
      throw InvalidState("density matrix shape does not match descriptor");
    }
    out.rho_ = (0.5 * (entries + entries.adjoint())).eval();
    const double tr = out.rho_.trace().real();
    if (std::abs(tr - 1.0) > 1e-10) throw InvalidState("trusted density matrix has trace != 1");
    return out;
  }

  const SystemDescriptor& descriptor() const noexcept { return desc_; }
  const CMatrix& matrix() const noexcept { return rho_; }
  Index dim() const noexcept { return desc_.dim(); }

 private:
  explicit DensityMatrix(SystemDescriptor desc) : desc_(desc) {}

  SystemDescriptor desc_;
  CMatrix rho_;
};

/// Normalized state vector; the dense-free counterpart of a rank-1
/// DensityMatrix for dimensions where D x D storage is impractical.
class PureState {
 public:
  PureState(SystemDescriptor desc, CVector psi) : desc_(desc), psi_(std::move(psi)) {
    if (psi_.size() != desc_.dim()) throw InvalidState("PureState: vector length mismatch");
    const double n = psi_.norm();
    if (!(n > 0.0)) throw InvalidState("PureState: zero vector");
    psi_ /= n;
  }

  const SystemDescriptor& descriptor() const noexcept { return desc_; }
  const CVector& vector() const noexcept { return psi_; }

 private:
  SystemDescriptor desc_;
  CVector psi_;
};

// ---------------------------------------------------------------------------
// Direction fields

/// One unit 3-vector per site.
class DirectionField {
 public:
  explicit DirectionField(std::vector<Eigen::Vector3d> vectors) : vectors_(std::move(vectors)) {
    for (const auto& v : vectors_) {
      if (!(std::abs(v.norm() - 1.0) <= 1e-12)) {
        throw InvalidArgument("DirectionField: vectors must have unit norm");
      }
    }
  }

  /// Normalizes each vector; rejects zero vectors.
  static DirectionField normalized(std::vector<Eigen::Vector3d> vectors) {
    for (auto& v : vectors) {
      const double n = v.norm();
      if (!(n > 0.0)) throw InvalidArgument("DirectionField: zero vector");
      v /= n;
    }
    return DirectionField(std::move(vectors));
  }

  static DirectionField uniform(int num_sites, const Eigen::Vector3d& direction) {
    return normalized(std::vector<Eigen::Vector3d>(static_cast<std::size_t>(num_sites), direction));
  }

  /// Reads a stacked 3N vector (x0, y0, z0, x1, ...).
  static DirectionField from_stacked(const Eigen::VectorXd& stacked) {
    if (stacked.size() % 3 != 0) throw InvalidArgument("DirectionField: length not a multiple of 3");
    std::vector<Eigen::Vector3d> v(static_cast<std::size_t>(stacked.size() / 3));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = stacked.segment<3>(3 * static_cast<Index>(i));
    return normalized(std::move(v));
  }

  int size() const noexcept { return static_cast<int>(vectors_.size()); }
  const Eigen::Vector3d& operator[](int i) const { return vectors_.at(static_cast<std::size_t>(i)); }
  const std::vector<Eigen::Vector3d>& vectors() const noexcept { return vectors_; }

  Eigen::VectorXd stacked() const {
    Eigen::VectorXd out(3 * size());
    for (int i = 0; i < size(); ++i) out.segment<3>(3 * i) = vectors_[static_cast<std::size_t>(i)];
    return out;
  }

 private:
  std::vector<Eigen::Vector3d> vectors_;
};

// ---------------------------------------------------------------------------
// Single-site operators

enum class OperatorKind {
  SpinOps,   ///< S_x, S_y, S_z; operator norm S.
  PauliOps,  ///< sigma_x, sigma_y, sigma_z (spin-1/2 only); operator norm 1.
};

inline const char* to_string(OperatorKind kind) {
  return kind == OperatorKind::SpinOps ? "spin" : "pauli";
}

struct SpinMatrices {
  CMatrix x, y, z;
  CMatrix plus, minus;
};

/// Spin matrices on |S,m>, m = S..-S, from the ladder relations
/// <m+1|S_+|m> = sqrt(S(S+1) - m(m+1)).
inline SpinMatrices spin_matrices(int twice_spin) {
  if (twice_spin < 1) throw InvalidArgument("spin_matrices: twice_spin must be >= 1");
  const Index d = twice_spin + 1;
  const double s = 0.5 * twice_spin;
  SpinMatrices out;
  out.z = CMatrix::Zero(d, d);
  out.plus = CMatrix::Zero(d, d);
  for (Index t = 0; t < d; ++t) {
    const double m = s - static_cast<double>(t);
    out.z(t, t) = m;
    if (t > 0) out.plus(t - 1, t) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
  }
  out.minus = out.plus.adjoint();
  out.x = 0.5 * (out.plus + out.minus);
  out.y = (out.plus - out.minus) / (2.0 * kI);
  return out;
}

/// Operator norm of one component of the site operator set.
inline double site_operator_norm(OperatorKind kind, int twice_spin) {
  return kind == OperatorKind::SpinOps ? 0.5 * twice_spin : 1.0;
}

inline void check_kind(OperatorKind kind, int twice_spin) {
  if (kind == OperatorKind::PauliOps && twice_spin != 1) {
    throw InvalidArgument("PauliOps requires spin-1/2 sites (twice_spin = 1)");
  }
}

/// (A_x, A_y, A_z) for one site.
inline std::array<CMatrix, 3> site_operators(int twice_spin, OperatorKind kind) {
  check_kind(kind, twice_spin);
  SpinMatrices s = spin_matrices(twice_spin);
  const double f = kind == OperatorKind::PauliOps ? 2.0 : 1.0;
  return {f * s.x, f * s.y, f * s.z};
}

// ---------------------------------------------------------------------------
// Site-local application without forming D x D embeddings

namespace detail {

/// Calls f(base) for every basis index whose digit at `site` is zero.
template <typename F>
void for_each_fiber(const SystemDescriptor& desc, int site, F&& f) {
  const Index stride = desc.stride(site);
  const Index block = stride * desc.local_dim();
  for (Index hi = 0; hi < desc.dim(); hi += block) {
    for (Index lo = 0; lo < stride; ++lo) f(hi + lo);
  }
}

}  // namespace detail

/// Returns X * M with X = Id (x) local (x) Id acting on `site`.
inline CMatrix apply_site_left(const SystemDescriptor& desc, int site, const CMatrix& local,
                               const CMatrix& m) {
  const Index d = desc.local_dim();
  const Index stride = desc.stride(site);
  if (local.rows() != d || local.cols() != d) throw InvalidArgument("apply_site_left: local shape");
  if (m.rows() != desc.dim()) throw InvalidArgument("apply_site_left: operand shape");
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  detail::for_each_fiber(desc, site, [&](Index base) {
    for (Index s = 0; s < d; ++s) {
      for (Index t = 0; t < d; ++t) {
        const Complex c = local(s, t);
        if (c == Complex(0.0, 0.0)) continue;
        out.row(base + s * stride) += c * m.row(base + t * stride);
      }
    }
  });
  return out;
}

/// Returns M * X with X = Id (x) local (x) Id acting on `site`.
inline CMatrix apply_site_right(const SystemDescriptor& desc, int site, const CMatrix& local,
                                const CMatrix& m) {
  const Index d = desc.local_dim();
  const Index stride = desc.stride(site);
  if (local.rows() != d || local.cols() != d) throw InvalidArgument("apply_site_right: local shape");
  if (m.cols() != desc.dim()) throw InvalidArgument("apply_site_right: operand shape");
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  detail::for_each_fiber(desc, site, [&](Index base) {
    for (Index s = 0; s < d; ++s) {
      for (Index t = 0; t < d; ++t) {
        const Complex c = local(t, s);
        if (c == Complex(0.0, 0.0)) continue;
        out.col(base + s * stride) += c * m.col(base + t * stride);
      }
    }
  });
  return out;
}

/// Dense Id (x) ... (x) local (x) ... (x) Id.
inline CMatrix embed_site(const SystemDescriptor& desc, int site, const CMatrix& local) {
  desc.check_site(site);
  return apply_site_left(desc, site, local, CMatrix::Identity(desc.dim(), desc.dim()));
}

/// A = sum_j alpha^(j) . (A_x, A_y, A_z)^(j).
inline CMatrix collective_operator(const SystemDescriptor& desc, const DirectionField& field,
                                   OperatorKind kind) {
  if (field.size() != desc.num_sites()) {
    throw InvalidArgument("collective_operator: field has " + std::to_string(field.size()) +
                          " vectors for " + std::to_string(desc.num_sites()) + " sites");
  }
  const auto ops = site_operators(desc.twice_spin(), kind);
  CMatrix a = CMatrix::Zero(desc.dim(), desc.dim());
  for (int j = 0; j < desc.num_sites(); ++j) {
    const Eigen::Vector3d& v = field[j];
    const CMatrix local = v.x() * ops[0] + v.y() * ops[1] + v.z() * ops[2];
    a += embed_site(desc, j, local);
  }
  return a;
}

// ---------------------------------------------------------------------------
// Density-matrix utilities

/// Tr rho^2, computed as the squared Frobenius norm of the Hermitian matrix.
inline double purity(const DensityMatrix& rho) { return rho.matrix().squaredNorm(); }

/// Reduced state on the sites in `keep` (any order; the result orders them
/// ascending).
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  const SystemDescriptor& desc = rho.descriptor();
  if (keep.empty()) throw InvalidArgument("partial_trace: keep set is empty");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw InvalidArgument("partial_trace: duplicate site in keep set");
  }
  for (int s : keep) desc.check_site(s);
  const int n = desc.num_sites();
  if (static_cast<int>(keep.size()) == n) return rho;

  std::vector<int> traced;
  for (int s = 0; s < n; ++s) {
    if (!std::binary_search(keep.begin(), keep.end(), s)) traced.push_back(s);
  }
  // offsets[k] = full-space index contribution of sub-index k over `sites`.
  auto offsets = [&](const std::vector<int>& sites) {
    Index count = 1;
    for (std::size_t i = 0; i < sites.size(); ++i) count *= desc.local_dim();
    std::vector<Index> off(static_cast<std::size_t>(count), 0);
    for (Index k = 0; k < count; ++k) {
      Index rem = k;
      Index value = 0;
      for (std::size_t i = sites.size(); i-- > 0;) {
        value += (rem % desc.local_dim()) * desc.stride(sites[i]);
        rem /= desc.local_dim();
      }
      off[static_cast<std::size_t>(k)] = value;
    }
    return off;
  };
  const std::vector<Index> kept_off = offsets(keep);
  const std::vector<Index> traced_off = offsets(traced);
  const Index dk = static_cast<Index>(kept_off.size());
  CMatrix out = CMatrix::Zero(dk, dk);
  const CMatrix& m = rho.matrix();
  for (Index b = 0; b < dk; ++b) {
    for (Index a = 0; a < dk; ++a) {
      Complex acc(0.0, 0.0);
      for (Index t : traced_off) acc += m(kept_off[static_cast<std::size_t>(a)] + t,
                                          kept_off[static_cast<std::size_t>(b)] + t);
      out(a, b) = acc;
    }
  }
  return DensityMatrix::trusted(SystemDescriptor(static_cast<int>(keep.size()), desc.twice_spin()),
                                std::move(out));
}

// ---------------------------------------------------------------------------
// Canonical states

inline DensityMatrix to_density(const PureState& state) {
  return DensityMatrix::trusted(state.descriptor(), state.vector() * state.vector().adjoint());
}

inline DensityMatrix pure_state(const SystemDescriptor& desc, const CVector& psi) {
  if (psi.size() != desc.dim()) throw InvalidArgument("pure_state: vector length mismatch");
  const double n = psi.norm();
  if (!(n > 0.0)) throw InvalidArgument("pure_state: zero vector");
  const CVector u = psi / n;
  return DensityMatrix::trusted(desc, u * u.adjoint());
}

inline DensityMatrix maximally_mixed(const SystemDescriptor& desc) {
  return DensityMatrix::trusted(
      desc, CMatrix::Identity(desc.dim(), desc.dim()) / static_cast<double>(desc.dim()));
}

/// Kronecker product of per-site vectors (site 0 first).
inline CVector product_vector(const std::vector<CVector>& sites) {
  CVector out = CVector::Ones(1);
  for (const CVector& v : sites) {
    CVector next(out.size() * v.size());
    for (Index i = 0; i < out.size(); ++i) next.segment(i * v.size(), v.size()) = out(i) * v;
    out = std::move(next);
  }
  return out;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline CMatrix kron_power(const CMatrix& a, int n) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, a);
  return out;
}

/// (|S,S>^N + |S,-S>^N)/sqrt(2).
inline DensityMatrix ghz_state(int num_sites, int twice_spin) {
  const SystemDescriptor desc(num_sites, twice_spin);
  CVector psi = CVector::Zero(desc.dim());
  psi(0) += 1.0;
  psi(desc.dim() - 1) += 1.0;
  return pure_state(desc, psi);
}

/// Mixed GHZ family on N qubits:
/// (|0><0|^N + |e><e|^N + gamma |0><e|^N + gamma |e><0|^N) / (2(1 + gamma cos^N eps))
/// with |e> = cos(eps)|0> + sin(eps)|1>.
inline DensityMatrix mixed_ghz(int num_sites, double eps, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("mixed_ghz: gamma must lie in [0, 1]");
  const SystemDescriptor desc(num_sites, 1);
  CVector zero = CVector::Zero(2);
  zero(0) = 1.0;
  CVector tilted(2);
  tilted << std::cos(eps), std::sin(eps);
  const CVector z = product_vector(std::vector<CVector>(static_cast<std::size_t>(num_sites), zero));
  const CVector e = product_vector(std::vector<CVector>(static_cast<std::size_t>(num_sites), tilted));
  CMatrix m = z * z.adjoint() + e * e.adjoint() + gamma * (z * e.adjoint() + e * z.adjoint());
  const double norm = 2.0 * (1.0 + gamma * std::pow(std::cos(eps), num_sites));
  return DensityMatrix(desc, m / norm);
}

/// Metrology benchmark state on N qubits. Site 0 carries the 2x2 block label;
/// the blocks are (N-1)-fold Kronecker powers built from
/// rho0 = ((1+p)|0><0| + (1-p)|1><1|)/2.
inline DensityMatrix metrology_state(int num_sites, double p) {
  if (num_sites < 2) throw InvalidArgument("metrology_state: needs at least 2 qubits");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("metrology_state: p must lie in [0, 1]");
  const int n = num_sites - 1;
  CMatrix rho0 = CMatrix::Zero(2, 2);
  rho0(0, 0) = 0.5 * (1.0 + p);
  rho0(1, 1) = 0.5 * (1.0 - p);
  CMatrix sx = CMatrix::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  const CMatrix a = kron_power(rho0, n);
  const CMatrix b = p * kron_power(rho0 * sx, n);
  const CMatrix c = p * kron_power(sx * rho0, n);
  const CMatrix dd = kron_power(sx * rho0 * sx, n);
  const Index h = a.rows();
  CMatrix m(2 * h, 2 * h);
  m.topLeftCorner(h, h) = a;
  m.topRightCorner(h, h) = b;
  m.bottomLeftCorner(h, h) = c;
  m.bottomRightCorner(h, h) = dd;
  return DensityMatrix(SystemDescriptor(num_sites, 1), 0.5 * m);
}

/// a * (|00><00| + |11><11|)/2 + (1 - a) * Bell projector.
inline DensityMatrix mixed_bell(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("mixed_bell: a must lie in [0, 1]");
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(3, 3) = 0.5;
  m(0, 3) = m(3, 0) = 0.5 * (1.0 - a);
  return DensityMatrix(SystemDescriptor(2, 1), m);
}

/// Single spin-S cat family (|S,S><S,S| + |S,-S><S,-S| + gamma(|S,S><S,-S| + h.c.))/2.
inline DensityMatrix spin_cat_state(int twice_spin, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("spin_cat_state: gamma must lie in [0, 1]");
  const SystemDescriptor desc(1, twice_spin);
  const Index d = desc.dim();
  CMatrix m = CMatrix::Zero(d, d);
  m(0, 0) += 0.5;
  m(d - 1, d - 1) += 0.5;
  m(0, d - 1) += 0.5 * gamma;
  m(d - 1, 0) += 0.5 * gamma;
  return DensityMatrix(desc, m);
}

/// Ginibre-induced random state: G is D x rank with i.i.d. standard complex
/// normal entries (re, im each N(0, 1/2)), filled column-major from
/// Rng(seed); rho = G G^dag / Tr(G G^dag).
inline DensityMatrix random_density(const SystemDescriptor& desc, Index rank, std::uint64_t seed) {
  if (rank < 1 || rank > desc.dim()) {
    throw InvalidArgument("random_density: rank must lie in [1, " + std::to_string(desc.dim()) + "]");
  }
  Rng rng(seed);
  CMatrix g(desc.dim(), rank);
  const double s = std::sqrt(0.5);
  for (Index j = 0; j < rank; ++j) {
    for (Index i = 0; i < desc.dim(); ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(s * re, s * im);
    }
  }
  CMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix::trusted(desc, std::move(m));
}

/// Haar-random pure state (normalized complex Gaussian vector).
inline DensityMatrix random_pure(const SystemDescriptor& desc, std::uint64_t seed) {
  return random_density(desc, 1, seed);
}

}  // namespace spinmacro
