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

// Transverse-field Ising chain H = -sum_j (lambda X_j X_{j+1} + Z_j).
//
// Thermodynamic-limit blocks of L sites come from the free-fermion solution:
// the Majorana correlation matrix Gamma (block Toeplitz in g_l), its
// canonical skew form V Gamma V^T = (+)_m nu_m [[0, 1], [-1, 0]], and
//   rho_L = prod_m (1 + i nu_m d_{2m} d_{2m+1}) / 2^L,   d = V c,
// which is the product of rho_m = (1-nu)/2 b b^dag + (1+nu)/2 b^dag b with
// b_m = (d_{2m} + i d_{2m+1}) / 2. Majoranas follow the Jordan-Wigner strings
// c_{2k} = Z_0..Z_{k-1} X_k and c_{2k+1} = Z_0..Z_{k-1} Y_k.
//
// Finite periodic chains (N <= 14) are solved by Lanczos in the even-parity
// sector.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "spinmacro/detail/parallel.hpp"
#include "spinmacro/macromeasure.hpp"
#include "spinmacro/numfmt.hpp"
#include "spinmacro/phasespace.hpp"
#include "spinmacro/spincore.hpp"

namespace spinmacro {

// ---------------------------------------------------------------------------
// Correlation matrix

namespace detail {

/// Composite Gauss-Legendre over [0, 2 pi] with panels graded geometrically
/// toward both endpoints (breakpoints pi 2^-k), `levels` grading levels and
/// `order` nodes per panel.
template <typename F>
Complex graded_integral(F&& f, int levels, int order) {
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  std::vector<double> cuts{0.0};
  for (int k = levels; k >= 1; --k) cuts.push_back(std::numbers::pi * std::ldexp(1.0, -k));
  cuts.push_back(std::numbers::pi);
  for (int k = 1; k <= levels; ++k) cuts.push_back(2.0 * std::numbers::pi - std::numbers::pi * std::ldexp(1.0, -k));
  cuts.push_back(2.0 * std::numbers::pi);
  Complex acc(0.0, 0.0);
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], b = cuts[p + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    Complex panel(0.0, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) panel += w[i] * f(mid + half * x[i]);
    acc += half * panel;
  }
  return acc;
}

}  // namespace detail

/// g_l = (1/2pi) int_0^{2pi} e^{-i l phi} (lambda e^{-i phi} - 1) / |lambda e^{-i phi} - 1| dphi.
inline Complex g_coefficient(double lambda, int l) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("g_coefficient: lambda must be > 0");
  auto f = [&](double phi) {
    const Complex z = lambda * std::polar(1.0, -phi) - 1.0;
    const double r = std::abs(z);
    const Complex unit = r > 0.0 ? z / r : Complex(0.0, 0.0);
    return std::polar(1.0, -static_cast<double>(l) * phi) * unit;
  };
  int levels = 8;
  int order = 16;
  Complex prev = detail::graded_integral(f, levels, order);
  for (int it = 0; it < 8; ++it) {
    levels += 8;
    order *= 2;
    const Complex next = detail::graded_integral(f, levels, order);
    if (std::abs(next - prev) < 1e-12) return next / (2.0 * std::numbers::pi);
    prev = next;
  }
  throw NumericalFailure("g_coefficient: quadrature did not converge to 1e-10", std::abs(prev) / (2.0 * std::numbers::pi));
}

/// 2L x 2L Majorana correlation matrix; block (m, n) is
/// Pi_{n-m} = [[0, g_{n-m}], [-g_{m-n}, 0]].
struct MajoranaCorrelation {
  int L = 0;
  RMatrix gamma;
};

inline MajoranaCorrelation gamma_matrix(double lambda, int L) {
  if (L < 1) throw InvalidArgument("gamma_matrix: L must be >= 1");
  std::vector<double> g(static_cast<std::size_t>(2 * L - 1));
  for (int l = 1 - L; l <= L - 1; ++l) {
    const Complex v = g_coefficient(lambda, l);
    if (std::abs(v.imag()) > 1e-10) throw NumericalFailure("g_coefficient has a non-negligible imaginary part");
    g[static_cast<std::size_t>(l + L - 1)] = v.real();
  }
  auto gl = [&](int l) { return g[static_cast<std::size_t>(l + L - 1)]; };
  RMatrix out = RMatrix::Zero(2 * L, 2 * L);
  for (int m = 0; m < L; ++m) {
    for (int n = 0; n < L; ++n) {
      out(2 * m, 2 * n + 1) = gl(n - m);
      out(2 * m + 1, 2 * n) = -gl(m - n);
    }
  }
  return {L, std::move(out)};
}

/// V Gamma V^T = (+)_m nu_m [[0, 1], [-1, 0]] with nu sorted descending and
/// nu_m >= 0.
struct CanonicalSkewForm {
  RMatrix V;
  Eigen::VectorXd nu;
};

inline CanonicalSkewForm canonical_skew_form(const RMatrix& gamma) {
  const Index n = gamma.rows();
  if (n != gamma.cols() || n % 2 != 0) throw InvalidArgument("canonical_skew_form: need an even square matrix");
  if ((gamma + gamma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, gamma.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("canonical_skew_form: matrix is not skew-symmetric");
  }
  Eigen::RealSchur<RMatrix> schur(gamma);
  if (schur.info() != Eigen::Success) throw NumericalFailure("canonical_skew_form: real Schur reduction failed");
  const RMatrix& u = schur.matrixU();
  const RMatrix& t = schur.matrixT();

  std::vector<std::pair<Index, Index>> pairs;
  std::vector<Index> singles;
  for (Index i = 0; i < n;) {
    if (i + 1 < n && std::abs(t(i + 1, i)) > 0.0) {
      pairs.emplace_back(i, i + 1);
      i += 2;
    } else {
      singles.push_back(i);
      i += 1;
    }
  }
  if (singles.size() % 2 != 0) throw NumericalFailure("canonical_skew_form: odd number of real eigenvalues");
  for (std::size_t k = 0; k + 1 < singles.size(); k += 2) pairs.emplace_back(singles[k], singles[k + 1]);

  struct Block {
    Eigen::VectorXd z1, z2;
    double nu;
  };
  std::vector<Block> blocks;
  for (const auto& [i, j] : pairs) {
    Eigen::VectorXd z1 = u.col(i), z2 = u.col(j);
    double beta = z1.dot(gamma * z2);
    if (beta < 0.0) {
      std::swap(z1, z2);
      beta = -beta;
    }
    blocks.push_back({std::move(z1), std::move(z2), beta});
  }
  std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.nu > b.nu; });
  CanonicalSkewForm out{RMatrix(n, n), Eigen::VectorXd(n / 2)};
  for (std::size_t m = 0; m < blocks.size(); ++m) {
    out.V.row(2 * static_cast<Index>(m)) = blocks[m].z1.transpose();
    out.V.row(2 * static_cast<Index>(m) + 1) = blocks[m].z2.transpose();
    out.nu(static_cast<Index>(m)) = blocks[m].nu;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Block density matrix

namespace detail {

/// Majorana combination d = sum_n v_n c_n on L qubits, stored as per-site
/// coefficient vectors: d |r'> picks up coef[k][r] at row r = r' xor bit(k).
struct MajoranaCombination {
  int L;
  std::vector<Eigen::VectorXcd> coef;
};

inline MajoranaCombination majorana_combination(int L, const Eigen::VectorXd& v) {
  const Index dim = Index{1} << L;
  MajoranaCombination d{L, {}};
  for (int k = 0; k < L; ++k) {
    const int bit = L - 1 - k;
    Eigen::VectorXcd c(dim);
    for (Index r = 0; r < dim; ++r) {
      // Z string over sites 0..k-1 (the bits above `bit`).
      const int ones = std::popcount(static_cast<std::uint64_t>(r >> (bit + 1)));
      const double z = (ones % 2 == 0) ? 1.0 : -1.0;
      const bool down = ((r >> bit) & 1) != 0;
      // <r|X|r^e> = 1, <r|Y|r^e> = -i for r_k = 0 and +i for r_k = 1.
      const Complex y = down ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
      c(r) = z * (v(2 * k) + v(2 * k + 1) * y);
    }
    d.coef.push_back(std::move(c));
  }
  return d;
}

/// Returns d * M.
inline CMatrix apply_majorana(const MajoranaCombination& d, const CMatrix& m) {
  const Index dim = m.rows();
  CMatrix out = CMatrix::Zero(dim, m.cols());
  for (int k = 0; k < d.L; ++k) {
    const Index e = Index{1} << (d.L - 1 - k);
    const Eigen::VectorXcd& c = d.coef[static_cast<std::size_t>(k)];
    for (Index j = 0; j < m.cols(); ++j) {
      const Complex* src = m.col(j).data();
      Complex* dst = out.col(j).data();
      for (Index r = 0; r < dim; ++r) dst[r] += c(r) * src[r ^ e];
    }
  }
  return out;
}

}  // namespace detail

/// rho_L = prod_m (1 + i nu_m d_{2m} d_{2m+1}) / 2^L for the block of L
/// contiguous sites of the infinite chain.
inline DensityMatrix block_rdm(double lambda, int L) {
  if (L < 1 || L > 12) throw InvalidArgument("block_rdm: L must lie in [1, 12]");
  const MajoranaCorrelation g = gamma_matrix(lambda, L);
  const CanonicalSkewForm form = canonical_skew_form(g.gamma);
  const Index dim = Index{1} << L;
  CMatrix m = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
  for (int mode = 0; mode < L; ++mode) {
    const double nu = form.nu(mode);
    if (nu == 0.0) continue;
    const auto d0 = detail::majorana_combination(L, form.V.row(2 * mode).transpose());
    const auto d1 = detail::majorana_combination(L, form.V.row(2 * mode + 1).transpose());
    m += Complex(0.0, nu) * detail::apply_majorana(d0, detail::apply_majorana(d1, m));
  }
  m = (0.5 * (m + m.adjoint())).eval();
  m /= m.trace().real();
  const SystemDescriptor desc(L, 1);
  try {
    check_density_invariants(m, StateTolerances{1e-12, 1e-10, 1e-8});
  } catch (const InvalidState& e) {
    throw NumericalFailure(std::string("block_rdm: ") + e.what());
  }
  return DensityMatrix::trusted(desc, std::move(m));
}

// ---------------------------------------------------------------------------
// Finite chains

struct GroundState {
  PureState state;
  double energy;
};

/// Ground state of the periodic chain in the even-parity (prod Z = +1)
/// sector, by Lanczos with full reorthogonalization from the uniform vector.
inline GroundState exact_ground_state(double lambda, int num_sites) {
  if (num_sites < 3 || num_sites > 14) throw InvalidArgument("exact_ground_state: N must lie in [3, 14]");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("exact_ground_state: lambda must be >= 0");
  const int n = num_sites;
  const Index full = Index{1} << n;
  std::vector<std::uint32_t> states;
  std::vector<Index> pos(static_cast<std::size_t>(full), -1);
  for (Index s = 0; s < full; ++s) {
    if (std::popcount(static_cast<std::uint32_t>(s)) % 2 == 0) {
      pos[static_cast<std::size_t>(s)] = static_cast<Index>(states.size());
      states.push_back(static_cast<std::uint32_t>(s));
    }
  }
  const Index dim = static_cast<Index>(states.size());
  std::vector<std::uint32_t> bonds;
  for (int j = 0; j < n; ++j) {
    const int a = n - 1 - j, b = n - 1 - (j + 1) % n;
    bonds.push_back((1u << a) | (1u << b));
  }
  auto apply_h = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(dim);
    for (Index i = 0; i < dim; ++i) {
      const std::uint32_t s = states[static_cast<std::size_t>(i)];
      y(i) = -(n - 2.0 * std::popcount(s)) * x(i);
    }
    if (lambda != 0.0) {
      for (Index i = 0; i < dim; ++i) {
        const std::uint32_t s = states[static_cast<std::size_t>(i)];
        double acc = 0.0;
        for (std::uint32_t mask : bonds) acc += x(pos[s ^ mask]);
        y(i) -= lambda * acc;
      }
    }
    return y;
  };

  const Index max_krylov = std::min<Index>(dim, 400);
  RMatrix q(dim, max_krylov);
  std::vector<double> alpha, beta;
  q.col(0) = Eigen::VectorXd::Ones(dim) / std::sqrt(static_cast<double>(dim));
  Eigen::VectorXd ritz;
  double energy = 0.0;
  Index used = 0;
  for (Index j = 0; j < max_krylov; ++j) {
    Eigen::VectorXd w = apply_h(q.col(j));
    alpha.push_back(q.col(j).dot(w));
    for (int pass = 0; pass < 2; ++pass) w -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * w);
    const double b = w.norm();
    used = j + 1;
    const bool exhausted = b < 1e-12 || used == max_krylov;
    if (used % 5 == 0 || exhausted) {
      RMatrix t = RMatrix::Zero(used, used);
      for (Index i = 0; i < used; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < used) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<RMatrix> es(t);
      energy = es.eigenvalues()(0);
      ritz = es.eigenvectors().col(0);
      if (exhausted || std::abs(b * ritz(used - 1)) < 1e-13 * std::max(1.0, std::abs(energy))) break;
    }
    beta.push_back(b);
    q.col(j + 1) = w / b;
  }
  Eigen::VectorXd v = q.leftCols(used) * ritz;
  v.normalize();
  const double resid = (apply_h(v) - energy * v).norm();
  if (resid > 1e-8) {
    throw NumericalFailure("exact_ground_state: Lanczos residual " + format_double(resid) + " above 1e-8");
  }
  CVector psi = CVector::Zero(full);
  for (Index i = 0; i < dim; ++i) psi(states[static_cast<std::size_t>(i)]) = v(i);
  return {PureState(SystemDescriptor(n, 1), std::move(psi)), energy};
}

// ---------------------------------------------------------------------------
// Observables and sweeps

/// <X_0 X_r> - <X_0><X_r> on block_rdm(lambda, r + 1).
inline double xx_correlation(double lambda, int r) {
  if (r < 1 || r + 1 > 12) throw InvalidArgument("xx_correlation: need 1 <= r <= 11");
  const DensityMatrix rho = block_rdm(lambda, r + 1);
  const SystemDescriptor& desc = rho.descriptor();
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  const CMatrix x0 = apply_site_left(desc, 0, x, rho.matrix());
  const CMatrix xr = apply_site_left(desc, r, x, rho.matrix());
  const CMatrix x0r = apply_site_left(desc, r, x, x0);
  const Complex both = x0r.trace(), a = x0.trace(), b = xr.trace();
  const Complex c = both - a * b;
  if (std::abs(c.imag()) > 1e-10) throw NumericalFailure("xx_correlation: complex correlator");
  return c.real();
}

struct SweepRecord {
  double lambda = 0.0;
  int L = 0;
  double I = 0.0;
  double F = 0.0;
  double purity = 0.0;
  DirectionField I_field{std::vector<Eigen::Vector3d>{}};
  DirectionField F_field{std::vector<Eigen::Vector3d>{}};
};

struct SweepOptions {
  OptimizerOptions optimizer;
  bool compute_F = true;
  unsigned threads = 0;
};

/// I and F (qubit-normalized) of rho_L over the grid; records sorted by (L, lambda).
inline std::vector<SweepRecord> sweep_block(const std::vector<double>& lambdas, const std::vector<int>& Ls,
                                            const SweepOptions& options = {}) {
  for (int L : Ls) {
    if (L < 1 || L > 12) throw InvalidArgument("sweep_block: L must lie in [1, 12]");
  }
  std::vector<SweepRecord> out;
  for (int L : Ls) {
    for (double lam : lambdas) {
      SweepRecord r;
      r.L = L;
      r.lambda = lam;
      out.push_back(r);
    }
  }
  std::sort(out.begin(), out.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return a.L != b.L ? a.L < b.L : a.lambda < b.lambda;
  });
  // Points run in parallel; each optimizer then runs its restarts serially.
  OptimizerOptions inner = options.optimizer;
  inner.threads = 1;
  detail::parallel_for(out.size(), options.threads, [&](std::size_t i) {
    SweepRecord& r = out[i];
    const DensityMatrix rho = block_rdm(r.lambda, r.L);
    r.purity = purity(rho);
    const MeasureResult mi = measure_I(rho, Convention::QubitNormalized, inner);
    r.I = mi.value;
    r.I_field = mi.optimal_field;
    if (options.compute_F) {
      const MeasureResult mf = measure_F(rho, Convention::QubitNormalized, inner);
      r.F = mf.value;
      r.F_field = mf.optimal_field;
    } else {
      r.F = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return out;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << "lambda,L,I,F,purity\n";
  for (const auto& r : records) {
    out << format_double(r.lambda) << ',' << r.L << ',' << format_double(r.I) << ','
        << (std::isnan(r.F) ? std::string() : format_double(r.F)) << ',' << format_double(r.purity) << '\n';
  }
}

struct ScalingPoint {
  int N = 0;
  double maxvar_per_particle = 0.0;
};

struct ScalingFit {
  std::vector<ScalingPoint> points;
  double exponent = 0.0;
};

/// Least-squares slope of ln x against ln y.
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("log_log_slope: need >= 2 matched points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("log_log_slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Fits maxVar(A)/N ~ N^exponent over exact ground states.
inline ScalingFit scaling_exponent(const std::vector<int>& Ns, double lambda, const OptimizerOptions& opt = {}) {
  ScalingFit fit;
  std::vector<double> xs, ys;
  for (int n : Ns) {
    if (n < 6 || n > 14) throw InvalidArgument("scaling_exponent: N must lie in [6, 14]");
    const GroundState gs = exact_ground_state(lambda, n);
    const double v = measure_pure(gs.state, Convention::QubitNormalized, opt).value;
    fit.points.push_back({n, v});
    xs.push_back(n);
    ys.push_back(v);
  }
  fit.exponent = log_log_slope(xs, ys);
  return fit;
}

inline void write_scaling_csv(std::ostream& out, const ScalingFit& fit) {
  out << "N,maxvar_per_particle\n";
  for (const auto& p : fit.points) out << p.N << ',' << format_double(p.maxvar_per_particle) << '\n';
}

}  // namespace spinmacro
