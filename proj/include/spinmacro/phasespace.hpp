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

// Single-spin phase space: Clebsch-Gordan coefficients, irreducible tensor
// operators T_{L,M}, the characteristic function chi_{L,M} = Tr[T^dag rho],
// Wigner grids on the sphere and the two equivalent forms of I_z.
//
// Half-integer quantum numbers are passed as doubled integers throughout
// (j = twice_j / 2) so no floating-point equality is ever needed on them.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "spinmacro/numfmt.hpp"
#include "spinmacro/spincore.hpp"

namespace spinmacro {

namespace detail {

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace detail

/// <j1 m1; j2 m2 | J M> in the Condon-Shortley convention (Racah formula),
/// all arguments doubled. Returns 0 when the selection rules fail.
inline double clebsch_gordan(int tj1, int tm1, int tj2, int tm2, int tJ, int tM) {
  if (tj1 < 0 || tj2 < 0 || tJ < 0) throw InvalidArgument("clebsch_gordan: negative angular momentum");
  auto parity_ok = [](int tj, int tm) { return ((tj - tm) % 2 + 2) % 2 == 0 && std::abs(tm) <= tj; };
  if (!parity_ok(tj1, tm1) || !parity_ok(tj2, tm2) || !parity_ok(tJ, tM)) return 0.0;
  if (tm1 + tm2 != tM) return 0.0;
  if (tJ < std::abs(tj1 - tj2) || tJ > tj1 + tj2 || (tj1 + tj2 + tJ) % 2 != 0) return 0.0;

  const int a = (tj1 + tj2 - tJ) / 2;
  const int b = (tj1 - tm1) / 2;
  const int c = (tj2 + tm2) / 2;
  const int d = (tJ - tj2 + tm1) / 2;
  const int e = (tJ - tj1 - tm2) / 2;
  using detail::log_factorial;
  const double log_pre =
      0.5 * (std::log(tJ + 1.0) + log_factorial((tJ + tj1 - tj2) / 2) +
             log_factorial((tJ - tj1 + tj2) / 2) + log_factorial(a) -
             log_factorial((tj1 + tj2 + tJ) / 2 + 1) + log_factorial((tJ + tM) / 2) +
             log_factorial((tJ - tM) / 2) + log_factorial((tj1 - tm1) / 2) +
             log_factorial((tj1 + tm1) / 2) + log_factorial((tj2 - tm2) / 2) +
             log_factorial((tj2 + tm2) / 2));
  const int kmin = std::max({0, -d, -e});
  const int kmax = std::min({a, b, c});
  double sum = 0.0;
  double comp = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double log_den = log_factorial(k) + log_factorial(a - k) + log_factorial(b - k) +
                           log_factorial(c - k) + log_factorial(d + k) + log_factorial(e + k);
    const double term = (k % 2 == 0 ? 1.0 : -1.0) * std::exp(log_pre - log_den);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

/// <S,m'| T_{L,M} |S,m> = sqrt((2L+1)/(2S+1)) <S m; L M | S m'>.
inline CMatrix irreducible_tensor(int twice_spin, int L, int M) {
  if (twice_spin < 1) throw InvalidArgument("irreducible_tensor: twice_spin must be >= 1");
  if (L < 0 || L > twice_spin || std::abs(M) > L) {
    throw InvalidArgument("irreducible_tensor: need 0 <= L <= 2S and |M| <= L");
  }
  const Index d = twice_spin + 1;
  const double f = std::sqrt((2.0 * L + 1.0) / (twice_spin + 1.0));
  CMatrix t = CMatrix::Zero(d, d);
  for (Index col = 0; col < d; ++col) {
    const int tm = twice_spin - 2 * static_cast<int>(col);
    const int tmp = tm + 2 * M;
    if (std::abs(tmp) > twice_spin) continue;
    const Index row = (twice_spin - tmp) / 2;
    t(row, col) = f * clebsch_gordan(twice_spin, tm, 2 * L, 2 * M, twice_spin, tmp);
  }
  return t;
}

/// chi_{L,M} for 0 <= L <= 2S, -L <= M <= L, stored at L*L + L + M.
class CharacteristicTable {
 public:
  CharacteristicTable(int twice_spin, std::vector<Complex> values)
      : twice_spin_(twice_spin), values_(std::move(values)) {
    const std::size_t expected = static_cast<std::size_t>((twice_spin + 1) * (twice_spin + 1));
    if (values_.size() != expected) throw InvalidArgument("CharacteristicTable: wrong entry count");
  }

  int twice_spin() const noexcept { return twice_spin_; }
  int max_l() const noexcept { return twice_spin_; }

  static std::size_t offset(int L, int M) { return static_cast<std::size_t>(L * L + L + M); }

  const Complex& operator()(int L, int M) const {
    if (L < 0 || L > twice_spin_ || std::abs(M) > L) throw InvalidArgument("chi index out of range");
    return values_[offset(L, M)];
  }
  const std::vector<Complex>& values() const noexcept { return values_; }

 private:
  int twice_spin_;
  std::vector<Complex> values_;
};

/// chi_{L,M} = Tr[T_{L,M}^dag f] for an arbitrary single-spin operator f.
inline CharacteristicTable characteristic_table(int twice_spin, const CMatrix& f) {
  const Index d = twice_spin + 1;
  if (f.rows() != d || f.cols() != d) throw InvalidArgument("characteristic_table: operator shape");
  std::vector<Complex> values(static_cast<std::size_t>(d * d));
  for (int L = 0; L <= twice_spin; ++L) {
    for (int M = -L; M <= L; ++M) {
      const CMatrix t = irreducible_tensor(twice_spin, L, M);
      values[CharacteristicTable::offset(L, M)] = (t.adjoint() * f).trace();
    }
  }
  return CharacteristicTable(twice_spin, std::move(values));
}

inline CharacteristicTable characteristic_table(const DensityMatrix& rho) {
  if (rho.descriptor().num_sites() != 1) {
    throw InvalidArgument("characteristic_table: single-spin state required");
  }
  return characteristic_table(rho.descriptor().twice_spin(), rho.matrix());
}

/// Orthonormal spherical harmonic with the Condon-Shortley phase.
inline Complex spherical_harmonic(int L, int M, double theta, double phi) {
  if (L < 0 || std::abs(M) > L) throw InvalidArgument("spherical_harmonic: index out of range");
  const unsigned am = static_cast<unsigned>(std::abs(M));
  const double p = std::sph_legendre(static_cast<unsigned>(L), am, theta);
  const Complex y = p * std::polar(1.0, static_cast<double>(am) * phi);
  if (M >= 0) return y;
  return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
}

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw InvalidArgument("gauss_legendre: n must be >= 1");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

/// Gauss-Legendre in cos(theta) times the trapezoid rule in phi.
struct GridSpec {
  int n_theta = 0;
  int n_phi = 0;

  static GridSpec defaults(int twice_spin) { return {twice_spin + 2, 2 * twice_spin + 4}; }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

class WignerGrid {
 public:
  WignerGrid(int twice_spin, GridSpec spec, RMatrix values) : twice_spin_(twice_spin), spec_(spec) {
    if (spec.n_theta < 1 || spec.n_phi < 1) throw InvalidArgument("WignerGrid: empty grid");
    if (values.rows() != spec.n_theta || values.cols() != spec.n_phi) {
      throw InvalidArgument("WignerGrid: value shape does not match spec");
    }
    values_ = std::move(values);
    std::vector<double> x;
    gauss_legendre(spec.n_theta, x, theta_weights_);
    // Nodes ascend in cos(theta); store theta ascending instead.
    theta_.resize(x.size());
    for (std::size_t a = 0; a < x.size(); ++a) theta_[a] = std::acos(x[x.size() - 1 - a]);
    std::reverse(theta_weights_.begin(), theta_weights_.end());
  }

  int twice_spin() const noexcept { return twice_spin_; }
  const GridSpec& spec() const noexcept { return spec_; }
  const RMatrix& values() const noexcept { return values_; }
  double theta(int a) const { return theta_.at(static_cast<std::size_t>(a)); }
  double phi(int b) const { return 2.0 * std::numbers::pi * b / spec_.n_phi; }
  /// Solid-angle quadrature weight of node (a, b).
  double weight(int a) const {
    return theta_weights_.at(static_cast<std::size_t>(a)) * 2.0 * std::numbers::pi / spec_.n_phi;
  }

  /// Quadrature of the product of two grids over the sphere.
  double integrate(const RMatrix& f) const {
    if (f.rows() != spec_.n_theta || f.cols() != spec_.n_phi) throw InvalidArgument("grid mismatch");
    double acc = 0.0;
    for (int a = 0; a < spec_.n_theta; ++a) acc += weight(a) * f.row(a).sum();
    return acc;
  }

 private:
  int twice_spin_;
  GridSpec spec_;
  RMatrix values_;
  std::vector<double> theta_;
  std::vector<double> theta_weights_;
};

/// W(n) = sqrt(4 pi / (2S+1)) sum_{L,M} chi_{L,M} Y_{L,M}(n) at every node.
inline WignerGrid wigner_grid(const CharacteristicTable& table, GridSpec spec) {
  const int ts = table.twice_spin();
  if (spec.n_theta < ts + 1) {
    throw InvalidArgument("wigner_grid: n_theta = " + std::to_string(spec.n_theta) +
                          " undersamples spin " + std::to_string(ts) + "/2 (need >= 2S+1)");
  }
  if (spec.n_phi < 2 * ts + 1) {
    throw InvalidArgument("wigner_grid: n_phi must be >= 4S+1 for alias-free synthesis");
  }
  WignerGrid grid(ts, spec, RMatrix::Zero(spec.n_theta, spec.n_phi));
  const double f = std::sqrt(4.0 * std::numbers::pi / (ts + 1.0));
  RMatrix values(spec.n_theta, spec.n_phi);
  double scale = 0.0;
  double residue = 0.0;
  for (int a = 0; a < spec.n_theta; ++a) {
    for (int b = 0; b < spec.n_phi; ++b) {
      Complex w(0.0, 0.0);
      for (int L = 0; L <= ts; ++L) {
        for (int M = -L; M <= L; ++M) w += table(L, M) * spherical_harmonic(L, M, grid.theta(a), grid.phi(b));
      }
      w *= f;
      values(a, b) = w.real();
      scale = std::max(scale, std::abs(w.real()));
      residue = std::max(residue, std::abs(w.imag()));
    }
  }
  if (residue > 1e-10 * std::max(scale, 1.0)) {
    throw InvalidArgument("wigner_grid: table is not Hermitian (imaginary residue " +
                          std::to_string(residue) + ")");
  }
  return WignerGrid(ts, spec, std::move(values));
}

inline WignerGrid wigner_grid(const CharacteristicTable& table) {
  return wigner_grid(table, GridSpec::defaults(table.twice_spin()));
}

/// L_z^2 = -d^2/dphi^2 applied row-wise through a discrete Fourier transform.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> apply_lz2(
    const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  const Index rows = values.rows();
  const Index n = values.cols();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(rows, n);
  std::vector<Complex> twiddle(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) twiddle[static_cast<std::size_t>(k)] = std::polar(1.0, -2.0 * std::numbers::pi * k / n);
  std::vector<Complex> coeff(static_cast<std::size_t>(n));
  for (Index r = 0; r < rows; ++r) {
    for (Index k = 0; k < n; ++k) {
      Complex acc(0.0, 0.0);
      for (Index j = 0; j < n; ++j) acc += Complex(values(r, j)) * twiddle[static_cast<std::size_t>((k * j) % n)];
      Index freq = k <= n / 2 ? k : k - n;
      if (2 * k == n) freq = 0;  // Nyquist bin carries no band-limited content.
      coeff[static_cast<std::size_t>(k)] = acc * static_cast<double>(freq * freq) / static_cast<double>(n);
    }
    for (Index j = 0; j < n; ++j) {
      Complex acc(0.0, 0.0);
      for (Index k = 0; k < n; ++k) acc += coeff[static_cast<std::size_t>(k)] * std::conj(twiddle[static_cast<std::size_t>((k * j) % n)]);
      if constexpr (std::is_same_v<Scalar, double>) {
        out(r, j) = acc.real();
      } else {
        out(r, j) = acc;
      }
    }
  }
  return out;
}

inline WignerGrid apply_lz2(const WignerGrid& grid) {
  return WignerGrid(grid.twice_spin(), grid.spec(), apply_lz2(grid.values()));
}

/// Sum over |chi_{L,M}|^2, which equals Tr rho^2.
inline double purity_from_characteristic(const CharacteristicTable& table) {
  double acc = 0.0;
  for (const Complex& c : table.values()) acc += std::norm(c);
  return acc;
}

/// I_z = (1 / 2S P) sum M^2 |chi_{L,M}|^2.
inline double iz_sum(const CharacteristicTable& table) {
  double acc = 0.0;
  for (int L = 0; L <= table.max_l(); ++L) {
    for (int M = -L; M <= L; ++M) acc += static_cast<double>(M * M) * std::norm(table(L, M));
  }
  return acc / (table.twice_spin() * purity_from_characteristic(table));
}

/// I_z = ((2S+1) / (8 pi S P)) integral of W L_z^2 W, with P = ((2S+1)/4pi) integral W^2.
inline double iz_quadrature(const WignerGrid& grid) {
  const int ts = grid.twice_spin();
  if (grid.spec().n_phi < 2 * ts + 2) {
    throw InvalidArgument("iz_quadrature: n_phi must be >= 4S+2");
  }
  if (grid.spec().n_theta < ts + 1) throw InvalidArgument("iz_quadrature: n_theta must be >= 2S+1");
  const RMatrix& w = grid.values();
  const RMatrix lw = apply_lz2(w);
  const double c = (ts + 1.0) / (4.0 * std::numbers::pi);
  const double p = c * grid.integrate(w.cwiseProduct(w));
  const double num = c * grid.integrate(w.cwiseProduct(lw));
  return num / (ts * p);
}

/// Tr[rho f] = ((2S+1)/4pi) integral W_rho W_f.
inline double overlap_expectation(const WignerGrid& grid_rho, const WignerGrid& grid_op, int twice_spin) {
  if (!(grid_rho.spec() == grid_op.spec()) || grid_rho.twice_spin() != twice_spin ||
      grid_op.twice_spin() != twice_spin) {
    throw InvalidArgument("overlap_expectation: grids do not share a spec and spin");
  }
  const double c = (twice_spin + 1.0) / (4.0 * std::numbers::pi);
  return c * grid_rho.integrate(grid_rho.values().cwiseProduct(grid_op.values()));
}

/// chi_{L,M} = sqrt((2S+1)/4pi) integral Y*_{L,M} W, by quadrature.
inline CharacteristicTable project_characteristic(const WignerGrid& grid) {
  const int ts = grid.twice_spin();
  const double f = std::sqrt((ts + 1.0) / (4.0 * std::numbers::pi));
  std::vector<Complex> values(static_cast<std::size_t>((ts + 1) * (ts + 1)));
  for (int L = 0; L <= ts; ++L) {
    for (int M = -L; M <= L; ++M) {
      Complex acc(0.0, 0.0);
      for (int a = 0; a < grid.spec().n_theta; ++a) {
        Complex row(0.0, 0.0);
        for (int b = 0; b < grid.spec().n_phi; ++b) {
          row += std::conj(spherical_harmonic(L, M, grid.theta(a), grid.phi(b))) * grid.values()(a, b);
        }
        acc += grid.weight(a) * row;
      }
      values[CharacteristicTable::offset(L, M)] = f * acc;
    }
  }
  return CharacteristicTable(ts, std::move(values));
}

/// CSV with header theta,phi,w; rows theta-major.
inline void write_wigner_csv(std::ostream& out, const WignerGrid& grid) {
  out << "theta,phi,w\n";
  for (int a = 0; a < grid.spec().n_theta; ++a) {
    for (int b = 0; b < grid.spec().n_phi; ++b) {
      out << format_double(grid.theta(a)) << ',' << format_double(grid.phi(b)) << ','
          << format_double(grid.values()(a, b)) << '\n';
    }
  }
}

}  // namespace spinmacro
