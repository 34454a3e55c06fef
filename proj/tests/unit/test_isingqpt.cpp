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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spinmacro/isingqpt.hpp"

namespace spinmacro {
namespace {

constexpr double kPi = std::numbers::pi;

OptimizerOptions quick() {
  OptimizerOptions o;
  o.restarts = 30;
  o.seed = 9;
  return o;
}

// Periodic chain, even parity: E0 = -sum_k sqrt(1 + lambda^2 - 2 lambda cos k), k = (2m+1) pi / N.
double free_fermion_energy(double lambda, int n) {
  double e = 0.0;
  for (int m = 0; m < n; ++m) {
    const double k = (2.0 * m + 1.0) * kPi / n;
    e -= std::sqrt(1.0 + lambda * lambda - 2.0 * lambda * std::cos(k));
  }
  return e;
}

// Leading-sites reduced state of a pure chain: reshape psi to 2^L x 2^(N-L) and form M M^dagger.
CMatrix leading_block(const PureState& psi, int L) {
  const Index rows = Index{1} << L;
  const Index cols = psi.vector().size() / rows;
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = psi.vector()(r * cols + c);
  }
  return m * m.adjoint();
}

CMatrix dense_hamiltonian(double lambda, int n) {
  const SystemDescriptor d(n, 1);
  CMatrix x = CMatrix::Zero(2, 2), z = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  CMatrix h = CMatrix::Zero(d.dim(), d.dim());
  for (int j = 0; j < n; ++j) {
    h -= embed_site(d, j, z);
    h -= lambda * embed_site(d, j, x) * embed_site(d, (j + 1) % n, x);
  }
  return h;
}

TEST(GCoefficient, CriticalClosedForm) {
  for (int l = -4; l <= 4; ++l) {
    const Complex g = g_coefficient(1.0, l);
    EXPECT_NEAR(g.real(), -2.0 / (kPi * (2.0 * l + 1.0)), 1e-10) << l;
    EXPECT_NEAR(g.imag(), 0.0, 1e-12);
  }
}

TEST(GCoefficient, Limits) {
  EXPECT_NEAR(g_coefficient(1e-12, 0).real(), -1.0, 1e-10);
  EXPECT_NEAR(g_coefficient(1e-12, 1).real(), 0.0, 1e-10);
  EXPECT_NEAR(g_coefficient(1e6, -1).real(), 1.0, 1e-10);
  EXPECT_NEAR(g_coefficient(1e6, 0).real(), 0.0, 1e-5);
  EXPECT_THROW(g_coefficient(0.0, 0), InvalidArgument);
}

TEST(CorrelationMatrix, SkewAndCanonicalForm) {
  const MajoranaCorrelation c = gamma_matrix(0.8, 5);
  EXPECT_LT((c.gamma + c.gamma.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  const CanonicalSkewForm f = canonical_skew_form(c.gamma);
  EXPECT_LT((f.V * f.V.transpose() - RMatrix::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-12);
  RMatrix block = RMatrix::Zero(10, 10);
  for (int m = 0; m < 5; ++m) {
    block(2 * m, 2 * m + 1) = f.nu(m);
    block(2 * m + 1, 2 * m) = -f.nu(m);
    EXPECT_GE(f.nu(m), 0.0);
    EXPECT_LE(f.nu(m), 1.0 + 1e-12);
    if (m > 0) EXPECT_LE(f.nu(m), f.nu(m - 1));
  }
  EXPECT_LT((f.V * c.gamma * f.V.transpose() - block).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CanonicalSkewForm, OrientsBlocksPositive) {
  RMatrix g(2, 2);
  g << 0.0, -1.0, 1.0, 0.0;
  const CanonicalSkewForm f = canonical_skew_form(g);
  EXPECT_NEAR(f.nu(0), 1.0, 1e-14);
  RMatrix expect(2, 2);
  expect << 0.0, 1.0, -1.0, 0.0;
  EXPECT_LT((f.V * g * f.V.transpose() - expect).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ExactGroundState, EnergyMatchesFreeFermions) {
  for (double lam : {0.0, 0.5, 1.0, 2.0}) {
    for (int n : {6, 9, 14}) {
      EXPECT_NEAR(exact_ground_state(lam, n).energy, free_fermion_energy(lam, n), 1e-9) << lam << " " << n;
    }
  }
}

TEST(ExactGroundState, StateMatchesDenseDiagonalization) {
  const GroundState gs = exact_ground_state(0.7, 6);
  const CMatrix h = dense_hamiltonian(0.7, 6);
  const CVector& v = gs.state.vector();
  EXPECT_NEAR((v.adjoint() * h * v)(0, 0).real(), gs.energy, 1e-10);
  EXPECT_LT((h * v - gs.energy * v).norm(), 1e-8);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  EXPECT_NEAR(es.eigenvalues()(0), gs.energy, 1e-10);
  EXPECT_THROW(exact_ground_state(1.0, 15), InvalidArgument);
}

TEST(BlockRdm, MatchesExactChainReducedState) {
  // Finite-size corrections scale as lambda^N, about 5e-8 here.
  const GroundState gs = exact_ground_state(0.3, 14);
  for (int L : {1, 2, 3}) {
    EXPECT_LT((block_rdm(0.3, L).matrix() - leading_block(gs.state, L)).cwiseAbs().maxCoeff(), 1e-6) << L;
  }
}

TEST(BlockRdm, WeakCouplingIsAllUp) {
  const DensityMatrix r = block_rdm(1e-9, 3);
  EXPECT_NEAR(r.matrix()(0, 0).real(), 1.0, 1e-8);
  EXPECT_THROW(block_rdm(1.0, 13), InvalidArgument);
}

TEST(XxCorrelation, MatchesExactChainAndDecays) {
  const CMatrix block = leading_block(exact_ground_state(0.3, 14).state, 3);
  const SystemDescriptor d(3, 1);
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  const Complex both = apply_site_left(d, 0, x, apply_site_left(d, 2, x, block)).trace();
  EXPECT_NEAR(xx_correlation(0.3, 2), both.real(), 1e-6);
  for (int r = 2; r <= 6; ++r) EXPECT_LT(xx_correlation(1.0, r + 1), xx_correlation(1.0, r));
}

TEST(Sweep, SingleSiteClosedForm) {
  // One qubit with Bloch vector z e_z: I = 2 z^2 / (1 + z^2), F = z^2.
  SweepOptions so;
  so.optimizer = quick();
  const auto rec = sweep_block({0.3, 1.0, 3.0}, {1}, so);
  ASSERT_EQ(rec.size(), 3u);
  for (const auto& r : rec) {
    const DensityMatrix rho = block_rdm(r.lambda, 1);
    const double z = (rho.matrix()(0, 0) - rho.matrix()(1, 1)).real();
    EXPECT_NEAR(r.I, 2.0 * z * z / (1.0 + z * z), 1e-8);
    EXPECT_NEAR(r.F, z * z, 1e-8);
    EXPECT_NEAR(r.purity, 0.5 * (1.0 + z * z), 1e-12);
  }
}

TEST(Sweep, OrderedDeterministicAndCsv) {
  SweepOptions so;
  so.optimizer = quick();
  const auto a = sweep_block({2.0, 0.5}, {3, 2}, so);
  const auto b = sweep_block({2.0, 0.5}, {3, 2}, so);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a[0].L, 2);
  EXPECT_DOUBLE_EQ(a[0].lambda, 0.5);
  EXPECT_EQ(a[3].L, 3);
  EXPECT_DOUBLE_EQ(a[3].lambda, 2.0);
  std::ostringstream sa, sb;
  write_sweep_csv(sa, a);
  write_sweep_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().rfind("lambda,L,I,F,purity\n", 0), 0u);
  EXPECT_THROW(sweep_block({1.0}, {13}, so), InvalidArgument);
}

TEST(Sweep, EndpointsNearOne) {
  SweepOptions so;
  so.optimizer = quick();
  for (const auto& r : sweep_block({0.05, 20.0}, {2, 4}, so)) {
    EXPECT_NEAR(r.I, 1.0, 0.1);
    EXPECT_NEAR(r.F, 1.0, 0.1);
  }
}

TEST(Scaling, OneRowPerSizeAndSlope) {
  const ScalingFit fit = scaling_exponent({8, 10, 12}, 1.0, quick());
  ASSERT_EQ(fit.points.size(), 3u);
  EXPECT_GT(fit.exponent, 0.55);
  EXPECT_LT(fit.exponent, 0.95);
  std::ostringstream s;
  write_scaling_csv(s, fit);
  EXPECT_EQ(std::ranges::count(s.str(), '\n'), 4);
  EXPECT_NEAR(log_log_slope({1.0, 2.0, 4.0}, {3.0, 6.0, 12.0}), 1.0, 1e-14);
  EXPECT_THROW(log_log_slope({1.0}, {1.0}), InvalidArgument);
}

}  // namespace
}  // namespace spinmacro
