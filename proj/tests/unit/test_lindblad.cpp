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

#include <cmath>
#include <sstream>

#include "spinmacro/lindblad.hpp"

namespace spinmacro {
namespace {

OptimizerOptions quick() {
  OptimizerOptions o;
  o.restarts = 30;
  o.seed = 5;
  return o;
}

LindbladSpec decay(double gamma, double omega = 0.0) {
  LindbladSpec s;
  s.dissipation_rate = gamma;
  s.rabi_frequency = omega;
  return s;
}

// Dense J_- = sum_i |1><0|_i and the generator written out with full matrices.
CMatrix dense_rhs(const CMatrix& rho, int n, double gamma, double omega) {
  const SystemDescriptor d(n, 1);
  CMatrix sp = CMatrix::Zero(2, 2);
  sp(0, 1) = 1.0;
  CMatrix jp = CMatrix::Zero(d.dim(), d.dim());
  for (int i = 0; i < n; ++i) jp += embed_site(d, i, sp);
  const CMatrix jm = jp.adjoint();
  const CMatrix h = 0.5 * omega * (jp + jm);
  return Complex(0.0, -1.0) * (h * rho - rho * h) + gamma * (jm * rho * jp - 0.5 * (jp * jm * rho + rho * jp * jm));
}

TEST(Rhs, AllDownIsStationary) {
  const SystemDescriptor d(4, 1);
  CMatrix m = CMatrix::Zero(d.dim(), d.dim());
  m(d.dim() - 1, d.dim() - 1) = 1.0;
  EXPECT_LT(lindblad_rhs(DensityMatrix(d, m), decay(1.0)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Rhs, MatchesDenseGenerator) {
  const DensityMatrix rho = random_density(SystemDescriptor(3, 1), 4, 41);
  const CMatrix got = lindblad_rhs(rho, decay(0.7, 1.3));
  EXPECT_LT((got - dense_rhs(rho.matrix(), 3, 0.7, 1.3)).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_NEAR(std::abs(got.trace()), 0.0, 1e-14);
  EXPECT_LT((got - got.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Rhs, DephasingMatchesDenseGenerator) {
  const SystemDescriptor d(3, 1);
  const DensityMatrix rho = random_density(d, 3, 42);
  LindbladSpec s;
  s.channel = Channel::Dephasing;
  s.dissipation_rate = 0.4;
  s.dephasing_field = DirectionField::normalized(
      {Eigen::Vector3d(1, 0, 1), Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(-1, 2, 0.5)});
  const CMatrix a = collective_operator(d, *s.dephasing_field, OperatorKind::PauliOps);
  EXPECT_LT((lindblad_rhs(rho, s) - dephasing_generator(rho.matrix(), a, 0.4)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Rhs, ValidatesSpec) {
  const DensityMatrix spin1 = maximally_mixed(SystemDescriptor(2, 2));
  EXPECT_THROW(lindblad_rhs(spin1, decay(1.0)), InvalidArgument);
  LindbladSpec s;
  s.channel = Channel::Dephasing;
  EXPECT_THROW(lindblad_rhs(maximally_mixed(SystemDescriptor(2, 1)), s), InvalidArgument);
  EXPECT_THROW(lindblad_rhs(maximally_mixed(SystemDescriptor(2, 1)), decay(-1.0)), InvalidArgument);
}

TEST(Dicke, IsometryAndRoundTrip) {
  const RMatrix e = dicke_isometry(5);
  EXPECT_LT((e.transpose() * e - RMatrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-14);
  const DickeState g = dicke_ghz(5);
  const DensityMatrix full = embed_dicke(g);
  EXPECT_LT((full.matrix() - ghz_state(5, 1).matrix()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((project_dicke(full).matrix() - g.matrix()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(project_dicke(random_density(SystemDescriptor(3, 1), 8, 43)), InvalidState);
}

TEST(Dicke, RhsIsProjectedFullRhs) {
  const int n = 4;
  const DensityMatrix seed = random_density(SystemDescriptor(1, n), 3, 44);
  const DickeState ds(n, seed.matrix());
  const CMatrix e = dicke_isometry(n).cast<Complex>();
  const CMatrix full = lindblad_rhs(embed_dicke(ds), decay(0.9, 0.6));
  const CMatrix projected = e.adjoint() * full * e;
  EXPECT_LT((dicke_rhs(ds.matrix(), decay(0.9, 0.6), n) - projected).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((e * projected * e.adjoint() - full).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Dicke, MeasuresAtEndpoints) {
  const DickeMeasures g = dicke_measures(dicke_ghz(50), quick());
  EXPECT_NEAR(g.I, 50.0, 1e-8);
  EXPECT_NEAR(g.F, 50.0, 1e-8);
  const DickeMeasures b = dicke_measures(dicke_basis_state(50, 50), quick());
  EXPECT_NEAR(b.I, 1.0, 1e-8);
  EXPECT_NEAR(b.F, 1.0, 1e-8);
}

TEST(Dicke, BlocksMatchFullSpaceMatrices) {
  const int n = 4;
  const DensityMatrix seed = random_density(SystemDescriptor(1, n), 3, 45);
  const DickeState ds(n, seed.matrix());
  const DensityMatrix full = embed_dicke(ds);
  const DickeBlocks b = dicke_blocks(ds);
  const RMatrix v = build_V(full, OperatorKind::PauliOps, Convention::QubitNormalized).values;
  const RMatrix w = build_W(full, OperatorKind::PauliOps, Convention::QubitNormalized).values;
  EXPECT_LT((v.block<3, 3>(0, 0) - b.vd).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((v.block<3, 3>(3, 9) - b.vo).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((w.block<3, 3>(6, 6) - b.wd).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((w.block<3, 3>(0, 6) - b.wo).cwiseAbs().maxCoeff(), 1e-12);
  const DickeMeasures m = dicke_measures(ds, quick());
  EXPECT_NEAR(m.I, measure_I(full, Convention::QubitNormalized, quick()).value, 1e-8);
  EXPECT_NEAR(m.F, measure_F(full, Convention::QubitNormalized, quick()).value, 1e-8);
}

TEST(Evolve, SingleQubitDecayIsExponential) {
  const SystemDescriptor d(1, 1);
  CMatrix up = CMatrix::Zero(2, 2);
  up(0, 0) = 1.0;
  const auto traj = evolve(DensityMatrix(d, up), decay(1.0), {0.0, 0.5, 1.0, 2.0}, 0.01);
  ASSERT_EQ(traj.times.size(), 4u);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    EXPECT_NEAR(traj.states[i].matrix()(0, 0).real(), std::exp(-traj.times[i]), 1e-9);
  }
}

TEST(Evolve, DephasingKillsGhzCoherenceAtKnownRate) {
  // For A = sum Z the GHZ coherence decays as exp(-2 gamma N^2 t).
  LindbladSpec s;
  s.channel = Channel::Dephasing;
  s.dissipation_rate = 0.1;
  s.dephasing_field = DirectionField::uniform(2, Eigen::Vector3d::UnitZ());
  const auto traj = evolve(ghz_state(2, 1), s, {0.0, 1.0}, 0.01);
  EXPECT_NEAR(traj.states[1].matrix()(0, 3).real(), 0.5 * std::exp(-0.8), 1e-10);
}

TEST(Evolve, ZeroRateIsConstant) {
  const auto traj = dicke_evolve(dicke_ghz(6), decay(0.0), uniform_grid(1.0, 0.25), 0.01);
  for (const auto& s : traj.states) EXPECT_LT((s.matrix() - dicke_ghz(6).matrix()).norm(), 1e-14);
}

TEST(Evolve, FullAndDickePathsAgree) {
  const std::vector<double> grid{0.0, 0.1, 0.3};
  const auto full = evolve(ghz_state(5, 1), decay(1.0, 0.5), grid, 0.005);
  const auto sym = dicke_evolve(dicke_ghz(5), decay(1.0, 0.5), grid, 0.005);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_LT((full.states[i].matrix() - embed_dicke(sym.states[i]).matrix()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(full.purity[i], sym.purity[i], 1e-12);
  }
}

TEST(Evolve, ApproachesAllDownSteadyState) {
  const auto traj = dicke_evolve(dicke_ghz(4), decay(1.0), {0.0, 20.0}, 0.01);
  EXPECT_NEAR(traj.states.back().matrix()(4, 4).real(), 1.0, 1e-6);
  EXPECT_NEAR(traj.purity.back(), 1.0, 1e-6);
}

TEST(Evolve, PurityDipsThenRecovers) {
  auto traj = dicke_evolve(dicke_ghz(8), decay(1.0), uniform_grid(5.0, 0.05), 0.005);
  const double low = *std::min_element(traj.purity.begin(), traj.purity.end());
  EXPECT_LT(low, 0.5);
  EXPECT_GT(traj.purity.back(), 0.99);
}

TEST(Evolve, PreconditionsAreChecked) {
  EXPECT_THROW(dicke_evolve(dicke_ghz(9), decay(1.0), {0.0, 1.0}, 0.011), InvalidArgument);
  EXPECT_NO_THROW(dicke_evolve(dicke_ghz(9), decay(1.0), {0.0, 0.01}, 0.01));
  EXPECT_THROW(dicke_evolve(dicke_ghz(3), decay(1.0), {0.5, 0.2}, 0.01), InvalidArgument);
  EXPECT_THROW(dicke_evolve(dicke_ghz(3), decay(1.0), {}, 0.01), InvalidArgument);
  EXPECT_THROW(dicke_evolve(dicke_ghz(3), decay(1.0), {0.0, 1.0}, 0.0), InvalidArgument);
}

TEST(Evolve, PositivityCheckNamesTime) {
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = 1.1;
  bad(1, 1) = -0.1;
  try {
    detail::check_psd_at(bad, 0.25);
    FAIL() << "expected NumericalFailure";
  } catch (const NumericalFailure& e) {
    EXPECT_NE(std::string(e.what()).find("t = 0.25"), std::string::npos);
  }
}

TEST(Trajectory, MeasuredPathsAgreeAndCsvLayout) {
  const std::vector<double> grid{0.0, 0.2, 0.6};
  auto sym = dicke_evolve(dicke_ghz(4), decay(1.0), grid, 0.005);
  auto full = evolve(ghz_state(4, 1), decay(1.0), grid, 0.005);
  measure_trajectory(sym, quick());
  measure_trajectory(full, quick(), 2);
  EXPECT_NEAR(sym.I[0], 4.0, 1e-8);
  EXPECT_NEAR(sym.I[2], full.I[2], 1e-8);
  EXPECT_NEAR(sym.F[2], full.F[2], 1e-8);
  EXPECT_TRUE(std::isnan(full.I[1]));
  std::ostringstream s;
  write_trajectory_csv(s, full);
  const std::string text = s.str();
  EXPECT_EQ(text.rfind("t,purity,I,F\n", 0), 0u);
  EXPECT_NE(text.find(",,\n"), std::string::npos);
}

TEST(Trajectory, UniformGridIncludesEndpoint) {
  const auto g = uniform_grid(1.0, 0.3);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.back(), 1.0);
  EXPECT_EQ(uniform_grid(1.0, 0.25).size(), 5u);
  EXPECT_THROW(uniform_grid(1.0, 0.0), InvalidArgument);
}

}  // namespace
}  // namespace spinmacro
