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

#include "spinmacro/json_io.hpp"
#include "spinmacro/macromeasure.hpp"

namespace spinmacro {
namespace {

OptimizerOptions quick(int restarts = 40) {
  OptimizerOptions o;
  o.restarts = restarts;
  o.seed = 3;
  return o;
}

std::vector<CMatrix> embedded_ops(const SystemDescriptor& d, OperatorKind kind) {
  const auto local = site_operators(d.twice_spin(), kind);
  std::vector<CMatrix> out;
  for (int i = 0; i < d.num_sites(); ++i) {
    for (int a = 0; a < 3; ++a) out.push_back(embed_site(d, i, local[static_cast<std::size_t>(a)]));
  }
  return out;
}

// Dense V: Re(Tr[rho^2 X_p X_q] - Tr[rho X_p rho X_q]) / (N s P).
RMatrix oracle_V(const DensityMatrix& rho, OperatorKind kind) {
  const SystemDescriptor& d = rho.descriptor();
  const auto x = embedded_ops(d, kind);
  const CMatrix& r = rho.matrix();
  const CMatrix r2 = r * r;
  const double norm = d.num_sites() * site_operator_norm(kind, d.twice_spin()) * r.squaredNorm();
  RMatrix v(x.size(), x.size());
  for (std::size_t p = 0; p < x.size(); ++p) {
    for (std::size_t q = 0; q < x.size(); ++q) {
      v(p, q) = ((r2 * x[p] * x[q]).trace() - (r * x[p] * r * x[q]).trace()).real() / norm;
    }
  }
  return 0.5 * (v + v.transpose());
}

// Dense W: sum over eigenpairs of (pi_k - pi_l)^2 / (pi_k + pi_l) <k|X_p|l><l|X_q|k>, over 2 N s.
RMatrix oracle_W(const DensityMatrix& rho, OperatorKind kind) {
  const SystemDescriptor& d = rho.descriptor();
  const auto x = embedded_ops(d, kind);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  const Eigen::VectorXd pi = es.eigenvalues().cwiseMax(0.0);
  const CMatrix& u = es.eigenvectors();
  std::vector<CMatrix> xt;
  for (const auto& m : x) xt.push_back(u.adjoint() * m * u);
  const double norm = 2.0 * d.num_sites() * site_operator_norm(kind, d.twice_spin());
  RMatrix w = RMatrix::Zero(x.size(), x.size());
  for (std::size_t p = 0; p < x.size(); ++p) {
    for (std::size_t q = 0; q < x.size(); ++q) {
      Complex acc(0.0, 0.0);
      for (Index k = 0; k < d.dim(); ++k) {
        for (Index l = 0; l < d.dim(); ++l) {
          const double s = pi(k) + pi(l);
          if (s <= 1e-14) continue;
          acc += (pi(k) - pi(l)) * (pi(k) - pi(l)) / s * xt[p](k, l) * xt[q](l, k);
        }
      }
      w(p, q) = acc.real() / norm;
    }
  }
  return w;
}

TEST(Convention, DefaultsAndFactors) {
  EXPECT_EQ(default_convention(1), Convention::QubitNormalized);
  EXPECT_EQ(default_convention(2), Convention::Raw);
  EXPECT_EQ(kind_for(Convention::Raw), OperatorKind::SpinOps);
  EXPECT_DOUBLE_EQ(convention_factor(OperatorKind::PauliOps, Convention::Raw, 1), 0.5);
  EXPECT_DOUBLE_EQ(convention_factor(OperatorKind::SpinOps, Convention::QubitNormalized, 1), 2.0);
  EXPECT_DOUBLE_EQ(convention_factor(OperatorKind::SpinOps, Convention::Raw, 3), 1.0);
  EXPECT_STREQ(to_string(Convention::QubitNormalized), "qubit");
}

TEST(BuildV, MatchesDenseOracle) {
  const DensityMatrix q = random_density(SystemDescriptor(3, 1), 4, 21);
  EXPECT_LT((build_V(q, OperatorKind::PauliOps, Convention::QubitNormalized).values - oracle_V(q, OperatorKind::PauliOps))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
  const DensityMatrix s = random_density(SystemDescriptor(2, 3), 6, 22);
  EXPECT_LT((build_V(s, OperatorKind::SpinOps, Convention::Raw).values - oracle_V(s, OperatorKind::SpinOps))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(BuildW, MatchesDenseOracle) {
  const DensityMatrix q = random_density(SystemDescriptor(3, 1), 3, 23);
  EXPECT_LT((build_W(q, OperatorKind::PauliOps, Convention::QubitNormalized).values - oracle_W(q, OperatorKind::PauliOps))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
  const DensityMatrix s = random_density(SystemDescriptor(2, 2), 9, 24);
  EXPECT_LT((build_W(s, OperatorKind::SpinOps, Convention::Raw).values - oracle_W(s, OperatorKind::SpinOps))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(BuildV, ConventionRescalesByTwo) {
  const DensityMatrix q = random_density(SystemDescriptor(2, 1), 2, 25);
  const RMatrix a = build_V(q, OperatorKind::PauliOps, Convention::QubitNormalized).values;
  const RMatrix b = build_V(q, OperatorKind::SpinOps, Convention::QubitNormalized).values;
  const RMatrix c = build_V(q, OperatorKind::SpinOps, Convention::Raw).values;
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((a - 2.0 * c).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(BuildVPure, AgreesWithDensityPath) {
  const SystemDescriptor d(3, 1);
  const DensityMatrix rho = random_pure(d, 26);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  const PureState psi(d, es.eigenvectors().col(d.dim() - 1));
  const RMatrix a = build_V_pure(psi, OperatorKind::PauliOps, Convention::QubitNormalized).values;
  const RMatrix b = build_V(rho, OperatorKind::PauliOps, Convention::QubitNormalized).values;
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FixedField, SpectralAndTraceFormsAgree) {
  Rng rng(27);
  for (int k = 0; k < 50; ++k) {
    const SystemDescriptor d(3, 1);
    const DensityMatrix rho = random_density(d, 1 + k % 8, 2700 + k);
    std::vector<Eigen::Vector3d> v;
    for (int j = 0; j < 3; ++j) v.emplace_back(rng.normal(), rng.normal(), rng.normal());
    const DirectionField f = DirectionField::normalized(v);
    const double t = trace_form_I(rho, f, OperatorKind::PauliOps, Convention::QubitNormalized);
    EXPECT_NEAR(spectral_I(rho, f, OperatorKind::PauliOps, Convention::QubitNormalized), t, 1e-9);
    const MeasureMatrix w = build_W(rho, OperatorKind::PauliOps, Convention::QubitNormalized);
    EXPECT_NEAR(spectral_F(rho, f, OperatorKind::PauliOps, Convention::QubitNormalized), w.quadratic_form(f), 1e-9);
  }
}

TEST(FixedField, MixedBellHalfInBothScales) {
  const DirectionField x = DirectionField::uniform(2, Eigen::Vector3d::UnitX());
  const DensityMatrix rho = mixed_bell(0.5);
  const double qubit = spectral_F(rho, x, OperatorKind::PauliOps, Convention::QubitNormalized);
  const double raw = spectral_F(rho, x, OperatorKind::SpinOps, Convention::Raw);
  EXPECT_NEAR(qubit, 1.5, 1e-12);
  EXPECT_NEAR(raw, 0.75, 1e-12);
  EXPECT_NEAR(trace_form_I(rho, x, OperatorKind::PauliOps, Convention::QubitNormalized),
              spectral_I(rho, x, OperatorKind::PauliOps, Convention::QubitNormalized), 1e-12);
}

TEST(Measures, GhzReachesN) {
  for (int n = 2; n <= 6; ++n) {
    EXPECT_NEAR(measure_I(ghz_state(n, 1), Convention::QubitNormalized, quick()).value, n, 1e-8);
    EXPECT_NEAR(measure_F(ghz_state(n, 1), Convention::QubitNormalized, quick()).value, n, 1e-8);
  }
  EXPECT_NEAR(measure_I(ghz_state(3, 2), Convention::Raw, quick()).value, 3.0, 1e-8);
}

TEST(Measures, MixedBellTriple) {
  const double expected_i[] = {1.0, 0.9, 0.5};
  const double expected_f[] = {1.0, 0.75, 0.5};
  const double as[] = {0.0, 0.5, 1.0};
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(measure_I(mixed_bell(as[k]), Convention::Raw, quick()).value, expected_i[k], 1e-8);
    EXPECT_NEAR(measure_F(mixed_bell(as[k]), Convention::Raw, quick()).value, expected_f[k], 1e-8);
  }
}

TEST(Measures, MaximallyMixedIsZero) {
  const DensityMatrix rho = maximally_mixed(SystemDescriptor(2, 1));
  EXPECT_NEAR(measure_I(rho, quick()).value, 0.0, 1e-12);
  EXPECT_NEAR(measure_F(rho, quick()).value, 0.0, 1e-12);
}

TEST(Measures, PureStatesHaveEqualIAndF) {
  for (int k = 0; k < 5; ++k) {
    const DensityMatrix rho = random_pure(SystemDescriptor(3, 1), 2800 + k);
    const double i = measure_I(rho, Convention::QubitNormalized, quick()).value;
    const double f = measure_F(rho, Convention::QubitNormalized, quick()).value;
    EXPECT_NEAR(i, f, 1e-8);
    EXPECT_GE(i, 1.0 - 1e-8);
  }
}

TEST(Measures, PureShortcutMatchesDensityPath) {
  const SystemDescriptor d(4, 1);
  CVector psi = CVector::Zero(d.dim());
  psi(0) = 1.0;
  psi(5) = Complex(0.3, 0.4);
  psi(15) = -0.7;
  const PureState state(d, psi);
  EXPECT_NEAR(measure_pure(state, Convention::QubitNormalized, quick()).value,
              measure_I(to_density(state), Convention::QubitNormalized, quick()).value, 1e-8);
}

TEST(Optimizer, DeterministicAndReportsDiagnostics) {
  const DensityMatrix rho = random_density(SystemDescriptor(3, 1), 3, 29);
  const MeasureMatrix v = build_V(rho, OperatorKind::PauliOps, Convention::QubitNormalized);
  const MeasureResult a = optimize_direction(v, quick(30));
  const MeasureResult b = optimize_direction(v, quick(30));
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.best_restart_index, b.best_restart_index);
  EXPECT_EQ((a.optimal_field.stacked() - b.optimal_field.stacked()).norm(), 0.0);
  EXPECT_EQ(a.restarts_used, 30);
  EXPECT_GT(a.converged_restarts, 0);
  EXPECT_LE(a.gradient_norm, 1e-9);
  EXPECT_GE(a.spread, 0.0);
  EXPECT_NEAR(riemannian_gradient_norm(v.values, a.optimal_field.stacked()), a.gradient_norm, 1e-10);
  EXPECT_NEAR(v.quadratic_form(a.optimal_field), a.value, 1e-14);
}

TEST(Optimizer, NoConvergenceThrowsWithBestValue) {
  const MeasureMatrix v = build_V(random_density(SystemDescriptor(3, 1), 3, 30), OperatorKind::PauliOps,
                                  Convention::QubitNormalized);
  OptimizerOptions o = quick(3);
  o.max_iterations = 0;
  try {
    optimize_direction(v, o);
    FAIL() << "expected NumericalFailure";
  } catch (const NumericalFailure& e) {
    EXPECT_TRUE(std::isfinite(e.best_value()));
  }
}

TEST(Optimizer, RejectsMalformedMatrices) {
  MeasureMatrix m{MeasureKind::V, RMatrix::Identity(5, 5), 2, 1, OperatorKind::PauliOps, Convention::QubitNormalized};
  EXPECT_THROW(optimize_direction(m, quick()), InvalidArgument);
  m.values = RMatrix::Identity(6, 6);
  m.values(0, 1) = 1.0;
  EXPECT_THROW(optimize_direction(m, quick()), InvalidArgument);
}

TEST(Symmetric, UniformValueFormula) {
  const Eigen::Matrix3d d = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  const Eigen::Matrix3d o = Eigen::Vector3d(0.5, 0.1, 0.0).asDiagonal();
  EXPECT_NEAR(symmetric_value(d, o, 4), 4.0 * std::max({1.0 + 1.5, 2.0 + 0.3, 3.0}), 1e-14);
}

TEST(Symmetric, StaggeredFieldBeatsUniformField) {
  // With O = -D/2 and N = 2, uniform fields give 2(1 - 1/2) and opposite fields 2(1 + 1/2).
  const Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  const Eigen::Matrix3d o = -0.5 * Eigen::Matrix3d::Identity();
  EXPECT_NEAR(symmetric_value(d, o, 2), 1.0, 1e-14);
  EXPECT_NEAR(symmetric_optimum(d, o, 2, MeasureKind::V, Convention::QubitNormalized, quick()).value, 3.0, 1e-9);
}

TEST(Symmetric, MatchesGeneralOptimizer) {
  EXPECT_NEAR(symmetric_measure(ghz_state(6, 1), MeasureKind::V, Convention::QubitNormalized, quick()).value, 6.0,
              1e-8);
  const DensityMatrix plus(SystemDescriptor(3, 1), kron_power(CMatrix::Constant(2, 2, 0.5), 3));
  EXPECT_NEAR(symmetric_measure(plus, MeasureKind::V, Convention::QubitNormalized, quick()).value, 1.0, 1e-8);
  for (double eps : {0.3, 1.2}) {
    const DensityMatrix rho = mixed_ghz(5, eps, 0.4);
    for (MeasureKind k : {MeasureKind::V, MeasureKind::W}) {
      const MeasureMatrix full = k == MeasureKind::V ? build_V(rho, OperatorKind::PauliOps, Convention::QubitNormalized)
                                                     : build_W(rho, OperatorKind::PauliOps, Convention::QubitNormalized);
      EXPECT_NEAR(symmetric_measure(rho, k, Convention::QubitNormalized, quick()).value,
                  optimize_direction(full, quick()).value, 1e-8);
    }
  }
}

TEST(Symmetric, RejectsAsymmetricStates) {
  const DensityMatrix rho = random_density(SystemDescriptor(3, 1), 2, 31);
  EXPECT_GT(swap_asymmetry(rho), 1e-3);
  EXPECT_THROW(symmetric_measure(rho, MeasureKind::V, Convention::QubitNormalized, quick()), InvalidState);
}

TEST(Dephasing, RateIdentities) {
  const DirectionField z4 = DirectionField::uniform(4, Eigen::Vector3d::UnitZ());
  EXPECT_NEAR(dephasing_purity_rate(ghz_state(4, 1), z4, OperatorKind::PauliOps, 1.0), 4.0, 1e-12);
  const DirectionField z2 = DirectionField::uniform(2, Eigen::Vector3d::UnitZ());
  EXPECT_NEAR(dephasing_purity_rate(mixed_bell(1.0), z2, OperatorKind::PauliOps, 1.0), 0.0, 1e-14);
  EXPECT_NEAR(dephasing_purity_rate(ghz_state(4, 1), z4, OperatorKind::PauliOps, 2.5), 10.0, 1e-12);
}

TEST(Dephasing, FiniteDifferenceOracle) {
  const SystemDescriptor d(3, 1);
  const DensityMatrix rho = random_density(d, 4, 32);
  const DirectionField f = DirectionField::normalized(
      {Eigen::Vector3d(1, 2, 0.5), Eigen::Vector3d(-1, 0.3, 1), Eigen::Vector3d(0.2, 0.1, -1)});
  const double gamma = 0.7, dt = 1e-6;
  const CMatrix a = collective_operator(d, f, OperatorKind::PauliOps);
  const CMatrix next = rho.matrix() + dt * dephasing_generator(rho.matrix(), a, gamma);
  const double fd = -(std::log(next.squaredNorm()) - std::log(rho.matrix().squaredNorm())) / dt / (2.0 * 3.0);
  const double rate = dephasing_purity_rate(rho, f, OperatorKind::PauliOps, gamma);
  EXPECT_NEAR(rate, fd, 1e-4 * std::abs(fd));
}

TEST(Json, StableKeysAndRoundTripNumbers) {
  const MeasureResult r = measure_I(ghz_state(2, 1), Convention::QubitNormalized, quick(5));
  std::ostringstream s;
  write_results_json(s, {r});
  const std::string text = s.str();
  const char* keys[] = {"\"measure\"", "\"convention\"", "\"value\"", "\"alpha\"", "\"restarts\"",
                        "\"grad_norm\"", "\"spread\"", "\"seed\""};
  std::size_t last = 0;
  for (const char* k : keys) {
    const std::size_t pos = text.find(k);
    ASSERT_NE(pos, std::string::npos) << k;
    EXPECT_GT(pos, last);
    last = pos;
  }
  EXPECT_NE(text.find("\"value\": 2"), std::string::npos);
  std::ostringstream two;
  write_results_json(two, {r, r});
  EXPECT_EQ(two.str().front(), '[');
  EXPECT_EQ(json_number(std::nan("")), "null");
}

}  // namespace
}  // namespace spinmacro
