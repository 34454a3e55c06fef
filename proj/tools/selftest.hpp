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

// Embedded golden-value checks run by `spinmacro selftest`.

#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "spinmacro/spinmacro.hpp"

namespace spinmacro::cli {

struct GoldenCheck {
  std::string name;
  double expected = 0.0;
  double tolerance = 0.0;
  std::function<double()> compute;
};

struct CheckOutcome {
  std::string name;
  double expected = 0.0;
  double tolerance = 0.0;
  double actual = 0.0;
  bool passed = false;
  std::string error;
};

inline OptimizerOptions selftest_optimizer(unsigned threads) {
  OptimizerOptions o;
  o.restarts = 40;
  o.seed = 7;
  o.threads = threads;
  return o;
}

/// Checks whose expectation is a bracket store its midpoint and half-width.
inline std::vector<GoldenCheck> golden_checks(unsigned threads) {
  const OptimizerOptions opt = selftest_optimizer(threads);
  std::vector<GoldenCheck> c;
  for (int n = 2; n <= 6; ++n) {
    c.push_back({"ghz_I_N" + std::to_string(n), double(n), 1e-8,
                 [=] { return measure_I(ghz_state(n, 1), Convention::QubitNormalized, opt).value; }});
  }
  c.push_back({"ghz_F_N4", 4.0, 1e-8, [=] { return measure_F(ghz_state(4, 1), Convention::QubitNormalized, opt).value; }});
  for (int n = 1; n <= 6; ++n) {
    c.push_back({"product_plus_I_N" + std::to_string(n), 1.0, 1e-8, [=] {
                   CVector plus(2);
                   plus << 1.0, 1.0;
                   const CVector psi = product_vector(std::vector<CVector>(std::size_t(n), plus / std::sqrt(2.0)));
                   return measure_I(pure_state(SystemDescriptor(n, 1), psi), Convention::QubitNormalized, opt).value;
                 }});
  }
  const std::vector<std::pair<std::string, double>> bell = {{"0", 0.0}, {"0.5", 0.5}, {"1", 1.0}};
  const std::vector<double> bell_values = {1.0, 0.9, 0.5};
  for (std::size_t i = 0; i < bell.size(); ++i) {
    const double a = bell[i].second;
    c.push_back({"mixed_bell_raw_I_a" + bell[i].first, bell_values[i], 1e-8,
                 [=] { return measure_I(mixed_bell(a), Convention::Raw, opt).value; }});
  }
  c.push_back({"spin1_ghz_raw_I_N3", 3.0, 1e-8, [=] { return measure_I(ghz_state(3, 2), Convention::Raw, opt).value; }});
  c.push_back({"spin_cat_Iz_S5", 5.0, 1e-8, [] { return iz_sum(characteristic_table(spin_cat_state(10, 1.0))); }});
  c.push_back({"spin_cat_gamma0_phi_variation", 0.0, 1e-10, [] {
                 const WignerGrid g = wigner_grid(characteristic_table(spin_cat_state(10, 0.0)));
                 double worst = 0.0;
                 for (int a = 0; a < g.spec().n_theta; ++a) {
                   worst = std::max(worst, g.values().row(a).maxCoeff() - g.values().row(a).minCoeff());
                 }
                 return worst;
               }});
  c.push_back({"dephasing_rate_ghz_N4", 4.0, 1e-8, [] {
                 const DensityMatrix rho = ghz_state(4, 1);
                 return dephasing_purity_rate(rho, DirectionField::uniform(4, Eigen::Vector3d::UnitZ()),
                                              OperatorKind::PauliOps, 1.0);
               }});
  c.push_back({"decay_rhs_all_down_N4", 0.0, 1e-14, [] {
                 const SystemDescriptor d(4, 1);
                 CMatrix m = CMatrix::Zero(d.dim(), d.dim());
                 m(d.dim() - 1, d.dim() - 1) = 1.0;
                 LindbladSpec spec;
                 spec.dissipation_rate = 1.0;
                 return lindblad_rhs(DensityMatrix(d, m), spec).cwiseAbs().maxCoeff();
               }});
  c.push_back({"dicke_ghz_I_N50", 50.0, 1e-8, [=] { return dicke_measures(dicke_ghz(50), opt).I; }});
  c.push_back({"dicke_ghz_F_N50", 50.0, 1e-8, [=] { return dicke_measures(dicke_ghz(50), opt).F; }});
  c.push_back({"dicke_bottom_I_N50", 1.0, 1e-8, [=] { return dicke_measures(dicke_basis_state(50, 50), opt).I; }});
  c.push_back({"dicke_bottom_F_N50", 1.0, 1e-8, [=] { return dicke_measures(dicke_basis_state(50, 50), opt).F; }});
  {
    // Decayed GHZ trajectory: minimum location and late-time value.
    auto traj = std::make_shared<Trajectory<DickeState>>();
    auto run = [traj, opt] {
      if (!traj->times.empty()) return;
      LindbladSpec spec;
      spec.dissipation_rate = 1.0;
      *traj = dicke_evolve(dicke_ghz(50), spec, uniform_grid(5.0, 0.005), 0.001);
      OptimizerOptions light = opt;
      light.restarts = 10;
      measure_trajectory(*traj, light);
    };
    c.push_back({"decay_N50_min_time", 0.15, 0.07, [=] {
                   run();
                   std::size_t k = 0;
                   for (std::size_t i = 1; i < traj->I.size(); ++i) {
                     if (traj->I[i] < traj->I[k]) k = i;
                   }
                   return traj->times[k];
                 }});
    c.push_back({"decay_N50_I_at_5", 1.0, 0.05, [=] {
                   run();
                   return traj->I.back();
                 }});
  }
  c.push_back({"ising_block_up_lambda_1e-9_L3", 1.0, 1e-8, [] { return block_rdm(1e-9, 3).matrix()(0, 0).real(); }});
  for (int L : {2, 4}) {
    for (double lam : {0.05, 20.0}) {
      const std::string tag = "ising_I_L" + std::to_string(L) + (lam < 1 ? "_lambda0.05" : "_lambda20");
      c.push_back({tag, 1.0, lam < 1 ? 0.05 : 0.1,
                   [=] { return measure_I(block_rdm(lam, L), Convention::QubitNormalized, opt).value; }});
    }
  }
  c.push_back({"ising_xx_slope_lambda1", -0.25, 0.08, [] {
                 std::vector<double> r, v;
                 for (int k = 2; k <= 10; ++k) {
                   r.push_back(k);
                   v.push_back(xx_correlation(1.0, k));
                 }
                 return log_log_slope(r, v);
               }});
  c.push_back({"ising_scaling_exponent_lambda1", 0.75, 0.2,
               [=] { return scaling_exponent({8, 10, 12, 14}, 1.0, opt).exponent; }});
  return c;
}

inline std::vector<CheckOutcome> run_golden(const std::vector<GoldenCheck>& checks,
                                            const std::map<std::string, double>& overrides) {
  std::vector<CheckOutcome> out;
  for (const auto& g : checks) {
    CheckOutcome o;
    o.name = g.name;
    o.tolerance = g.tolerance;
    auto it = overrides.find(g.name);
    o.expected = it == overrides.end() ? g.expected : it->second;
    try {
      o.actual = g.compute();
      o.passed = std::abs(o.actual - o.expected) <= o.tolerance;
    } catch (const std::exception& e) {
      o.actual = std::numeric_limits<double>::quiet_NaN();
      o.error = e.what();
    }
    out.push_back(o);
  }
  return out;
}

inline void write_golden_text(std::ostream& out, const std::vector<CheckOutcome>& results) {
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " actual=" << format_double(r.actual)
        << " expected=" << format_double(r.expected) << " tol=" << format_double(r.tolerance);
    if (!r.error.empty()) out << " error=" << r.error;
    out << '\n';
  }
}

}  // namespace spinmacro::cli
