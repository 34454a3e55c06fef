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

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "selftest.hpp"
#include "spinmacro/spinmacro.hpp"

namespace {

using namespace spinmacro;

enum ExitCode { kOk = 0, kUsage = 1, kFormat = 2, kNumerical = 3, kSelftest = 4 };

struct Global {
  std::string out = "-";
  unsigned threads = 0;
};

/// Writes `text` to stdout or to a file; nothing is created on earlier failure.
void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw InvalidArgument("failed writing output file '" + path + "'");
}

struct MeasureArgs {
  std::string in;
  std::string measure = "I";
  std::string convention;
  int restarts = 200;
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

int cmd_measure(const MeasureArgs& a, const Global& g) {
  DensityMatrix rho = [&] {
    try {
      return read_msdm_file(a.in);
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      throw FormatError(e.what());
    }
  }();
  const Convention conv = a.convention.empty() ? default_convention(rho.descriptor().twice_spin())
                          : a.convention == "raw" ? Convention::Raw
                                                  : Convention::QubitNormalized;
  OptimizerOptions opt;
  opt.restarts = a.restarts;
  opt.seed = a.seed;
  opt.tol = a.tol;
  opt.threads = g.threads;
  std::vector<MeasureResult> results;
  auto stage = [](const char* name, auto&& fn) {
    try {
      return fn();
    } catch (const NumericalFailure& e) {
      throw NumericalFailure(std::string("stage ") + name + ": " + e.what(), e.best_value());
    }
  };
  if (a.measure == "I" || a.measure == "both") {
    results.push_back(stage("measure_I", [&] { return measure_I(rho, conv, opt); }));
  }
  if (a.measure == "F" || a.measure == "both") {
    results.push_back(stage("measure_F", [&] { return measure_F(rho, conv, opt); }));
  }
  std::ostringstream s;
  write_results_json(s, results);
  emit(g.out, s.str());
  return kOk;
}

struct WignerArgs {
  int twice_spin = 10;
  double gamma = 1.0;
  int ntheta = 0;
  int nphi = 0;
};

int cmd_wigner(const WignerArgs& a, const Global& g) {
  const CharacteristicTable table = characteristic_table(spin_cat_state(a.twice_spin, a.gamma));
  GridSpec spec = GridSpec::defaults(a.twice_spin);
  if (a.ntheta > 0) spec.n_theta = a.ntheta;
  if (a.nphi > 0) spec.n_phi = a.nphi;
  std::ostringstream s;
  write_wigner_csv(s, wigner_grid(table, spec));
  emit(g.out, s.str());
  return kOk;
}

struct SweepArgs {
  double lmin = 0.05;
  double lmax = 20.0;
  int steps = 40;
  std::vector<int> Ls{2, 4, 8};
  int restarts = 50;
  std::uint64_t seed = 0;
  bool no_F = false;
};

/// Log-spaced lambda grid that always contains 1.
std::vector<double> sweep_lambdas(double lmin, double lmax, int steps) {
  if (!(lmin > 0.0) || !(lmax >= lmin) || steps < 1) {
    throw InvalidArgument("need 0 < lmin <= lmax and steps >= 1");
  }
  std::vector<double> out;
  for (int i = 0; i <= steps; ++i) {
    out.push_back(steps == 0 ? lmin : lmin * std::pow(lmax / lmin, static_cast<double>(i) / steps));
  }
  if (lmin < 1.0 && lmax > 1.0) out.push_back(1.0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int cmd_ising_sweep(const SweepArgs& a, const Global& g) {
  const std::vector<double> lambdas = sweep_lambdas(a.lmin, a.lmax, a.steps);
  for (int L : a.Ls) {
    if (L < 1 || L > 12) throw InvalidArgument("--L values must lie in [1, 12]");
  }
  std::vector<std::pair<int, double>> points;
  std::vector<int> Ls = a.Ls;
  std::sort(Ls.begin(), Ls.end());
  Ls.erase(std::unique(Ls.begin(), Ls.end()), Ls.end());
  for (int L : Ls) {
    for (double lam : lambdas) points.emplace_back(L, lam);
  }
  SweepOptions so;
  so.optimizer.restarts = a.restarts;
  so.optimizer.seed = a.seed;
  so.compute_F = !a.no_F;
  std::vector<std::optional<SweepRecord>> records(points.size());
  std::vector<std::string> errors(points.size());
  detail::parallel_for(points.size(), g.threads, [&](std::size_t i) {
    try {
      SweepOptions one = so;
      one.threads = 1;
      records[i] = sweep_block({points[i].second}, {points[i].first}, one).front();
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  std::ostringstream s;
  s << "lambda,L,I,F,purity\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!records[i]) {
      s << "# FAILED lambda=" << format_double(points[i].second) << " L=" << points[i].first << ": " << errors[i]
        << '\n';
      emit(g.out, s.str());
      std::cerr << "error: numerical failure at lambda=" << format_double(points[i].second)
                << " L=" << points[i].first << ": " << errors[i] << '\n';
      return kNumerical;
    }
    std::ostringstream row;
    write_sweep_csv(row, {*records[i]});
    const std::string text = row.str();
    s << text.substr(text.find('\n') + 1);
  }
  emit(g.out, s.str());
  return kOk;
}

struct ScalingArgs {
  std::vector<int> Ns{8, 10, 12, 14};
  double lambda = 1.0;
  int restarts = 50;
  std::uint64_t seed = 0;
};

int cmd_ising_scaling(const ScalingArgs& a, const Global& g) {
  OptimizerOptions opt;
  opt.restarts = a.restarts;
  opt.seed = a.seed;
  opt.threads = g.threads;
  const ScalingFit fit = scaling_exponent(a.Ns, a.lambda, opt);
  std::ostringstream s;
  write_scaling_csv(s, fit);
  emit(g.out, s.str());
  std::cerr << "exponent " << format_double(fit.exponent) << '\n';
  return kOk;
}

struct DissipateArgs {
  int N = 50;
  double gamma = 1.0;
  double omega = 0.0;
  double tmax = 5.0;
  double dt = 0.0;
  double save_every = 0.01;
  int measure_every = 1;
  std::string path = "auto";
  int restarts = 50;
  std::uint64_t seed = 0;
};

int cmd_dissipate(const DissipateArgs& a, const Global& g) {
  if (a.N < 1) throw InvalidArgument("--N must be >= 1");
  const bool dicke = a.path == "dicke" || a.N > 10;
  if (a.path == "full" && a.N > 10) std::cerr << "note: N > 10 uses the Dicke path\n";
  double dt = a.dt;
  if (dt <= 0.0) dt = a.gamma > 0.0 ? std::min(1e-3, 0.1 / (a.gamma * (a.N + 1))) : 1e-3;
  LindbladSpec spec;
  spec.rabi_frequency = a.omega;
  spec.dissipation_rate = a.gamma;
  const std::vector<double> grid = uniform_grid(a.tmax, a.save_every);
  OptimizerOptions opt;
  opt.restarts = a.restarts;
  opt.seed = a.seed;
  opt.threads = g.threads;
  std::ostringstream s;
  if (dicke) {
    auto traj = dicke_evolve(dicke_ghz(a.N), spec, grid, dt);
    measure_trajectory(traj, opt, a.measure_every);
    write_trajectory_csv(s, traj);
  } else {
    auto traj = evolve(ghz_state(a.N, 1), spec, grid, dt);
    measure_trajectory(traj, opt, a.measure_every);
    write_trajectory_csv(s, traj);
  }
  emit(g.out, s.str());
  return kOk;
}

struct BenchArgs {
  std::vector<int> Ns{4, 6, 8, 10};
  int samples = 100;
  int reps = 5;
  int restarts = 200;
  std::uint64_t seed = 0;
};

int cmd_bench(const BenchArgs& a, const Global& g) {
  BenchOptions o;
  o.Ns = a.Ns;
  o.samples = a.samples;
  o.reps = a.reps;
  o.restarts = a.restarts;
  o.seed = a.seed;
  const auto records = run_bench(o);
  std::ostringstream s;
  write_bench_csv(s, records);
  emit(g.out, s.str());
  if (a.Ns.size() >= 2) {
    for (BenchPhase p : {BenchPhase::BuildV, BenchPhase::BuildW, BenchPhase::OptimizeV, BenchPhase::OptimizeW}) {
      std::cerr << to_string(p) << " exponent vs D: " << format_double(bench_exponent(records, p)) << '\n';
    }
  }
  return kOk;
}

struct SelftestArgs {
  bool json = false;
  std::string golden;
};

int cmd_selftest(const SelftestArgs& a, const Global& g) {
  std::map<std::string, double> overrides;
  if (!a.golden.empty()) {
    std::ifstream f(a.golden);
    if (!f) throw FormatError("cannot open golden file '" + a.golden + "'");
    nlohmann::json j;
    try {
      f >> j;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("golden file: ") + e.what());
    }
    if (!j.is_object()) throw FormatError("golden file must hold a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!it.value().is_number()) throw FormatError("golden value for '" + it.key() + "' is not a number");
      overrides[it.key()] = it.value().get<double>();
    }
  }
  const auto results = cli::run_golden(cli::golden_checks(g.threads), overrides);
  std::ostringstream s;
  if (a.json) {
    nlohmann::ordered_json report = nlohmann::ordered_json::array();
    for (const auto& r : results) {
      nlohmann::ordered_json e;
      e["name"] = r.name;
      e["passed"] = r.passed;
      e["actual"] = std::isfinite(r.actual) ? nlohmann::ordered_json(r.actual) : nlohmann::ordered_json();
      e["expected"] = r.expected;
      e["tolerance"] = r.tolerance;
      if (!r.error.empty()) e["error"] = r.error;
      report.push_back(e);
    }
    s << report.dump(2) << '\n';
  } else {
    cli::write_golden_text(s, results);
  }
  emit(g.out, s.str());
  for (const auto& r : results) {
    if (!r.passed) {
      std::cerr << "selftest failed: " << r.name << '\n';
      return kSelftest;
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Macroscopic quantumness measures for spin systems"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--out", g.out, "Output path, '-' for stdout")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads, 0 for all cores (ignored by bench)");

  MeasureArgs ma;
  auto* measure = app.add_subcommand("measure", "Evaluate I and/or F of an .msdm state file");
  measure->add_option("--in", ma.in, "Input .msdm file")->required();
  measure->add_option("--measure", ma.measure)->check(CLI::IsMember({"I", "F", "both"}))->capture_default_str();
  measure->add_option("--convention", ma.convention, "Default: qubit for spin-1/2, raw otherwise")
      ->check(CLI::IsMember({"raw", "qubit"}));
  measure->add_option("--restarts", ma.restarts)->check(CLI::PositiveNumber)->capture_default_str();
  measure->add_option("--seed", ma.seed)->capture_default_str();
  measure->add_option("--tol", ma.tol)->check(CLI::PositiveNumber)->capture_default_str();
  measure->add_option("--out", g.out, "Output path, '-' for stdout");

  WignerArgs wa;
  auto* wigner = app.add_subcommand("wigner", "Wigner grid of the spin cat family");
  wigner->add_option("--spin", wa.twice_spin, "Twice the spin, 2S")->check(CLI::Range(1, 200))->capture_default_str();
  wigner->add_option("--gamma", wa.gamma, "Coherence in [0, 1]")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  wigner->add_option("--ntheta", wa.ntheta, "Polar nodes, default 2S+2")->check(CLI::NonNegativeNumber);
  wigner->add_option("--nphi", wa.nphi, "Azimuthal nodes, default 4S+4")->check(CLI::NonNegativeNumber);
  wigner->add_option("--out", g.out, "Output path, '-' for stdout");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("ising-sweep", "I and F of Ising ground-state blocks versus lambda");
  sweep->add_option("--lmin", sa.lmin)->capture_default_str();
  sweep->add_option("--lmax", sa.lmax)->capture_default_str();
  sweep->add_option("--steps", sa.steps, "Log-spaced intervals")->capture_default_str();
  sweep->add_option("--L", sa.Ls, "Block sizes")->delimiter(',')->capture_default_str();
  sweep->add_option("--restarts", sa.restarts)->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--seed", sa.seed)->capture_default_str();
  sweep->add_flag("--no-F", sa.no_F, "Skip F");
  sweep->add_option("--out", g.out, "Output path, '-' for stdout");

  ScalingArgs sca;
  auto* scaling = app.add_subcommand("ising-scaling", "maxVar/N of exact Ising ground states versus N");
  scaling->add_option("--N", sca.Ns, "Chain lengths in [6, 14]")->delimiter(',')->capture_default_str();
  scaling->add_option("--lambda", sca.lambda)->capture_default_str();
  scaling->add_option("--restarts", sca.restarts)->check(CLI::PositiveNumber)->capture_default_str();
  scaling->add_option("--seed", sca.seed)->capture_default_str();
  scaling->add_option("--out", g.out, "Output path, '-' for stdout");

  DissipateArgs da;
  auto* dissipate = app.add_subcommand("dissipate", "Collective decay of a GHZ state");
  dissipate->add_option("--N", da.N)->check(CLI::PositiveNumber)->capture_default_str();
  dissipate->add_option("--gamma", da.gamma)->check(CLI::NonNegativeNumber)->capture_default_str();
  dissipate->add_option("--omega", da.omega, "Rabi frequency")->capture_default_str();
  dissipate->add_option("--tmax", da.tmax)->check(CLI::NonNegativeNumber)->capture_default_str();
  dissipate->add_option("--dt", da.dt, "RK4 step, default min(1e-3, 0.1/(gamma(N+1)))");
  dissipate->add_option("--save-every", da.save_every, "Time between saved rows")
      ->check(CLI::PositiveNumber)->capture_default_str();
  dissipate->add_option("--measure-every", da.measure_every, "Measure every k-th saved row")
      ->check(CLI::PositiveNumber)->capture_default_str();
  dissipate->add_option("--path", da.path, "full needs N <= 10")
      ->check(CLI::IsMember({"auto", "full", "dicke"}))->capture_default_str();
  dissipate->add_option("--restarts", da.restarts, "Optimizer restarts per saved row")
      ->check(CLI::PositiveNumber)->capture_default_str();
  dissipate->add_option("--seed", da.seed)->capture_default_str();
  dissipate->add_option("--out", g.out, "Output path, '-' for stdout");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Single-threaded timing of V/W construction and optimization");
  bench->add_option("--N", ba.Ns)->delimiter(',')->capture_default_str();
  bench->add_option("--samples", ba.samples)->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--reps", ba.reps)->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--restarts", ba.restarts)->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--seed", ba.seed)->capture_default_str();
  bench->add_option("--out", g.out, "Output path, '-' for stdout");

  SelftestArgs ta;
  auto* selftest = app.add_subcommand("selftest", "Run the embedded golden-value checks");
  selftest->add_flag("--json", ta.json, "Machine-readable report");
  selftest->add_option("--golden", ta.golden, "JSON object overriding expected values by check name");
  selftest->add_option("--out", g.out, "Output path, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*measure) return cmd_measure(ma, g);
    if (*wigner) return cmd_wigner(wa, g);
    if (*sweep) return cmd_ising_sweep(sa, g);
    if (*scaling) return cmd_ising_scaling(sca, g);
    if (*dissipate) return cmd_dissipate(da, g);
    if (*bench) return cmd_bench(ba, g);
    if (*selftest) return cmd_selftest(ta, g);
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFormat;
  } catch (const NumericalFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
