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

// Timing of the four stages of computing I and F on seeded random full-rank
// states. Every stage runs on the calling thread only.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "spinmacro/macromeasure.hpp"
#include "spinmacro/numfmt.hpp"
#include "spinmacro/rng.hpp"
#include "spinmacro/spincore.hpp"

namespace spinmacro {

enum class BenchPhase { BuildV, BuildW, OptimizeV, OptimizeW };

inline const char* to_string(BenchPhase p) {
  switch (p) {
    case BenchPhase::BuildV: return "BuildV";
    case BenchPhase::BuildW: return "BuildW";
    case BenchPhase::OptimizeV: return "OptimizeV";
    case BenchPhase::OptimizeW: return "OptimizeW";
  }
  return "?";
}

struct BenchRecord {
  int N = 0;
  BenchPhase phase = BenchPhase::BuildV;
  double median_seconds = 0.0;
  int samples = 0;
};

struct BenchOptions {
  std::vector<int> Ns{4, 6, 8, 10};
  int samples = 100;
  int reps = 5;
  std::uint64_t seed = 0;
  int restarts = 200;
};

inline double median(std::vector<double> v) {
  if (v.empty()) throw InvalidArgument("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Seed of benchmark sample `s` at size N: stream N of the user seed.
inline std::uint64_t bench_state_seed(std::uint64_t seed, int num_sites, int sample) {
  Rng rng(seed, static_cast<std::uint64_t>(num_sites));
  std::uint64_t out = 0;
  for (int i = 0; i <= sample; ++i) out = rng.next_u64();
  return out;
}

/// Per sample, each phase is timed `reps` times; the first sample of every N
/// also gets one untimed warmup of all phases. A sample's time is the median
/// over reps and the record holds the median over samples.
inline std::vector<BenchRecord> run_bench(const BenchOptions& opt) {
  if (opt.samples < 1 || opt.reps < 1) throw InvalidArgument("bench: samples and reps must be >= 1");
  using clock = std::chrono::steady_clock;
  std::vector<BenchRecord> out;
  OptimizerOptions oo;
  oo.restarts = opt.restarts;
  oo.seed = opt.seed;
  oo.threads = 1;
  for (int n : opt.Ns) {
    const SystemDescriptor desc(n, 1);
    std::vector<std::vector<double>> per_phase(4);
    for (int s = 0; s < opt.samples; ++s) {
      const DensityMatrix rho = random_density(desc, desc.dim(), bench_state_seed(opt.seed, n, s));
      auto make_v = [&] { return build_V(rho, OperatorKind::PauliOps, Convention::QubitNormalized); };
      auto make_w = [&] { return build_W(rho, OperatorKind::PauliOps, Convention::QubitNormalized); };
      if (s == 0) {
        (void)optimize_direction(make_v(), oo);
        (void)optimize_direction(make_w(), oo);
      }
      std::optional<MeasureMatrix> v, w;
      auto time = [&](auto&& fn) {
        std::vector<double> t;
        for (int r = 0; r < opt.reps; ++r) {
          const auto t0 = clock::now();
          fn();
          t.push_back(std::chrono::duration<double>(clock::now() - t0).count());
        }
        return median(std::move(t));
      };
      per_phase[0].push_back(time([&] { v = make_v(); }));
      per_phase[1].push_back(time([&] { w = make_w(); }));
      per_phase[2].push_back(time([&] { (void)optimize_direction(*v, oo); }));
      per_phase[3].push_back(time([&] { (void)optimize_direction(*w, oo); }));
    }
    for (int p = 0; p < 4; ++p) {
      out.push_back({n, static_cast<BenchPhase>(p), median(per_phase[static_cast<std::size_t>(p)]), opt.samples});
    }
  }
  return out;
}

/// Least-squares exponent of median time against D = 2^N for one phase.
inline double bench_exponent(const std::vector<BenchRecord>& records, BenchPhase phase) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (const auto& r : records) {
    if (r.phase != phase) continue;
    const double lx = r.N * std::log(2.0), ly = std::log(r.median_seconds);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    n += 1;
  }
  if (n < 2) throw InvalidArgument("bench_exponent: need at least two sizes");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "N,phase,median_seconds,samples\n";
  for (const auto& r : records) {
    out << r.N << ',' << to_string(r.phase) << ',' << format_double(r.median_seconds) << ',' << r.samples << '\n';
  }
}

}  // namespace spinmacro
