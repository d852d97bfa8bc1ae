#pragma once

// Benchmark suites: seeded instance streams, solver-vs-oracle rows, CSV output.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qlr/evc.hpp"
#include "qlr/exact.hpp"
#include "qlr/gadgets.hpp"
#include "qlr/io.hpp"
#include "qlr/localratio.hpp"
#include "qlr/random.hpp"

namespace qlr {

struct BenchRow {
  std::uint64_t id = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int edges = 0;
  std::string kind;
  double algo_energy = 0.0;
  std::optional<double> exact_energy;
  std::optional<double> ratio;  // algo / exact when exact > 1e-12
  double metric = 0.0;          // suite-specific: ratio, |evc - oracle|, or max gap error
  bool failed = false;
  std::string error;
  double wall_ms = 0.0;
};

struct BenchOptions {
  std::string suite = "tvc-small";
  int trials = 0;  // 0 = suite default
  std::uint64_t seed = 1;
  int threads = 1;
  int max_n = 10;
  double tol = 1e-8;  // evc oracle-match tolerance
};

struct BenchSummary {
  std::vector<BenchRow> rows;
  double bound = 0.0;
  double max_metric = 0.0;
  double mean_metric = 0.0;
  int failures = 0;
  bool ok() const { return failures == 0; }
};

inline const std::vector<std::string>& bench_suites() {
  static const std::vector<std::string> s{"tvc-small", "pcvc-small", "evc-small", "gadget-sweep"};
  return s;
}

inline int default_trials(const std::string& suite) {
  if (suite == "tvc-small" || suite == "pcvc-small") return 200;
  if (suite == "evc-small") return 100;
  return 1;
}

namespace detail {

inline void ratio_row(BenchRow& row, double algo, double exact, double bound) {
  row.algo_energy = algo;
  row.exact_energy = exact;
  if (exact > 1e-12) row.ratio = algo / exact;
  row.metric = row.ratio.value_or(1.0);
  row.failed = algo > bound * exact + 1e-7;
}

inline BenchRow bench_one(const BenchOptions& o, std::uint64_t id) {
  BenchRow row;
  row.id = id;
  row.seed = o.seed;
  Rng meta(o.seed ^ 0xA5A5A5A5A5A5A5A5ULL, id);
  GenOptions g;
  g.seed = o.seed;
  g.index = id;
  g.n = meta.range(2, std::max(2, o.max_n));
  g.density = 0.3;
  if (o.suite == "tvc-small") {
    g.kind = Kind::Tvc;
    const auto inst = generate_instance(g);
    const auto lr = lr_tvc(inst);
    ratio_row(row, lr.energy, ground_energy_tvc(inst).ground(), kTvcRatio);
    if (!feasibility(inst, lr.state)) row.failed = true;
    row.n = inst.n();
    row.edges = static_cast<int>(inst.edges().size());
  } else if (o.suite == "pcvc-small") {
    g.kind = Kind::Pcvc;
    const auto inst = generate_instance(g);
    const auto lr = lr_tpcvc(inst);
    ratio_row(row, lr.energy, ground_energy_full(inst).ground(), kPcvcRatio);
    row.n = inst.n();
    row.edges = static_cast<int>(inst.edges().size());
  } else if (o.suite == "evc-small") {
    g.kind = Kind::Evc;
    const int which = static_cast<int>(id % 3);
    g.n = which == 2 ? std::max(3, g.n) : g.n;
    g.psi = which == 1 ? "singlet" : "diagonal";
    g.shape = which == 0 ? GraphShape::Bipartite : (which == 2 ? GraphShape::NonBipartite : GraphShape::Any);
    const auto inst = generate_instance(g);
    const double e = solve_evc(inst).energy;
    const double ex = ground_energy_nullspace(inst).ground();
    row.algo_energy = e;
    row.exact_energy = ex;
    if (std::abs(ex) > 1e-12) row.ratio = e / ex;
    row.metric = std::abs(e - ex);
    row.failed = row.metric > o.tol;
    row.n = inst.n();
    row.edges = static_cast<int>(inst.edges().size());
  } else {
    throw Error("unknown suite '" + o.suite + "'");
  }
  row.kind = to_string(g.kind);
  return row;
}

inline std::vector<BenchRow> gadget_rows(const BenchOptions& o, bool& monotone) {
  TIMInstance tim{2, {{0, 1, 1.0}}, {-0.5, -0.5}};
  const auto rep = gadget_convergence(tim, {8.0, 16.0, 32.0, 64.0}, 4);
  monotone = rep.monotone;
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    BenchRow row;
    row.id = i;
    row.seed = o.seed;
    row.n = r.qubits;
    row.edges = static_cast<int>(tim_to_tvc(tim, r.delta).edges().size());
    row.kind = "gadget@" + format_double(r.delta);
    row.algo_energy = r.gadget_ground;
    row.exact_energy = r.tim_ground;
    row.metric = r.max_gap_error;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

inline BenchSummary run_bench(const BenchOptions& o, bool timing = false) {
  BenchSummary sum;
  if (std::find(bench_suites().begin(), bench_suites().end(), o.suite) == bench_suites().end()) {
    throw Error("unknown suite '" + o.suite + "'");
  }
  if (o.suite == "gadget-sweep") {
    bool monotone = true;
    sum.rows = detail::gadget_rows(o, monotone);
    if (!monotone) {
      sum.failures = 1;
      for (auto& r : sum.rows) r.failed = true;
    }
  } else {
    const int trials = o.trials > 0 ? o.trials : default_trials(o.suite);
    sum.rows.resize(static_cast<std::size_t>(trials));
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int i = next++; i < trials; i = next++) {
        const auto t0 = std::chrono::steady_clock::now();
        BenchRow row;
        try {
          row = detail::bench_one(o, static_cast<std::uint64_t>(i));
        } catch (const std::exception& e) {
          row.id = static_cast<std::uint64_t>(i);
          row.seed = o.seed;
          row.failed = true;
          row.error = e.what();
        }
        if (timing) row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        sum.rows[static_cast<std::size_t>(i)] = std::move(row);
      }
    };
    const int nt = std::max(1, std::min(o.threads, trials));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }
  sum.bound = o.suite == "tvc-small" ? kTvcRatio : o.suite == "pcvc-small" ? kPcvcRatio : o.suite == "evc-small" ? o.tol : 0.0;
  double total = 0.0;
  for (const auto& r : sum.rows) {
    sum.max_metric = std::max(sum.max_metric, r.metric);
    total += r.metric;
    if (r.failed && o.suite != "gadget-sweep") ++sum.failures;
  }
  sum.mean_metric = sum.rows.empty() ? 0.0 : total / static_cast<double>(sum.rows.size());
  return sum;
}

inline std::string bench_csv(const BenchSummary& s, bool timing = false) {
  std::string out = "id,seed,n,edges,kind,algo_energy,exact_energy,ratio,metric";
  out += timing ? ",wall_ms\n" : "\n";
  for (const auto& r : s.rows) {
    out += std::to_string(r.id) + "," + std::to_string(r.seed) + "," + std::to_string(r.n) + "," + std::to_string(r.edges) +
           "," + r.kind + "," + format_double(r.algo_energy) + "," + (r.exact_energy ? format_double(*r.exact_energy) : "") +
           "," + (r.ratio ? format_double(*r.ratio) : "") + "," + format_double(r.metric);
    if (timing) out += "," + format_double(r.wall_ms);
    out += "\n";
  }
  return out;
}

}  // namespace qlr
