#pragma once

// Seeded instance generators. Every draw comes from raw 64-bit outputs so the
// streams are identical across platforms and standard libraries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qlr/core.hpp"
#include "qlr/evc.hpp"

namespace qlr {

inline constexpr const char* kRngName = "mt19937_64/splitmix64-v1";

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stream `index` of the generator family rooted at `seed`.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t index = 0) {
    std::uint64_t s = seed;
    splitmix64(s);
    s ^= index * 0xD1B54A32D192ED03ULL;
    eng_.seed(splitmix64(s));
  }

  std::uint64_t next() { return eng_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform in (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }
  int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 eng_;
};

enum class GraphShape { Any, Bipartite, NonBipartite };

/// Random connected graph: random recursive spanning tree plus each remaining allowed pair with probability `density`.
inline std::vector<Edge> random_connected_graph(int n, double density, Rng& rng, GraphShape shape = GraphShape::Any) {
  if (n < 1) throw Error("random graph: n must be >= 1");
  if (!(density > 0.0 && density <= 1.0)) throw Error("random graph: density must be in (0, 1]");
  std::vector<int> side(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  std::vector<Edge> edges;
  auto add = [&](int a, int b) {
    adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = adj[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
    edges.push_back({std::min(a, b), std::max(a, b), 0.0});
  };
  for (int i = 1; i < n; ++i) {
    const int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(i)));
    side[static_cast<std::size_t>(i)] = 1 - side[static_cast<std::size_t>(p)];
    add(p, i);
  }
  bool odd_cycle = false;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) continue;
      const bool cross = side[static_cast<std::size_t>(i)] != side[static_cast<std::size_t>(j)];
      if (shape == GraphShape::Bipartite && !cross) continue;
      if (rng.bernoulli(density)) {
        add(i, j);
        odd_cycle = odd_cycle || !cross;
      }
    }
  }
  if (shape == GraphShape::NonBipartite && !odd_cycle) {
    if (n < 3) throw Error("random graph: a non-bipartite graph needs n >= 3");
    // Close an odd cycle: the tree path between two same-side vertices has even length.
    for (int i = 0; i < n && !odd_cycle; ++i) {
      for (int j = i + 1; j < n && !odd_cycle; ++j) {
        if (side[static_cast<std::size_t>(i)] == side[static_cast<std::size_t>(j)] && !adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
          add(i, j);
          odd_cycle = true;
        }
      }
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
  return edges;
}

/// Stoquastic projector on the ay = 0, ax <= 0, az <= 0 quarter circle.
inline BlochProjector random_stoquastic(Rng& rng) {
  const double t = rng.uniform(0.0, 0.5 * kPi);
  return {-std::sin(t), 0.0, -std::cos(t)};
}

/// Uniform point on the Bloch sphere.
inline BlochProjector random_projector(Rng& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double ph = rng.uniform(0.0, 2.0 * kPi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(ph), r * std::sin(ph), z};
}

struct GenOptions {
  Kind kind = Kind::Tvc;
  int n = 6;
  double density = 0.3;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  bool classical = false;      // tvc/pcvc: every projector |1><1|
  std::string psi = "bell";    // evc: bell | singlet | diagonal
  GraphShape shape = GraphShape::Any;
  double max_penalty = 4.0;    // pcvc: c_ij ~ Uniform(0, max_penalty]
};

inline Instance generate_instance(const GenOptions& o) {
  Rng rng(o.seed, o.index);
  auto edges = random_connected_graph(o.n, o.density, rng, o.shape);
  std::vector<LocalTerm> terms;
  for (int i = 0; i < o.n; ++i) {
    LocalTerm t;
    t.c = rng.uniform_pos();
    if (o.kind == Kind::Evc) {
      t.projector = random_projector(rng);
    } else {
      t.projector = o.classical ? BlochProjector::one() : random_stoquastic(rng);
    }
    terms.push_back(t);
  }
  std::optional<ConstraintSpec> psi;
  if (o.kind == Kind::Pcvc) {
    for (auto& e : edges) e.penalty = o.max_penalty * rng.uniform_pos();
  } else if (o.kind == Kind::Evc) {
    if (o.psi == "singlet") {
      psi = ConstraintSpec::singlet();
    } else if (o.psi == "bell") {
      psi = ConstraintSpec::bell();
    } else if (o.psi == "diagonal") {
      const double t = rng.uniform(0.05, 0.5 * kPi - 0.05);
      psi = ConstraintSpec::diagonal(std::cos(t), std::sin(t));
    } else {
      throw Error("unknown psi '" + o.psi + "' (bell | singlet | diagonal)");
    }
  }
  return Instance(o.kind, std::move(terms), std::move(edges), 0.0, psi);
}

}  // namespace qlr
