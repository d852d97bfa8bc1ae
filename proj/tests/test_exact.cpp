#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qlr/exact.hpp"
#include "qlr/localratio.hpp"
#include "qlr/random.hpp"

using namespace qlr;

namespace {

LocalTerm x_term(double c = 1.0) { return {c, BlochProjector::minus(), 0.0}; }
LocalTerm one_term(double c = 1.0) { return {c, BlochProjector::one(), 0.0}; }

std::vector<std::string> cover_strings(const std::vector<std::uint64_t>& xs, int n) {
  std::vector<std::string> out;
  for (auto x : xs) out.push_back(to_bitstring(x, n));
  return out;
}

double cubic_root() {
  return oracle::bisect([](double u) { return u * u * u + 4 * u * u - u - 2; }, 0.5, 1.0);
}

}  // namespace

TEST(EnumerateCovers, Examples) {
  const std::vector<Edge> edge{{0, 1}};
  EXPECT_EQ(cover_strings(enumerate_covers(2, edge), 2), (std::vector<std::string>{"01", "10", "11"}));
  const std::vector<Edge> tri{{0, 1}, {0, 2}, {1, 2}};
  EXPECT_EQ(cover_strings(enumerate_covers(3, tri), 3), (std::vector<std::string>{"011", "101", "110", "111"}));
  EXPECT_EQ(enumerate_covers(3, std::vector<Edge>{}).size(), 8u);
  EXPECT_THROW(enumerate_covers(25, std::vector<Edge>{}), CapExceeded);
}

TEST(EnumerateCovers, MatchesBruteForceFilter) {
  for (std::uint64_t idx = 0; idx < 40; ++idx) {
    GenOptions g;
    g.n = 2 + static_cast<int>(idx % 9);
    g.density = 0.4;
    g.seed = 8;
    g.index = idx;
    const auto inst = generate_instance(g);
    const auto covers = enumerate_covers(inst);
    const auto brute = oracle::covering_indices(inst);
    ASSERT_EQ(covers.size(), brute.size());
    for (std::size_t i = 0; i < covers.size(); ++i) EXPECT_EQ(static_cast<Eigen::Index>(covers[i]), brute[i]);
  }
}

TEST(GroundEnergyTvc, Examples) {
  Instance edge(Kind::Tvc, {x_term(), x_term()}, {{0, 1}});
  EXPECT_NEAR(ground_energy_tvc(edge).ground(), 1 - std::sqrt(2.0) / 2, 1e-12);
  EXPECT_NEAR(ground_energy_tvc(Instance(Kind::Tvc, {x_term()}, {})).ground(), 0.0, 1e-12);
  Instance path(Kind::Tvc, {one_term(), one_term(), one_term()}, {{0, 1}, {1, 2}});
  const auto rep = ground_energy_tvc(path);
  EXPECT_EQ(rep.dim, 5u);
  EXPECT_EQ(rep.basis, "covering");
  EXPECT_NEAR(rep.ground(), 1.0, 1e-12);
}

TEST(GroundEnergyTvc, AgreesWithKroneckerOracle) {
  for (std::uint64_t idx = 0; idx < 40; ++idx) {
    GenOptions g;
    g.n = 1 + static_cast<int>(idx % 9);
    g.seed = 19;
    g.index = idx;
    const auto inst = generate_instance(g);
    const auto rep = ground_energy_tvc(inst, 3);
    EXPECT_NEAR(rep.ground(), oracle::tvc_ground(inst), 1e-9);
    EXPECT_TRUE(std::is_sorted(rep.eigs.begin(), rep.eigs.end()));
  }
}

TEST(GroundEnergyTvc, SubspaceConsistencyWithNullspace) {
  for (std::uint64_t idx = 0; idx < 30; ++idx) {
    GenOptions g;
    g.n = 2 + static_cast<int>(idx % 9);
    g.seed = 77;
    g.index = idx;
    const auto inst = generate_instance(g);
    EXPECT_NEAR(ground_energy_tvc(inst).ground(), ground_energy_nullspace(inst).ground(), 1e-9) << idx;
  }
}

TEST(GroundEnergyTvc, VariationalBound) {
  Rng rng(4);
  for (std::uint64_t idx = 0; idx < 30; ++idx) {
    GenOptions g;
    g.n = 2 + static_cast<int>(idx % 8);
    g.seed = 5;
    g.index = idx;
    const auto inst = generate_instance(g);
    const double e0 = ground_energy_tvc(inst).ground();
    const auto adj = inst.adjacency();
    // Feasible product states: an independent set gets arbitrary Bloch vectors, the rest |1>.
    for (int t = 0; t < 10; ++t) {
      ProductState s;
      std::vector<char> blocked(static_cast<std::size_t>(inst.n()), 0);
      for (int i = 0; i < inst.n(); ++i) {
        if (!blocked[static_cast<std::size_t>(i)] && rng.bernoulli(0.5)) {
          for (int j : adj[static_cast<std::size_t>(i)]) blocked[static_cast<std::size_t>(j)] = 1;
          const double th = rng.uniform(0, kPi), ph = rng.uniform(0, 2 * kPi);
          s.bloch.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
        } else {
          blocked[static_cast<std::size_t>(i)] = 1;
          s.bloch.push_back({0, 0, -1});
        }
      }
      ASSERT_TRUE(feasibility(inst, s));
      EXPECT_LE(e0, evaluate(inst, s) + 1e-9);
    }
  }
}

TEST(GroundEnergyFull, Examples) {
  Instance worst(Kind::Pcvc, {x_term(), x_term()}, {{0, 1, 4.0}});
  const double u = cubic_root();
  EXPECT_NEAR(u, 0.76155, 1e-5);
  EXPECT_NEAR(ground_energy_full(worst).ground(), 1 - u, 1e-10);
  EXPECT_NEAR(ground_energy_full(worst).ground(), 0.238443, 1e-6);

  Rng rng(9);
  const auto p = random_stoquastic(rng), q = random_stoquastic(rng);
  Instance free(Kind::Pcvc, {{1.3, p, 0.0}, {0.4, q, 0.0}}, {{0, 1, 0.0}});
  EXPECT_NEAR(ground_energy_full(free).ground(), 0.0, 1e-12);

  Instance classical(Kind::Pcvc, {one_term(3), one_term(1)}, {{0, 1, 1.0}});
  EXPECT_NEAR(ground_energy_full(classical).ground(), 1.0, 1e-12);
}

TEST(GroundEnergyFull, AgreesWithKroneckerOracle) {
  for (std::uint64_t idx = 0; idx < 30; ++idx) {
    GenOptions g;
    g.kind = Kind::Pcvc;
    g.n = 1 + static_cast<int>(idx % 9);
    g.seed = 21;
    g.index = idx;
    const auto inst = generate_instance(g);
    const auto rep = ground_energy_full(inst, 2);
    EXPECT_EQ(rep.basis, "full");
    EXPECT_NEAR(rep.ground(), oracle::full_ground(inst), 1e-9);
  }
}

TEST(GroundEnergyFull, MatrixFreePathAboveDenseLimit) {
  GenOptions g;
  g.kind = Kind::Pcvc;
  g.n = 12;
  g.seed = 2;
  const auto inst = generate_instance(g);
  const auto sparse = ground_energy_full(inst, 2);
  // Real dense matrix of the canonical frame, built entry by entry.
  const auto canon = canonicalize(inst).instance;
  const int n = canon.n();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(4096, 4096);
  for (Eigen::Index x = 0; x < 4096; ++x) {
    h(x, x) = canon.total_offset();
    for (int i = 0; i < n; ++i) {
      const auto& t = canon.term(i);
      const bool one = (x >> (n - 1 - i)) & 1;
      h(x, x) += t.c * 0.5 * (1 + (one ? -t.projector.az : t.projector.az));
      h(x ^ (Eigen::Index{1} << (n - 1 - i)), x) += t.c * 0.5 * t.projector.ax;
    }
    for (const auto& e : canon.edges()) {
      if (!((x >> (n - 1 - e.u)) & 1) && !((x >> (n - 1 - e.v)) & 1)) h(x, x) += e.penalty;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> dense_eigs{es.eigenvalues()(0), es.eigenvalues()(1)};
  ASSERT_EQ(sparse.dim, 4096u);
  EXPECT_NEAR(sparse.eigs[0], dense_eigs[0], 1e-8);
  EXPECT_NEAR(sparse.eigs[1], dense_eigs[1], 1e-8);
}

TEST(GroundEnergyFull, MonotoneInPenalties) {
  Rng rng(31);
  for (std::uint64_t idx = 0; idx < 20; ++idx) {
    GenOptions g;
    g.kind = Kind::Pcvc;
    g.n = 2 + static_cast<int>(idx % 6);
    g.seed = 13;
    g.index = idx;
    const auto inst = generate_instance(g);
    double prev = ground_energy_full(inst).ground();
    std::vector<Edge> edges(inst.edges().begin(), inst.edges().end());
    std::vector<LocalTerm> terms(inst.terms().begin(), inst.terms().end());
    for (int step = 0; step < 5; ++step) {
      edges[rng.below(edges.size())].penalty += rng.uniform(0, 1);
      const double cur = ground_energy_full(Instance(Kind::Pcvc, terms, edges)).ground();
      EXPECT_GE(cur, prev - 1e-10);
      prev = cur;
    }
  }
}

TEST(GroundEnergyNullspace, Examples) {
  Instance bell(Kind::Evc, {one_term(), one_term()}, {{0, 1}}, 0.0, ConstraintSpec::bell());
  const auto rep = ground_energy_nullspace(bell);
  EXPECT_EQ(rep.dim, 3u);
  EXPECT_NEAR(rep.ground(), 1.0, 1e-12);

  Instance singlet(Kind::Evc, {one_term(), one_term()}, {{0, 1}}, 0.0, ConstraintSpec::singlet());
  EXPECT_NEAR(ground_energy_nullspace(singlet).ground(), 0.0, 1e-12);

  Instance classical(Kind::Evc, {one_term(), one_term()}, {{0, 1}}, 0.0, ConstraintSpec::classical());
  EXPECT_NEAR(ground_energy_nullspace(classical).ground(), 1.0, 1e-12);
}

TEST(GroundEnergyNullspace, AgreesWithKroneckerOracle) {
  for (std::uint64_t idx = 0; idx < 24; ++idx) {
    GenOptions g;
    g.kind = Kind::Evc;
    g.n = 2 + static_cast<int>(idx % 6);
    g.psi = idx % 3 == 0 ? "singlet" : (idx % 3 == 1 ? "bell" : "diagonal");
    g.seed = 6;
    g.index = idx;
    const auto inst = generate_instance(g);
    EXPECT_NEAR(ground_energy_nullspace(inst).ground(), oracle::evc_ground(inst), 1e-9);
  }
}

TEST(GroundEnergyNullspace, CapsAndInfeasibleReport) {
  const std::vector<Edge> e{{0, 1}};
  const auto rep = nullspace_spectrum(2, e, ConstraintSpec::classical().amplitudes(), Eigen::MatrixXcd::Zero(4, 4));
  EXPECT_FALSE(rep.infeasible);
  EXPECT_EQ(rep.dim, 3u);
  EXPECT_THROW(nullspace_spectrum(13, e, ConstraintSpec::classical().amplitudes(), Eigen::MatrixXcd::Zero(1, 1)),
               CapExceeded);
  SpectrumReport empty;
  empty.infeasible = true;
  EXPECT_THROW(empty.ground(), Error);
}

TEST(ExactSpectrum, DispatchesByKind) {
  Instance tvc(Kind::Tvc, {x_term(), x_term()}, {{0, 1}});
  EXPECT_EQ(exact_spectrum(tvc).basis, "covering");
  Instance pc(Kind::Pcvc, {x_term(), x_term()}, {{0, 1, 4.0}});
  EXPECT_EQ(exact_spectrum(pc).basis, "full");
  Instance evc(Kind::Evc, {one_term(), one_term()}, {{0, 1}}, 0.0, ConstraintSpec::bell());
  EXPECT_EQ(exact_spectrum(evc).basis, "nullspace");
  EXPECT_THROW(ground_energy_tvc(pc), Error);
}
