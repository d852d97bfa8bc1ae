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

Instance classical(std::vector<double> c, std::vector<Edge> e) {
  std::vector<LocalTerm> t;
  for (double ci : c) t.push_back(one_term(ci));
  return Instance(Kind::Tvc, t, std::move(e));
}

void expect_bloch(const Bloch& r, double x, double y, double z) {
  EXPECT_NEAR(r.x, x, 1e-12);
  EXPECT_NEAR(r.y, y, 1e-12);
  EXPECT_NEAR(r.z, z, 1e-12);
}

Instance random_inst(Kind kind, int n, std::uint64_t seed, std::uint64_t idx, bool diag = false) {
  GenOptions g;
  g.kind = kind;
  g.n = n;
  g.seed = seed;
  g.index = idx;
  g.classical = diag;
  return generate_instance(g);
}

// Arbitrary-frame variant: every projector rotated about Z by a random angle.
Instance scramble(const Instance& inst, Rng& rng) {
  std::vector<LocalTerm> t(inst.terms().begin(), inst.terms().end());
  for (auto& term : t) {
    const double phi = rng.uniform(0, 2 * kPi);
    const double x = term.projector.ax;
    term.projector = {x * std::cos(phi), x * std::sin(phi), term.projector.az};
  }
  return inst.with_terms(std::move(t));
}

}  // namespace

TEST(EdgeRestrictedMin, Examples) {
  EXPECT_NEAR(edge_restricted_min(0, 0), 1 - std::sqrt(2.0) / 2, 1e-12);
  EXPECT_NEAR(edge_restricted_min(-1, -1), 1.0, 1e-12);
  EXPECT_NEAR(edge_restricted_min(-1, 0), 0.5, 1e-12);
  EXPECT_THROW(edge_restricted_min(0.5, 0), Error);
  EXPECT_THROW(edge_restricted_min(-1.5, 0), Error);
}

TEST(EdgeRestrictedMin, AgreesWithThreeByThreeOnGrid) {
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const double a = -i / 40.0, b = -j / 40.0;
      EXPECT_NEAR(edge_restricted_min(a, b), oracle::edge_matrix_min(a, b), 1e-12) << a << " " << b;
    }
  }
}

TEST(PcvcEdgeMin, WorstCaseMatchesCubic) {
  const double u = oracle::bisect([](double v) { return v * v * v + 4 * v * v - v - 2; }, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(pcvc_lambda(0, 0), 4.0);
  EXPECT_NEAR(pcvc_edge_min(0, 0, 4.0), 1 - u, 1e-12);
}

TEST(ClassicalVc, Examples) {
  const auto path = lr_classical_vc(classical({1, 1, 1}, {{0, 1}, {1, 2}}));
  EXPECT_EQ(path.cover, (std::vector<int>{0, 1}));
  EXPECT_DOUBLE_EQ(path.cost, 2.0);

  const auto star = lr_classical_vc(classical({0, 1, 1, 1}, {{0, 1}, {0, 2}, {0, 3}}));
  EXPECT_EQ(star.cover, (std::vector<int>{0}));
  EXPECT_DOUBLE_EQ(star.cost, 0.0);

  const auto edge = lr_classical_vc(classical({3, 1}, {{0, 1}}));
  ASSERT_EQ(edge.cert.rounds.size(), 1u);
  EXPECT_DOUBLE_EQ(edge.cert.rounds[0].w, 1.0);
  EXPECT_EQ(edge.cover, (std::vector<int>{1}));
  EXPECT_DOUBLE_EQ(edge.cost, 1.0);

  EXPECT_THROW(lr_classical_vc(Instance(Kind::Tvc, {x_term(), x_term()}, {{0, 1}})), Error);
}

TEST(ClassicalVc, TwoApproximationAgainstEnumeration) {
  for (std::uint64_t idx = 0; idx < 100; ++idx) {
    const auto inst = random_inst(Kind::Tvc, 2 + static_cast<int>(idx % 11), 41, idx, true);
    const auto res = lr_classical_vc(inst);
    std::vector<double> c;
    for (const auto& t : inst.terms()) c.push_back(t.c);
    std::vector<Edge> e(inst.edges().begin(), inst.edges().end());
    const double opt = oracle::min_vertex_cover(inst.n(), e, c);
    std::vector<char> in(static_cast<std::size_t>(inst.n()), 0);
    for (int v : res.cover) in[static_cast<std::size_t>(v)] = 1;
    for (const auto& ed : e) EXPECT_TRUE(in[static_cast<std::size_t>(ed.u)] || in[static_cast<std::size_t>(ed.v)]);
    EXPECT_LE(res.cost, 2 * opt + 1e-9);
  }
}

TEST(LrTvc, WorstCaseEdge) {
  Instance inst(Kind::Tvc, {x_term(), x_term()}, {{0, 1}});
  const auto res = lr_tvc(inst);
  expect_bloch(res.state[0], 0, 0, -1);
  expect_bloch(res.state[1], 0, 0, -1);
  EXPECT_NEAR(res.energy, 1.0, 1e-12);
  const double exact = oracle::tvc_ground(inst);
  EXPECT_NEAR(res.energy / exact, 2 + std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(res.cert.alpha_effective, 2 + std::sqrt(2.0), 1e-9);
}

TEST(LrTvc, ClassicalExamples) {
  const auto edge = classical({1, 1}, {{0, 1}});
  const auto r1 = lr_tvc(edge);
  EXPECT_NEAR(r1.energy, 2.0, 1e-12);
  EXPECT_NEAR(r1.energy / oracle::tvc_ground(edge), 2.0, 1e-12);

  const auto tri = classical({1, 1, 1}, {{0, 1}, {0, 2}, {1, 2}});
  const auto r2 = lr_tvc(tri);
  EXPECT_NEAR(r2.energy, 2.0, 1e-12);
  EXPECT_NEAR(oracle::tvc_ground(tri), 2.0, 1e-12);
}

TEST(LrTvc, IsolatedVerticesTakeAntipodalState) {
  Instance inst(Kind::Tvc, {x_term(), {0.0, BlochProjector::minus(), 0.0}}, {});
  const auto res = lr_tvc(inst);
  expect_bloch(res.state[0], 1, 0, 0);
  expect_bloch(res.state[1], 1, 0, 0);
  EXPECT_NEAR(res.energy, 0.0, 1e-15);
}

TEST(LrTvc, OutputInOriginalFrame) {
  Instance inst(Kind::Tvc, {{1.0, {1, 0, 0}, 0.0}, {1.0, {0, 1, 0}, 0.0}, {1.0, {0, 0, -1}, 0.0}}, {{0, 2}});
  const auto res = lr_tvc(inst);
  expect_bloch(res.state[1], 0, -1, 0);
  EXPECT_NEAR(res.energy, evaluate(inst, res.state), 1e-15);
}

TEST(LrTvc, FeasibleOnRandomInstances) {
  for (std::uint64_t idx = 0; idx < 200; ++idx) {
    const auto inst = random_inst(Kind::Tvc, 1 + static_cast<int>(idx % 12), 91, idx);
    EXPECT_TRUE(feasibility(inst, lr_tvc(inst).state, 1e-9));
  }
}

TEST(LrTvc, RatioSoundAndCertified) {
  Rng rng(12);
  for (std::uint64_t idx = 0; idx < 120; ++idx) {
    auto inst = random_inst(Kind::Tvc, 2 + static_cast<int>(idx % 9), 57, idx);
    if (idx % 2) inst = scramble(inst, rng);
    const auto res = lr_tvc(inst);
    const double exact = oracle::tvc_ground(inst);
    EXPECT_LE(res.energy, (kTvcRatio + 1e-7) * exact) << idx;
    const auto rep = certify(inst, res.state, res.cert);
    EXPECT_TRUE(rep.ok()) << idx;
    EXPECT_LE(rep.alpha_effective, kTvcRatio + 1e-7);
    EXPECT_LE(res.cert.rounds.size(), inst.edges().size());
  }
}

TEST(LrTvc, ReverseOrderAlsoSound) {
  for (std::uint64_t idx = 0; idx < 40; ++idx) {
    const auto inst = random_inst(Kind::Tvc, 3 + static_cast<int>(idx % 7), 58, idx);
    const auto res = lr_tvc(inst, EdgeOrder::reversed(inst.edges().size()));
    EXPECT_TRUE(feasibility(inst, res.state));
    EXPECT_TRUE(certify(inst, res.state, res.cert).ok());
    EXPECT_LE(res.energy, (kTvcRatio + 1e-7) * oracle::tvc_ground(inst));
  }
  EdgeOrder bad;
  bad.permutation = {0, 0};
  EXPECT_THROW(lr_tvc(classical({1, 1, 1}, {{0, 1}, {1, 2}}), bad), Error);
}

TEST(LrTvc, MonotoneWeightFlow) {
  for (std::uint64_t idx = 0; idx < 50; ++idx) {
    const auto inst = random_inst(Kind::Tvc, 2 + static_cast<int>(idx % 9), 60, idx);
    const auto res = lr_tvc(inst);
    std::vector<double> w;
    for (const auto& t : inst.terms()) w.push_back(t.c);
    for (const auto& rd : res.cert.rounds) {
      EXPECT_GE(rd.w, 0.0);
      for (int v : {rd.edge.u, rd.edge.v}) {
        const double next = w[static_cast<std::size_t>(v)] - rd.w;
        EXPECT_LE(next, w[static_cast<std::size_t>(v)]);
        EXPECT_GE(next, -1e-12);
        w[static_cast<std::size_t>(v)] = std::max(0.0, next);
      }
    }
    for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w[i], res.cert.residual[i], 1e-12);
  }
}

TEST(LrTvc, ClassicalSpecializationTwoBound) {
  for (std::uint64_t idx = 0; idx < 60; ++idx) {
    const auto inst = random_inst(Kind::Tvc, 2 + static_cast<int>(idx % 11), 61, idx, true);
    const auto res = lr_tvc(inst);
    std::vector<double> c;
    for (const auto& t : inst.terms()) c.push_back(t.c);
    std::vector<Edge> e(inst.edges().begin(), inst.edges().end());
    EXPECT_LE(res.energy, 2 * oracle::min_vertex_cover(inst.n(), e, c) + 1e-9);
  }
}

TEST(LrTpcvc, Examples) {
  Instance worst(Kind::Pcvc, {x_term(), x_term()}, {{0, 1, 4.0}});
  const auto r = lr_tpcvc(worst);
  expect_bloch(r.state[0], 0, 0, -1);
  expect_bloch(r.state[1], 0, 0, -1);
  EXPECT_NEAR(r.energy, 1.0, 1e-12);
  const double ratio = r.energy / oracle::full_ground(worst);
  EXPECT_NEAR(ratio, 4.19387, 2e-3);
  EXPECT_LE(ratio, kPcvcRatio);

  Instance free(Kind::Pcvc, {x_term(), x_term()}, {{0, 1, 0.0}});
  const auto r0 = lr_tpcvc(free);
  EXPECT_TRUE(r0.cert.rounds.empty());
  expect_bloch(r0.state[0], 1, 0, 0);
  EXPECT_NEAR(r0.energy, 0.0, 1e-15);

  Instance cl(Kind::Pcvc, {one_term(3), one_term(1)}, {{0, 1, 1.0}});
  const auto rc = lr_tpcvc(cl);
  ASSERT_EQ(rc.cert.rounds.size(), 1u);
  EXPECT_DOUBLE_EQ(rc.cert.rounds[0].lambda, 2.0);
  EXPECT_DOUBLE_EQ(rc.cert.rounds[0].w, 0.5);
  expect_bloch(rc.state[0], 0, 0, 1);
  expect_bloch(rc.state[1], 0, 0, 1);
  EXPECT_NEAR(rc.energy, 1.0, 1e-12);
  EXPECT_TRUE(certify(cl, rc.state, rc.cert).ok());
}

TEST(LrTpcvc, RatioSoundAndCertified) {
  Rng rng(13);
  for (std::uint64_t idx = 0; idx < 100; ++idx) {
    auto inst = random_inst(Kind::Pcvc, 2 + static_cast<int>(idx % 9), 71, idx);
    if (idx % 2) inst = scramble(inst, rng);
    const auto res = lr_tpcvc(inst);
    EXPECT_LE(res.energy, kPcvcRatio * oracle::full_ground(inst) + 1e-7) << idx;
    const auto rep = certify(inst, res.state, res.cert);
    EXPECT_TRUE(rep.ok()) << idx;
    EXPECT_LE(rep.alpha_effective, kPcvcRatio + 1e-7);
  }
}

TEST(Certify, DetectsCorruption) {
  const auto inst = random_inst(Kind::Tvc, 6, 3, 0);
  const auto res = lr_tvc(inst);
  ASSERT_TRUE(certify(inst, res.state, res.cert).ok());

  auto bad = res.cert;
  ASSERT_FALSE(bad.rounds.empty());
  bad.rounds[0].w = -1;
  const auto r1 = certify(inst, res.state, bad);
  EXPECT_FALSE(r1.nonnegative);
  EXPECT_FALSE(r1.ok());

  const auto zeros = ProductState::basis(std::string(static_cast<std::size_t>(inst.n()), '0'));
  const auto r2 = certify(inst, zeros, res.cert);
  EXPECT_FALSE(r2.ok());
  EXPECT_FALSE(r2.feasible && r2.remainder);

  auto shifted = res.cert;
  shifted.residual[0] += 0.1;
  EXPECT_FALSE(certify(inst, res.state, shifted).reconstruction);
}
