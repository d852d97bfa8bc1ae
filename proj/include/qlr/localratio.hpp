#pragma once

// Local-ratio approximation: classical vertex cover, Algorithm 1 (TVC) and
// Algorithm 2 (TPCVC), with per-edge certificates.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "qlr/core.hpp"

namespace qlr {

inline const double kTvcRatio = 2.0 + std::sqrt(2.0);
inline constexpr double kPcvcRatio = 4.194;
inline constexpr double kClassicalRatio = 2.0;
inline constexpr double kWeightEps = 1e-12;

/// Edge selection priority. Lexicographic unless an explicit permutation of edge indices is given.
struct EdgeOrder {
  std::vector<std::size_t> permutation;

  static EdgeOrder lexicographic() { return {}; }
  static EdgeOrder reversed(std::size_t m) {
    EdgeOrder o;
    o.permutation.resize(m);
    std::iota(o.permutation.rbegin(), o.permutation.rend(), std::size_t{0});
    return o;
  }
  std::vector<std::size_t> resolve(std::size_t m) const {
    if (permutation.empty()) {
      std::vector<std::size_t> p(m);
      std::iota(p.begin(), p.end(), std::size_t{0});
      return p;
    }
    auto sorted = permutation;
    std::sort(sorted.begin(), sorted.end());
    bool ok = sorted.size() == m;
    for (std::size_t i = 0; ok && i < sorted.size(); ++i) ok = sorted[i] == i;
    if (!ok) throw Error("EdgeOrder: not a permutation of the edge set");
    return permutation;
  }
};

/// One subtraction round: w * H_ij removed from the objective.
struct Round {
  Edge edge;
  double w = 0.0;
  double lambda = 0.0;       // TPCVC penalty multiplier, 0 for TVC
  double mu_star = 0.0;      // min of H_ij over the edge's local problem
  double local_ratio = 0.0;  // Tr[H_ij rho] / mu_star
};

/// H = R + Σ w_ij H_ij, all in the canonical frame.
struct Certificate {
  Kind kind = Kind::Tvc;
  std::vector<Round> rounds;
  std::vector<double> residual;          // r_i
  std::vector<double> residual_penalty;  // r_ij, in instance edge order (TPCVC only)
  double alpha_effective = 0.0;
};

struct LrResult {
  ProductState state;  // original frame
  Certificate cert;
  double energy = 0.0;
};

/// Minimum of Tr[(φ_i + φ_j) ρ] over span{|01>,|10>,|11>} for canonical projectors.
inline double edge_restricted_min(double az_i, double az_j) {
  constexpr double slack = 1e-12;
  if (!(az_i >= -1.0 - slack && az_i <= slack && az_j >= -1.0 - slack && az_j <= slack)) {
    throw Error("edge_restricted_min: az out of [-1, 0]");
  }
  const double a = std::clamp(az_i, -1.0, 0.0);
  const double k = 0.5 * (a + std::clamp(az_j, -1.0, 0.0));
  return 0.5 * (-std::sqrt(2.0 * a * a - 4.0 * a * k + k * k + 2.0) - k + 2.0);
}

inline double pcvc_lambda(double az_i, double az_j) { return 2.0 / (1.0 - az_i) + 2.0 / (1.0 - az_j); }

/// Smallest eigenvalue of φ_i ⊗ I + I ⊗ φ_j + λ |00><00| for canonical projectors.
inline double pcvc_edge_min(double az_i, double az_j, double lambda) {
  const double xi = -std::sqrt(std::max(0.0, 1.0 - az_i * az_i));
  const double xj = -std::sqrt(std::max(0.0, 1.0 - az_j * az_j));
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  for (int s = 0; s < 4; ++s) {
    const int a = s >> 1, b = s & 1;
    h(s, s) = 0.5 * (1 + (a ? -az_i : az_i)) + 0.5 * (1 + (b ? -az_j : az_j));
    h(s ^ 2, s) += 0.5 * xi;
    h(s ^ 1, s) += 0.5 * xj;
  }
  h(0, 0) += lambda;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

namespace detail {

inline std::vector<Bloch> leftover_state(const Instance& canon, const std::vector<double>& residual) {
  const auto deg = canon.degrees();
  std::vector<Bloch> r;
  for (int i = 0; i < canon.n(); ++i) {
    const auto si = static_cast<std::size_t>(i);
    if (residual[si] == 0.0 && deg[si] > 0) {
      r.push_back({0.0, 0.0, -1.0});
    } else {
      r.push_back(-canon.term(i).projector.vector());
    }
  }
  return r;
}

inline double edge_value(const Instance& canon, const Round& rd, const std::vector<Bloch>& r) {
  const auto& a = r[static_cast<std::size_t>(rd.edge.u)];
  const auto& b = r[static_cast<std::size_t>(rd.edge.v)];
  double v = canon.term(rd.edge.u).projector.expectation(a) + canon.term(rd.edge.v).projector.expectation(b);
  if (rd.lambda != 0.0) v += rd.lambda * 0.25 * (1 + a.z) * (1 + b.z);
  return v;
}

inline void fill_ratios(const Instance& canon, Certificate& cert, const std::vector<Bloch>& r) {
  cert.alpha_effective = 0.0;
  for (auto& rd : cert.rounds) {
    rd.local_ratio = edge_value(canon, rd, r) / rd.mu_star;
    cert.alpha_effective = std::max(cert.alpha_effective, rd.local_ratio);
  }
}

inline Instance require_kind_canonical(const Instance& inst, Kind k, const char* who, CanonicalForm& cf) {
  if (inst.kind() != k) throw Error(std::string(who) + ": kind/algo mismatch (instance is " + to_string(inst.kind()) + ")");
  require_valid(inst);
  cf = canonicalize(inst);
  return cf.instance;
}

}  // namespace detail

/// Algorithm 1 on a TVC instance. Output state is in the original frame.
inline LrResult lr_tvc(const Instance& inst, const EdgeOrder& order = {}) {
  CanonicalForm cf;
  const auto canon = detail::require_kind_canonical(inst, Kind::Tvc, "lr_tvc", cf);
  std::vector<double> c;
  for (const auto& t : canon.terms()) c.push_back(t.c);
  Certificate cert;
  cert.kind = Kind::Tvc;
  const auto edges = canon.edges();
  for (auto idx : order.resolve(edges.size())) {
    const auto& e = edges[idx];
    auto& cu = c[static_cast<std::size_t>(e.u)];
    auto& cv = c[static_cast<std::size_t>(e.v)];
    if (cu <= kWeightEps || cv <= kWeightEps) continue;
    const double w = std::min(cu, cv);
    cu -= w;
    cv -= w;
    if (cu <= kWeightEps) cu = 0.0;
    if (cv <= kWeightEps) cv = 0.0;
    Round rd;
    rd.edge = e;
    rd.w = w;
    rd.mu_star = edge_restricted_min(canon.term(e.u).projector.az, canon.term(e.v).projector.az);
    cert.rounds.push_back(rd);
  }
  for (auto& x : c) {
    if (x <= kWeightEps) x = 0.0;
  }
  cert.residual = c;
  const auto r = detail::leftover_state(canon, c);
  detail::fill_ratios(canon, cert, r);
  LrResult res;
  res.state = cf.to_original(ProductState{r});
  res.cert = std::move(cert);
  res.energy = evaluate(inst, res.state);
  return res;
}

/// Algorithm 2 on a TPCVC instance. Output state is in the original frame.
inline LrResult lr_tpcvc(const Instance& inst, const EdgeOrder& order = {}) {
  CanonicalForm cf;
  const auto canon = detail::require_kind_canonical(inst, Kind::Pcvc, "lr_tpcvc", cf);
  std::vector<double> c;
  for (const auto& t : canon.terms()) c.push_back(t.c);
  const auto edges = canon.edges();
  std::vector<double> cij;
  for (const auto& e : edges) cij.push_back(e.penalty);
  Certificate cert;
  cert.kind = Kind::Pcvc;
  for (auto idx : order.resolve(edges.size())) {
    const auto& e = edges[idx];
    auto& cu = c[static_cast<std::size_t>(e.u)];
    auto& cv = c[static_cast<std::size_t>(e.v)];
    auto& pe = cij[idx];
    if (cu <= kWeightEps || cv <= kWeightEps || pe <= kWeightEps) continue;
    const double azu = canon.term(e.u).projector.az, azv = canon.term(e.v).projector.az;
    const double lambda = pcvc_lambda(azu, azv);
    const double w = std::min({cu, cv, pe / lambda});
    cu -= w;
    cv -= w;
    pe -= lambda * w;
    for (double* x : {&cu, &cv, &pe}) {
      if (*x <= kWeightEps) *x = 0.0;
    }
    Round rd;
    rd.edge = e;
    rd.w = w;
    rd.lambda = lambda;
    rd.mu_star = pcvc_edge_min(azu, azv, lambda);
    cert.rounds.push_back(rd);
  }
  for (auto& x : c) {
    if (x <= kWeightEps) x = 0.0;
  }
  cert.residual = c;
  cert.residual_penalty = cij;
  const auto r = detail::leftover_state(canon, c);
  detail::fill_ratios(canon, cert, r);
  LrResult res;
  res.state = cf.to_original(ProductState{r});
  res.cert = std::move(cert);
  res.energy = evaluate(inst, res.state);
  return res;
}

struct ClassicalCover {
  std::vector<int> cover;
  double cost = 0.0;
  Certificate cert;
};

/// Classical local-ratio 2-approximation; every projector must be |1><1|.
inline ClassicalCover lr_classical_vc(const Instance& inst, const EdgeOrder& order = {}) {
  if (inst.kind() != Kind::Tvc) throw Error("lr_classical_vc: kind/algo mismatch");
  for (int i = 0; i < inst.n(); ++i) {
    const auto& p = inst.term(i).projector;
    if (std::abs(p.ax) > 1e-12 || std::abs(p.ay) > 1e-12 || std::abs(p.az + 1.0) > 1e-12) {
      throw Error("lr_classical_vc: vertex " + std::to_string(i) + " is not diagonal |1><1|");
    }
  }
  const auto res = lr_tvc(inst, order);
  ClassicalCover out;
  out.cert = res.cert;
  const auto deg = inst.degrees();
  for (int i = 0; i < inst.n(); ++i) {
    const auto si = static_cast<std::size_t>(i);
    if (res.cert.residual[si] == 0.0 && deg[si] > 0) {
      out.cover.push_back(i);
      out.cost += inst.term(i).c;
    }
  }
  return out;
}

struct CertReport {
  bool nonnegative = true;
  bool reconstruction = true;
  bool ratio = true;
  bool remainder = true;
  bool feasible = true;
  double alpha_effective = 0.0;
  double alpha_bound = 0.0;
  std::vector<std::string> failures;

  bool ok() const { return nonnegative && reconstruction && ratio && remainder && feasible; }
};

/// Re-derives every certificate claim from scratch against `inst` and `state`.
inline CertReport certify(const Instance& inst, const ProductState& state, const Certificate& cert) {
  CertReport rep;
  auto edge_name = [](const Edge& e) { return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")"; };
  const auto cf = canonicalize(inst);
  const auto& canon = cf.instance;
  const auto r = cf.to_canonical(state).bloch;
  const int n = inst.n();
  rep.alpha_bound = cert.kind == Kind::Pcvc ? kPcvcRatio : kTvcRatio;
  if (cert.residual.size() != static_cast<std::size_t>(n)) {
    rep.reconstruction = false;
    rep.failures.push_back("residual has wrong length");
    return rep;
  }
  const auto edges = canon.edges();
  auto edge_index = [&](const Edge& e) -> std::ptrdiff_t {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (edges[i].u == e.u && edges[i].v == e.v) return static_cast<std::ptrdiff_t>(i);
    }
    return -1;
  };

  // (a) non-negativity
  for (const auto& rd : cert.rounds) {
    if (!(rd.w >= 0.0)) {
      rep.nonnegative = false;
      rep.failures.push_back("negative w on edge " + edge_name(rd.edge));
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!(cert.residual[static_cast<std::size_t>(i)] >= 0.0)) {
      rep.nonnegative = false;
      rep.failures.push_back("negative residual at vertex " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < cert.residual_penalty.size(); ++i) {
    if (!(cert.residual_penalty[i] >= 0.0)) {
      rep.nonnegative = false;
      rep.failures.push_back("negative residual penalty on edge " + edge_name(edges[i]));
    }
  }

  // (b) reconstruction
  std::vector<double> c = cert.residual;
  std::vector<double> pen = cert.residual_penalty;
  if (cert.kind == Kind::Pcvc) pen.resize(edges.size(), 0.0);
  for (const auto& rd : cert.rounds) {
    const auto ei = edge_index(rd.edge);
    if (ei < 0) {
      rep.reconstruction = false;
      rep.failures.push_back("round on non-edge " + edge_name(rd.edge));
      continue;
    }
    c[static_cast<std::size_t>(rd.edge.u)] += rd.w;
    c[static_cast<std::size_t>(rd.edge.v)] += rd.w;
    if (cert.kind == Kind::Pcvc) pen[static_cast<std::size_t>(ei)] += rd.lambda * rd.w;
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(c[static_cast<std::size_t>(i)] - canon.term(i).c) > 1e-10) {
      rep.reconstruction = false;
      rep.failures.push_back("weight mismatch at vertex " + std::to_string(i));
    }
  }
  if (cert.kind == Kind::Pcvc) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (std::abs(pen[i] - edges[i].penalty) > 1e-10) {
        rep.reconstruction = false;
        rep.failures.push_back("penalty mismatch on edge " + edge_name(edges[i]));
      }
    }
  }

  // (c) per-edge ratio, μ* recomputed independently of the stored value
  for (const auto& rd : cert.rounds) {
    const double azu = canon.term(rd.edge.u).projector.az, azv = canon.term(rd.edge.v).projector.az;
    Round fresh = rd;
    if (cert.kind == Kind::Pcvc) {
      fresh.lambda = pcvc_lambda(azu, azv);
      fresh.mu_star = pcvc_edge_min(azu, azv, fresh.lambda);
    } else {
      fresh.lambda = 0.0;
      fresh.mu_star = edge_restricted_min(azu, azv);
    }
    const double ratio = detail::edge_value(canon, fresh, r) / fresh.mu_star;
    rep.alpha_effective = std::max(rep.alpha_effective, ratio);
    if (ratio > rep.alpha_bound + 1e-7) {
      rep.ratio = false;
      std::ostringstream os;
      os << "local ratio " << ratio << " exceeds bound on edge " << edge_name(rd.edge);
      rep.failures.push_back(os.str());
    }
  }

  // (d) Tr[R rho] = 0
  double tr = 0.0;
  for (int i = 0; i < n; ++i) {
    tr += cert.residual[static_cast<std::size_t>(i)] * canon.term(i).projector.expectation(r[static_cast<std::size_t>(i)]);
  }
  for (std::size_t i = 0; i < cert.residual_penalty.size() && i < edges.size(); ++i) {
    tr += cert.residual_penalty[i] * 0.25 * (1 + r[static_cast<std::size_t>(edges[i].u)].z) *
          (1 + r[static_cast<std::size_t>(edges[i].v)].z);
  }
  if (std::abs(tr) > 1e-9) {
    rep.remainder = false;
    rep.failures.push_back("Tr[R rho] = " + std::to_string(tr) + " != 0");
  }
  if (inst.kind() == Kind::Tvc) {
    const auto cons = constraint_expectations(inst, state);
    for (std::size_t i = 0; i < cons.size(); ++i) {
      if (cons[i] > 1e-9) {
        rep.feasible = false;
        rep.failures.push_back("constraint violated on edge " + edge_name(inst.edges()[i]));
      }
    }
  }
  return rep;
}

}  // namespace qlr
