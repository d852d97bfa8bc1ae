#pragma once

// Entangled Vertex Cover: Takagi canonicalization of the constraint state,
// constraint closure, and the reductions of each connected component to a
// small Hermitian eigenproblem over Hamming-sector superpositions.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qlr/core.hpp"
#include "qlr/linalg.hpp"

namespace qlr {

using cplx = std::complex<double>;

struct ConstraintState {
  ConstraintSpec spec;
  std::array<cplx, 4> raw{};  // normalized input amplitudes
  Eigen::Matrix2cd U = Eigen::Matrix2cd::Identity();  // canonical = (U ⊗ U) raw
};

namespace detail {

inline std::array<cplx, 4> apply_uu(const Eigen::Matrix2cd& U, const std::array<cplx, 4>& psi) {
  std::array<cplx, 4> out{};
  for (int s = 0; s < 4; ++s) {
    for (int t = 0; t < 4; ++t) out[static_cast<std::size_t>(s)] += U(s >> 1, t >> 1) * U(s & 1, t & 1) * psi[static_cast<std::size_t>(t)];
  }
  return out;
}

/// Principal square root of a 2x2 unitary symmetric matrix.
inline Eigen::Matrix2cd sqrt_unitary(const Eigen::Matrix2cd& W) {
  const cplx avg = 0.5 * (W(0, 0) + W(1, 1));
  if ((W - avg * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-12) {
    return std::sqrt(avg) * Eigen::Matrix2cd::Identity();
  }
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(W);
  Eigen::Matrix2cd V = es.eigenvectors();
  Eigen::Matrix2cd D = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i) D(i, i) = std::sqrt(es.eigenvalues()(i));
  return V * D * V.inverse();
}

}  // namespace detail

/// Canonical form of a SWAP-invariant two-qubit constraint state.
inline ConstraintState takagi_canonicalize(std::array<cplx, 4> raw, double tol = 1e-10) {
  double nrm = 0.0;
  for (const auto& a : raw) nrm += std::norm(a);
  if (nrm <= 1e-24) throw Error("takagi_canonicalize: zero state");
  nrm = std::sqrt(nrm);
  for (auto& a : raw) a /= nrm;
  ConstraintState cs;
  cs.raw = raw;
  const bool symmetric = std::abs(raw[1] - raw[2]) <= tol;
  const bool antisymmetric = std::abs(raw[1] + raw[2]) <= tol && std::abs(raw[0]) <= tol && std::abs(raw[3]) <= tol;
  if (!symmetric && antisymmetric) {
    cs.spec = ConstraintSpec::singlet();
    return cs;
  }
  if (!symmetric) throw Error("takagi_canonicalize: constraint state is not SWAP-invariant");

  Eigen::Matrix2cd M;
  M << raw[0], raw[1], raw[1], raw[3];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(M * M.adjoint());
  const double s1 = std::sqrt(std::max(0.0, es.eigenvalues()(1)));
  const double s2 = std::sqrt(std::max(0.0, es.eigenvalues()(0)));
  Eigen::Matrix2cd Q;
  if (s1 - s2 <= 1e-9 * s1) {
    Q = detail::sqrt_unitary(M / s1);
  } else {
    for (int col = 0; col < 2; ++col) {
      Eigen::Vector2cd q = es.eigenvectors().col(1 - col);
      const double s = col == 0 ? s1 : s2;
      if (s > 1e-15) {
        const Eigen::Vector2cd z = M * q.conjugate();
        const cplx ratio = q.dot(z) / s;  // = e^{iφ}, with M conj(q) = s e^{iφ} q
        q *= std::polar(1.0, 0.5 * std::arg(ratio));
      }
      Q.col(col) = q;
    }
  }
  cs.U = Q.adjoint();
  const Eigen::Matrix2cd D = cs.U * M * cs.U.transpose();
  const double a = std::abs(D(0, 0)), b = std::abs(D(1, 1));
  if (std::abs(D(0, 1)) > 1e-8 || std::abs(D(0, 0) - a) > 1e-8 || std::abs(D(1, 1) - b) > 1e-8) {
    throw Error("takagi_canonicalize: factorization failed to converge");
  }
  const double h = std::hypot(a, b);
  cs.spec = ConstraintSpec::diagonal(a / h, b / h);
  return cs;
}

/// Rotates a projector into the frame where the constraint is canonical: φ -> U φ U^†.
inline BlochProjector rotate_projector(const Eigen::Matrix2cd& U, const BlochProjector& p) {
  Eigen::Matrix2cd P;
  P << p.element(0, 0), p.element(0, 1), p.element(1, 0), p.element(1, 1);
  const Eigen::Matrix2cd R = U * P * U.adjoint();
  return {2.0 * R(1, 0).real(), 2.0 * R(1, 0).imag(), (R(0, 0) - R(1, 1)).real()};
}

/// EVC instance in the canonical constraint frame, built from a raw constraint state.
inline Instance evc_instance_from_raw(std::vector<LocalTerm> terms, std::vector<Edge> edges,
                                      const std::array<cplx, 4>& raw, double offset, ConstraintState* out = nullptr) {
  const auto cs = takagi_canonicalize(raw);
  for (auto& t : terms) t.projector = rotate_projector(cs.U, t.projector);
  if (out) *out = cs;
  return Instance(Kind::Evc, std::move(terms), std::move(edges), offset, cs.spec);
}

enum class EvcCase { Case1, Case2, Case3, Classical };

inline const char* to_string(EvcCase c) {
  switch (c) {
    case EvcCase::Case1: return "1";
    case EvcCase::Case2: return "2";
    case EvcCase::Case3: return "3";
    case EvcCase::Classical: return "classical";
  }
  return "?";
}

struct Component {
  std::vector<int> vertices;  // ascending
  std::vector<Edge> edges;
  EvcCase tag = EvcCase::Case2;
  std::vector<int> A, B;  // Case 1 partition; A holds the smallest vertex
  bool bipartite = true;
};

/// Connected components with their case tags.
inline std::vector<Component> classify(const Instance& inst) {
  if (inst.kind() != Kind::Evc || !inst.psi()) throw Error("classify: evc instance with psi required");
  const auto& psi = *inst.psi();
  const int n = inst.n();
  const auto adj = inst.adjacency();
  std::vector<int> color(static_cast<std::size_t>(n), -1), comp(static_cast<std::size_t>(n), -1);
  std::vector<Component> out;
  for (int s = 0; s < n; ++s) {
    if (color[static_cast<std::size_t>(s)] >= 0) continue;
    Component c;
    std::queue<int> q;
    q.push(s);
    color[static_cast<std::size_t>(s)] = 0;
    comp[static_cast<std::size_t>(s)] = static_cast<int>(out.size());
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      c.vertices.push_back(u);
      for (int v : adj[static_cast<std::size_t>(u)]) {
        auto& cv = color[static_cast<std::size_t>(v)];
        if (cv < 0) {
          cv = 1 - color[static_cast<std::size_t>(u)];
          comp[static_cast<std::size_t>(v)] = comp[static_cast<std::size_t>(s)];
          q.push(v);
        } else if (cv == color[static_cast<std::size_t>(u)]) {
          c.bipartite = false;
        }
      }
    }
    std::sort(c.vertices.begin(), c.vertices.end());
    for (int v : c.vertices) (color[static_cast<std::size_t>(v)] == 0 ? c.A : c.B).push_back(v);
    out.push_back(std::move(c));
  }
  for (const auto& e : inst.edges()) out[static_cast<std::size_t>(comp[static_cast<std::size_t>(e.u)])].edges.push_back(e);
  for (auto& c : out) {
    if (psi.form == ConstraintSpec::Form::Singlet) {
      c.tag = EvcCase::Case2;
    } else if (psi.is_classical() && !c.edges.empty()) {
      c.tag = EvcCase::Classical;
    } else {
      c.tag = c.bipartite ? EvcCase::Case1 : EvcCase::Case3;
    }
    if (c.tag != EvcCase::Case1) {
      c.A.clear();
      c.B.clear();
    }
  }
  return out;
}

struct Closure {
  std::set<std::pair<int, int>> eps;
  std::set<std::pair<int, int>> psi;
  std::vector<std::string> trace;  // audit mode only
};

/// Pairs forced into the ε relation (amplitude symmetric under exchange) and the ψ relation.
inline Closure closure_edges(const Component& comp, bool audit = false) {
  Closure cl;
  const auto& V = comp.vertices;
  auto key = [](int a, int b) { return std::pair(std::min(a, b), std::max(a, b)); };
  if (comp.tag == EvcCase::Classical) return cl;
  if (!audit) {
    auto same_side = [&](int a, int b) {
      const bool ia = std::binary_search(comp.A.begin(), comp.A.end(), a);
      const bool ib = std::binary_search(comp.A.begin(), comp.A.end(), b);
      return ia == ib;
    };
    for (std::size_t i = 0; i < V.size(); ++i) {
      for (std::size_t j = i + 1; j < V.size(); ++j) {
        const auto p = key(V[i], V[j]);
        if (comp.edges.empty()) continue;
        switch (comp.tag) {
          case EvcCase::Case1: (same_side(V[i], V[j]) ? cl.eps : cl.psi).insert(p); break;
          case EvcCase::Case2: cl.eps.insert(p); break;
          case EvcCase::Case3:
            cl.eps.insert(p);
            cl.psi.insert(p);
            break;
          default: break;
        }
      }
    }
    return cl;
  }
  auto name = [](const char* rel, std::pair<int, int> p) {
    return std::string(rel) + "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
  };
  for (const auto& e : comp.edges) {
    (comp.tag == EvcCase::Case2 ? cl.eps : cl.psi).insert(key(e.u, e.v));
  }
  bool changed = true;
  while (changed) {
    changed = false;
    auto combine = [&](const std::set<std::pair<int, int>>& s1, const std::set<std::pair<int, int>>& s2,
                       std::set<std::pair<int, int>>& target, const char* r1, const char* r2, const char* rt) {
      std::vector<std::pair<int, int>> snap1(s1.begin(), s1.end()), snap2(s2.begin(), s2.end());
      for (const auto& p : snap1) {
        for (const auto& q : snap2) {
          int shared = -1, x = -1, y = -1;
          if (p.first == q.first) shared = p.first, x = p.second, y = q.second;
          else if (p.first == q.second) shared = p.first, x = p.second, y = q.first;
          else if (p.second == q.first) shared = p.second, x = p.first, y = q.second;
          else if (p.second == q.second) shared = p.second, x = p.first, y = q.first;
          if (shared < 0 || x == y) continue;
          const auto t = key(x, y);
          if (target.insert(t).second) {
            changed = true;
            cl.trace.push_back(name(r1, p) + " + " + name(r2, q) + " -> " + name(rt, t));
          }
        }
      }
    };
    combine(cl.psi, cl.psi, cl.eps, "psi", "psi", "eps");
    combine(cl.eps, cl.psi, cl.psi, "eps", "psi", "psi");
    combine(cl.eps, cl.eps, cl.eps, "eps", "eps", "eps");
  }
  return cl;
}

enum class DickeOp { P00, P01, P10, P11 };

/// <a'| O_i |a> between normalized Hamming-weight states of `size` qubits, i inside that block.
/// Out-of-range indices give 0.
inline double dicke_matrix_element(DickeOp op, int a_bra, int a_ket, int size) {
  if (size <= 0 || a_bra < 0 || a_ket < 0 || a_bra > size || a_ket > size) return 0.0;
  const double n = size;
  switch (op) {
    case DickeOp::P00: return a_bra == a_ket ? (n - a_ket) / n : 0.0;
    case DickeOp::P11: return a_bra == a_ket ? a_ket / n : 0.0;
    case DickeOp::P01:  // lowers the weight
      return a_bra + 1 == a_ket ? std::sqrt(static_cast<double>(a_ket) * (n - a_bra)) / n : 0.0;
    case DickeOp::P10:
      return a_bra == a_ket + 1 ? std::sqrt(static_cast<double>(a_bra) * (n - a_ket)) / n : 0.0;
  }
  return 0.0;
}

/// Bipartite version: O_i acts on side A (i ∈ A) or side B; the other weight must match.
inline double dicke_matrix_element(DickeOp op, bool on_a, std::pair<int, int> bra, std::pair<int, int> ket, int nA,
                                   int nB) {
  if (on_a) return bra.second == ket.second && ket.second >= 0 && ket.second <= nB ? dicke_matrix_element(op, bra.first, ket.first, nA) : 0.0;
  return bra.first == ket.first && ket.first >= 0 && ket.first <= nA ? dicke_matrix_element(op, bra.second, ket.second, nB) : 0.0;
}

struct EVCSolveResult {
  EvcCase tag = EvcCase::Case2;
  std::vector<int> vertices, A, B;  // for Case 2/3 every vertex is treated as side A
  int nA = 0, nB = 0;
  double energy = 0.0;              // λ_min(M), objective only (no offsets)
  Eigen::MatrixXcd M;
  Eigen::VectorXcd gamma;           // ground eigenvector in the structured basis
  Eigen::MatrixXcd basis;           // columns: structured basis vectors over sectors (a,b), index a*(nB+1)+b
  std::vector<std::string> labels;  // "0", "a=1", "b=2", "d=3", "e", "o"

  int dim() const { return static_cast<int>(M.rows()); }
};

struct EvcSolution {
  double energy = 0.0;  // including all offsets
  std::vector<EVCSolveResult> components;
  std::string case_tag;  // "1" | "2" | "3" | "mixed"
};

namespace detail {

inline double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// Normalized column from log-magnitudes and signs, scaled to avoid overflow.
inline Eigen::VectorXcd from_logs(const std::vector<std::pair<Eigen::Index, std::pair<double, double>>>& entries,
                                  Eigen::Index size) {
  double mx = -std::numeric_limits<double>::infinity();
  for (const auto& e : entries) mx = std::max(mx, e.second.first);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size);
  for (const auto& [idx, ls] : entries) v(idx) += ls.second * std::exp(ls.first - mx);
  return v / v.norm();
}

inline Eigen::VectorXcd apply_sector_hamiltonian(const Eigen::VectorXcd& x, int nA, int nB,
                                                 const std::array<cplx, 4>& PA, const std::array<cplx, 4>& PB) {
  const Eigen::Index sz = static_cast<Eigen::Index>(nA + 1) * (nB + 1);
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(sz);
  auto at = [&](int a, int b) { return static_cast<Eigen::Index>(a) * (nB + 1) + b; };
  const DickeOp ops[4] = {DickeOp::P00, DickeOp::P01, DickeOp::P10, DickeOp::P11};
  for (int a = 0; a <= nA; ++a) {
    for (int b = 0; b <= nB; ++b) {
      const cplx xv = x(at(a, b));
      if (xv == cplx(0.0)) continue;
      for (int side = 0; side < 2; ++side) {
        const bool on_a = side == 0;
        if ((on_a ? nA : nB) == 0) continue;
        const auto& P = on_a ? PA : PB;
        for (int o = 0; o < 4; ++o) {
          if (P[static_cast<std::size_t>(o)] == cplx(0.0)) continue;
          for (int d = -1; d <= 1; ++d) {
            const int a2 = on_a ? a + d : a, b2 = on_a ? b : b + d;
            if (a2 < 0 || a2 > nA || b2 < 0 || b2 > nB) continue;
            const double el = dicke_matrix_element(ops[o], on_a, {a2, b2}, {a, b}, nA, nB);
            if (el != 0.0) y(at(a2, b2)) += P[static_cast<std::size_t>(o)] * el * xv;
          }
        }
      }
    }
  }
  return y;
}

inline std::array<cplx, 4> aggregate(const Instance& inst, const std::vector<int>& side) {
  std::array<cplx, 4> P{};
  for (int i : side) {
    const auto& t = inst.term(i);
    P[0] += t.c * t.projector.element(0, 0);
    P[1] += t.c * t.projector.element(0, 1);
    P[2] += t.c * t.projector.element(1, 0);
    P[3] += t.c * t.projector.element(1, 1);
  }
  return P;
}

inline EVCSolveResult finish(const Instance& inst, EVCSolveResult res) {
  const auto PA = aggregate(inst, res.A);
  const auto PB = aggregate(inst, res.B);
  const Eigen::Index d = res.basis.cols();
  Eigen::MatrixXcd HB(res.basis.rows(), d);
  for (Eigen::Index q = 0; q < d; ++q) HB.col(q) = apply_sector_hamiltonian(res.basis.col(q), res.nA, res.nB, PA, PB);
  res.M = res.basis.adjoint() * HB;
  res.M = 0.5 * (res.M + res.M.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(res.M);
  res.energy = es.eigenvalues()(0);
  res.gamma = es.eigenvectors().col(0);
  return res;
}

inline double ratio_r(const ConstraintSpec& psi) { return -psi.alpha / psi.beta; }

}  // namespace detail

/// Case 1: bipartite component, diagonal ψ with α, β > 0. Basis |0>, |a=1..|A|>, |b=1..|B|>.
inline EVCSolveResult solve_case1(const Instance& inst, const std::vector<int>& A, const std::vector<int>& B) {
  const auto& psi = inst.psi().value();
  const bool edgeless = A.empty() || B.empty();
  if (psi.form != ConstraintSpec::Form::Diagonal || (!edgeless && (psi.alpha <= 0.0 || psi.beta <= 0.0))) {
    throw Error("solve_case1: needs diagonal psi with alpha, beta > 0");
  }
  EVCSolveResult res;
  res.tag = EvcCase::Case1;
  res.A = A;
  res.B = B;
  res.vertices = A;
  res.vertices.insert(res.vertices.end(), B.begin(), B.end());
  std::sort(res.vertices.begin(), res.vertices.end());
  res.nA = static_cast<int>(A.size());
  res.nB = static_cast<int>(B.size());
  const int nA = res.nA, nB = res.nB;
  const Eigen::Index sz = static_cast<Eigen::Index>(nA + 1) * (nB + 1);
  const double logr = edgeless ? 0.0 : std::log(std::abs(detail::ratio_r(psi)));
  res.basis = Eigen::MatrixXcd::Zero(sz, nA + nB + 1);
  auto column = [&](int a0, int b0) {
    std::vector<std::pair<Eigen::Index, std::pair<double, double>>> entries;
    for (int j = 0; a0 + j <= nA && b0 + j <= nB; ++j) {
      const double lg = j * logr + 0.5 * (detail::log_binom(nA, a0 + j) + detail::log_binom(nB, b0 + j));
      entries.push_back({static_cast<Eigen::Index>(a0 + j) * (nB + 1) + b0 + j, {lg, (j % 2) ? -1.0 : 1.0}});
    }
    return detail::from_logs(entries, sz);
  };
  res.basis.col(0) = column(0, 0);
  res.labels.push_back("0");
  for (int a = 1; a <= nA; ++a) {
    res.basis.col(a) = column(a, 0);
    res.labels.push_back("a=" + std::to_string(a));
  }
  for (int b = 1; b <= nB; ++b) {
    res.basis.col(nA + b) = column(0, b);
    res.labels.push_back("b=" + std::to_string(b));
  }
  return detail::finish(inst, std::move(res));
}

/// Case 2: singlet constraint; the feasible space is the symmetric subspace (Dicke basis).
inline EVCSolveResult solve_case2(const Instance& inst, const std::vector<int>& vertices) {
  EVCSolveResult res;
  res.tag = EvcCase::Case2;
  res.vertices = vertices;
  res.A = vertices;
  res.nA = static_cast<int>(vertices.size());
  res.basis = Eigen::MatrixXcd::Identity(res.nA + 1, res.nA + 1);
  for (int a = 0; a <= res.nA; ++a) res.labels.push_back("d=" + std::to_string(a));
  return detail::finish(inst, std::move(res));
}

/// Case 3: non-bipartite component, diagonal ψ with α, β > 0. Basis {|e>, |o>}.
inline EVCSolveResult solve_case3(const Instance& inst, const std::vector<int>& vertices) {
  const auto& psi = inst.psi().value();
  if (psi.form != ConstraintSpec::Form::Diagonal || psi.alpha <= 0.0 || psi.beta <= 0.0) {
    throw Error("solve_case3: needs diagonal psi with alpha, beta > 0");
  }
  EVCSolveResult res;
  res.tag = EvcCase::Case3;
  res.vertices = vertices;
  res.A = vertices;
  res.nA = static_cast<int>(vertices.size());
  const int n = res.nA;
  const double logr = std::log(std::abs(detail::ratio_r(psi)));
  const int cols = n >= 1 ? 2 : 1;
  res.basis = Eigen::MatrixXcd::Zero(n + 1, cols);
  for (int parity = 0; parity < cols; ++parity) {
    std::vector<std::pair<Eigen::Index, std::pair<double, double>>> entries;
    for (int a = parity; a <= n; a += 2) {
      const int j = a / 2;
      entries.push_back({a, {j * logr + 0.5 * detail::log_binom(n, a), (j % 2) ? -1.0 : 1.0}});
    }
    res.basis.col(parity) = detail::from_logs(entries, n + 1);
    res.labels.push_back(parity ? "o" : "e");
  }
  return detail::finish(inst, std::move(res));
}

/// Solves every component and sums the energies plus offsets.
inline EvcSolution solve_evc(const Instance& inst) {
  if (inst.kind() != Kind::Evc) throw Error("solve_evc: kind/algo mismatch (instance is " + std::string(to_string(inst.kind())) + ")");
  require_valid(inst);
  EvcSolution sol;
  sol.energy = inst.total_offset();
  std::set<std::string> tags;
  for (const auto& comp : classify(inst)) {
    EVCSolveResult r;
    switch (comp.tag) {
      case EvcCase::Case1: r = solve_case1(inst, comp.A, comp.B); break;
      case EvcCase::Case2: r = solve_case2(inst, comp.vertices); break;
      case EvcCase::Case3: r = solve_case3(inst, comp.vertices); break;
      case EvcCase::Classical:
        throw Error("solve_evc: constraint state is local-unitary equivalent to |00>; use the tvc/exact route");
    }
    sol.energy += r.energy;
    tags.insert(to_string(r.tag));
    sol.components.push_back(std::move(r));
  }
  sol.case_tag = tags.size() == 1 ? *tags.begin() : (tags.empty() ? "2" : "mixed");
  return sol;
}

/// Computational-basis amplitudes of the structured ground state (canonical frame).
inline Eigen::VectorXcd reconstruct_state(const EvcSolution& sol, int n, int cap = 14) {
  if (n > cap) throw CapExceeded("reconstruct_state: n=" + std::to_string(n) + " exceeds cap");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXcd out = Eigen::VectorXcd::Ones(dim);
  std::vector<char> covered(static_cast<std::size_t>(n), 0);
  for (const auto& c : sol.components) {
    const Eigen::VectorXcd sector = c.basis * c.gamma;
    std::vector<char> in_a(static_cast<std::size_t>(n), 0);
    for (int v : c.A) in_a[static_cast<std::size_t>(v)] = 1;
    for (int v : c.vertices) covered[static_cast<std::size_t>(v)] = 1;
    for (Eigen::Index x = 0; x < dim; ++x) {
      int a = 0, b = 0;
      for (int v : c.vertices) {
        if ((x >> (n - 1 - v)) & 1) (in_a[static_cast<std::size_t>(v)] ? a : b) += 1;
      }
      const double lb = detail::log_binom(c.nA, a) + detail::log_binom(c.nB, b);
      out(x) *= sector(static_cast<Eigen::Index>(a) * (c.nB + 1) + b) * std::exp(-0.5 * lb);
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!covered[static_cast<std::size_t>(v)]) throw Error("reconstruct_state: vertex not covered by any component");
  }
  return out;
}

/// Maps a canonical-frame state back to the raw constraint frame: (U^†)^{⊗n}.
inline Eigen::VectorXcd to_raw_frame(const Eigen::VectorXcd& state, const Eigen::Matrix2cd& U, int n) {
  Eigen::VectorXcd v = state;
  const Eigen::Matrix2cd Ud = U.adjoint();
  for (int q = 0; q < n; ++q) {
    const Eigen::Index mask = Eigen::Index{1} << (n - 1 - q);
    for (Eigen::Index x = 0; x < v.size(); ++x) {
      if (x & mask) continue;
      const cplx v0 = v(x), v1 = v(x | mask);
      v(x) = Ud(0, 0) * v0 + Ud(0, 1) * v1;
      v(x | mask) = Ud(1, 0) * v0 + Ud(1, 1) * v1;
    }
  }
  return v;
}

}  // namespace qlr
