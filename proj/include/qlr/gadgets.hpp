#pragma once

// Instance builders for the reductions: transverse Ising -> TVC perturbative
// gadget, the three-qubit degree-reduction gadget, and PXP models.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qlr/core.hpp"
#include "qlr/exact.hpp"

namespace qlr {

struct TimEdge {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

/// H = Σ w_ij Z_i Z_j + Σ h_i X_i with h_i <= 0.
struct TIMInstance {
  int n = 0;
  std::vector<TimEdge> edges;
  std::vector<double> h;

  std::vector<int> degrees() const {
    std::vector<int> d(static_cast<std::size_t>(n), 0);
    for (const auto& e : edges) {
      ++d[static_cast<std::size_t>(e.u)];
      ++d[static_cast<std::size_t>(e.v)];
    }
    return d;
  }

  void validate() const {
    if (h.size() != static_cast<std::size_t>(n)) throw Error("tim: fields must have one entry per vertex");
    for (int i = 0; i < n; ++i) {
      if (h[static_cast<std::size_t>(i)] > 0.0) throw Error("tim: field h_" + std::to_string(i) + " > 0");
    }
    for (const auto& e : edges) {
      if (e.u == e.v || e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) throw Error("tim: bad edge");
    }
  }
};

/// Dense 2^n TIM Hamiltonian, qubit 0 most significant.
inline Eigen::MatrixXd tim_dense(const TIMInstance& tim) {
  tim.validate();
  const int n = tim.n;
  if (n > 12) throw CapExceeded("tim_dense: n above cap");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    for (const auto& e : tim.edges) {
      const int zu = qubit_bit(static_cast<std::uint64_t>(x), e.u, n) ? -1 : 1;
      const int zv = qubit_bit(static_cast<std::uint64_t>(x), e.v, n) ? -1 : 1;
      H(x, x) += e.w * zu * zv;
    }
    for (int i = 0; i < n; ++i) H(x ^ (Eigen::Index{1} << (n - 1 - i)), x) += tim.h[static_cast<std::size_t>(i)];
  }
  return H;
}

struct GadgetScaling {
  double exponent;     // p in Δ^p
  double coefficient;  // k in sqrt(k |h|)
};

/// Transverse-field scaling of a vertex qubit as a function of its TIM degree.
inline GadgetScaling vertex_scaling(int degree) {
  switch (degree) {
    case 0: return {0.5, 7.0};
    case 1: return {5.0 / 8.0, 6.0};
    case 2: return {0.75, 5.0};
    case 3: return {7.0 / 8.0, 4.0};
    default: throw Error("tim_to_tvc: degree " + std::to_string(degree) + " > 3; apply degree reduction first");
  }
}

/// Qubit layout: vertex i -> (2i, 2i+1); TIM edge k -> 2n+4k + {(i,j), (i,j~), (i~,j), (i~,j~)}.
inline Instance tim_to_tvc(const TIMInstance& tim, double delta) {
  tim.validate();
  if (!(delta > 0.0)) throw Error("tim_to_tvc: delta must be > 0");
  const int n = tim.n;
  const auto deg = tim.degrees();
  const int nq = 2 * n + 4 * static_cast<int>(tim.edges.size());
  std::vector<PauliField> f(static_cast<std::size_t>(nq));
  std::vector<Edge> cons;
  double offset = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto sc = vertex_scaling(deg[static_cast<std::size_t>(i)]);
    const double hx = -std::pow(delta, sc.exponent) * std::sqrt(sc.coefficient * std::abs(tim.h[static_cast<std::size_t>(i)]));
    cons.push_back({2 * i, 2 * i + 1, 0.0});
    for (int q : {2 * i, 2 * i + 1}) f[static_cast<std::size_t>(q)] += PauliField{hx, 0.0, -3.5 * delta, 0.0};
  }
  for (std::size_t k = 0; k < tim.edges.size(); ++k) {
    const auto& e = tim.edges[k];
    const int base = 2 * n + 4 * static_cast<int>(k);
    const int rails_u[2] = {2 * e.u, 2 * e.u + 1};
    const int rails_v[2] = {2 * e.v, 2 * e.v + 1};
    const bool mediate = tim.h[static_cast<std::size_t>(e.u)] != 0.0 || tim.h[static_cast<std::size_t>(e.v)] != 0.0;
    for (int t = 0; t < 4; ++t) {
      const int q = base + t;
      const int ru = rails_u[t >> 1], rv = rails_v[t & 1];
      const double sign = ((t >> 1) == (t & 1)) ? 1.0 : -1.0;
      cons.push_back({q, ru, 0.0});
      cons.push_back({q, rv, 0.0});
      const double hx = mediate ? -std::pow(delta, 7.0 / 8.0) : 0.0;
      f[static_cast<std::size_t>(q)] += PauliField{hx, 0.0, -0.5 * delta + 0.5 * sign * e.w, 0.0};
    }
    offset -= delta;
  }
  std::vector<LocalTerm> terms;
  for (int q = 0; q < nq; ++q) {
    auto t = assemble_local_term(f[static_cast<std::size_t>(q)]);
    if (t.projector.az > kSignTol) {
      throw Error("tim_to_tvc: delta too small, qubit " + std::to_string(q) + " has Tr[Zφ] > 0");
    }
    terms.push_back(t);
  }
  return Instance(Kind::Tvc, std::move(terms), std::move(cons), offset);
}

/// One splitting step on the highest-degree vertex (lowest index on ties); unchanged if max degree <= 3.
inline Instance reduce_degree(const Instance& inst, double delta) {
  if (!(delta > 0.0)) throw Error("reduce_degree: delta must be > 0");
  if (inst.kind() != Kind::Tvc) throw Error("reduce_degree: tvc instance required");
  const auto deg = inst.degrees();
  const int n = inst.n();
  int v = -1;
  for (int i = 0; i < n; ++i) {
    if (deg[static_cast<std::size_t>(i)] > 3 && (v < 0 || deg[static_cast<std::size_t>(i)] > deg[static_cast<std::size_t>(v)])) v = i;
  }
  if (v < 0) return inst;
  const auto canon = canonicalize(inst).instance;
  const auto fv = to_field(canon.term(v));
  const double s = std::cbrt(fv.hx);
  const double g = s * std::pow(delta, 2.0 / 3.0);
  const double kappa = 0.75 * s * s * std::cbrt(delta);
  const int vb = n, vc = n + 1;

  std::vector<LocalTerm> terms(canon.terms().begin(), canon.terms().end());
  const auto outer = assemble_local_term({g, 0.0, -0.5 * delta + 0.5 * (fv.hz + kappa), 0.0});
  terms[static_cast<std::size_t>(v)] = outer;
  terms.push_back(assemble_local_term({g, 0.0, -delta, 0.0}));
  terms.push_back(outer);

  std::vector<Edge> edges;
  std::vector<Edge> incident;
  for (const auto& e : canon.edges()) {
    if (e.u == v || e.v == v) {
      incident.push_back(e);
    } else {
      edges.push_back(e);
    }
  }
  const std::size_t to_a = (incident.size() + 1) / 2;
  for (std::size_t k = 0; k < incident.size(); ++k) {
    const int other = incident[k].u == v ? incident[k].v : incident[k].u;
    edges.push_back({k < to_a ? v : vc, other, 0.0});
  }
  edges.push_back({v, vb, 0.0});
  edges.push_back({vb, vc, 0.0});
  const double offset = canon.offset() + fv.e + 1.25 * s * s * std::cbrt(delta);
  return Instance(Kind::Tvc, std::move(terms), std::move(edges), offset);
}

/// Applies reduce_degree until the maximum degree is at most 3.
inline Instance reduce_to_degree3(Instance inst, double delta) {
  for (;;) {
    const auto deg = inst.degrees();
    if (deg.empty() || *std::max_element(deg.begin(), deg.end()) <= 3) return inst;
    inst = reduce_degree(inst, delta);
  }
}

/// TVC instance whose covering-subspace restriction is -Σ w_i Π_i X_i.
inline Instance pxp_instance(int n, const std::vector<Edge>& edges, const std::vector<double>& w) {
  if (w.size() != static_cast<std::size_t>(n)) throw Error("pxp_instance: one weight per vertex required");
  std::vector<LocalTerm> terms;
  double offset = 0.0;
  for (double wi : w) {
    if (wi < 0.0) throw Error("pxp_instance: negative weight");
    terms.push_back({2.0 * wi, BlochProjector::minus(), 0.0});
    offset -= wi;
  }
  return Instance(Kind::Tvc, std::move(terms), edges, offset);
}

struct ConvergenceRow {
  double delta = 0.0;
  int qubits = 0;
  std::size_t dim = 0;
  std::vector<double> gadget_gaps;
  std::vector<double> tim_gaps;
  double gadget_ground = 0.0;
  double tim_ground = 0.0;
  double max_gap_error = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool monotone = true;  // err[i+1] <= 1.05 err[i]
  double final_error() const { return rows.empty() ? 0.0 : rows.back().max_gap_error; }
};

inline ConvergenceReport gadget_convergence(const TIMInstance& tim, const std::vector<double>& deltas, int k,
                                            const OracleCaps& caps = {}) {
  const auto H = tim_dense(tim);
  const auto tim_eigs = dense_eigenvalues(H, k);
  ConvergenceReport rep;
  for (double d : deltas) {
    const auto inst = tim_to_tvc(tim, d);
    const auto spec = ground_energy_tvc(inst, k, caps);
    ConvergenceRow row;
    row.delta = d;
    row.qubits = inst.n();
    row.dim = spec.dim;
    row.gadget_ground = spec.eigs.front();
    row.tim_ground = tim_eigs.front();
    const std::size_t m = std::min(spec.eigs.size(), tim_eigs.size());
    for (std::size_t i = 0; i < m; ++i) {
      row.gadget_gaps.push_back(spec.eigs[i] - spec.eigs[0]);
      row.tim_gaps.push_back(tim_eigs[i] - tim_eigs[0]);
      row.max_gap_error = std::max(row.max_gap_error, std::abs(row.gadget_gaps.back() - row.tim_gaps.back()));
    }
    if (!rep.rows.empty() && row.max_gap_error > 1.05 * rep.rows.back().max_gap_error) rep.monotone = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace qlr
