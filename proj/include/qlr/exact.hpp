#pragma once

// Exact oracles: covering-subspace diagonalization (TVC), full-space
// diagonalization (TPCVC) and constraint-nullspace diagonalization (EVC).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qlr/core.hpp"
#include "qlr/linalg.hpp"

namespace qlr {

struct SpectrumReport {
  std::size_t dim = 0;
  std::vector<double> eigs;  // ascending, absolute energies
  std::string basis;         // "covering" | "full" | "nullspace"
  bool infeasible = false;

  double ground() const {
    if (infeasible || eigs.empty()) throw Error("spectrum is infeasible");
    return eigs.front();
  }
};

struct OracleCaps {
  int max_cover_n = 24;
  std::size_t max_cover_dim = std::size_t{1} << 20;
  int max_full_n = 20;
  int max_nullspace_n = 12;
};

inline std::string to_bitstring(std::uint64_t x, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i) {
    if ((x >> (n - 1 - i)) & 1U) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

/// Bit of qubit i in basis index x (qubit 0 is the most significant bit).
inline int qubit_bit(std::uint64_t x, int i, int n) { return static_cast<int>((x >> (n - 1 - i)) & 1U); }

/// Computational basis states whose 0-set is independent, ascending (= lexicographic).
inline std::vector<std::uint64_t> enumerate_covers(int n, std::span<const Edge> edges, int cap = 24) {
  if (n > cap) throw CapExceeded("enumerate_covers: n=" + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  std::vector<std::uint64_t> earlier(static_cast<std::size_t>(n), 0);  // neighbours with smaller index
  for (const auto& e : edges) {
    if (e.u == e.v) continue;
    earlier[static_cast<std::size_t>(e.v)] |= std::uint64_t{1} << e.u;
  }
  std::vector<std::uint64_t> out;
  // zeros: bitmask (by vertex) of vertices set to 0 so far; x: basis index prefix.
  auto rec = [&](auto&& self, int i, std::uint64_t zeros, std::uint64_t x) -> void {
    if (i == n) {
      out.push_back(x);
      return;
    }
    if ((earlier[static_cast<std::size_t>(i)] & zeros) == 0) self(self, i + 1, zeros | (std::uint64_t{1} << i), x << 1);
    self(self, i + 1, zeros, (x << 1) | 1U);
  };
  rec(rec, 0, 0, 0);
  return out;
}

inline std::vector<std::uint64_t> enumerate_covers(const Instance& inst, int cap = 24) {
  return enumerate_covers(inst.n(), inst.edges(), cap);
}

namespace detail {

/// Real Pauli fields (hx, hz, e) of a canonical instance, plus the global offset.
struct RealFields {
  std::vector<double> hx, hz, e;
  double offset = 0.0;
};

inline RealFields real_fields(const Instance& inst) {
  const auto canon = canonicalize(inst).instance;
  RealFields f;
  for (const auto& t : canon.terms()) {
    const auto p = to_field(t);
    f.hx.push_back(p.hx);
    f.hz.push_back(p.hz);
    f.e.push_back(p.e);
  }
  f.offset = canon.offset();
  return f;
}

inline double diagonal_energy(const RealFields& f, std::uint64_t x, int n) {
  double d = f.offset;
  for (int i = 0; i < n; ++i) {
    const auto si = static_cast<std::size_t>(i);
    d += f.e[si] + (qubit_bit(x, i, n) ? -f.hz[si] : f.hz[si]);
  }
  return d;
}

inline SpectrumReport spectrum_of(const LinearOperator& op, int k, double tol, std::string basis,
                                  const std::function<Eigen::MatrixXd()>& dense) {
  SpectrumReport rep;
  rep.dim = op.dim;
  rep.basis = std::move(basis);
  if (op.dim <= kDenseLimit) {
    rep.eigs = dense_eigenvalues(dense(), k);
  } else {
    LanczosOptions opt;
    opt.k = k;
    opt.tol = tol;
    rep.eigs = lanczos_lowest(op, opt).values;
  }
  return rep;
}

}  // namespace detail

/// Hamiltonian restricted to the covering subspace, in the order of enumerate_covers.
inline SparseSym covering_hamiltonian(const Instance& inst, const std::vector<std::uint64_t>& states) {
  const int n = inst.n();
  const auto f = detail::real_fields(inst);
  SparseSym m;
  m.dim = states.size();
  m.row_ptr.reserve(states.size() + 1);
  for (std::size_t r = 0; r < states.size(); ++r) {
    const auto x = states[r];
    std::vector<std::pair<std::size_t, double>> row{{r, detail::diagonal_energy(f, x, n)}};
    for (int i = 0; i < n; ++i) {
      const double hx = f.hx[static_cast<std::size_t>(i)];
      if (hx == 0.0) continue;
      const auto y = x ^ (std::uint64_t{1} << (n - 1 - i));
      const auto it = std::lower_bound(states.begin(), states.end(), y);
      if (it != states.end() && *it == y) row.emplace_back(static_cast<std::size_t>(it - states.begin()), hx);
    }
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) {
      m.col.push_back(c);
      m.val.push_back(v);
    }
    m.row_ptr.push_back(m.col.size());
  }
  return m;
}

/// k lowest eigenvalues of H on the covering subspace.
inline SpectrumReport ground_energy_tvc(const Instance& inst, int k = 1, const OracleCaps& caps = {},
                                        double tol = 1e-10) {
  if (inst.kind() != Kind::Tvc) throw Error("ground_energy_tvc: instance kind must be tvc");
  const auto states = enumerate_covers(inst, caps.max_cover_n);
  if (states.size() > caps.max_cover_dim) throw CapExceeded("ground_energy_tvc: covering dimension above cap");
  const auto h = covering_hamiltonian(inst, states);
  return detail::spectrum_of(h.op(), k, tol, "covering", [&] { return h.dense(); });
}

/// k lowest eigenvalues of the full 2^n TPCVC Hamiltonian (matrix-free above the dense limit).
inline SpectrumReport ground_energy_full(const Instance& inst, int k = 1, const OracleCaps& caps = {},
                                         double tol = 1e-10) {
  if (inst.kind() != Kind::Pcvc) throw Error("ground_energy_full: instance kind must be pcvc");
  const int n = inst.n();
  if (n > caps.max_full_n) throw CapExceeded("ground_energy_full: n=" + std::to_string(n) + " exceeds cap");
  const auto f = detail::real_fields(inst);
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> diag(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    double d = detail::diagonal_energy(f, x, n);
    for (const auto& e : inst.edges()) {
      if (!qubit_bit(x, e.u, n) && !qubit_bit(x, e.v, n)) d += e.penalty;
    }
    diag[x] = d;
  }
  LinearOperator op{dim, [&](const double* x, double* y) {
                      for (std::size_t s = 0; s < dim; ++s) {
                        double acc = diag[s] * x[s];
                        for (int i = 0; i < n; ++i) {
                          const double hx = f.hx[static_cast<std::size_t>(i)];
                          if (hx != 0.0) acc += hx * x[s ^ (std::size_t{1} << (n - 1 - i))];
                        }
                        y[s] = acc;
                      }
                    }};
  auto dense = [&] {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    std::vector<double> e(dim, 0.0), col(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      e[c] = 1.0;
      op.apply(e.data(), col.data());
      e[c] = 0.0;
      for (std::size_t r = 0; r < dim; ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
    }
    return m;
  };
  return detail::spectrum_of(op, k, tol, "full", dense);
}

/// Dense 2^n objective Σ c_i φ_i + offsets (+ TPCVC penalties), general complex projectors.
inline Eigen::MatrixXcd dense_objective(const Instance& inst, int cap = 12) {
  const int n = inst.n();
  if (n > cap) throw CapExceeded("dense_objective: n above cap");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) h(x, x) += inst.offset();
  for (int i = 0; i < n; ++i) {
    const auto& t = inst.term(i);
    const Eigen::Index mask = Eigen::Index{1} << (n - 1 - i);
    for (Eigen::Index x = 0; x < dim; ++x) {
      const int s = (x & mask) ? 1 : 0;
      h(x, x) += t.offset + t.c * t.projector.element(s, s);
      h(x ^ mask, x) += t.c * t.projector.element(1 - s, s);
    }
  }
  if (inst.kind() == Kind::Pcvc) {
    for (const auto& e : inst.edges()) {
      for (Eigen::Index x = 0; x < dim; ++x) {
        if (!qubit_bit(static_cast<std::uint64_t>(x), e.u, n) && !qubit_bit(static_cast<std::uint64_t>(x), e.v, n)) {
          h(x, x) += e.penalty;
        }
      }
    }
  }
  return h;
}

/// Ground spectrum of `objective` on the joint nullspace of Σ_edges |psi><psi|_uv.
inline SpectrumReport nullspace_spectrum(int n, std::span<const Edge> edges,
                                         const std::array<std::complex<double>, 4>& psi,
                                         const Eigen::MatrixXcd& objective, int k = 1, int cap = 12) {
  if (n > cap) throw CapExceeded("ground_energy_nullspace: n=" + std::to_string(n) + " exceeds cap");
  const Eigen::Index dim = Eigen::Index{1} << n;
  double nrm = 0.0;
  for (const auto& a : psi) nrm += std::norm(a);
  if (nrm == 0.0) throw Error("ground_energy_nullspace: zero constraint state");
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& e : edges) {
    const Eigen::Index mu = Eigen::Index{1} << (n - 1 - e.u);
    const Eigen::Index mv = Eigen::Index{1} << (n - 1 - e.v);
    for (Eigen::Index rest = 0; rest < dim; ++rest) {
      if (rest & (mu | mv)) continue;
      std::array<Eigen::Index, 4> idx{rest, rest | mv, rest | mu, rest | mu | mv};
      for (int s = 0; s < 4; ++s) {
        for (int t = 0; t < 4; ++t) C(idx[static_cast<std::size_t>(s)], idx[static_cast<std::size_t>(t)]) +=
            psi[static_cast<std::size_t>(s)] * std::conj(psi[static_cast<std::size_t>(t)]) / nrm;
      }
    }
  }
  SpectrumReport rep;
  rep.basis = "nullspace";
  Eigen::MatrixXcd N;
  if (edges.empty()) {
    N = Eigen::MatrixXcd::Identity(dim, dim);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C);
    Eigen::Index rank0 = 0;
    while (rank0 < dim && es.eigenvalues()(rank0) <= 1e-9) ++rank0;
    N = es.eigenvectors().leftCols(rank0);
  }
  rep.dim = static_cast<std::size_t>(N.cols());
  if (rep.dim == 0) {
    rep.infeasible = true;
    return rep;
  }
  Eigen::MatrixXcd P = N.adjoint() * objective * N;
  P = 0.5 * (P + P.adjoint()).eval();
  rep.eigs = dense_eigenvalues(P, k);
  return rep;
}

/// EVC oracle; a TVC instance is treated as EVC with psi = |00>.
inline SpectrumReport ground_energy_nullspace(const Instance& inst, int k = 1, const OracleCaps& caps = {}) {
  if (inst.kind() == Kind::Pcvc) throw Error("ground_energy_nullspace: pcvc has no hard constraints");
  const auto psi = inst.kind() == Kind::Evc ? inst.psi().value_or(ConstraintSpec::classical()).amplitudes()
                                            : ConstraintSpec::classical().amplitudes();
  return nullspace_spectrum(inst.n(), inst.edges(), psi, dense_objective(inst, caps.max_nullspace_n), k,
                            caps.max_nullspace_n);
}

/// Exact ground energy by whichever oracle matches the instance kind.
inline SpectrumReport exact_spectrum(const Instance& inst, int k = 1, const OracleCaps& caps = {}) {
  switch (inst.kind()) {
    case Kind::Tvc: return ground_energy_tvc(inst, k, caps);
    case Kind::Pcvc: return ground_energy_full(inst, k, caps);
    case Kind::Evc: return ground_energy_nullspace(inst, k, caps);
  }
  throw Error("exact_spectrum: unknown kind");
}

}  // namespace qlr
