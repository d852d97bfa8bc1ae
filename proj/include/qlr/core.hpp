#pragma once

// Domain types shared by every solver: single-qubit projectors, instances of
// the vertex-cover Hamiltonian family, product states and the stoquastic
// canonical frame.
//
// Basis convention used across the library: qubit 0 is the most significant
// bit of a computational-basis index, i.e. H = A_0 (x) A_1 (x) ... (x) A_{n-1}.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qlr {

inline constexpr double kPi = 3.14159265358979323846;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a problem is larger than an oracle's configured cap.
struct CapExceeded : Error {
  using Error::Error;
};

/// Real 3-vector on or inside the Bloch ball.
struct Bloch {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double dot(const Bloch& o) const { return x * o.x + y * o.y + z * o.z; }
  Bloch operator-() const { return {-x, -y, -z}; }
  friend bool operator==(const Bloch&, const Bloch&) = default;
};

/// Rank-1 single-qubit projector (I + a.sigma)/2 with |a| = 1.
struct BlochProjector {
  double ax = 0.0;
  double ay = 0.0;
  double az = -1.0;

  static constexpr BlochProjector one() { return {0.0, 0.0, -1.0}; }       // |1><1|
  static constexpr BlochProjector zero() { return {0.0, 0.0, 1.0}; }       // |0><0|
  static constexpr BlochProjector minus() { return {-1.0, 0.0, 0.0}; }     // (I - X)/2

  Bloch vector() const { return {ax, ay, az}; }
  double norm() const { return vector().norm(); }

  /// Tr[phi rho] for rho = (I + r.sigma)/2.
  double expectation(const Bloch& r) const { return 0.5 * (1.0 + vector().dot(r)); }

  /// 2x2 matrix elements p_st = <s|phi|t>.
  std::complex<double> element(int s, int t) const {
    using C = std::complex<double>;
    if (s == 0 && t == 0) return 0.5 * (1.0 + az);
    if (s == 1 && t == 1) return 0.5 * (1.0 - az);
    if (s == 0) return C(0.5 * ax, -0.5 * ay);
    return C(0.5 * ax, 0.5 * ay);
  }
  friend bool operator==(const BlochProjector&, const BlochProjector&) = default;
};

/// c * phi + offset * I, c >= 0.
struct LocalTerm {
  double c = 0.0;
  BlochProjector projector{};
  double offset = 0.0;

  double energy(const Bloch& r) const { return c * projector.expectation(r) + offset; }
  friend bool operator==(const LocalTerm&, const LocalTerm&) = default;
};

/// hx X + hy Y + hz Z + e I on one qubit.
struct PauliField {
  double hx = 0.0;
  double hy = 0.0;
  double hz = 0.0;
  double e = 0.0;

  PauliField& operator+=(const PauliField& o) {
    hx += o.hx;
    hy += o.hy;
    hz += o.hz;
    e += o.e;
    return *this;
  }
  friend PauliField operator+(PauliField a, const PauliField& b) { return a += b; }
  friend PauliField operator*(double s, PauliField a) { return {s * a.hx, s * a.hy, s * a.hz, s * a.e}; }
};

/// Exact factorization hx X + hy Y + hz Z + e I = c phi + offset I with c = 2|h|.
inline LocalTerm assemble_local_term(const PauliField& f) {
  const double h = std::sqrt(f.hx * f.hx + f.hy * f.hy + f.hz * f.hz);
  if (h == 0.0) return {0.0, BlochProjector::one(), f.e};
  return {2.0 * h, {f.hx / h, f.hy / h, f.hz / h}, f.e - h};
}

inline PauliField to_field(const LocalTerm& t) {
  const double half = 0.5 * t.c;
  return {half * t.projector.ax, half * t.projector.ay, half * t.projector.az, half + t.offset};
}

enum class Kind { Tvc, Pcvc, Evc };

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::Tvc: return "tvc";
    case Kind::Pcvc: return "pcvc";
    case Kind::Evc: return "evc";
  }
  return "?";
}

inline Kind kind_from_string(const std::string& s) {
  if (s == "tvc") return Kind::Tvc;
  if (s == "pcvc" || s == "tpcvc") return Kind::Pcvc;
  if (s == "evc") return Kind::Evc;
  throw Error("unknown instance kind '" + s + "'");
}

/// Undirected edge, stored with u < v. `penalty` is c_ij for TPCVC, otherwise unused.
struct Edge {
  int u = 0;
  int v = 0;
  double penalty = 0.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Canonical EVC constraint state: alpha|00> + beta|11> (alpha, beta >= 0) or the singlet.
struct ConstraintSpec {
  enum class Form { Diagonal, Singlet };
  Form form = Form::Diagonal;
  double alpha = 1.0;
  double beta = 0.0;

  static ConstraintSpec diagonal(double alpha, double beta) { return {Form::Diagonal, alpha, beta}; }
  static ConstraintSpec singlet() { return {Form::Singlet, 0.0, 0.0}; }
  static ConstraintSpec bell() { return diagonal(std::sqrt(0.5), std::sqrt(0.5)); }
  static ConstraintSpec classical() { return diagonal(1.0, 0.0); }

  /// Normalized amplitudes in the basis |00>, |01>, |10>, |11>.
  std::array<std::complex<double>, 4> amplitudes() const {
    if (form == Form::Singlet) {
      const double s = std::sqrt(0.5);
      return {0.0, s, -s, 0.0};
    }
    const double nrm = std::hypot(alpha, beta);
    return {alpha / nrm, 0.0, 0.0, beta / nrm};
  }
  bool is_classical(double tol = 1e-12) const {
    return form == Form::Diagonal && std::min(std::abs(alpha), std::abs(beta)) <= tol;
  }
};

/// Graph plus per-vertex local terms plus constraint kind. Immutable after construction.
///
/// Construction normalizes edges to u < v, sorts them lexicographically and merges
/// duplicates (TVC/EVC collapse, TPCVC penalties add). Self-loops and bad weights are
/// kept so that validate_instance can report them.
class Instance {
 public:
  Instance() = default;

  Instance(Kind kind, std::vector<LocalTerm> terms, std::vector<Edge> edges, double offset = 0.0,
           std::optional<ConstraintSpec> psi = std::nullopt)
      : kind_(kind), terms_(std::move(terms)), offset_(offset), psi_(psi) {
    const int n = static_cast<int>(terms_.size());
    for (auto e : edges) {
      if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
        throw Error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range for n=" +
                    std::to_string(n));
      }
      if (e.u > e.v) std::swap(e.u, e.v);
      if (kind_ != Kind::Pcvc) e.penalty = 0.0;
      edges_.push_back(e);
    }
    std::stable_sort(edges_.begin(), edges_.end(),
                     [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
    std::vector<Edge> merged;
    for (const auto& e : edges_) {
      if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v) {
        if (kind_ == Kind::Pcvc) merged.back().penalty += e.penalty;
        continue;
      }
      merged.push_back(e);
    }
    edges_ = std::move(merged);
  }

  Kind kind() const { return kind_; }
  int n() const { return static_cast<int>(terms_.size()); }
  std::span<const LocalTerm> terms() const { return terms_; }
  const LocalTerm& term(int i) const { return terms_.at(static_cast<std::size_t>(i)); }
  std::span<const Edge> edges() const { return edges_; }
  double offset() const { return offset_; }
  const std::optional<ConstraintSpec>& psi() const { return psi_; }

  /// Sum of all identity contributions (per-vertex offsets plus the global offset).
  double total_offset() const {
    double s = offset_;
    for (const auto& t : terms_) s += t.offset;
    return s;
  }

  std::vector<int> degrees() const {
    std::vector<int> d(terms_.size(), 0);
    for (const auto& e : edges_) {
      ++d[static_cast<std::size_t>(e.u)];
      if (e.v != e.u) ++d[static_cast<std::size_t>(e.v)];
    }
    return d;
  }

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(terms_.size());
    for (const auto& e : edges_) {
      if (e.u == e.v) continue;
      adj[static_cast<std::size_t>(e.u)].push_back(e.v);
      adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
  }

  /// Same graph and constraint, new terms.
  Instance with_terms(std::vector<LocalTerm> terms) const {
    if (terms.size() != terms_.size()) throw Error("with_terms: vertex count mismatch");
    Instance out = *this;
    out.terms_ = std::move(terms);
    return out;
  }

 private:
  Kind kind_ = Kind::Tvc;
  std::vector<LocalTerm> terms_;
  std::vector<Edge> edges_;
  double offset_ = 0.0;
  std::optional<ConstraintSpec> psi_;
};

/// Product state (x)_i (I + r_i.sigma)/2.
struct ProductState {
  std::vector<Bloch> bloch;

  std::size_t size() const { return bloch.size(); }
  const Bloch& operator[](std::size_t i) const { return bloch[i]; }

  static ProductState basis(const std::string& bits) {
    ProductState s;
    for (char ch : bits) {
      switch (ch) {
        case '0': s.bloch.push_back({0, 0, 1}); break;
        case '1': s.bloch.push_back({0, 0, -1}); break;
        case '+': s.bloch.push_back({1, 0, 0}); break;
        case '-': s.bloch.push_back({-1, 0, 0}); break;
        default: throw Error(std::string("ProductState::basis: bad symbol '") + ch + "'");
      }
    }
    return s;
  }
};

struct ValidationReport {
  bool ok = true;
  bool canonical = true;  // ay = 0, ax <= 0, az <= 0 everywhere
  std::vector<std::string> violations;

  std::string summary() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) os << (i ? "; " : "") << violations[i];
    return os.str();
  }
};

inline constexpr double kUnitTol = 1e-9;
inline constexpr double kSignTol = 1e-9;

inline ValidationReport validate_instance(const Instance& inst) {
  ValidationReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.violations.push_back(std::move(msg));
  };
  for (int i = 0; i < inst.n(); ++i) {
    const auto& t = inst.term(i);
    const auto& p = t.projector;
    const std::string tag = "vertex " + std::to_string(i) + ": ";
    if (!std::isfinite(t.c) || !std::isfinite(t.offset) || !std::isfinite(p.ax) || !std::isfinite(p.ay) ||
        !std::isfinite(p.az)) {
      fail(tag + "non-finite value");
      continue;
    }
    if (t.c < 0.0) fail(tag + "negative weight c=" + std::to_string(t.c));
    if (std::abs(p.norm() - 1.0) > kUnitTol) fail(tag + "Bloch vector not unit (rank-1 projector required)");
    if (inst.kind() != Kind::Evc && p.az > kSignTol) fail(tag + "Tr[Zφ] > 0 (az=" + std::to_string(p.az) + ")");
    if (std::abs(p.ay) > kSignTol || p.ax > kSignTol || p.az > kSignTol) rep.canonical = false;
  }
  for (const auto& e : inst.edges()) {
    const std::string tag = "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + "): ";
    if (e.u == e.v) fail(tag + "self-loop");
    if (inst.kind() == Kind::Pcvc && !(e.penalty >= 0.0)) fail(tag + "negative penalty");
  }
  if (inst.kind() == Kind::Evc) {
    if (!inst.psi()) {
      fail("evc instance without constraint state psi");
    } else if (inst.psi()->form == ConstraintSpec::Form::Diagonal) {
      const auto& ps = *inst.psi();
      if (ps.alpha < 0.0 || ps.beta < 0.0) fail("psi: diagonal form needs alpha, beta >= 0");
      if (std::abs(ps.alpha * ps.alpha + ps.beta * ps.beta - 1.0) > kUnitTol) fail("psi: not normalized");
    }
  }
  return rep;
}

inline void require_valid(const Instance& inst) {
  auto rep = validate_instance(inst);
  if (!rep.ok) throw Error("invalid instance: " + rep.summary());
}

/// Rotation about Z by `angle`, followed by Z-conjugation when `z_flip`.
struct FrameRotation {
  double angle = 0.0;
  bool z_flip = false;

  bool is_identity() const { return angle == 0.0 && !z_flip; }

  Bloch apply(const Bloch& r) const {
    const double c = std::cos(angle), s = std::sin(angle);
    Bloch out{c * r.x - s * r.y, s * r.x + c * r.y, r.z};
    if (z_flip) out = {-out.x, -out.y, out.z};
    return out;
  }
  Bloch invert(const Bloch& r) const {
    Bloch out = z_flip ? Bloch{-r.x, -r.y, r.z} : r;
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * out.x + s * out.y, -s * out.x + c * out.y, out.z};
  }
  BlochProjector apply(const BlochProjector& p) const {
    auto v = apply(p.vector());
    return {v.x, v.y, v.z};
  }
};

struct CanonicalForm {
  Instance instance;
  std::vector<FrameRotation> rotations;

  ProductState to_canonical(const ProductState& s) const {
    ProductState out;
    for (std::size_t i = 0; i < s.size(); ++i) out.bloch.push_back(rotations.at(i).apply(s[i]));
    return out;
  }
  ProductState to_original(const ProductState& s) const {
    ProductState out;
    for (std::size_t i = 0; i < s.size(); ++i) out.bloch.push_back(rotations.at(i).invert(s[i]));
    return out;
  }
};

/// Rotates every projector about Z (and Z-conjugates) so that ay = 0 and ax <= 0.
/// Diagonal constraints and penalties are untouched.
inline CanonicalForm canonicalize(const Instance& inst) {
  std::vector<LocalTerm> terms(inst.terms().begin(), inst.terms().end());
  std::vector<FrameRotation> rot(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    auto& p = terms[i].projector;
    if (p.az > kSignTol) {
      throw Error("canonicalize: vertex " + std::to_string(i) + " has Tr[Zφ] > 0");
    }
    if (p.ay == 0.0 && p.ax <= 0.0) continue;
    rot[i] = {-std::atan2(p.ay, p.ax), true};
    const double transverse = std::hypot(p.ax, p.ay);
    p = {-transverse, 0.0, p.az};
  }
  return {inst.with_terms(std::move(terms)), std::move(rot)};
}

namespace detail {
inline double prob_zero(const Bloch& r) { return 0.5 * (1.0 + r.z); }

using Mat2 = std::array<std::complex<double>, 4>;  // row-major

inline Mat2 density(const Bloch& r) {
  using C = std::complex<double>;
  return {C(0.5 * (1 + r.z)), C(0.5 * r.x, -0.5 * r.y), C(0.5 * r.x, 0.5 * r.y), C(0.5 * (1 - r.z))};
}

/// <psi| rho_a (x) rho_b |psi> for a two-qubit vector psi in the basis 00,01,10,11.
inline double pair_expectation(const std::array<std::complex<double>, 4>& psi, const Bloch& ra, const Bloch& rb) {
  const auto da = density(ra), db = density(rb);
  std::complex<double> acc = 0.0;
  for (int s = 0; s < 4; ++s) {
    for (int t = 0; t < 4; ++t) {
      const auto rho = da[(s >> 1) * 2 + (t >> 1)] * db[(s & 1) * 2 + (t & 1)];
      acc += std::conj(psi[s]) * rho * psi[t];
    }
  }
  return acc.real();
}
}  // namespace detail

/// Closed-form Tr[H rho] for a product state.
inline double evaluate(const Instance& inst, const ProductState& state) {
  if (state.size() != static_cast<std::size_t>(inst.n())) {
    throw Error("evaluate: state has " + std::to_string(state.size()) + " qubits, instance has " +
                std::to_string(inst.n()));
  }
  double e = inst.offset();
  for (int i = 0; i < inst.n(); ++i) e += inst.term(i).energy(state[static_cast<std::size_t>(i)]);
  if (inst.kind() == Kind::Pcvc) {
    for (const auto& ed : inst.edges()) {
      e += ed.penalty * detail::prob_zero(state[static_cast<std::size_t>(ed.u)]) *
           detail::prob_zero(state[static_cast<std::size_t>(ed.v)]);
    }
  }
  return e;
}

/// Per-edge constraint expectations Tr[C_ij rho] (|00><00| for TVC/TPCVC, |psi><psi| for EVC).
inline std::vector<double> constraint_expectations(const Instance& inst, const ProductState& state) {
  if (state.size() != static_cast<std::size_t>(inst.n())) throw Error("constraint_expectations: dimension mismatch");
  std::vector<double> out;
  out.reserve(inst.edges().size());
  const auto psi = inst.kind() == Kind::Evc && inst.psi() ? inst.psi()->amplitudes()
                                                          : ConstraintSpec::classical().amplitudes();
  for (const auto& e : inst.edges()) {
    out.push_back(detail::pair_expectation(psi, state[static_cast<std::size_t>(e.u)],
                                           state[static_cast<std::size_t>(e.v)]));
  }
  return out;
}

/// True iff every edge constraint expectation is <= tol. TPCVC has no hard constraints.
inline bool feasibility(const Instance& inst, const ProductState& state, double tol = 1e-9) {
  if (inst.kind() == Kind::Pcvc) return true;
  for (double v : constraint_expectations(inst, state)) {
    if (v > tol) return false;
  }
  return true;
}

}  // namespace qlr
