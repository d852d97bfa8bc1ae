#pragma once

// JSON data model for instances, TIM inputs and solver reports. Floats are
// written with 17 significant digits; non-finite values become null.

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <variant>

#include "qlr/core.hpp"
#include "qlr/evc.hpp"
#include "qlr/exact.hpp"
#include "qlr/gadgets.hpp"
#include "qlr/localratio.hpp"

namespace qlr {

using json = nlohmann::ordered_json;

inline std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {
inline void dump17(const json& j, std::string& out, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump17(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump17(v, out, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float: out += format_double(j.get<double>()); return;
    default: out += j.dump(); return;
  }
}
}  // namespace detail

inline std::string dump(const json& j, int indent = 2) {
  std::string out;
  detail::dump17(j, out, indent, 0);
  out += '\n';
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error("malformed JSON in '" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

inline json bloch_json(const Bloch& b) { return json::array({b.x, b.y, b.z}); }

inline json to_json(const ConstraintSpec& psi) {
  json j;
  if (psi.form == ConstraintSpec::Form::Singlet) {
    j["form"] = "singlet";
  } else {
    j["form"] = "diagonal";
    j["alpha"] = psi.alpha;
    j["beta"] = psi.beta;
  }
  return j;
}

inline json to_json(const Instance& inst) {
  json j;
  j["kind"] = to_string(inst.kind());
  j["n"] = inst.n();
  json verts = json::array();
  for (int i = 0; i < inst.n(); ++i) {
    const auto& t = inst.term(i);
    verts.push_back({{"id", i}, {"c", t.c}, {"bloch", json::array({t.projector.ax, t.projector.ay, t.projector.az})}, {"offset", t.offset}});
  }
  j["vertices"] = verts;
  json edges = json::array();
  for (const auto& e : inst.edges()) {
    json je{{"u", e.u}, {"v", e.v}};
    if (inst.kind() == Kind::Pcvc) je["penalty"] = e.penalty;
    edges.push_back(je);
  }
  j["edges"] = edges;
  if (inst.psi()) j["psi"] = to_json(*inst.psi());
  j["offset"] = inst.offset();
  return j;
}

inline json to_json(const TIMInstance& tim) {
  json j;
  j["kind"] = "tim";
  j["n"] = tim.n;
  json edges = json::array();
  for (const auto& e : tim.edges) edges.push_back({{"u", e.u}, {"v", e.v}, {"w", e.w}});
  j["edges"] = edges;
  j["fields"] = tim.h;
  return j;
}

namespace detail {
template <class T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw Error(where + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(where + ": bad value for \"" + key + "\"");
  }
}
}  // namespace detail

inline TIMInstance tim_from_json(const json& j) {
  TIMInstance t;
  t.n = detail::field<int>(j, "n", "tim");
  for (const auto& e : j.value("edges", json::array())) {
    t.edges.push_back({detail::field<int>(e, "u", "tim edge"), detail::field<int>(e, "v", "tim edge"), e.value("w", 0.0)});
  }
  t.h = j.contains("fields") ? j.at("fields").get<std::vector<double>>() : std::vector<double>(static_cast<std::size_t>(t.n), 0.0);
  t.validate();
  return t;
}

/// Parsed input file: a constrained instance or a TIM description.
struct Problem {
  std::variant<Instance, TIMInstance> value;
  std::optional<ConstraintState> constraint;  // raw EVC input only

  bool is_tim() const { return std::holds_alternative<TIMInstance>(value); }
  const Instance& instance() const { return std::get<Instance>(value); }
  const TIMInstance& tim() const { return std::get<TIMInstance>(value); }
};

inline Problem problem_from_json(const json& j) {
  const auto kind = detail::field<std::string>(j, "kind", "instance");
  if (kind == "tim") return {tim_from_json(j), std::nullopt};
  const Kind k = kind_from_string(kind);
  const int n = detail::field<int>(j, "n", "instance");
  std::vector<LocalTerm> terms(static_cast<std::size_t>(std::max(n, 0)));
  std::vector<char> seen(terms.size(), 0);
  for (const auto& v : j.value("vertices", json::array())) {
    const int id = detail::field<int>(v, "id", "vertex");
    if (id < 0 || id >= n) throw Error("vertex id " + std::to_string(id) + " out of range");
    auto& t = terms[static_cast<std::size_t>(id)];
    t.c = v.value("c", 0.0);
    const auto b = v.value("bloch", std::vector<double>{0.0, 0.0, -1.0});
    if (b.size() != 3) throw Error("vertex " + std::to_string(id) + ": bloch needs 3 components");
    t.projector = {b[0], b[1], b[2]};
    t.offset = v.value("offset", 0.0);
    seen[static_cast<std::size_t>(id)] = 1;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw Error("vertex " + std::to_string(i) + " missing");
  }
  std::vector<Edge> edges;
  for (const auto& e : j.value("edges", json::array())) {
    edges.push_back({detail::field<int>(e, "u", "edge"), detail::field<int>(e, "v", "edge"), e.value("penalty", 0.0)});
  }
  const double offset = j.value("offset", 0.0);
  std::optional<ConstraintSpec> psi;
  if (j.contains("psi")) {
    const auto& p = j.at("psi");
    const auto form = detail::field<std::string>(p, "form", "psi");
    if (form == "singlet") {
      psi = ConstraintSpec::singlet();
    } else if (form == "diagonal") {
      psi = ConstraintSpec::diagonal(p.value("alpha", 1.0), p.value("beta", 0.0));
    } else if (form == "raw") {
      const auto amps = detail::field<std::vector<std::vector<double>>>(p, "amplitudes", "psi");
      if (amps.size() != 4) throw Error("psi: raw form needs 4 amplitudes");
      std::array<cplx, 4> raw{};
      for (std::size_t i = 0; i < 4; ++i) {
        if (amps[i].empty() || amps[i].size() > 2) throw Error("psi: amplitude must be [re] or [re, im]");
        raw[i] = {amps[i][0], amps[i].size() > 1 ? amps[i][1] : 0.0};
      }
      if (k != Kind::Evc) throw Error("psi given for non-evc instance");
      ConstraintState cs;
      auto inst = evc_instance_from_raw(std::move(terms), std::move(edges), raw, offset, &cs);
      return {std::move(inst), cs};
    } else {
      throw Error("psi: unknown form '" + form + "'");
    }
  }
  return {Instance(k, std::move(terms), std::move(edges), offset, psi), std::nullopt};
}

inline Problem load_problem(const std::string& path) { return problem_from_json(read_json_file(path)); }

inline json to_json(const SpectrumReport& s) {
  return {{"dim", s.dim}, {"eigs", s.eigs}, {"basis", s.basis}, {"infeasible", s.infeasible}};
}

inline json to_json(const Certificate& c) {
  json rounds = json::array();
  for (const auto& r : c.rounds) {
    json jr{{"edge", json::array({r.edge.u, r.edge.v})}, {"w", r.w}, {"mu_star", r.mu_star}, {"local_ratio", r.local_ratio}};
    if (c.kind == Kind::Pcvc) jr["lambda"] = r.lambda;
    rounds.push_back(jr);
  }
  json j{{"rounds", rounds}, {"residual", c.residual}};
  if (c.kind == Kind::Pcvc) j["residual_penalty"] = c.residual_penalty;
  j["alpha_effective"] = c.alpha_effective;
  return j;
}

inline json to_json(const CertReport& r) {
  return {{"ok", r.ok()},
          {"nonnegative", r.nonnegative},
          {"reconstruction", r.reconstruction},
          {"ratio", r.ratio},
          {"remainder", r.remainder},
          {"feasible", r.feasible},
          {"alpha_effective", r.alpha_effective},
          {"alpha_bound", r.alpha_bound},
          {"failures", r.failures}};
}

inline json to_json(const LrResult& r) {
  json state = json::array();
  for (const auto& b : r.state.bloch) state.push_back(bloch_json(b));
  return {{"energy", r.energy}, {"state", state}, {"certificate", to_json(r.cert)}};
}

inline json to_json(const EVCSolveResult& r) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < r.gamma.size(); ++i) amps.push_back(json::array({r.gamma(i).real(), r.gamma(i).imag()}));
  json j{{"case", to_string(r.tag)}, {"energy", r.energy}, {"dim", r.dim()}, {"basis", r.labels}, {"amplitudes", amps}};
  if (r.tag == EvcCase::Case1) j["partition"] = {{"A", r.A}, {"B", r.B}};
  j["vertices"] = r.vertices;
  return j;
}

inline json to_json(const EvcSolution& s) {
  json j;
  j["case"] = s.case_tag;
  j["energy"] = s.energy;
  if (s.components.size() == 1) {
    const auto c = to_json(s.components.front());
    j["dim"] = c["dim"];
    j["basis"] = c["basis"];
    j["amplitudes"] = c["amplitudes"];
    if (c.contains("partition")) j["partition"] = c["partition"];
  } else {
    json comps = json::array();
    int dim = 0;
    for (const auto& c : s.components) {
      comps.push_back(to_json(c));
      dim = std::max(dim, c.dim());
    }
    j["dim"] = dim;
    j["components"] = comps;
  }
  return j;
}

inline json to_json(const ConvergenceReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"delta", row.delta},
                    {"qubits", row.qubits},
                    {"dim", row.dim},
                    {"gadget_gaps", row.gadget_gaps},
                    {"tim_gaps", row.tim_gaps},
                    {"max_gap_error", row.max_gap_error}});
  }
  return {{"rows", rows}, {"monotone", r.monotone}, {"final_error", r.final_error()}};
}

inline std::string to_csv(const ConvergenceReport& r) {
  std::string out = "delta,qubits,dim,max_gap_error\n";
  for (const auto& row : r.rows) {
    out += format_double(row.delta) + "," + std::to_string(row.qubits) + "," + std::to_string(row.dim) + "," +
           format_double(row.max_gap_error) + "\n";
  }
  return out;
}

}  // namespace qlr
