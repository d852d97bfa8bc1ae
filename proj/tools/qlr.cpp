// qlr: command-line front end for the local-ratio, EVC and gadget tools.
//
// Exit codes: 0 success, 1 bound violation or validation failure, 2 usage or runtime error.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qlr/qlr.hpp"

namespace {

using qlr::json;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kFailure = 2;

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    qlr::write_text_file(out, text);
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw qlr::Error("bad number '" + item + "' in list");
    }
  }
  return v;
}

struct GenArgs {
  std::string kind = "tvc";
  int n = 6;
  double density = 0.3;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  std::string psi = "bell";
  std::string graph = "any";
  bool classical = false;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  if (!(a.density > 0.0 && a.density <= 1.0)) throw qlr::Error("density must be in (0, 1]");
  if (a.n < 1) throw qlr::Error("n must be >= 1");
  json j;
  if (a.kind == "tim") {
    qlr::Rng rng(a.seed, a.index);
    qlr::TIMInstance tim;
    tim.n = a.n;
    for (int i = 0; i + 1 < a.n; ++i) tim.edges.push_back({i, i + 1, rng.uniform(-1.0, 1.0)});
    for (int i = 0; i < a.n; ++i) tim.h.push_back(-rng.uniform_pos());
    j = qlr::to_json(tim);
  } else if (a.kind == "pxp") {
    std::vector<qlr::Edge> edges;
    for (int i = 0; i + 1 < a.n; ++i) edges.push_back({i, i + 1, 0.0});
    j = qlr::to_json(qlr::pxp_instance(a.n, edges, std::vector<double>(static_cast<std::size_t>(a.n), 1.0)));
  } else {
    qlr::GenOptions g;
    g.kind = qlr::kind_from_string(a.kind);
    g.n = a.n;
    g.density = a.density;
    g.seed = a.seed;
    g.index = a.index;
    g.psi = a.psi;
    g.classical = a.classical;
    if (a.graph == "bipartite") {
      g.shape = qlr::GraphShape::Bipartite;
    } else if (a.graph == "nonbipartite") {
      g.shape = qlr::GraphShape::NonBipartite;
    } else if (a.graph != "any") {
      throw qlr::Error("unknown graph shape '" + a.graph + "'");
    }
    const auto inst = qlr::generate_instance(g);
    const auto rep = qlr::validate_instance(inst);
    if (!rep.ok) {
      std::cerr << "generated instance failed validation: " << rep.summary() << "\n";
      return kViolation;
    }
    j = qlr::to_json(inst);
  }
  j["generator"] = {{"rng", qlr::kRngName}, {"seed", a.seed}, {"index", a.index}};
  emit(qlr::dump(j), a.out);
  return kOk;
}

struct SolveArgs {
  std::string input;
  std::string algo = "lr";
  std::string order = "lex";
  bool exact = false;
  bool certify = false;
  double tol = 1e-9;
  std::string out;
};

int cmd_solve(const SolveArgs& a) {
  const auto prob = qlr::load_problem(a.input);
  if (prob.is_tim()) throw qlr::Error("solve: tim input; use the gadget command");
  const auto& inst = prob.instance();
  const auto val = qlr::validate_instance(inst);
  if (!val.ok) {
    std::cerr << "validation failed: " << val.summary() << "\n";
    return kViolation;
  }
  int code = kOk;
  json rep;
  rep["algo"] = a.algo;
  rep["kind"] = qlr::to_string(inst.kind());
  rep["rng"] = qlr::kRngName;
  auto attach_exact = [&](double energy, double bound) {
    try {
      const auto spec = qlr::exact_spectrum(inst);
      if (spec.infeasible) {
        rep["exact"] = nullptr;
        rep["exact_error"] = "infeasible";
        return;
      }
      const double ex = spec.ground();
      rep["exact"] = ex;
      if (ex > 1e-12) rep["ratio"] = energy / ex;
      if (bound > 0.0 && energy > bound * ex + 1e-7) {
        std::cerr << "bound violated: energy " << energy << " > " << bound << " * " << ex << "\n";
        code = kViolation;
      }
      if (bound < 0.0 && std::abs(energy - ex) > 1e-8) {
        std::cerr << "oracle mismatch: " << energy << " vs " << ex << "\n";
        code = kViolation;
      }
    } catch (const qlr::CapExceeded& e) {
      rep["exact_error"] = e.what();
    }
  };

  if (a.algo == "lr") {
    if (inst.kind() == qlr::Kind::Evc) throw qlr::Error("kind/algo mismatch: lr does not accept evc instances");
    qlr::EdgeOrder order;
    if (a.order == "reverse") {
      order = qlr::EdgeOrder::reversed(inst.edges().size());
    } else if (a.order != "lex") {
      throw qlr::Error("unknown edge order '" + a.order + "'");
    }
    const auto res = inst.kind() == qlr::Kind::Tvc ? qlr::lr_tvc(inst, order) : qlr::lr_tpcvc(inst, order);
    rep.update(qlr::to_json(res));
    if (inst.kind() == qlr::Kind::Tvc) {
      const bool feas = qlr::feasibility(inst, res.state, a.tol);
      rep["feasible"] = feas;
      if (!feas) code = kViolation;
    }
    if (a.certify) {
      const auto cr = qlr::certify(inst, res.state, res.cert);
      rep["certify"] = qlr::to_json(cr);
      if (!cr.ok()) code = kViolation;
    }
    if (a.exact) attach_exact(res.energy, inst.kind() == qlr::Kind::Tvc ? qlr::kTvcRatio : qlr::kPcvcRatio);
  } else if (a.algo == "exact") {
    const auto spec = qlr::exact_spectrum(inst);
    rep.update(qlr::to_json(spec));
    if (!spec.infeasible) rep["energy"] = spec.ground();
  } else if (a.algo == "evc") {
    if (inst.kind() != qlr::Kind::Evc) throw qlr::Error("kind/algo mismatch: evc needs an evc instance");
    const auto sol = qlr::solve_evc(inst);
    rep.update(qlr::to_json(sol));
    if (prob.constraint) {
      const auto& U = prob.constraint->U;
      json ju = json::array();
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) ju.push_back(json::array({U(r, c).real(), U(r, c).imag()}));
      }
      rep["constraint"] = {{"canonical", qlr::to_json(prob.constraint->spec)}, {"U", ju}};
    }
    if (a.exact) attach_exact(sol.energy, -1.0);
  } else {
    throw qlr::Error("unknown algo '" + a.algo + "' (lr | exact | evc)");
  }
  emit(qlr::dump(rep), a.out);
  return code;
}

struct BenchArgs {
  qlr::BenchOptions opt;
  std::string out;
  bool timing = false;
};

int cmd_bench(BenchArgs a) {
  if (const char* env = std::getenv("QLR_THREADS")) {
    try {
      a.opt.threads = std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw qlr::Error("QLR_THREADS must be an integer");
    }
  }
  const auto sum = qlr::run_bench(a.opt, a.timing);
  emit(qlr::bench_csv(sum, a.timing), a.out);
  std::ostream& log = (a.out.empty() || a.out == "-") ? std::cerr : std::cout;
  log << "suite " << a.opt.suite << ": " << sum.rows.size() << " rows, max metric " << qlr::format_double(sum.max_metric)
      << ", mean metric " << qlr::format_double(sum.mean_metric) << ", failures " << sum.failures << "\n";
  for (const auto& r : sum.rows) {
    if (!r.error.empty()) log << "  row " << r.id << ": " << r.error << "\n";
  }
  return sum.ok() ? kOk : kViolation;
}

struct GadgetArgs {
  std::string input;
  std::string deltas = "8,16,32,64";
  int k = 4;
  double build = 0.0;
  std::string out;
  std::string csv;
};

int cmd_gadget(const GadgetArgs& a) {
  qlr::TIMInstance tim{2, {{0, 1, 1.0}}, {-0.5, -0.5}};
  if (!a.input.empty()) {
    const auto prob = qlr::load_problem(a.input);
    if (!prob.is_tim()) throw qlr::Error("gadget: input must be a tim instance");
    tim = prob.tim();
  }
  if (a.build > 0.0) {
    emit(qlr::dump(qlr::to_json(qlr::tim_to_tvc(tim, a.build))), a.out);
    return kOk;
  }
  const auto rep = qlr::gadget_convergence(tim, parse_list(a.deltas), a.k);
  emit(qlr::dump(qlr::to_json(rep)), a.out);
  if (!a.csv.empty()) qlr::write_text_file(a.csv, qlr::to_csv(rep));
  return rep.monotone ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlr: local-ratio solvers, exact oracles and gadget builders for vertex-cover Hamiltonians"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a seeded random instance");
  g->add_option("--kind", gen.kind, "tvc | pcvc | evc | tim | pxp")->capture_default_str();
  g->add_option("--n", gen.n, "vertex count")->capture_default_str();
  g->add_option("--density", gen.density, "extra-edge probability in (0,1]")->capture_default_str();
  g->add_option("--seed", gen.seed, "64-bit seed")->capture_default_str();
  g->add_option("--index", gen.index, "stream index")->capture_default_str();
  g->add_option("--psi", gen.psi, "evc constraint: bell | singlet | diagonal")->capture_default_str();
  g->add_option("--graph", gen.graph, "any | bipartite | nonbipartite")->capture_default_str();
  g->add_flag("--classical", gen.classical, "diagonal projectors |1><1|");
  g->add_option("--out", gen.out, "output file (default stdout)");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "solve an instance");
  s->add_option("--input", solve.input, "instance JSON")->required();
  s->add_option("--algo", solve.algo, "lr | exact | evc")->capture_default_str();
  s->add_option("--order", solve.order, "edge order for lr: lex | reverse")->capture_default_str();
  s->add_flag("--exact", solve.exact, "also run the matching exact oracle");
  s->add_flag("--certify", solve.certify, "re-check the local-ratio certificate");
  s->add_option("--tol", solve.tol, "feasibility tolerance")->capture_default_str();
  s->add_option("--out", solve.out, "report file (default stdout)");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "run a benchmark suite");
  b->add_option("--suite", bench.opt.suite, "tvc-small | pcvc-small | evc-small | gadget-sweep")->capture_default_str();
  b->add_option("--trials", bench.opt.trials, "instances (0 = suite default)")->capture_default_str();
  b->add_option("--seed", bench.opt.seed, "64-bit seed")->capture_default_str();
  b->add_option("--threads", bench.opt.threads, "worker threads (QLR_THREADS overrides)")->capture_default_str();
  b->add_option("--max-n", bench.opt.max_n, "largest instance size")->capture_default_str();
  b->add_option("--tol", bench.opt.tol, "evc oracle-match tolerance")->capture_default_str();
  b->add_flag("--timing", bench.timing, "append a wall_ms column (not byte-reproducible)");
  b->add_option("--out", bench.out, "CSV file (default stdout)");

  GadgetArgs gad;
  auto* gd = app.add_subcommand("gadget", "TIM -> TVC gadget sweep against exact TIM gaps");
  gd->add_option("--input", gad.input, "TIM JSON (default: 2 vertices, w=1, h=-0.5)");
  gd->add_option("--delta-list", gad.deltas, "comma-separated Δ values")->capture_default_str();
  gd->add_option("--k", gad.k, "number of levels compared")->capture_default_str();
  gd->add_option("--build", gad.build, "emit the TVC gadget instance for this Δ instead of sweeping");
  gd->add_option("--out", gad.out, "JSON report (default stdout)");
  gd->add_option("--csv", gad.csv, "CSV export of the sweep");

  auto* v = app.add_subcommand("version", "print version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kFailure;
  }

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (s->parsed()) return cmd_solve(solve);
    if (b->parsed()) return cmd_bench(bench);
    if (gd->parsed()) return cmd_gadget(gad);
    if (v->parsed()) {
      std::cout << "qlr " << qlr::kVersion << " (rng " << qlr::kRngName << ")\n";
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
