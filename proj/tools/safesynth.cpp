// Command-line front end: synthesis, realizability checks, benchmark
// generation and controller verification for AIGER safety games.

#include "safesynth/bench.hpp"
#include "safesynth/extract.hpp"
#include "safesynth/portfolio.hpp"
#include "safesynth/template.hpp"
#include "safesynth/verify.hpp"
#include "safesynth/win.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

using namespace safesynth;

namespace {

constexpr int kRealizable = 10;
constexpr int kUnrealizable = 20;
constexpr int kError = 1;

struct Options {
  std::string input;
  std::string backend = "sat1-rge";
  std::string extract = "sat-learn-dep";
  std::string templ = "cnf";
  std::string w_file;
  std::string stats_file;
  std::string output;
  unsigned threads = 1;
  uint64_t seed = 0;
  int64_t timeout_ms = -1;
  double min_ratio = 10.0;
  bool verify = false;
  // gen
  std::string family;
  int k = 0;
  bool unreal = false;
};

class Stats {
public:
  void set(const std::string &key, const std::string &value) { kv_[key] = value; }
  void set(const std::string &key, int64_t value) { kv_[key] = std::to_string(value); }
  void write(const std::string &path) const {
    if (path.empty())
      return;
    std::ofstream out(path);
    if (!out)
      throw std::runtime_error("cannot write " + path);
    for (const auto &[k, v] : kv_)
      out << k << "=" << v << "\n";
  }

private:
  std::map<std::string, std::string> kv_;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << text;
}

int exit_code(Realizability r) {
  switch (r) {
  case Realizability::Realizable:
    return kRealizable;
  case Realizability::Unrealizable:
    return kUnrealizable;
  default:
    return kError;
  }
}

WinningOutcome solve(const SafetySpec &spec, const Options &o, const Budget &budget) {
  if (o.backend == "portfolio") {
    PortfolioConfig pc;
    pc.threads = o.threads;
    pc.seed = o.seed;
    pc.budget = &budget;
    pc.template_kind = o.templ == "aig" ? TemplateKind::Aig : TemplateKind::Cnf;
    return run_portfolio_win(spec, pc).outcome;
  }
  if (o.backend == "templ-sat" || o.backend == "templ-qbf") {
    TemplConfig tc;
    tc.backend = o.backend == "templ-qbf" ? WinBackend::Qbf : WinBackend::Sat1;
    tc.seed = o.seed;
    tc.budget = &budget;
    return templ_schedule(spec, o.templ == "aig" ? TemplateKind::Aig : TemplateKind::Cnf, tc);
  }
  WinConfig wc;
  wc.seed = o.seed;
  wc.budget = &budget;
  wc.backend = o.backend == "qbf" ? WinBackend::Qbf : WinBackend::Sat1;
  wc.opt_rg = o.backend == "sat1-rg" || o.backend == "sat1-rge";
  wc.expand_gen = o.backend == "sat1-rge";
  try {
    WinningOutcome out = solve_win(spec, wc);
    out.origin = o.backend;
    return out;
  } catch (const BudgetExceeded &) {
  } catch (const Cancelled &) {
  }
  WinningOutcome unknown;
  unknown.origin = o.backend;
  return unknown;
}

void record(Stats &st, const WinningOutcome &w) {
  st.set("verdict", to_string(w.verdict));
  st.set("refinements", static_cast<int64_t>(w.stats.refinements));
  st.set("origin", w.origin);
  st.set("area_kind", to_string(w.kind));
  st.set("w_clauses", static_cast<int64_t>(w.w.size()));
}

void finish_stats(Stats &st, const Budget &clock) {
  st.set("sat_calls", static_cast<int64_t>(Counters::global().sat_calls.load()));
  st.set("qbf_calls", static_cast<int64_t>(Counters::global().qbf_calls.load()));
  st.set("time_ms", clock.elapsed_ms());
}

int cmd_realizability(const Options &o) {
  Budget budget(o.timeout_ms);
  Stats st;
  st.set("gates", 0);
  SafetySpec spec = parse_aag(read_file(o.input));
  WinningOutcome w = solve(spec, o, budget);
  record(st, w);
  int code = exit_code(w.verdict);
  if (w.verdict == Realizability::Realizable) {
    if (o.verify && w.kind != AreaKind::RealizabilityOnly) {
      VerifyReport r = check_winning_area(spec, w.w);
      if (!r.ok()) {
        std::cerr << r.to_text();
        code = kError;
      }
    }
    if (!o.output.empty())
      emit(o.output, export_w(spec, w.w));
  }
  std::cout << to_string(w.verdict) << "\n";
  finish_stats(st, budget);
  st.write(o.stats_file);
  return code;
}

int cmd_synth(const Options &o) {
  Budget budget(o.timeout_ms);
  Stats st;
  st.set("gates", 0);
  SafetySpec spec = parse_aag(read_file(o.input));
  WinningOutcome w;
  if (!o.w_file.empty()) {
    w.w = import_w(spec, read_file(o.w_file));
    w.verdict = Realizability::Realizable;
    w.kind = AreaKind::WinningArea;
    w.origin = "file";
  } else {
    w = solve(spec, o, budget);
  }
  record(st, w);
  if (w.verdict != Realizability::Realizable) {
    std::cout << to_string(w.verdict) << "\n";
    finish_stats(st, budget);
    st.write(o.stats_file);
    return exit_code(w.verdict);
  }

  int64_t before = budget.elapsed_ms();
  ExtractResult ex;
  try {
    if (o.extract == "portfolio") {
      PortfolioConfig pc;
      pc.threads = o.threads;
      pc.seed = o.seed;
      pc.budget = &budget;
      ex = run_portfolio_extract(spec, w.w, pc).best;
    } else {
      ExtractConfig ec;
      ec.seed = o.seed;
      ec.budget = &budget;
      ec.dep_opt = o.extract != "sat-learn";
      ec.minimize = o.extract == "sat-learn-dep-min";
      ex = o.extract == "qbf-learn" ? extract_qbf_learn(spec, w.w, ec) : extract_sat_learn(spec, w.w, ec);
    }
    // With a time limit, minimize when the time left exceeds min_ratio
    // times what extraction took.
    int64_t used = budget.elapsed_ms() - before;
    if (o.timeout_ms >= 0 && o.extract != "sat-learn-dep-min" &&
        static_cast<double>(o.timeout_ms - budget.elapsed_ms()) > o.min_ratio * static_cast<double>(used)) {
      ex.solutions = minimize_solutions(spec, w.w, ex.solutions, o.seed, &budget);
      ex.circuit = dump_circuit(spec, ex.solutions);
      ex.stats.gates = ex.circuit.gate_count();
      st.set("minimized", 1);
    }
  } catch (const BudgetExceeded &) {
    std::cerr << "extraction ran out of time\n";
    st.set("verdict", "unknown");
    finish_stats(st, budget);
    st.write(o.stats_file);
    return kError;
  }
  st.set("gates", static_cast<int64_t>(ex.stats.gates));
  st.set("extract", ex.origin);
  st.set("interpol_iterations", static_cast<int64_t>(ex.stats.interpol_iterations));

  std::string aag = write_aag(spec, ex.circuit);
  int code = kRealizable;
  if (o.verify) {
    VerifyReport r = verify_controller(spec, ex.circuit, w.w, 10000, o.seed + 1);
    // The written file is model-checked on its own as well.
    SafetySpec closed = parse_aag(aag);
    WinningOutcome mc = sat_win1(closed);
    if (!r.ok() || !closed.c.empty() || mc.verdict != Realizability::Realizable) {
      std::cerr << r.to_text() << "closed loop: " << to_string(mc.verdict) << "\n";
      code = kError;
    }
    st.set("verified", code == kRealizable ? 1 : 0);
  }
  emit(o.output, aag);
  finish_stats(st, budget);
  st.write(o.stats_file);
  return code;
}

int cmd_verify(const Options &o) {
  Budget budget(o.timeout_ms);
  Stats st;
  st.set("gates", 0);
  SafetySpec spec = parse_aag(read_file(o.input));
  WinConfig wc;
  wc.budget = &budget;
  wc.seed = o.seed;
  WinningOutcome w;
  try {
    w = sat_win1(spec, wc);
  } catch (const BudgetExceeded &) {
  }
  record(st, w);
  if (!spec.c.empty())
    std::cerr << "note: " << spec.c.size() << " controllable inputs remain; checked as a game\n";
  std::cout << (w.verdict == Realizability::Realizable     ? "safe"
                : w.verdict == Realizability::Unrealizable ? "unsafe"
                                                           : "unknown")
            << "\n";
  finish_stats(st, budget);
  st.write(o.stats_file);
  return exit_code(w.verdict);
}

int cmd_gen(const Options &o) {
  BenchParams p{parse_family(o.family), o.k, o.unreal};
  emit(o.output, gen_benchmark(p));
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Synthesis of safety controllers from AIGER specifications"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App *sub) {
    sub->add_option("input", o.input, "AIGER (.aag) file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--timeout", o.timeout_ms, "Time limit in milliseconds");
    sub->add_option("--stats", o.stats_file, "Write key=value statistics to FILE");
  };
  auto solving = [&](CLI::App *sub) {
    sub->add_option("--backend", o.backend, "Winning-region engine")
        ->check(CLI::IsMember({"sat1", "sat1-rg", "sat1-rge", "qbf", "templ-sat", "templ-qbf", "portfolio"}));
    sub->add_option("--template", o.templ, "Template shape for templ-*")->check(CLI::IsMember({"cnf", "aig"}));
    sub->add_option("--threads", o.threads, "Portfolio threads")->check(CLI::Range(1u, 64u));
    sub->add_flag("--verify", o.verify, "Re-check the result before reporting it");
    sub->add_option("-o", o.output, "Output file");
  };

  CLI::App *synth = app.add_subcommand("synth", "Compute a controller circuit");
  common(synth);
  solving(synth);
  synth->add_option("--extract", o.extract, "Circuit extraction method")
      ->check(CLI::IsMember({"sat-learn", "sat-learn-dep", "sat-learn-dep-min", "qbf-learn", "portfolio"}));
  synth->add_option("--w", o.w_file, "Use a winning area from a DIMACS file instead of solving");
  synth->add_option("--min-ratio", o.min_ratio, "Minimize if the time left exceeds this multiple of extraction time");

  CLI::App *real = app.add_subcommand("realizability", "Decide realizability; -o writes W as DIMACS");
  common(real);
  solving(real);

  CLI::App *gen = app.add_subcommand("gen", "Generate a benchmark instance");
  gen->add_option("family", o.family, "cnt, add, mult, mv or bs")
      ->required()
      ->check(CLI::IsMember({"cnt", "add", "mult", "mv", "bs"}));
  gen->add_option("k", o.k, "Size parameter")->required();
  gen->add_flag("--unreal", o.unreal, "Unrealizable variant");
  gen->add_option("-o", o.output, "Output file");

  CLI::App *ver = app.add_subcommand("verify", "Model-check a circuit, e.g. a synthesized controller");
  common(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kError;
  }

  try {
    if (*synth)
      return cmd_synth(o);
    if (*real)
      return cmd_realizability(o);
    if (*gen)
      return cmd_gen(o);
    return cmd_verify(o);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
