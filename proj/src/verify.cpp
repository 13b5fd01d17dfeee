#include "safesynth/verify.hpp"

#include "safesynth/qbf.hpp"
#include "safesynth/sat.hpp"

#include <deque>
#include <random>
#include <sstream>

namespace safesynth {

namespace {

// Source input k is (control?, index into spec.i or spec.c).
std::vector<std::pair<bool, size_t>> input_slots(const SafetySpec &spec) {
  std::vector<std::pair<bool, size_t>> slots;
  size_t ki = 0, kc = 0;
  for (const auto &name : spec.source.input_names) {
    bool ctrl = name.rfind(kControllablePrefix, 0) == 0;
    slots.push_back({ctrl, ctrl ? kc++ : ki++});
  }
  return slots;
}

// Bit-parallel evaluation of the source circuit: 64 moves per word.
class SourceEvaluator {
public:
  explicit SourceEvaluator(const SafetySpec &spec) : spec_(spec), slots_(input_slots(spec)) {
    val_.assign(spec.source.max_var + 1, 0);
  }

  // Word inputs: per state bit, per input and per control.
  std::vector<uint64_t> step(const std::vector<uint64_t> &x, const std::vector<uint64_t> &i,
                             const std::vector<uint64_t> &c) {
    const AigCircuit &src = spec_.source;
    val_[0] = 0;
    for (size_t k = 0; k < src.inputs.size(); ++k)
      val_[src.inputs[k] >> 1] = slots_[k].first ? c[slots_[k].second] : i[slots_[k].second];
    for (size_t k = 0; k < src.latches.size(); ++k)
      val_[src.latches[k].lit >> 1] = x[k];
    for (const auto &g : src.ands)
      val_[g.lhs >> 1] = lit(g.rhs0) & lit(g.rhs1);
    std::vector<uint64_t> out;
    for (const auto &l : src.latches)
      out.push_back(lit(l.next));
    out.push_back(x.back() | lit(src.outputs[0]));
    return out;
  }

private:
  uint64_t lit(uint32_t l) const { return (l & 1u) ? ~val_[l >> 1] : val_[l >> 1]; }
  const SafetySpec &spec_;
  std::vector<std::pair<bool, size_t>> slots_;
  std::vector<uint64_t> val_;
};

std::function<bool(Var)> state_valuation(const SafetySpec &spec, uint32_t s) {
  return [&spec, s](Var v) {
    for (size_t k = 0; k < spec.x.size(); ++k)
      if (spec.x[k] == v)
        return static_cast<bool>((s >> k) & 1u);
    return false;
  };
}

bool state_in_cube(const SafetySpec &spec, const Cube &cube, uint32_t s) {
  auto val = state_valuation(spec, s);
  return cube.eval(val);
}

std::string cube_witness(SatSession &s, std::span<const Var> vars) {
  return to_string(s.model_cube(vars));
}

// Fresh copy of every non-state variable of f, with x mapped to xn.
CnfFormula next_copy(const SafetySpec &spec, const CnfFormula &f) {
  VarMap m = spec.next_map();
  for (Var v : f.vars())
    if (!m.count(v))
      m[v] = new_var(VarPool::global().kind(v), VarPool::global().name(v) + "'");
  return rename(f, m);
}

std::vector<Var> non_state_vars(const SafetySpec &spec, const CnfFormula &f) {
  std::unordered_set<Var> xs(spec.x.begin(), spec.x.end());
  std::vector<Var> out;
  for (Var v : f.vars())
    if (!xs.count(v))
      out.push_back(v);
  return out;
}

} // namespace

std::vector<bool> eval_source_step(const SafetySpec &spec, const std::vector<bool> &x,
                                   const std::vector<bool> &i, const std::vector<bool> &c) {
  auto word = [](const std::vector<bool> &v) {
    std::vector<uint64_t> w;
    for (bool b : v)
      w.push_back(b ? 1u : 0u);
    return w;
  };
  SourceEvaluator ev(spec);
  auto out = ev.step(word(x), word(i), word(c));
  std::vector<bool> r;
  for (uint64_t w : out)
    r.push_back(w & 1u);
  return r;
}

ExplicitGame build_explicit_game(const SafetySpec &spec, OracleLimits lim) {
  ExplicitGame g;
  g.nx = spec.x.size();
  g.ni = spec.i.size();
  g.nc = spec.c.size();
  if (g.nx > lim.max_state_bits || g.ni + g.nc > lim.max_move_bits)
    throw BudgetExceeded("explicit game exceeds the oracle size limits");
  size_t ns = g.num_states(), nm = g.num_moves();
  g.succ.assign(ns * nm, 0);
  g.unsafe.assign(ns, false);
  g.initial.assign(ns, false);
  SourceEvaluator ev(spec);
  size_t nin = g.ni + g.nc;
  for (uint32_t s = 0; s < ns; ++s) {
    auto val = state_valuation(spec, s);
    g.unsafe[s] = !spec.safe.eval(val);
    g.initial[s] = spec.init.eval(val);
    std::vector<uint64_t> xw(g.nx);
    for (size_t k = 0; k < g.nx; ++k)
      xw[k] = ((s >> k) & 1u) ? ~uint64_t{0} : 0;
    for (size_t base = 0; base < nm; base += 64) {
      std::vector<uint64_t> iw(g.ni, 0), cw(g.nc, 0);
      size_t lanes = std::min<size_t>(64, nm - base);
      for (size_t lane = 0; lane < lanes; ++lane) {
        size_t m = base + lane;
        for (size_t k = 0; k < nin; ++k)
          if ((m >> k) & 1u)
            (k < g.ni ? iw[k] : cw[k - g.ni]) |= uint64_t{1} << lane;
      }
      auto nxt = ev.step(xw, iw, cw);
      for (size_t lane = 0; lane < lanes; ++lane) {
        uint32_t t = 0;
        for (size_t k = 0; k < g.nx; ++k)
          t |= static_cast<uint32_t>((nxt[k] >> lane) & 1u) << k;
        g.succ[(size_t(s) << nin) | (base + lane)] = t;
      }
    }
  }
  return g;
}

StateSet force_s1(const ExplicitGame &g, const StateSet &f) {
  StateSet out(g.num_states(), false);
  size_t ni = size_t{1} << g.ni, nc = size_t{1} << g.nc;
  for (uint32_t s = 0; s < g.num_states(); ++s) {
    bool all = true;
    for (uint32_t i = 0; i < ni && all; ++i) {
      bool any = false;
      for (uint32_t c = 0; c < nc && !any; ++c)
        any = f[g.next(s, i, c)];
      all = any;
    }
    out[s] = all;
  }
  return out;
}

StateSet force_e1(const ExplicitGame &g, const StateSet &f) {
  StateSet out(g.num_states(), false);
  size_t ni = size_t{1} << g.ni, nc = size_t{1} << g.nc;
  for (uint32_t s = 0; s < g.num_states(); ++s) {
    bool any = false;
    for (uint32_t i = 0; i < ni && !any; ++i) {
      bool all = true;
      for (uint32_t c = 0; c < nc && all; ++c)
        all = f[g.next(s, i, c)];
      any = all;
    }
    out[s] = any;
  }
  return out;
}

StateSet reach1(const ExplicitGame &g, const StateSet &f) {
  StateSet out(g.num_states(), false);
  for (uint32_t s = 0; s < g.num_states(); ++s)
    for (size_t m = 0; m < g.num_moves() && !out[s]; ++m)
      out[s] = f[g.succ[(size_t(s) << (g.ni + g.nc)) | m]];
  return out;
}

StateSet explicit_attractor(const ExplicitGame &g) {
  StateSet f(g.num_states());
  for (size_t s = 0; s < f.size(); ++s)
    f[s] = !g.unsafe[s];
  for (;;) {
    StateSet pre = force_s1(g, f);
    bool changed = false;
    for (size_t s = 0; s < f.size(); ++s)
      if (f[s] && !pre[s]) {
        f[s] = false;
        changed = true;
      }
    if (!changed)
      return f;
  }
}

StateSet explicit_attractor(const SafetySpec &spec) {
  return explicit_attractor(build_explicit_game(spec));
}

bool explicit_realizable(const ExplicitGame &g, const StateSet &win) {
  for (size_t s = 0; s < g.num_states(); ++s)
    if (g.initial[s] && !win[s])
      return false;
  return true;
}

CnfFormula states_to_cnf(const SafetySpec &spec, const StateSet &set) {
  size_t nx = spec.x.size();
  CnfFormula out;
  StateSet covered(set.size(), false);
  for (uint32_t s = 0; s < set.size(); ++s) {
    if (set[s] || covered[s])
      continue;
    // Grow the excluded cube around s while it stays disjoint from the set.
    uint32_t mask = (nx >= 32) ? ~0u : ((1u << nx) - 1);
    for (size_t k = 0; k < nx; ++k) {
      uint32_t trial = mask & ~(1u << k);
      bool hits = false;
      for (uint32_t t = 0; t < set.size() && !hits; ++t)
        hits = set[t] && ((t ^ s) & trial) == 0;
      if (!hits)
        mask = trial;
    }
    std::vector<Lit> lits;
    for (size_t k = 0; k < nx; ++k)
      if ((mask >> k) & 1u)
        lits.push_back(Lit::make(spec.x[k], (s >> k) & 1u));
    out.add_clause(Clause(std::move(lits)));
    for (uint32_t t = 0; t < set.size(); ++t)
      if (((t ^ s) & mask) == 0)
        covered[t] = true;
  }
  return out;
}

StateSet cnf_to_states(const SafetySpec &spec, const CnfFormula &f) {
  size_t ns = size_t{1} << spec.x.size();
  StateSet out(ns, false);
  bool pure = non_state_vars(spec, f).empty();
  SatSession s;
  if (!pure)
    s.assert_clauses(f);
  for (uint32_t st = 0; st < ns; ++st) {
    if (pure) {
      out[st] = f.eval(state_valuation(spec, st));
    } else {
      out[st] = s.solve(minterm(spec.x, state_valuation(spec, st))).sat();
    }
  }
  return out;
}

bool implies(const CnfFormula &f, const CnfFormula &g) {
  SatSession s;
  s.assert_clauses(f);
  s.assert_clauses(negate_pg(g).cnf);
  return !s.solve().sat();
}

bool equivalent(const CnfFormula &f, const CnfFormula &g) { return implies(f, g) && implies(g, f); }

bool VerifyReport::ok() const {
  for (const auto &c : checks)
    if (!c.pass)
      return false;
  return true;
}

const CheckResult *VerifyReport::find(const std::string &name) const {
  for (const auto &c : checks)
    if (c.name == name)
      return &c;
  return nullptr;
}

std::string VerifyReport::to_text() const {
  std::ostringstream os;
  for (const auto &c : checks) {
    os << "check=" << c.name << " result=" << (c.pass ? "PASS" : "FAIL");
    if (!c.pass && !c.witness.empty())
      os << " witness=" << c.witness;
    os << "\n";
  }
  os << "sim_steps=" << sim_steps << "\n";
  os << "overall=" << (ok() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

VerifyReport check_winning_area(const SafetySpec &spec, const CnfFormula &f) {
  VerifyReport r;
  {
    SatSession s;
    s.assert_clauses(negate_pg(f).cnf);
    CheckResult c{"initial", true, {}};
    if (s.solve(spec.init).sat()) {
      c.pass = false;
      c.witness = cube_witness(s, spec.x);
    }
    r.checks.push_back(c);
  }
  {
    SatSession s;
    s.assert_clauses(f);
    s.assert_clauses(negate_pg(spec.safe).cnf);
    CheckResult c{"safe", true, {}};
    if (s.solve().sat()) {
      c.pass = false;
      c.witness = cube_witness(s, spec.x);
    }
    r.checks.push_back(c);
  }
  {
    TwoQbfQuery q;
    q.a = spec.x;
    q.a.insert(q.a.end(), spec.i.begin(), spec.i.end());
    for (Var v : non_state_vars(spec, f))
      q.a.push_back(v);
    q.b = spec.c;
    q.matrix = f;
    q.matrix.append(spec.trans);
    q.matrix.append(negate_pg(next_copy(spec, f)).cnf);
    q.complete_inner();
    QbfResult res = qbf_solve(q);
    CheckResult c{"inductive", !res.sat, {}};
    if (res.sat) {
      std::vector<Var> xi = spec.x;
      xi.insert(xi.end(), spec.i.begin(), spec.i.end());
      c.witness = to_string(res.model.restrict_to(xi));
    }
    r.checks.push_back(c);
  }
  return r;
}

VerifyReport verify_controller(const SafetySpec &spec, const ControllerCircuit &ctrl,
                               const CnfFormula &w, uint64_t sim_steps, uint64_t seed) {
  VerifyReport r;
  std::unordered_set<Var> allowed(spec.x.begin(), spec.x.end());
  allowed.insert(spec.i.begin(), spec.i.end());
  {
    CheckResult c{"support", true, {}};
    for (Var v : ctrl.support())
      if (!allowed.count(v)) {
        c.pass = false;
        c.witness = VarPool::global().name(v);
      }
    for (Var cv : spec.c) {
      bool found = false;
      for (const auto &o : ctrl.outputs)
        found = found || o.first == cv;
      if (!found) {
        c.pass = false;
        c.witness = "undefined " + VarPool::global().name(cv);
      }
    }
    r.checks.push_back(c);
    if (!c.pass)
      return r;
  }
  std::vector<Var> xi = spec.x;
  xi.insert(xi.end(), spec.i.begin(), spec.i.end());
  {
    SatSession s;
    s.assert_clauses(negate_pg(w).cnf);
    CheckResult c{"initial", true, {}};
    if (s.solve(spec.init).sat()) {
      c.pass = false;
      c.witness = cube_witness(s, spec.x);
    }
    r.checks.push_back(c);
  }
  {
    SatSession s;
    s.assert_clauses(w);
    s.assert_clauses(negate_pg(spec.safe).cnf);
    CheckResult c{"safe", true, {}};
    if (s.solve().sat()) {
      c.pass = false;
      c.witness = cube_witness(s, spec.x);
    }
    r.checks.push_back(c);
  }
  {
    // Closed-loop transition with the controls replaced by the controller.
    Aig closed;
    std::unordered_map<uint32_t, Lit> cmap;
    std::unordered_map<uint32_t, Lit> leaves;
    for (const auto &[cv, l] : ctrl.outputs)
      leaves[cv.id] = closed.copy_from(ctrl.aig, l, cmap);
    auto next = instantiate_transition(spec, closed, leaves);
    CnfFormula t;
    AigEncoder enc(closed);
    for (size_t k = 0; k < next.size(); ++k) {
      enc.define(next[k], t);
      if (auto cl = Clause::try_make({neg(spec.xn[k]), next[k]}))
        t.add_clause(*cl);
      if (auto cl = Clause::try_make({pos(spec.xn[k]), ~next[k]}))
        t.add_clause(*cl);
    }
    SatSession s;
    s.assert_clauses(w);
    s.assert_clauses(t);
    s.assert_clauses(negate_pg(next_copy(spec, w)).cnf);
    CheckResult c{"induction", true, {}};
    if (s.solve().sat()) {
      c.pass = false;
      c.witness = cube_witness(s, xi);
    }
    r.checks.push_back(c);
  }
  {
    CheckResult c{"simulation", true, {}};
    std::mt19937_64 rng(seed);
    std::vector<bool> x(spec.x.size(), false);
    for (Lit l : spec.init)
      for (size_t k = 0; k < spec.x.size(); ++k)
        if (spec.x[k] == l.var())
          x[k] = !l.negated();
    std::unordered_map<uint32_t, bool> val;
    auto leaf = [&](Var v) { return val.at(v.id); };
    for (uint64_t step = 0; step <= sim_steps; ++step) {
      for (size_t k = 0; k < x.size(); ++k)
        val[spec.x[k].id] = x[k];
      if (!spec.safe.eval(leaf)) {
        c.pass = false;
        c.witness = "step " + std::to_string(step);
        break;
      }
      if (step == sim_steps)
        break;
      std::vector<bool> in(spec.i.size()), cv(spec.c.size());
      for (size_t k = 0; k < in.size(); ++k) {
        in[k] = rng() & 1u;
        val[spec.i[k].id] = in[k];
      }
      for (size_t k = 0; k < cv.size(); ++k)
        cv[k] = ctrl.aig.eval(ctrl.output(spec.c[k]), leaf);
      x = eval_source_step(spec, x, in, cv);
      r.sim_steps = step + 1;
    }
    r.checks.push_back(c);
  }
  return r;
}

bool explicit_closed_loop_safe(const SafetySpec &spec, const ControllerCircuit &ctrl,
                               OracleLimits lim) {
  if (spec.x.size() > lim.max_state_bits || spec.i.size() > lim.max_move_bits)
    throw BudgetExceeded("closed loop exceeds the oracle size limits");
  size_t ns = size_t{1} << spec.x.size();
  std::vector<bool> seen(ns, false);
  std::deque<uint32_t> queue;
  for (uint32_t s = 0; s < ns; ++s)
    if (state_in_cube(spec, spec.init, s)) {
      seen[s] = true;
      queue.push_back(s);
    }
  std::unordered_map<uint32_t, bool> val;
  auto leaf = [&](Var v) {
    auto it = val.find(v.id);
    return it != val.end() && it->second;
  };
  while (!queue.empty()) {
    uint32_t s = queue.front();
    queue.pop_front();
    std::vector<bool> x(spec.x.size());
    for (size_t k = 0; k < x.size(); ++k) {
      x[k] = (s >> k) & 1u;
      val[spec.x[k].id] = x[k];
    }
    if (!spec.safe.eval(leaf))
      return false;
    for (uint32_t m = 0; m < (1u << spec.i.size()); ++m) {
      std::vector<bool> in(spec.i.size()), cv(spec.c.size());
      for (size_t k = 0; k < in.size(); ++k) {
        in[k] = (m >> k) & 1u;
        val[spec.i[k].id] = in[k];
      }
      for (size_t k = 0; k < cv.size(); ++k)
        cv[k] = ctrl.aig.eval(ctrl.output(spec.c[k]), leaf);
      auto nx = eval_source_step(spec, x, in, cv);
      uint32_t t = 0;
      for (size_t k = 0; k < nx.size(); ++k)
        t |= static_cast<uint32_t>(nx[k]) << k;
      if (!seen[t]) {
        seen[t] = true;
        queue.push_back(t);
      }
    }
  }
  return true;
}

} // namespace safesynth
