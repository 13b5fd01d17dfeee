#include "safesynth/extract.hpp"

#include "safesynth/qbf.hpp"
#include "safesynth/sat.hpp"
#include "safesynth/verify.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <unordered_set>

namespace safesynth {

namespace {

Clause negation(const Cube &c) {
  std::vector<Lit> lits;
  for (Lit l : c)
    lits.push_back(~l);
  return Clause(std::move(lits));
}

void tick(const Budget *b, const char *where) {
  if (b)
    b->check(where);
}

/// Solved controls and the transition gates they may reference.
class Cascade {
public:
  explicit Cascade(const SafetySpec &spec) : spec_(spec), controls_(spec.c.begin(), spec.c.end()) {}

  void set(Var c, const CnfFormula &f) {
    sol_[c] = f;
    root_[c] = defs_.make_cnf(f);
  }
  void unset(Var c) {
    sol_.erase(c);
    root_.erase(c);
  }
  bool solved(Var c) const { return root_.count(c) != 0; }
  bool is_control(Var v) const { return controls_.count(v) != 0; }
  const Aig &defs() const { return defs_; }
  Lit root(Var c) const { return root_.at(c); }

  /// True if v (control, gate or leaf) transitively depends on cj.
  bool depends(Var v, Var cj, std::unordered_map<uint32_t, bool> &memo) const {
    if (v == cj)
      return true;
    if (auto it = memo.find(v.id); it != memo.end())
      return it->second;
    memo[v.id] = false;
    bool r = false;
    if (spec_.circuit->is_gate(v)) {
      const auto &g = spec_.circuit->gate(v);
      r = (!g.a.is_const() && depends(g.a.var(), cj, memo)) || (!g.b.is_const() && depends(g.b.var(), cj, memo));
    } else if (solved(v)) {
      for (Var s : defs_.support(std::vector<Lit>{root(v)}))
        if (depends(s, cj, memo)) {
          r = true;
          break;
        }
    }
    memo[v.id] = r;
    return r;
  }

  /// Copies variable v into `work`: solved controls and gates not preset
  /// in `map` are rebuilt from their definitions.
  Lit resolve(Var v, Aig &work, std::unordered_map<uint32_t, Lit> &map) const {
    if (auto it = map.find(v.id); it != map.end())
      return it->second;
    Lit l;
    if (is_control(v)) {
      if (!solved(v))
        return pos(v);
      for (Var s : defs_.support(std::vector<Lit>{root(v)}))
        resolve(s, work, map);
      l = work.copy_from(defs_, root(v), map);
    } else if (spec_.circuit->is_gate(v)) {
      for (Var s : spec_.circuit->support(std::vector<Lit>{pos(v)}))
        if (is_control(s))
          resolve(s, work, map);
      l = work.copy_from(*spec_.circuit, pos(v), map);
    } else {
      return pos(v);
    }
    map[v.id] = l;
    return l;
  }

  Lit resolve(Lit l, Aig &work, std::unordered_map<uint32_t, Lit> &map) const {
    if (l.is_const())
      return l;
    return resolve(l.var(), work, map) ^ l.negated();
  }

private:
  const SafetySpec &spec_;
  std::unordered_set<Var> controls_;
  Aig defs_;
  std::unordered_map<Var, Lit> root_;
  std::unordered_map<Var, CnfFormula> sol_;
};

/// M(va, vb) = W(x) and T'(cj = va) and W(x'_a) and T'(cj = vb) and not W(x'_b),
/// plus definitions of the shared solved controls and gates.
struct MFormula {
  CnfFormula cnf;
  std::vector<Var> shared;
};

MFormula build_m(const SafetySpec &spec, const CnfFormula &w, const Cascade &cas, Var cj, bool dep_opt, Lit va,
                 Lit vb) {
  MFormula out;
  Aig work;
  std::unordered_map<uint32_t, bool> memo;
  std::unordered_map<uint32_t, Lit> base;
  out.shared = spec.x;
  out.shared.insert(out.shared.end(), spec.i.begin(), spec.i.end());
  std::vector<Lit> defs;
  for (Var c : spec.c) {
    if (c == cj)
      continue;
    if (!cas.solved(c)) {
      out.shared.push_back(c);
    } else if (dep_opt && !cas.depends(c, cj, memo)) {
      out.shared.push_back(c);
      base[c.id] = pos(c);
      std::unordered_map<uint32_t, Lit> keep;
      defs.push_back(work.make_xnor(pos(c), work.copy_from(cas.defs(), cas.root(c), keep)));
    }
  }
  if (dep_opt) {
    for (Var g : spec.trans_aux) {
      if (!spec.circuit->is_gate(g) || cas.depends(g, cj, memo))
        continue;
      const auto &gate = spec.circuit->gate(g);
      out.shared.push_back(g);
      base[g.id] = pos(g);
      defs.push_back(work.make_xnor(pos(g), work.make_and(gate.a, gate.b)));
    }
  }

  Aig waig;
  Lit wroot = waig.make_cnf(w);
  auto copy_side = [&](Lit val, bool good) {
    auto map = base;
    map[cj.id] = val;
    std::unordered_map<uint32_t, Lit> wmap;
    for (size_t k = 0; k < spec.x.size(); ++k)
      wmap[spec.x[k].id] = cas.resolve(spec.next_fn[k], work, map);
    Lit wn = work.copy_from(waig, wroot, wmap);
    return good ? wn : ~wn;
  };
  Lit good = copy_side(va, true);
  Lit bad = copy_side(vb, false);
  AigEncoder enc(work);
  out.cnf = w;
  for (Lit l : {good, bad}) {
    if (l == Lit::False())
      out.cnf.add_clause(Clause{});
    else if (l != Lit::True()) {
      enc.require(l, out.cnf);
      out.cnf.add_unit(l);
    }
  }
  for (Lit d : defs) {
    if (d == Lit::False())
      out.cnf.add_clause(Clause{});
    else if (d != Lit::True()) {
      enc.require(d, out.cnf);
      out.cnf.add_unit(d);
    }
  }
  return out;
}

Cascade cascade_from(const SafetySpec &spec, const ControlSolutions &solved) {
  Cascade cas(spec);
  for (const auto &[c, f] : solved)
    cas.set(c, f);
  return cas;
}

/// One session holding M with the two copies of cj toggled by assumptions.
class ToggledM {
public:
  ToggledM(const SafetySpec &spec, const CnfFormula &w, const Cascade &cas, Var cj, bool dep_opt, uint64_t seed)
      : s_(seed) {
    Var a = new_var(VarKind::Auxiliary, "cj_good"), b = new_var(VarKind::Auxiliary, "cj_bad");
    MFormula m = build_m(spec, w, cas, cj, dep_opt, pos(a), pos(b));
    shared_ = std::move(m.shared);
    s_.assert_clauses(m.cnf);
    m1_ = {pos(a), neg(b)};
    m0_ = {neg(a), pos(b)};
  }

  SatSession &session() { return s_; }
  const std::vector<Var> &shared() const { return shared_; }
  const std::vector<Lit> &m1() const { return m1_; }
  const std::vector<Lit> &m0() const { return m0_; }

  /// Learns F with M1 -> F -> not M0.
  CnfFormula interpolate(const Budget *budget, uint64_t &iterations) {
    Lit act = s_.new_activation();
    CnfFormula f;
    std::vector<Lit> check = m0_;
    check.push_back(~act);
    while (s_.solve_lits(check)) {
      tick(budget, "interpolation");
      ++iterations;
      Cube d = s_.model_cube(shared_);
      std::vector<Lit> as(d.begin(), d.end());
      as.insert(as.end(), m1_.begin(), m1_.end());
      if (s_.solve_lits(as))
        throw std::logic_error("M1 and M0 intersect: W is not a winning area");
      Clause c = negation(s_.min_unsat_core(d, m1_));
      f.add_clause(c);
      std::vector<Lit> guarded(c.begin(), c.end());
      guarded.push_back(act);
      s_.add_clause(guarded);
    }
    s_.retire(act);
    return f;
  }

  /// M1 -> F and F -> not M0, by two unsat checks.
  void check_interpolant(const CnfFormula &f) {
    Lit g = s_.new_activation();
    CnfFormula neg;
    PgNegator negator;
    negator.negate_into(f, neg, g);
    s_.assert_clauses(neg);
    std::vector<Lit> as = m1_;
    as.push_back(g);
    if (s_.solve_lits(as))
      throw std::logic_error("solution does not cover M1");
    s_.retire(g);
    Lit h = s_.new_activation();
    s_.assert_guarded(f, h);
    as = m0_;
    as.push_back(h);
    if (s_.solve_lits(as))
      throw std::logic_error("solution intersects M0");
    s_.retire(h);
  }

  /// Drops literals while M1 -> F, then clauses (longest first) while
  /// F -> not M0.
  CnfFormula minimize(const CnfFormula &f) {
    std::vector<Clause> cls;
    for (const Clause &c : f) {
      Cube neg = c.negate();
      cls.push_back(negation(s_.min_unsat_core(neg, m1_)));
    }
    std::vector<size_t> idx(cls.size());
    for (size_t k = 0; k < idx.size(); ++k)
      idx[k] = k;
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return cls[a].size() > cls[b].size(); });
    std::vector<Lit> acts(cls.size());
    for (size_t k = 0; k < cls.size(); ++k) {
      acts[k] = s_.new_activation();
      std::vector<Lit> g(cls[k].begin(), cls[k].end());
      g.push_back(~acts[k]);
      s_.add_clause(g);
    }
    std::vector<bool> keep(cls.size(), true);
    for (size_t k : idx) {
      std::vector<Lit> as = m0_;
      for (size_t o = 0; o < cls.size(); ++o)
        if (keep[o] && o != k)
          as.push_back(acts[o]);
      if (!s_.solve_lits(as))
        keep[k] = false;
    }
    for (Lit a : acts)
      s_.retire(a);
    CnfFormula out;
    for (size_t k = 0; k < cls.size(); ++k)
      if (keep[k])
        out.add_clause(cls[k]);
    return out;
  }

private:
  SatSession s_;
  std::vector<Var> shared_;
  std::vector<Lit> m1_, m0_;
};

void precheck(const SafetySpec &spec, const CnfFormula &w, const ExtractConfig &cfg) {
  if (!cfg.check_w)
    return;
  VerifyReport r = check_winning_area(spec, w);
  if (!r.ok())
    throw CertificateError("not a winning area:\n" + r.to_text());
}

std::vector<Var> processing_order(const SafetySpec &spec, const ExtractConfig &cfg, bool descending) {
  if (!cfg.order.empty()) {
    std::vector<Var> a = cfg.order, b = spec.c;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
      throw std::invalid_argument("order must list every control exactly once");
    return cfg.order;
  }
  std::vector<Var> o = spec.c;
  if (descending)
    std::reverse(o.begin(), o.end());
  return o;
}

size_t literal_total(const ControlSolutions &s) {
  size_t n = 0;
  for (const auto &p : s)
    n += p.second.literal_count();
  return n;
}

} // namespace

InterpolationPair build_m1_m0(const SafetySpec &spec, const CnfFormula &w, Var control,
                              const ControlSolutions &solved, bool dep_opt) {
  Cascade cas = cascade_from(spec, solved);
  MFormula m1 = build_m(spec, w, cas, control, dep_opt, Lit::True(), Lit::False());
  MFormula m0 = build_m(spec, w, cas, control, dep_opt, Lit::False(), Lit::True());
  return {std::move(m1.cnf), std::move(m0.cnf), std::move(m1.shared)};
}

CnfFormula cnf_interpol(const CnfFormula &m1, const CnfFormula &m0, std::span<const Var> shared,
                        const Budget *budget) {
  SatSession on, off;
  on.assert_clauses(m1);
  off.assert_clauses(m0);
  CnfFormula f;
  while (off.solve_lits({})) {
    tick(budget, "cnf_interpol");
    Cube d = off.model_cube(shared);
    if (on.solve(d).sat())
      throw std::logic_error("cnf_interpol: M1 and M0 intersect");
    Clause c = negation(on.min_unsat_core(d));
    f.add_clause(c);
    off.add_clause(c);
  }
  return f;
}

ExtractResult extract_sat_learn(const SafetySpec &spec, const CnfFormula &w, const ExtractConfig &cfg) {
  Budget local;
  precheck(spec, w, cfg);
  ExtractResult out;
  out.origin = std::string("sat-learn") + (cfg.dep_opt ? "-dep" : "") + (cfg.minimize ? "-min" : "");
  Cascade cas(spec);
  for (Var cj : processing_order(spec, cfg, true)) {
    tick(cfg.budget, "extract_sat_learn");
    ToggledM m(spec, w, cas, cj, cfg.dep_opt, cfg.seed);
    CnfFormula f = compress_cnf(m.interpolate(cfg.budget, out.stats.interpol_iterations), false, cfg.seed);
    m.check_interpolant(f);
    cas.set(cj, f);
    out.solutions.push_back({cj, f});
  }
  out.stats.literals_before_min = out.stats.literals_after_min = literal_total(out.solutions);
  if (cfg.minimize) {
    out.solutions = minimize_solutions(spec, w, out.solutions, cfg.seed, cfg.budget);
    out.stats.literals_after_min = literal_total(out.solutions);
  }
  out.circuit = dump_circuit(spec, out.solutions);
  out.stats.gates = out.circuit.gate_count();
  out.stats.time_ms = local.elapsed_ms();
  return out;
}

ControlSolutions minimize_solutions(const SafetySpec &spec, const CnfFormula &w, const ControlSolutions &solutions,
                                    uint64_t seed, const Budget *budget) {
  ControlSolutions out = solutions;
  Cascade cas = cascade_from(spec, out);
  for (auto &[cj, f] : out) {
    tick(budget, "minimize");
    cas.unset(cj);
    ToggledM m(spec, w, cas, cj, true, seed);
    CnfFormula g = m.minimize(f);
    if (g.literal_count() > f.literal_count())
      throw std::logic_error("minimization increased the literal count");
    m.check_interpolant(g);
    f = std::move(g);
    cas.set(cj, f);
  }
  return out;
}

ExtractResult extract_qbf_learn(const SafetySpec &spec, const CnfFormula &w, const ExtractConfig &cfg) {
  Budget local;
  precheck(spec, w, cfg);
  ExtractResult out;
  out.origin = "qbf-learn";
  QbfConfig qc;
  qc.seed = cfg.seed;
  qc.budget = cfg.budget;
  std::vector<Var> order = processing_order(spec, cfg, false);
  CnfFormula w_next_neg = negate_pg(spec.to_next(w)).cnf;
  CnfFormula solved_defs;
  std::unordered_set<Var> pending(order.begin(), order.end());
  for (Var cj : order) {
    pending.erase(cj);
    std::vector<Var> ab = spec.x;
    ab.insert(ab.end(), spec.i.begin(), spec.i.end());
    std::vector<Var> later;
    for (Var c : order)
      if (pending.count(c))
        later.push_back(c);
    // forall later controls, cj = val leaves W
    auto query = [&](bool val, const CnfFormula &extra) {
      TwoQbfQuery q;
      q.a = ab;
      q.b = later;
      q.matrix = extra;
      q.matrix.append(w);
      q.matrix.append(spec.trans);
      q.matrix.append(w_next_neg);
      q.matrix.append(solved_defs);
      q.matrix.add_unit(Lit::make(cj, !val));
      q.complete_inner();
      return qbf_solve(q, qc);
    };
    CnfFormula f;
    for (;;) {
      tick(cfg.budget, "extract_qbf_learn");
      QbfResult r = query(true, f);
      if (!r.sat)
        break;
      ++out.stats.interpol_iterations;
      Cube d = r.model.restrict_to(ab);
      Cube dg = d;
      for (Lit l : d) {
        Cube dt = dg.without(l);
        CnfFormula units;
        for (Lit u : dt)
          units.add_unit(u);
        if (!query(false, units).sat)
          dg = dt;
      }
      f.add_clause(negation(dg));
    }
    f = compress_cnf(f, false, cfg.seed);
    out.solutions.push_back({cj, f});
    Aig a;
    Lit root = a.make_cnf(f);
    AigEncoder enc(a);
    enc.define(root, solved_defs);
    for (auto cl : {Clause::try_make({neg(cj), root}), Clause::try_make({pos(cj), ~root})})
      if (cl)
        solved_defs.add_clause(*cl);
  }
  out.stats.literals_before_min = out.stats.literals_after_min = literal_total(out.solutions);
  out.circuit = dump_circuit(spec, out.solutions);
  out.stats.gates = out.circuit.gate_count();
  out.stats.time_ms = local.elapsed_ms();
  return out;
}

ControllerCircuit dump_circuit(const SafetySpec &spec, const ControlSolutions &solutions) {
  ControllerCircuit out;
  Aig defs;
  std::unordered_map<Var, Lit> root;
  for (const auto &[c, f] : solutions)
    root[c] = defs.make_cnf(f);
  std::unordered_set<Var> controls(spec.c.begin(), spec.c.end());
  std::unordered_map<uint32_t, Lit> map;
  std::unordered_set<uint32_t> active;
  std::function<Lit(Var)> resolve = [&](Var v) -> Lit {
    if (auto it = map.find(v.id); it != map.end())
      return it->second;
    bool is_control = controls.count(v) != 0;
    bool is_gate = spec.circuit->is_gate(v);
    if (!is_control && !is_gate)
      return pos(v);
    if (!active.insert(v.id).second)
      throw std::logic_error("cyclic control definitions");
    Lit l;
    if (is_control) {
      auto it = root.find(v);
      if (it == root.end())
        throw std::invalid_argument("no solution for control " + VarPool::global().name(v));
      for (Var s : defs.support(std::vector<Lit>{it->second}))
        resolve(s);
      l = out.aig.copy_from(defs, it->second, map);
    } else {
      for (Var s : spec.circuit->support(std::vector<Lit>{pos(v)}))
        if (controls.count(s))
          resolve(s);
      l = out.aig.copy_from(*spec.circuit, pos(v), map);
    }
    active.erase(v.id);
    map[v.id] = l;
    return l;
  };
  for (Var c : spec.c)
    out.outputs.push_back({c, resolve(c)});
  return out;
}

} // namespace safesynth
