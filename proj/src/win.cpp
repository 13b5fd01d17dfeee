#include "safesynth/win.hpp"

#include "safesynth/qbf.hpp"
#include "safesynth/sat.hpp"

#include <memory>
#include <optional>
#include <sstream>

namespace safesynth {

const char *to_string(Realizability r) {
  switch (r) {
  case Realizability::Realizable:
    return "realizable";
  case Realizability::Unrealizable:
    return "unrealizable";
  case Realizability::Unknown:
    return "unknown";
  }
  return "?";
}

const char *to_string(AreaKind k) {
  switch (k) {
  case AreaKind::WinningRegion:
    return "winning-region";
  case AreaKind::WinningArea:
    return "winning-area";
  case AreaKind::RealizabilityOnly:
    return "realizability-only";
  }
  return "?";
}

bool trivially_unrealizable(const SafetySpec &spec) {
  SatSession s;
  s.assert_clauses(negate_pg(spec.safe).cnf);
  return s.solve(spec.init).sat();
}

namespace {

std::vector<Var> cat(std::span<const Var> a, std::span<const Var> b) {
  std::vector<Var> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Lit fresh_act(const char *name) { return pos(new_var(VarKind::Activation, name)); }

Clause negation(const Cube &c) {
  std::vector<Lit> lits;
  for (Lit l : c)
    lits.push_back(~l);
  return Clause(std::move(lits));
}

bool touches_init(const SafetySpec &spec, const Cube &c) { return c.conjoin(spec.init).has_value(); }

/// Previous-state copy x*, i*, c* with T(x*, i*, c*, x) whose link to x is
/// enforced only while `sel` holds.
struct PrevCopy {
  std::vector<Var> xs, is, cs;
  CnfFormula cnf;
  VarMap to_prev;

  PrevCopy(const SafetySpec &spec, Lit sel) {
    for (Var v : spec.x)
      xs.push_back(new_var(VarKind::State, VarPool::global().name(v) + "*"));
    for (Var v : spec.i)
      is.push_back(new_var(VarKind::Input, VarPool::global().name(v) + "*"));
    for (Var v : spec.c)
      cs.push_back(new_var(VarKind::Control, VarPool::global().name(v) + "*"));
    for (size_t k = 0; k < spec.x.size(); ++k)
      to_prev[spec.x[k]] = xs[k];
    std::unordered_map<uint32_t, Lit> leaves;
    for (size_t k = 0; k < xs.size(); ++k)
      leaves[spec.x[k].id] = pos(xs[k]);
    for (size_t k = 0; k < is.size(); ++k)
      leaves[spec.i[k].id] = pos(is[k]);
    for (size_t k = 0; k < cs.size(); ++k)
      leaves[spec.c[k].id] = pos(cs[k]);
    Aig aig;
    auto next = instantiate_transition(spec, aig, std::move(leaves));
    AigEncoder enc(aig);
    for (size_t k = 0; k < next.size(); ++k) {
      enc.define(next[k], cnf);
      if (auto c = Clause::try_make({~sel, neg(spec.x[k]), next[k]}))
        cnf.add_clause(*c);
      if (auto c = Clause::try_make({~sel, pos(spec.x[k]), ~next[k]}))
        cnf.add_clause(*c);
    }
  }

  Clause guarded(const Clause &c, Lit sel) const {
    std::vector<Lit> lits{~sel};
    for (Lit l : rename(c, to_prev))
      lits.push_back(l);
    return Clause(std::move(lits));
  }
};

/// CNF defining the literals of an expanded transition.
CnfFormula define_renamings(const Expansion &e) {
  CnfFormula out;
  AigEncoder enc(*e.aig);
  for (const auto &r : e.renamings)
    for (Lit l : r)
      enc.define(l, out);
  return out;
}

LitMap renaming_map(const SafetySpec &spec, const std::vector<Lit> &r) {
  LitMap m;
  for (size_t k = 0; k < spec.x.size(); ++k)
    m[spec.x[k]] = r[k];
  return m;
}

// ---------------------------------------------------------------------------
// SAT-based learning with lazy G

class SatWin1 {
public:
  SatWin1(const SafetySpec &spec, const WinConfig &cfg) : spec_(spec), cfg_(cfg) {}

  WinningOutcome run();

private:
  void setup_expansions();
  void build_solver_c();
  void build_solver_g();
  void add_f_clause(const Clause &c);
  void sync();
  Cube generalize(const Cube &x, const std::vector<Lit> &fixed);
  std::vector<Lit> controls_for(const Cube &i);
  void poll_shared();
  void tick();

  const SafetySpec &spec_;
  const WinConfig &cfg_;
  WinStats stats_;
  CnfFormula f_, g_;
  std::vector<Clause> u_;
  bool precise_ = true;
  bool shared_seen_ = false;
  std::unique_ptr<SatSession> sc_, sg_;
  size_t g_clauses_ = 0;
  uint64_t iterations_ = 0;

  std::optional<Expansion> exp_cex_, exp_gen_;
  CnfFormula exp_cex_cnf_, exp_gen_cnf_;
  Var gen_input_;
  std::vector<Var> gen_fixed_inputs_;

  // Reachability machinery.
  std::optional<PrevCopy> rg_, rc_;
  Lit rg_on_, rg_sel_init_, rg_sel_prev_;
  Lit rc_sel_init_, rc_sel_prev_;
};

void SatWin1::tick() {
  ++iterations_;
  if (cfg_.max_iterations && iterations_ > cfg_.max_iterations)
    throw BudgetExceeded("iteration budget exhausted");
  if (cfg_.budget)
    cfg_.budget->check("sat_win1");
}

void SatWin1::setup_expansions() {
  if (cfg_.expand_cex && !spec_.c.empty()) {
    try {
      exp_cex_ = expand_circuit(spec_, spec_.c, {}, cfg_.expand_max_gates);
      exp_cex_cnf_ = define_renamings(*exp_cex_);
      stats_.renamings = exp_cex_->renamings.size();
    } catch (const BudgetExceeded &) {
      exp_cex_.reset();
      stats_.expansion_fallback = true;
    }
  }
  if (cfg_.expand_gen && !spec_.i.empty()) {
    gen_input_ = choose_expansion_input(spec_);
    std::vector<Var> over{gen_input_};
    try {
      exp_gen_ = expand_circuit(spec_, over, spec_.c, cfg_.expand_max_gates);
      exp_gen_cnf_ = define_renamings(*exp_gen_);
    } catch (const BudgetExceeded &) {
      exp_gen_.reset();
      stats_.expansion_fallback = true;
    }
  }
  for (Var v : spec_.i)
    if (!exp_gen_ || v != gen_input_)
      gen_fixed_inputs_.push_back(v);
}

void SatWin1::build_solver_c() {
  sc_ = std::make_unique<SatSession>(cfg_.seed);
  sc_->assert_clauses(f_);
  for (const Clause &c : u_)
    sc_->add_clause(c);
  if (exp_cex_) {
    sc_->assert_clauses(exp_cex_cnf_);
    PgNegator negator;
    CnfFormula neg_copies;
    for (const auto &r : exp_cex_->renamings)
      negator.negate_into(substitute(g_, renaming_map(spec_, r)), neg_copies);
    sc_->assert_clauses(neg_copies);
  } else {
    sc_->assert_clauses(spec_.trans);
    sc_->assert_clauses(negate_pg(spec_.to_next(g_)).cnf);
  }
  if (rc_) {
    sc_->assert_clauses(rc_->cnf);
    sc_->add_clause({rc_sel_init_, rc_sel_prev_});
    for (Lit l : spec_.init)
      sc_->add_clause({~rc_sel_init_, l});
    std::vector<Lit> differs{~rc_sel_prev_};
    for (size_t k = 0; k < spec_.x.size(); ++k) {
      Lit e = pos(new_var(VarKind::Auxiliary, "diff"));
      sc_->add_clause({~e, pos(rc_->xs[k]), pos(spec_.x[k])});
      sc_->add_clause({~e, neg(rc_->xs[k]), neg(spec_.x[k])});
      differs.push_back(e);
    }
    sc_->add_clause(differs);
    for (const Clause &c : f_)
      sc_->add_clause(rc_->guarded(c, rc_sel_prev_));
  }
}

void SatWin1::build_solver_g() {
  sg_ = std::make_unique<SatSession>(cfg_.seed + 1);
  sg_->assert_clauses(f_);
  if (exp_gen_) {
    sg_->assert_clauses(exp_gen_cnf_);
    for (const auto &r : exp_gen_->renamings)
      sg_->assert_clauses(substitute(f_, renaming_map(spec_, r)));
  } else {
    sg_->assert_clauses(spec_.trans);
    sg_->assert_clauses(spec_.to_next(f_));
  }
  if (rg_) {
    sg_->assert_clauses(rg_->cnf);
    sg_->add_clause({~rg_on_, rg_sel_init_, rg_sel_prev_});
    for (Lit l : spec_.init)
      sg_->add_clause({~rg_sel_init_, l});
    for (const Clause &c : f_)
      sg_->add_clause(rg_->guarded(c, rg_sel_prev_));
  }
  g_clauses_ = f_.size();
  ++stats_.g_resets;
}

void SatWin1::add_f_clause(const Clause &c) {
  f_.add_clause_with_subsumption(c);
  sc_->add_clause(c);
  if (rc_)
    sc_->add_clause(rc_->guarded(c, rc_sel_prev_));
  sg_->add_clause(c);
  if (exp_gen_) {
    CnfFormula one{c};
    for (const auto &r : exp_gen_->renamings)
      sg_->assert_clauses(substitute(one, renaming_map(spec_, r)));
  } else {
    sg_->add_clause(rename(c, spec_.next_map()));
  }
  if (rg_)
    sg_->add_clause(rg_->guarded(c, rg_sel_prev_));
  ++g_clauses_;
}

void SatWin1::sync() {
  ++stats_.g_syncs;
  f_ = compress_cnf(f_, false, cfg_.seed);
  g_ = f_;
  u_.clear();
  precise_ = true;
  build_solver_c();
  if (g_clauses_ > f_.size() + cfg_.g_reset_excess)
    build_solver_g();
}

Cube SatWin1::generalize(const Cube &x, const std::vector<Lit> &fixed) {
  Cube core = sg_->min_unsat_core(x, fixed);
  if (!rg_)
    return core;
  // Try to drop further literals of states without a predecessor outside
  // the removed cube.
  std::vector<Lit> cur(core.begin(), core.end());
  std::vector<Lit> base = fixed;
  base.push_back(rg_on_);
  for (size_t k = 0; k < cur.size();) {
    std::vector<Lit> trial = cur;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
    Lit act = sg_->new_activation();
    std::vector<Lit> cl{~act, ~rg_sel_prev_};
    for (Lit l : trial)
      cl.push_back(~Lit::make(rg_->to_prev.at(l.var()), l.negated()));
    sg_->add_clause(cl);
    std::vector<Lit> as = base;
    as.push_back(act);
    as.insert(as.end(), trial.begin(), trial.end());
    bool sat = sg_->solve_lits(as);
    sg_->retire(act);
    if (!sat)
      cur = std::move(trial);
    else
      ++k;
  }
  return Cube(cur);
}

std::vector<Lit> SatWin1::controls_for(const Cube &i) {
  std::vector<Lit> out;
  if (!exp_gen_) {
    for (Var c : spec_.c)
      out.push_back(Lit::make(c, !sg_->value(c)));
    return out;
  }
  bool v = false;
  for (Lit l : i)
    if (l.var() == gen_input_)
      v = !l.negated();
  Lit want = Lit::make(gen_input_, !v);
  for (size_t r = 0; r < exp_gen_->renamings.size(); ++r)
    for (const Cube &a : exp_gen_->represents[r])
      if (a.contains(want)) {
        for (Var c : spec_.c)
          out.push_back(Lit::make(c, !sg_->value(exp_gen_->fresh[r].at(c))));
        return out;
      }
  throw std::logic_error("expansion does not cover the input value");
}

void SatWin1::poll_shared() {
  if (!cfg_.poll_clauses)
    return;
  for (const Clause &c : cfg_.poll_clauses()) {
    if (touches_init(spec_, c.negate()))
      continue;
    add_f_clause(c);
    precise_ = false;
    shared_seen_ = true;
    ++stats_.shared_in;
  }
}

WinningOutcome SatWin1::run() {
  Budget local;
  WinningOutcome out;
  out.origin = "sat1";
  auto finish = [&](Realizability r) {
    out.verdict = r;
    if (r == Realizability::Realizable)
      out.w = f_;
    out.kind = cfg_.opt_rc                  ? AreaKind::RealizabilityOnly
               : (cfg_.opt_rg || shared_seen_) ? AreaKind::WinningArea
                                               : AreaKind::WinningRegion;
    stats_.time_ms = local.elapsed_ms();
    out.stats = stats_;
    return out;
  };
  if (trivially_unrealizable(spec_))
    return finish(Realizability::Unrealizable);

  f_ = spec_.safe;
  g_ = f_;
  setup_expansions();
  if (cfg_.opt_rg) {
    rg_on_ = fresh_act("rg");
    rg_sel_init_ = fresh_act("rg_init");
    rg_sel_prev_ = fresh_act("rg_prev");
    rg_.emplace(spec_, rg_sel_prev_);
  }
  if (cfg_.opt_rc) {
    rc_sel_init_ = fresh_act("rc_init");
    rc_sel_prev_ = fresh_act("rc_prev");
    rc_.emplace(spec_, rc_sel_prev_);
  }
  build_solver_c();
  build_solver_g();
  stats_.g_resets = 0;

  for (;;) {
    tick();
    poll_shared();
    if (cfg_.on_iteration)
      cfg_.on_iteration(f_, g_, u_);
    if (!sc_->solve_lits({})) {
      if (precise_)
        return finish(Realizability::Realizable);
      sync();
      continue;
    }
    ++stats_.cex_candidates;
    Cube x = sc_->model_cube(spec_.x);
    Cube i = sc_->model_cube(spec_.i);
    std::vector<Lit> as(x.begin(), x.end());
    std::vector<Lit> fixed;
    for (Lit l : i)
      if (!exp_gen_ || l.var() != gen_input_)
        fixed.push_back(l);
    as.insert(as.end(), fixed.begin(), fixed.end());
    if (sg_->solve_lits(as)) {
      if (exp_cex_)
        throw std::logic_error("spurious candidate under full control expansion");
      std::vector<Lit> c = controls_for(i);
      Cube xi_cube = *x.conjoin(i);
      Cube u = sc_->min_unsat_core(xi_cube, c);
      Clause blk = negation(u);
      u_.push_back(blk);
      sc_->add_clause(blk);
      ++stats_.u_refinements;
      continue;
    }
    Cube xg = generalize(x, fixed);
    if (touches_init(spec_, xg))
      return finish(Realizability::Unrealizable);
    Clause blk = negation(xg);
    add_f_clause(blk);
    ++stats_.refinements;
    precise_ = false;
    if (cfg_.on_clause)
      cfg_.on_clause(blk);
    if (cfg_.on_refine)
      cfg_.on_refine(xg, x);
    if (!cfg_.lazy_g)
      sync();
  }
}

// ---------------------------------------------------------------------------
// QBF-based learning

class QbfWin {
public:
  QbfWin(const SafetySpec &spec, const WinConfig &cfg) : spec_(spec), cfg_(cfg) {
    qcfg_.seed = cfg.seed;
    qcfg_.budget = cfg.budget;
  }
  WinningOutcome run();

private:
  std::optional<Cube> counterexample();
  bool generalization_blocked(const Cube &xt, Lit dropped, const Cube &xg);
  void tick();

  const SafetySpec &spec_;
  const WinConfig &cfg_;
  QbfConfig qcfg_;
  WinStats stats_;
  CnfFormula f_;
  uint64_t iterations_ = 0;
};

void QbfWin::tick() {
  ++iterations_;
  if (cfg_.max_iterations && iterations_ > cfg_.max_iterations)
    throw BudgetExceeded("iteration budget exhausted");
  if (cfg_.budget)
    cfg_.budget->check("qbf_win");
}

std::optional<Cube> QbfWin::counterexample() {
  TwoQbfQuery q;
  q.a = cat(spec_.x, spec_.i);
  q.b = spec_.c;
  q.matrix = f_;
  q.matrix.append(spec_.trans);
  q.matrix.append(negate_pg(spec_.to_next(f_)).cnf);
  if (cfg_.opt_rc) {
    Lit sel_init = fresh_act("rc_init"), sel_prev = fresh_act("rc_prev");
    PrevCopy prev(spec_, sel_prev);
    q.matrix.append(prev.cnf);
    q.matrix.add_clause(Clause{sel_init, sel_prev});
    for (Lit l : spec_.init)
      q.matrix.add_clause(Clause{~sel_init, l});
    for (const Clause &c : f_)
      q.matrix.add_clause(prev.guarded(c, sel_prev));
    std::vector<Lit> differs{~sel_prev};
    for (size_t k = 0; k < spec_.x.size(); ++k) {
      Lit e = pos(new_var(VarKind::Auxiliary, "diff"));
      q.matrix.add_clause(Clause{~e, pos(prev.xs[k]), pos(spec_.x[k])});
      q.matrix.add_clause(Clause{~e, neg(prev.xs[k]), neg(spec_.x[k])});
      differs.push_back(e);
    }
    q.matrix.add_clause(Clause(differs));
    q.a.insert(q.a.end(), prev.xs.begin(), prev.xs.end());
    q.a.insert(q.a.end(), prev.is.begin(), prev.is.end());
    q.a.insert(q.a.end(), prev.cs.begin(), prev.cs.end());
  }
  q.complete_inner();
  QbfResult r = qbf_solve(q, qcfg_);
  if (!r.sat)
    return std::nullopt;
  return r.model.restrict_to(spec_.x);
}

bool QbfWin::generalization_blocked(const Cube &xt, Lit dropped, const Cube &xg) {
  TwoQbfQuery q;
  q.a = spec_.x;
  q.b = spec_.i;
  q.matrix = f_;
  for (Lit l : xt)
    q.matrix.add_unit(l);
  q.matrix.add_unit(~dropped);
  q.matrix.append(spec_.trans);
  q.matrix.append(spec_.to_next(f_));
  q.matrix.add_clause(rename(negation(xg), spec_.next_map()));
  if (cfg_.opt_rg) {
    Lit sel_init = fresh_act("rg_init"), sel_prev = fresh_act("rg_prev");
    PrevCopy prev(spec_, sel_prev);
    q.matrix.append(prev.cnf);
    q.matrix.add_clause(Clause{sel_init, sel_prev});
    for (Lit l : spec_.init)
      q.matrix.add_clause(Clause{~sel_init, l});
    for (const Clause &c : f_)
      q.matrix.add_clause(prev.guarded(c, sel_prev));
    q.matrix.add_clause(prev.guarded(negation(xt), sel_prev));
    q.a.insert(q.a.end(), prev.xs.begin(), prev.xs.end());
    q.a.insert(q.a.end(), prev.is.begin(), prev.is.end());
    q.a.insert(q.a.end(), prev.cs.begin(), prev.cs.end());
  }
  q.complete_inner();
  return !qbf_solve(q, qcfg_).sat;
}

WinningOutcome QbfWin::run() {
  Budget local;
  WinningOutcome out;
  out.origin = "qbf";
  bool shared_seen = false;
  auto finish = [&](Realizability r) {
    out.verdict = r;
    if (r == Realizability::Realizable)
      out.w = f_;
    out.kind = cfg_.opt_rc                 ? AreaKind::RealizabilityOnly
               : (cfg_.opt_rg || shared_seen) ? AreaKind::WinningArea
                                              : AreaKind::WinningRegion;
    stats_.time_ms = local.elapsed_ms();
    out.stats = stats_;
    return out;
  };
  if (trivially_unrealizable(spec_))
    return finish(Realizability::Unrealizable);
  f_ = spec_.safe;
  size_t compressed = std::max<size_t>(f_.size(), 1);
  for (;;) {
    tick();
    if (cfg_.poll_clauses)
      for (const Clause &c : cfg_.poll_clauses()) {
        if (touches_init(spec_, c.negate()))
          continue;
        f_.add_clause_with_subsumption(c);
        shared_seen = true;
        ++stats_.shared_in;
      }
    if (cfg_.on_iteration)
      cfg_.on_iteration(f_, f_, {});
    auto x = counterexample();
    if (!x)
      return finish(Realizability::Realizable);
    ++stats_.cex_candidates;
    Cube xg = *x;
    for (Lit l : *x) {
      Cube xt = xg.without(l);
      if (generalization_blocked(xt, l, xg))
        xg = xt;
    }
    if (touches_init(spec_, xg))
      return finish(Realizability::Unrealizable);
    Clause blk = negation(xg);
    f_.add_clause_with_subsumption(blk);
    ++stats_.refinements;
    if (cfg_.on_clause)
      cfg_.on_clause(blk);
    if (cfg_.on_refine)
      cfg_.on_refine(xg, *x);
    if (static_cast<double>(f_.size()) > cfg_.compress_factor * static_cast<double>(compressed)) {
      f_ = compress_cnf(f_, false, cfg_.seed);
      compressed = std::max<size_t>(f_.size(), 1);
    }
  }
}

} // namespace

std::optional<ForceCounterexample> find_force_counterexample(const SafetySpec &spec, const CnfFormula &f,
                                                             const Budget *budget) {
  SatSession sc, sg;
  sc.assert_clauses(f);
  sc.assert_clauses(spec.trans);
  sc.assert_clauses(negate_pg(spec.to_next(f)).cnf);
  sg.assert_clauses(f);
  sg.assert_clauses(spec.trans);
  sg.assert_clauses(spec.to_next(f));
  while (sc.solve_lits({})) {
    if (budget)
      budget->check("force counterexample");
    Cube x = sc.model_cube(spec.x), i = sc.model_cube(spec.i);
    Cube xi = *x.conjoin(i);
    if (!sg.solve(xi).sat())
      return ForceCounterexample{x, i};
    std::vector<Lit> c;
    for (Var v : spec.c)
      c.push_back(Lit::make(v, !sg.value(v)));
    sc.add_clause(negation(sc.min_unsat_core(xi, c)));
  }
  return std::nullopt;
}

WinningOutcome qbf_win(const SafetySpec &spec, const WinConfig &cfg) { return QbfWin(spec, cfg).run(); }

WinningOutcome sat_win1(const SafetySpec &spec, const WinConfig &cfg) { return SatWin1(spec, cfg).run(); }

WinningOutcome solve_win(const SafetySpec &spec, const WinConfig &cfg) {
  return cfg.backend == WinBackend::Qbf ? qbf_win(spec, cfg) : sat_win1(spec, cfg);
}

std::string export_w(const SafetySpec &spec, const CnfFormula &w) {
  std::unordered_map<Var, size_t> index;
  for (size_t k = 0; k < spec.x.size(); ++k)
    index[spec.x[k]] = k + 1;
  std::ostringstream os;
  os << "c winning area over the state variables\n";
  for (size_t k = 0; k < spec.x.size(); ++k)
    os << "c x " << k + 1 << " " << VarPool::global().name(spec.x[k]) << "\n";
  os << "p cnf " << spec.x.size() << " " << w.size() << "\n";
  for (const Clause &c : w) {
    for (Lit l : c) {
      auto it = index.find(l.var());
      if (it == index.end())
        throw std::invalid_argument("winning area mentions a non-state variable");
      os << (l.negated() ? "-" : "") << it->second << " ";
    }
    os << "0\n";
  }
  return os.str();
}

CnfFormula import_w(const SafetySpec &spec, const std::string &text) {
  std::istringstream is(text);
  std::string line;
  CnfFormula out;
  bool header = false;
  std::vector<Lit> cur;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok))
      continue;
    if (tok == "c") {
      std::string kind, name;
      size_t idx = 0;
      if (ls >> kind && kind == "x" && ls >> idx >> name) {
        if (idx == 0 || idx > spec.x.size() || VarPool::global().name(spec.x[idx - 1]) != name)
          throw std::invalid_argument("state variable " + std::to_string(idx) + " (" + name +
                                      ") does not match the specification");
      }
      continue;
    }
    if (tok == "p") {
      std::string fmt;
      size_t nv = 0;
      if (!(ls >> fmt >> nv) || fmt != "cnf" || nv != spec.x.size())
        throw std::invalid_argument("bad header in winning area file");
      header = true;
      continue;
    }
    if (!header)
      throw std::invalid_argument("clause before header in winning area file");
    ls.clear();
    ls.str(line);
    long v = 0;
    while (ls >> v) {
      if (v == 0) {
        out.add_clause(Clause(cur));
        cur.clear();
        continue;
      }
      size_t k = static_cast<size_t>(v < 0 ? -v : v);
      if (k > spec.x.size())
        throw std::invalid_argument("variable index out of range in winning area file");
      cur.push_back(Lit::make(spec.x[k - 1], v < 0));
    }
  }
  if (!cur.empty())
    throw std::invalid_argument("unterminated clause in winning area file");
  return out;
}

} // namespace safesynth
