#include "safesynth/template.hpp"

#include "safesynth/qbf.hpp"
#include "safesynth/sat.hpp"

namespace safesynth {

const char *to_string(TemplateKind k) { return k == TemplateKind::Cnf ? "cnf" : "aig"; }

size_t template_param_count(TemplateKind kind, size_t num_x, size_t n) {
  if (kind == TemplateKind::Cnf)
    return 2 * n * num_x + n;
  return n * (2 * num_x + n - 1) + 1;
}

CnfFormula aig_function_to_cnf(const Aig &aig, Lit root, std::span<const Var> vars) {
  if (root == Lit::True())
    return {};
  if (root == Lit::False())
    return CnfFormula::constant(false);
  // Learn clauses over vars until the CNF implies the function.
  SatSession on, off;
  AigEncoder enc_on(aig), enc_off(aig);
  assert_lit(on, enc_on, root);
  assert_lit(off, enc_off, ~root);
  CnfFormula out;
  while (off.solve_lits({})) {
    Cube d = off.model_cube(vars);
    Cube core = on.min_unsat_core(d);
    std::vector<Lit> lits;
    for (Lit l : core)
      lits.push_back(~l);
    Clause c(std::move(lits));
    out.add_clause(c);
    off.add_clause(c);
  }
  return compress_cnf(out, false);
}

namespace {

Lit select_lit(Aig &aig, Lit x, Var neg_param) { return aig.make_xor(x, pos(neg_param)); }

std::unordered_map<uint32_t, Lit> fixing(const Cube &k) {
  std::unordered_map<uint32_t, Lit> m;
  for (Lit l : k)
    m[l.var().id] = l.negated() ? Lit::False() : Lit::True();
  return m;
}

} // namespace

Template build_template(const SafetySpec &spec, TemplateKind kind, size_t n) {
  if (n == 0)
    throw std::invalid_argument("template size must be positive");
  if (trivially_unrealizable(spec))
    throw TriviallyUnrealizable();
  Template t;
  t.kind = kind;
  t.n = n;
  t.x = spec.x;
  t.aig = std::make_shared<Aig>();
  Aig &aig = *t.aig;
  const size_t nx = spec.x.size();
  auto group = [&](const char *tag, size_t i, size_t cols) {
    std::vector<Var> row;
    for (size_t j = 0; j < cols; ++j) {
      Var v = new_var(VarKind::TemplateParam, std::string(tag) + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
      row.push_back(v);
      t.params.push_back(v);
    }
    return row;
  };

  if (kind == TemplateKind::Cnf) {
    std::vector<Lit> clauses;
    for (size_t i = 0; i < n; ++i) {
      Var c = new_var(VarKind::TemplateParam, "kc_" + std::to_string(i + 1));
      t.kc.push_back(c);
      t.params.push_back(c);
      t.kv.push_back(group("kv", i, nx));
      t.kn.push_back(group("kn", i, nx));
      std::vector<Lit> lits{neg(c)};
      for (size_t j = 0; j < nx; ++j)
        lits.push_back(aig.make_and(pos(t.kv[i][j]), select_lit(aig, pos(spec.x[j]), t.kn[i][j])));
      clauses.push_back(aig.make_or(lits));
    }
    t.core = aig.make_and(clauses);
  } else {
    std::vector<Lit> gates;
    for (size_t i = 0; i < n; ++i) {
      t.kv.push_back(group("kv", i, nx));
      t.kn.push_back(group("kn", i, nx));
      t.ku.push_back(group("ku", i, i));
      t.km.push_back(group("km", i, i));
      std::vector<Lit> ins;
      for (size_t j = 0; j < nx; ++j)
        ins.push_back(aig.make_or(neg(t.kv[i][j]), select_lit(aig, pos(spec.x[j]), t.kn[i][j])));
      for (size_t j = 0; j < i; ++j)
        ins.push_back(aig.make_or(neg(t.ku[i][j]), select_lit(aig, gates[j], t.km[i][j])));
      gates.push_back(aig.make_and(ins));
    }
    t.kout = new_var(VarKind::TemplateParam, "kn_out");
    t.params.push_back(t.kout);
    t.core = aig.make_xor(gates.back(), pos(t.kout));
  }
  t.h = aig.make_or(aig.make_and(t.core, aig.make_cnf(spec.safe)), aig.make_cube(spec.init));
  return t;
}

CnfFormula Template::instantiate(const Cube &k) const {
  Aig folded;
  auto map = fixing(k);
  Lit r = folded.copy_from(*aig, h, map);
  return aig_function_to_cnf(folded, r, x);
}

CnfFormula Template::instantiate_core(const Cube &k) const {
  Aig folded;
  auto map = fixing(k);
  Lit r = folded.copy_from(*aig, core, map);
  return aig_function_to_cnf(folded, r, x);
}

namespace {

std::unordered_map<uint32_t, Lit> leaf_map(std::span<const Var> from, std::span<const Var> to) {
  std::unordered_map<uint32_t, Lit> m;
  for (size_t k = 0; k < from.size(); ++k)
    m[from[k].id] = pos(to[k]);
  return m;
}

void tick(uint64_t &it, const TemplConfig &cfg, const char *where) {
  ++it;
  if (cfg.max_iterations && it > cfg.max_iterations)
    throw BudgetExceeded("iteration budget exhausted");
  if (cfg.budget)
    cfg.budget->check(where);
}

} // namespace

std::optional<CnfFormula> templ_win_qbf(const SafetySpec &spec, const Template &t, const TemplConfig &cfg) {
  // exists k forall x, i exists c, x', aux: H(x) -> T and H(x')
  Aig aig;
  auto cur_map = std::unordered_map<uint32_t, Lit>{};
  Lit h = aig.copy_from(*t.aig, t.h, cur_map);
  auto next_map = leaf_map(spec.x, spec.xn);
  Lit hn = aig.copy_from(*t.aig, t.h, next_map);
  TwoQbfQuery q;
  q.a = t.params;
  q.b = spec.x;
  q.b.insert(q.b.end(), spec.i.begin(), spec.i.end());
  AigEncoder enc(aig);
  enc.define(h, q.matrix);
  enc.require(hn, q.matrix);
  q.matrix.append(spec.trans);
  if (auto c = Clause::try_make({~h, hn}))
    q.matrix.add_clause(*c);
  q.complete_inner();
  QbfConfig qc;
  qc.seed = cfg.seed;
  qc.budget = cfg.budget;
  if (cfg.max_iterations)
    qc.max_iterations = cfg.max_iterations;
  QbfResult r = qbf_solve(q, qc);
  if (!r.sat)
    return std::nullopt;
  return t.instantiate(r.model.restrict_to(t.params));
}

std::optional<CnfFormula> templ_win_sat(const SafetySpec &spec, const Template &t, const TemplConfig &cfg) {
  SatSession g(cfg.seed);
  Aig aig;
  AigEncoder enc(aig);
  uint64_t it = 0;
  for (;;) {
    tick(it, cfg, "templ_win_sat");
    if (!g.solve_lits({}))
      return std::nullopt;
    Cube k = g.model_cube(t.params);
    CnfFormula f = t.instantiate(k);
    auto cex = find_force_counterexample(spec, f, cfg.budget);
    if (!cex)
      return f;
    // H(x) -> T(x, i, tc, tx) and H(tx) with a fresh copy of c.
    std::unordered_map<uint32_t, Lit> at_x;
    for (Lit l : cex->x)
      at_x[l.var().id] = l.negated() ? Lit::False() : Lit::True();
    std::unordered_map<uint32_t, Lit> leaves = at_x;
    for (Lit l : cex->i)
      leaves[l.var().id] = l.negated() ? Lit::False() : Lit::True();
    for (Var c : spec.c)
      leaves[c.id] = pos(new_var(VarKind::Auxiliary, VarPool::global().name(c) + "#"));
    std::vector<Lit> next = instantiate_transition(spec, aig, std::move(leaves));
    std::unordered_map<uint32_t, Lit> at_next;
    for (size_t j = 0; j < spec.x.size(); ++j)
      at_next[spec.x[j].id] = next[j];
    Lit hx = aig.copy_from(*t.aig, t.h, at_x);
    Lit hn = aig.copy_from(*t.aig, t.h, at_next);
    assert_lit(g, enc, aig.make_or(~hx, hn));
  }
}

size_t templ_next_n(size_t n) { return n < 4 ? n + 1 : 2 * n; }

WinningOutcome templ_schedule(const SafetySpec &spec, TemplateKind kind, const TemplConfig &cfg) {
  Budget local;
  WinningOutcome out;
  out.origin = std::string("templ-") + to_string(kind) + (cfg.backend == WinBackend::Qbf ? "-qbf" : "-sat");
  out.kind = AreaKind::WinningArea;
  auto done = [&](Realizability r) {
    out.verdict = r;
    out.stats.time_ms = local.elapsed_ms();
    return out;
  };
  // A CNF with 2^|x| clauses expresses every state set; an AIG needs one
  // more gate.
  const size_t nx = spec.x.size();
  const size_t full = nx >= 63 ? SIZE_MAX : (size_t{1} << nx) + (kind == TemplateKind::Aig ? 1 : 0);
  try {
    for (size_t n = 1;; n = templ_next_n(n)) {
      Template t = build_template(spec, kind, n);
      auto w = cfg.backend == WinBackend::Qbf ? templ_win_qbf(spec, t, cfg) : templ_win_sat(spec, t, cfg);
      ++out.stats.refinements;
      if (w) {
        out.w = std::move(*w);
        return done(Realizability::Realizable);
      }
      if (n >= full)
        return done(Realizability::Unrealizable);
    }
  } catch (const TriviallyUnrealizable &) {
    return done(Realizability::Unrealizable);
  } catch (const BudgetExceeded &) {
    return done(Realizability::Unknown);
  }
}

} // namespace safesynth
