#include "safesynth/sat.hpp"

#include "cdcl.hpp"

#include <algorithm>

namespace safesynth {

SatSession::SatSession(uint64_t seed) : solver_(std::make_unique<Cdcl>(seed)) {}
SatSession::~SatSession() = default;
SatSession::SatSession(SatSession &&) noexcept = default;
SatSession &SatSession::operator=(SatSession &&) noexcept = default;

int SatSession::internal(Var v) {
  auto [it, inserted] = map_.try_emplace(v.id, 0);
  if (inserted) {
    it->second = solver_->new_var();
    back_.push_back(v);
  }
  return it->second;
}

int SatSession::internal_lit(Lit l) { return 2 * internal(l.var()) + (l.negated() ? 1 : 0); }

void SatSession::add_clause(const Clause &c) { add_clause(std::span<const Lit>(c.lits())); }

void SatSession::add_clause(std::span<const Lit> lits) {
  std::vector<int> out;
  out.reserve(lits.size());
  for (Lit l : lits) {
    if (l == Lit::True())
      return;
    if (l == Lit::False())
      continue;
    out.push_back(internal_lit(l));
  }
  ++added_clauses_;
  solver_->add_clause(std::move(out));
}

void SatSession::assert_clauses(const CnfFormula &f) {
  for (const Clause &c : f)
    add_clause(c);
}

void SatSession::assert_guarded(const CnfFormula &f, Lit act) {
  std::vector<Lit> buf;
  for (const Clause &c : f) {
    buf.assign(c.begin(), c.end());
    buf.push_back(~act);
    add_clause(std::span<const Lit>(buf));
  }
}

bool SatSession::solve_lits(std::span<const Lit> assumptions) {
  std::vector<int> as;
  as.reserve(assumptions.size());
  bool trivially_false = false;
  for (Lit l : assumptions) {
    if (l == Lit::True())
      continue;
    if (l == Lit::False()) {
      trivially_false = true;
      continue;
    }
    as.push_back(internal_lit(l));
  }
  ++calls_;
  Counters::global().sat_calls.fetch_add(1, std::memory_order_relaxed);
  if (trivially_false) {
    const_true_ = false;
    // Report the constant as the whole core; callers treat it as empty.
    solver_->solve({}, 0);
    return false;
  }
  auto r = solver_->solve(as, conflict_limit_);
  if (r == Cdcl::Result::Unknown)
    throw BudgetExceeded("SAT conflict limit exceeded");
  return r == Cdcl::Result::Sat;
}

SolveResult SatSession::solve(const Cube &assumptions, std::span<const Var> model_vars) {
  SolveResult res;
  if (solve_lits(std::span<const Lit>(assumptions.lits()))) {
    res.verdict = Verdict::Sat;
    res.model = model_cube(model_vars);
  } else {
    res.verdict = Verdict::Unsat;
    res.core = Cube(core_lits());
  }
  return res;
}

bool SatSession::value(Var v) const {
  auto it = map_.find(v.id);
  if (it == map_.end())
    return false;
  return solver_->model_value(it->second);
}

Cube SatSession::model_cube(std::span<const Var> vars) const {
  std::vector<Lit> lits;
  lits.reserve(vars.size());
  for (Var v : vars)
    lits.push_back(Lit::make(v, !value(v)));
  return Cube(std::move(lits));
}

std::vector<Lit> SatSession::core_lits() const {
  std::vector<Lit> out;
  for (int l : solver_->conflict()) {
    int nl = l ^ 1;
    out.push_back(Lit::make(back_[nl >> 1], nl & 1));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Lit> SatSession::min_unsat_core_lits(std::span<const Lit> lits,
                                                 std::span<const Lit> fixed) {
  std::vector<Lit> assume(fixed.begin(), fixed.end());
  size_t nfixed = assume.size();
  assume.insert(assume.end(), lits.begin(), lits.end());
  if (solve_lits(assume))
    throw CorePreconditionError("min_unsat_core: cube is consistent with the formula");

  auto shrink = [&](const std::vector<Lit> &cand) {
    std::vector<Lit> core = core_lits();
    std::vector<Lit> kept;
    for (Lit l : cand)
      if (std::binary_search(core.begin(), core.end(), l))
        kept.push_back(l);
    return kept;
  };
  std::vector<Lit> cur = shrink(std::vector<Lit>(lits.begin(), lits.end()));
  std::vector<Lit> order = cur;
  for (Lit l : order) {
    auto pos = std::find(cur.begin(), cur.end(), l);
    if (pos == cur.end())
      continue;
    std::vector<Lit> trial(cur.begin(), pos);
    trial.insert(trial.end(), pos + 1, cur.end());
    assume.resize(nfixed);
    assume.insert(assume.end(), trial.begin(), trial.end());
    if (!solve_lits(assume))
      cur = shrink(trial);
  }
  return cur;
}

Cube SatSession::min_unsat_core(const Cube &cube, std::span<const Lit> fixed) {
  return Cube(min_unsat_core_lits(std::span<const Lit>(cube.lits()), fixed));
}

Lit SatSession::new_activation() {
  Var v = new_var(VarKind::Activation);
  internal(v);
  return pos(v);
}

SatStats SatSession::stats() const {
  SatStats s;
  s.calls = calls_;
  s.conflicts = solver_->conflicts;
  s.decisions = solver_->decisions;
  s.propagations = solver_->propagations;
  return s;
}

size_t SatSession::num_vars() const { return back_.size(); }

} // namespace safesynth
