#include "safesynth/qbf.hpp"

#include "safesynth/sat.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_set>

namespace safesynth {

void TwoQbfQuery::complete_inner() {
  std::unordered_set<Var> listed(a.begin(), a.end());
  listed.insert(b.begin(), b.end());
  listed.insert(c.begin(), c.end());
  for (Var v : matrix.vars())
    if (!listed.count(v))
      c.push_back(v);
}

void TwoQbfQuery::validate() const {
  std::unordered_set<Var> seen;
  for (const auto *block : {&a, &b, &c})
    for (Var v : *block)
      if (!seen.insert(v).second)
        throw std::invalid_argument("2QBF blocks overlap");
  for (Var v : matrix.vars())
    if (!seen.count(v))
      throw std::invalid_argument("2QBF matrix variable not bound by a block");
}

namespace {

/// Assignment lookup for the variables of one block.
struct Valuation {
  std::unordered_map<Var, bool> val;
  explicit Valuation(const Cube &c) {
    for (Lit l : c)
      val[l.var()] = !l.negated();
  }
  // 1 true, 0 false, -1 unassigned
  int lit(Lit l) const {
    auto it = val.find(l.var());
    if (it == val.end())
      return -1;
    return it->second != l.negated() ? 1 : 0;
  }
};

/// Matrix with B fixed to `b` and C renamed to fresh copies.
CnfFormula instantiate(const TwoQbfQuery &q, const Valuation &b,
                       const std::unordered_set<Var> &cset) {
  std::unordered_map<Var, Var> fresh;
  CnfFormula out;
  std::vector<Lit> buf;
  for (const Clause &cl : q.matrix) {
    buf.clear();
    bool satisfied = false;
    for (Lit l : cl) {
      int v = b.lit(l);
      if (v == 1) {
        satisfied = true;
        break;
      }
      if (v == 0)
        continue;
      if (cset.count(l.var())) {
        auto [it, inserted] = fresh.try_emplace(l.var());
        if (inserted)
          it->second = new_var(VarKind::Auxiliary);
        buf.push_back(Lit::make(it->second, l.negated()));
      } else {
        buf.push_back(l);
      }
    }
    if (satisfied)
      continue;
    out.add_clause(Clause(buf));
  }
  return out;
}

} // namespace

QbfResult qbf_solve(const TwoQbfQuery &q, const QbfConfig &cfg) {
  q.validate();
  Counters::global().qbf_calls.fetch_add(1, std::memory_order_relaxed);
  QbfResult res;

  if (q.b.empty()) {
    SatSession s(cfg.seed);
    s.assert_clauses(q.matrix);
    auto r = s.solve({}, q.a);
    res.sat = r.sat();
    res.model = r.model;
    res.iterations = 1;
    return res;
  }

  std::unordered_set<Var> aset(q.a.begin(), q.a.end());
  std::unordered_set<Var> cset(q.c.begin(), q.c.end());
  SatSession abstraction(cfg.seed);
  SatSession verifier(cfg.seed + 1);
  verifier.assert_clauses(q.matrix);
  std::vector<Lit> assume;

  auto tick = [&] {
    if (++res.iterations > cfg.max_iterations)
      throw QbfResourceError("2QBF iteration budget exceeded");
    if (cfg.budget && (res.iterations & 15) == 0)
      cfg.budget->check("2QBF");
  };

  for (;;) {
    tick();
    auto cand = abstraction.solve({}, q.a);
    if (!cand.sat()) {
      res.sat = false;
      return res;
    }
    const Cube &a = cand.model;
    Valuation aval(a);

    // Search for a universal assignment that no C can answer.
    SatSession bsearch(cfg.seed + 2);
    std::map<std::vector<Lit>, Lit> selectors;
    std::optional<Cube> refuting;
    for (;;) {
      tick();
      auto bc = bsearch.solve({}, q.b);
      if (!bc.sat())
        break;
      assume.assign(a.begin(), a.end());
      assume.insert(assume.end(), bc.model.begin(), bc.model.end());
      if (!verifier.solve_lits(assume)) {
        refuting = bc.model;
        break;
      }
      // Exclude every b for which the found C-assignment also works.
      std::vector<Lit> any;
      for (const Clause &cl : q.matrix) {
        std::vector<Lit> part;
        bool sat_by_ac = false;
        for (Lit l : cl) {
          if (aset.count(l.var())) {
            if (aval.lit(l) == 1) {
              sat_by_ac = true;
              break;
            }
          } else if (cset.count(l.var())) {
            if (verifier.value(l)) {
              sat_by_ac = true;
              break;
            }
          } else {
            part.push_back(l);
          }
        }
        if (sat_by_ac)
          continue;
        if (part.size() == 1) {
          any.push_back(~part[0]);
          continue;
        }
        auto [it, inserted] = selectors.try_emplace(part, Lit::False());
        if (inserted) {
          it->second = pos(new_var(VarKind::Auxiliary));
          for (Lit l : part)
            bsearch.add_clause({~it->second, ~l});
        }
        any.push_back(it->second);
      }
      bsearch.add_clause(std::span<const Lit>(any));
    }
    if (!refuting) {
      res.sat = true;
      res.model = a;
      return res;
    }
    abstraction.assert_clauses(instantiate(q, Valuation(*refuting), cset));
  }
}

QbfResult qbf_solve_expansion(const TwoQbfQuery &q, size_t bound) {
  q.validate();
  if (q.b.size() > bound)
    throw std::length_error("universal block exceeds the expansion bound");
  std::unordered_set<Var> cset(q.c.begin(), q.c.end());
  SatSession s;
  for (uint64_t bits = 0; bits < (1ull << q.b.size()); ++bits) {
    std::vector<Lit> lits;
    for (size_t k = 0; k < q.b.size(); ++k)
      lits.push_back(Lit::make(q.b[k], !((bits >> k) & 1)));
    s.assert_clauses(instantiate(q, Valuation(Cube(lits)), cset));
  }
  QbfResult res;
  auto r = s.solve({}, q.a);
  res.sat = r.sat();
  res.model = r.model;
  res.iterations = 1;
  return res;
}

bool qbf_validate_model(const TwoQbfQuery &q, const Cube &model) {
  if (q.b.size() > 20)
    throw std::length_error("universal block too large for validation");
  SatSession s;
  s.assert_clauses(q.matrix);
  for (uint64_t bits = 0; bits < (1ull << q.b.size()); ++bits) {
    std::vector<Lit> assume(model.begin(), model.end());
    for (size_t k = 0; k < q.b.size(); ++k)
      assume.push_back(Lit::make(q.b[k], !((bits >> k) & 1)));
    if (!s.solve_lits(assume))
      return false;
  }
  return true;
}

std::string to_qdimacs(const TwoQbfQuery &q) {
  std::ostringstream os;
  uint32_t max_id = 0;
  for (const auto *block : {&q.a, &q.b, &q.c})
    for (Var v : *block)
      max_id = std::max(max_id, v.id);
  os << "p cnf " << max_id << " " << q.matrix.size() << "\n";
  auto block = [&](char tag, const std::vector<Var> &vs) {
    if (vs.empty())
      return;
    os << tag;
    for (Var v : vs)
      os << " " << v.id;
    os << " 0\n";
  };
  block('e', q.a);
  block('a', q.b);
  block('e', q.c);
  for (const Clause &cl : q.matrix) {
    for (Lit l : cl)
      os << (l.negated() ? "-" : "") << l.var().id << " ";
    os << "0\n";
  }
  return os.str();
}

} // namespace safesynth
