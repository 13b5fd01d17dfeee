#include "safesynth/cnf.hpp"

#include "safesynth/sat.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace safesynth {

bool LitSeq::canonicalize(std::vector<Lit> lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (size_t k = 1; k < lits.size(); ++k)
    if (lits[k].var() == lits[k - 1].var())
      return false;
  lits_ = std::move(lits);
  return true;
}

bool LitSeq::contains(Lit l) const { return std::binary_search(lits_.begin(), lits_.end(), l); }

bool LitSeq::contains_var(Var v) const { return contains(pos(v)) || contains(neg(v)); }

bool LitSeq::subset_of(const LitSeq &other) const {
  if (lits_.size() > other.lits_.size())
    return false;
  return std::includes(other.lits_.begin(), other.lits_.end(), lits_.begin(), lits_.end());
}

namespace {
void reject_constants(const std::vector<Lit> &lits) {
  for (Lit l : lits)
    if (l.is_const())
      throw std::invalid_argument("constant literal in clause or cube");
}
} // namespace

Clause::Clause(std::vector<Lit> lits) {
  reject_constants(lits);
  if (!canonicalize(std::move(lits)))
    throw std::invalid_argument("tautological clause");
}

std::optional<Clause> Clause::try_make(std::vector<Lit> lits) {
  std::vector<Lit> kept;
  kept.reserve(lits.size());
  for (Lit l : lits) {
    if (l == Lit::True())
      return std::nullopt;
    if (l != Lit::False())
      kept.push_back(l);
  }
  Clause c;
  if (!c.canonicalize(std::move(kept)))
    return std::nullopt;
  return c;
}

Cube Clause::negate() const {
  std::vector<Lit> out;
  out.reserve(size());
  for (Lit l : *this)
    out.push_back(~l);
  return Cube(std::move(out));
}

bool Clause::eval(const std::function<bool(Var)> &val) const {
  for (Lit l : *this)
    if (val(l.var()) != l.negated())
      return true;
  return false;
}

Cube::Cube(std::vector<Lit> lits) {
  reject_constants(lits);
  if (!canonicalize(std::move(lits)))
    throw std::invalid_argument("contradictory cube");
}

std::optional<Cube> Cube::try_make(std::vector<Lit> lits) {
  std::vector<Lit> kept;
  for (Lit l : lits) {
    if (l == Lit::False())
      return std::nullopt;
    if (l != Lit::True())
      kept.push_back(l);
  }
  Cube c;
  if (!c.canonicalize(std::move(kept)))
    return std::nullopt;
  return c;
}

Clause Cube::negate() const {
  std::vector<Lit> out;
  out.reserve(size());
  for (Lit l : *this)
    out.push_back(~l);
  return Clause(std::move(out));
}

bool Cube::eval(const std::function<bool(Var)> &val) const {
  for (Lit l : *this)
    if (val(l.var()) == l.negated())
      return false;
  return true;
}

Cube Cube::restrict_to(std::span<const Var> vars) const {
  std::unordered_set<Var> keep(vars.begin(), vars.end());
  std::vector<Lit> out;
  for (Lit l : *this)
    if (keep.count(l.var()))
      out.push_back(l);
  return Cube(std::move(out));
}

Cube Cube::without(Lit l) const {
  std::vector<Lit> out;
  for (Lit m : *this)
    if (m != l)
      out.push_back(m);
  return Cube(std::move(out));
}

std::optional<Cube> Cube::conjoin(const Cube &other) const {
  std::vector<Lit> all(begin(), end());
  all.insert(all.end(), other.begin(), other.end());
  return try_make(std::move(all));
}

CnfFormula CnfFormula::constant(bool value) {
  CnfFormula f;
  if (!value)
    f.add_clause(Clause());
  return f;
}

void CnfFormula::append(const CnfFormula &other) {
  clauses_.insert(clauses_.end(), other.clauses_.begin(), other.clauses_.end());
}

bool CnfFormula::add_clause_with_subsumption(const Clause &c) {
  for (const Clause &d : clauses_)
    if (d.subsumes(c))
      return false;
  std::erase_if(clauses_, [&](const Clause &d) { return c.subsumes(d); });
  clauses_.push_back(c);
  return true;
}

bool CnfFormula::is_false() const {
  return std::any_of(clauses_.begin(), clauses_.end(), [](const Clause &c) { return c.empty(); });
}

std::vector<Var> CnfFormula::vars() const {
  std::vector<Var> out;
  for (const Clause &c : clauses_)
    for (Lit l : c)
      out.push_back(l.var());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

size_t CnfFormula::literal_count() const {
  size_t n = 0;
  for (const Clause &c : clauses_)
    n += c.size();
  return n;
}

bool CnfFormula::eval(const std::function<bool(Var)> &val) const {
  for (const Clause &c : clauses_)
    if (!c.eval(val))
      return false;
  return true;
}

void PgNegator::negate_into(const CnfFormula &f, CnfFormula &out, Lit act) {
  // Some clause must be falsified: one selector per clause forcing all of
  // its literals false. Unit clauses need no selector.
  std::vector<Lit> any;
  for (const Clause &c : f) {
    if (c.empty())
      return; // f is false, its negation holds unconditionally
    if (c.size() == 1) {
      any.push_back(~c[0]);
      continue;
    }
    auto it = selectors_.find(c);
    if (it == selectors_.end()) {
      Var s = new_var(VarKind::Auxiliary);
      aux_.push_back(s);
      for (Lit l : c)
        out.add_clause(Clause{neg(s), ~l});
      it = selectors_.emplace(c, pos(s)).first;
    }
    any.push_back(it->second);
  }
  if (act != Lit::True())
    any.push_back(~act);
  auto big = Clause::try_make(std::move(any));
  if (big)
    out.add_clause(*big);
}

PgNegation negate_pg(const CnfFormula &f) {
  PgNegator neg;
  PgNegation res;
  neg.negate_into(f, res.cnf);
  res.aux = neg.aux();
  return res;
}

CnfFormula neg_learn(const CnfFormula &f, uint64_t seed) {
  std::vector<Var> vars = f.vars();
  SatSession pos_s(seed);
  pos_s.assert_clauses(f);
  SatSession neg_s(seed);
  neg_s.assert_clauses(negate_pg(f).cnf);
  CnfFormula n;
  for (;;) {
    SolveResult r = pos_s.solve({}, vars);
    if (!r.sat())
      return n;
    Cube core = neg_s.min_unsat_core(r.model);
    Clause block = core.negate();
    n.add_clause_with_subsumption(block);
    pos_s.add_clause(block);
  }
}

CnfFormula compress_cnf(const CnfFormula &f, bool drop_literals, uint64_t seed) {
  if (f.is_false())
    return CnfFormula::constant(false);
  std::vector<Clause> work = f.clauses();
  if (drop_literals) {
    SatSession s(seed);
    s.assert_clauses(f);
    for (Clause &c : work)
      c = s.min_unsat_core(c.negate()).negate();
  }
  std::stable_sort(work.begin(), work.end(),
                   [](const Clause &a, const Clause &b) { return a.size() < b.size(); });
  CnfFormula g;
  SatSession s(seed);
  for (const Clause &c : work) {
    if (c.empty())
      return CnfFormula::constant(false);
    if (s.solve(c.negate()).sat()) {
      g.add_clause(c);
      s.add_clause(c);
    }
  }
  return g;
}

namespace {
Var map_var(Var v, const VarMap &map) {
  auto it = map.find(v);
  return it == map.end() ? v : it->second;
}
} // namespace

Clause rename(const Clause &c, const VarMap &map) {
  std::vector<Lit> out;
  out.reserve(c.size());
  for (Lit l : c)
    out.push_back(Lit::make(map_var(l.var(), map), l.negated()));
  return Clause(std::move(out));
}

Cube rename(const Cube &c, const VarMap &map) {
  std::vector<Lit> out;
  out.reserve(c.size());
  for (Lit l : c)
    out.push_back(Lit::make(map_var(l.var(), map), l.negated()));
  return Cube(std::move(out));
}

CnfFormula rename(const CnfFormula &f, const VarMap &map) {
  std::unordered_map<Var, Var> image;
  for (Var v : f.vars()) {
    Var w = map_var(v, map);
    auto [it, inserted] = image.emplace(w, v);
    if (!inserted && it->second != v)
      throw std::invalid_argument("rename: map is not injective on the formula's variables");
  }
  CnfFormula out;
  for (const Clause &c : f)
    out.add_clause(rename(c, map));
  return out;
}

CnfFormula substitute(const CnfFormula &f, const LitMap &map) {
  CnfFormula out;
  std::vector<Lit> buf;
  for (const Clause &c : f) {
    buf.clear();
    for (Lit l : c) {
      auto it = map.find(l.var());
      buf.push_back(it == map.end() ? l : (it->second ^ l.negated()));
    }
    auto cl = Clause::try_make(buf);
    if (!cl)
      continue;
    if (cl->empty())
      return CnfFormula::constant(false);
    out.add_clause(std::move(*cl));
  }
  return out;
}

std::string to_dimacs(const CnfFormula &f, const std::vector<std::string> &comments) {
  std::ostringstream os;
  for (const std::string &c : comments)
    os << "c " << c << "\n";
  uint32_t max_id = 0;
  for (Var v : f.vars())
    max_id = std::max(max_id, v.id);
  os << "p cnf " << max_id << " " << f.size() << "\n";
  for (const Clause &c : f) {
    for (Lit l : c)
      os << (l.negated() ? "-" : "") << l.var().id << " ";
    os << "0\n";
  }
  return os.str();
}

std::string to_string(const Clause &c) {
  std::string s = "(";
  for (size_t k = 0; k < c.size(); ++k)
    s += (k ? " | " : "") + to_string(c[k]);
  return s + ")";
}

std::string to_string(const Cube &c) {
  std::string s = "[";
  for (size_t k = 0; k < c.size(); ++k)
    s += (k ? " & " : "") + to_string(c[k]);
  return s + "]";
}

Cube minterm(std::span<const Var> vars, const std::function<bool(Var)> &val) {
  std::vector<Lit> lits;
  lits.reserve(vars.size());
  for (Var v : vars)
    lits.push_back(Lit::make(v, !val(v)));
  return Cube(std::move(lits));
}

} // namespace safesynth
