#include "safesynth/aig.hpp"

#include "safesynth/sat.hpp"

#include <algorithm>

namespace safesynth {

Lit Aig::make_and(Lit a, Lit b) {
  if (a == Lit::False() || b == Lit::False() || a == ~b)
    return Lit::False();
  if (a == Lit::True() || a == b)
    return b;
  if (b == Lit::True())
    return a;
  if (b < a)
    std::swap(a, b);
  uint64_t key = (static_cast<uint64_t>(a.code) << 32) | b.code;
  auto it = strash_.find(key);
  if (it != strash_.end())
    return pos(it->second);
  Var out = new_var(VarKind::Auxiliary);
  index_.emplace(out.id, gates_.size());
  gates_.push_back({out, a, b});
  strash_.emplace(key, out);
  return pos(out);
}

Lit Aig::make_xor(Lit a, Lit b) {
  return make_or(make_and(a, ~b), make_and(~a, b));
}

Lit Aig::make_mux(Lit sel, Lit then_lit, Lit else_lit) {
  if (then_lit == else_lit)
    return then_lit;
  return make_or(make_and(sel, then_lit), make_and(~sel, else_lit));
}

Lit Aig::make_and(std::span<const Lit> lits) {
  // Balanced reduction keeps depth logarithmic.
  std::vector<Lit> cur(lits.begin(), lits.end());
  if (cur.empty())
    return Lit::True();
  while (cur.size() > 1) {
    std::vector<Lit> next;
    for (size_t k = 0; k + 1 < cur.size(); k += 2)
      next.push_back(make_and(cur[k], cur[k + 1]));
    if (cur.size() % 2)
      next.push_back(cur.back());
    cur.swap(next);
  }
  return cur[0];
}

Lit Aig::make_or(std::span<const Lit> lits) {
  std::vector<Lit> inv;
  inv.reserve(lits.size());
  for (Lit l : lits)
    inv.push_back(~l);
  return ~make_and(inv);
}

Lit Aig::make_clause(const Clause &c) { return make_or(std::span<const Lit>(c.lits())); }

Lit Aig::make_cube(const Cube &c) { return make_and(std::span<const Lit>(c.lits())); }

Lit Aig::make_cnf(const CnfFormula &f) {
  std::vector<Lit> cls;
  cls.reserve(f.size());
  for (const Clause &c : f)
    cls.push_back(make_clause(c));
  return make_and(cls);
}

std::vector<Var> Aig::cone(std::span<const Lit> roots) const {
  std::vector<Var> order;
  std::unordered_set<uint32_t> seen;
  std::vector<std::pair<Var, bool>> stack;
  for (Lit r : roots)
    if (!r.is_const() && is_gate(r.var()))
      stack.push_back({r.var(), false});
  while (!stack.empty()) {
    auto [v, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      order.push_back(v);
      continue;
    }
    if (!seen.insert(v.id).second)
      continue;
    stack.push_back({v, true});
    const Gate &g = gate(v);
    for (Lit in : {g.a, g.b})
      if (!in.is_const() && is_gate(in.var()) && !seen.count(in.var().id))
        stack.push_back({in.var(), false});
  }
  return order;
}

std::vector<Var> Aig::support(std::span<const Lit> roots) const {
  std::vector<Var> out;
  std::unordered_set<uint32_t> seen;
  auto leaf = [&](Lit l) {
    if (!l.is_const() && !is_gate(l.var()) && seen.insert(l.var().id).second)
      out.push_back(l.var());
  };
  for (Lit r : roots)
    leaf(r);
  for (Var g : cone(roots)) {
    leaf(gate(g).a);
    leaf(gate(g).b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Lit Aig::copy_from(const Aig &src, Lit root, std::unordered_map<uint32_t, Lit> &map) {
  if (root.is_const())
    return root;
  auto lookup = [&](Lit l) -> Lit {
    if (l.is_const())
      return l;
    auto it = map.find(l.var().id);
    Lit base = it == map.end() ? pos(l.var()) : it->second;
    return base ^ l.negated();
  };
  Lit single[1] = {root};
  for (Var g : src.cone(single)) {
    if (map.count(g.id))
      continue;
    const Gate &gt = src.gate(g);
    map[g.id] = make_and(lookup(gt.a), lookup(gt.b));
  }
  return lookup(root);
}

bool Aig::eval(Lit root, const std::function<bool(Var)> &leaf) const {
  if (root.is_const())
    return root == Lit::True();
  std::unordered_map<uint32_t, bool> val;
  auto get = [&](Lit l) {
    if (l.is_const())
      return l == Lit::True();
    auto it = val.find(l.var().id);
    bool b = it != val.end() ? it->second : leaf(l.var());
    return b != l.negated();
  };
  Lit single[1] = {root};
  for (Var g : cone(single)) {
    const Gate &gt = gate(g);
    val[g.id] = get(gt.a) && get(gt.b);
  }
  return get(root);
}

void AigEncoder::encode(Lit root, unsigned mask, CnfFormula &out) {
  if (root.is_const())
    return;
  // Required polarity of the literal translates to the gate's polarity.
  std::vector<std::pair<Var, unsigned>> work;
  auto push = [&](Lit l, unsigned m) {
    if (l.is_const() || !aig_.is_gate(l.var()))
      return;
    if (l.negated())
      m = ((m & 1) << 1) | ((m & 2) >> 1);
    work.push_back({l.var(), m});
  };
  push(root, mask);
  while (!work.empty()) {
    auto [v, m] = work.back();
    work.pop_back();
    unsigned &have = done_[v.id];
    unsigned missing = m & ~have;
    if (!missing)
      continue;
    have |= missing;
    const Aig::Gate &g = aig_.gate(v);
    Lit o = pos(v);
    if (missing & 1) {
      if (auto c = Clause::try_make({~o, g.a}))
        out.add_clause(*c);
      if (auto c = Clause::try_make({~o, g.b}))
        out.add_clause(*c);
    }
    if (missing & 2) {
      if (auto c = Clause::try_make({o, ~g.a, ~g.b}))
        out.add_clause(*c);
    }
    push(g.a, missing);
    push(g.b, missing);
  }
}

void AigEncoder::require(Lit root, SatSession &s) {
  CnfFormula f;
  require(root, f);
  s.assert_clauses(f);
}

void AigEncoder::define(Lit root, SatSession &s) {
  CnfFormula f;
  define(root, f);
  s.assert_clauses(f);
}

void assert_lit(SatSession &s, AigEncoder &enc, Lit lit) {
  enc.require(lit, s);
  s.add_clause({lit});
}

} // namespace safesynth
