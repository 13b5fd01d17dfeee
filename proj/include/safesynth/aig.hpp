#pragma once

#include "safesynth/cnf.hpp"

#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace safesynth {

class SatSession;

/// And-inverter graph over global variables. Leaves are arbitrary Vars,
/// every gate output is a fresh auxiliary Var. Construction applies
/// constant propagation and structural hashing.
class Aig {
public:
  struct Gate {
    Var out;
    Lit a, b;
  };

  Lit make_and(Lit a, Lit b);
  Lit make_or(Lit a, Lit b) { return ~make_and(~a, ~b); }
  Lit make_xor(Lit a, Lit b);
  Lit make_xnor(Lit a, Lit b) { return ~make_xor(a, b); }
  Lit make_mux(Lit sel, Lit then_lit, Lit else_lit);
  Lit make_and(std::span<const Lit> lits);
  Lit make_or(std::span<const Lit> lits);
  Lit make_clause(const Clause &c);
  Lit make_cube(const Cube &c);
  Lit make_cnf(const CnfFormula &f);

  bool is_gate(Var v) const { return index_.count(v.id) != 0; }
  const Gate &gate(Var v) const { return gates_[index_.at(v.id)]; }
  const std::vector<Gate> &gates() const { return gates_; }
  size_t size() const { return gates_.size(); }

  /// Gate vars in the cone of the roots, topologically ordered.
  std::vector<Var> cone(std::span<const Lit> roots) const;
  /// Non-gate variables reachable from the roots.
  std::vector<Var> support(std::span<const Lit> roots) const;
  size_t cone_size(std::span<const Lit> roots) const { return cone(roots).size(); }

  /// Copies the cone of `root` from src into this graph. `map` maps source
  /// leaves (and memoized source gates) to literals of this graph; leaves
  /// missing from the map are kept as they are.
  Lit copy_from(const Aig &src, Lit root, std::unordered_map<uint32_t, Lit> &map);

  /// Evaluates a literal; leaf values come from `leaf`.
  bool eval(Lit root, const std::function<bool(Var)> &leaf) const;

private:
  std::vector<Gate> gates_;
  std::unordered_map<uint32_t, size_t> index_;
  std::unordered_map<uint64_t, Var> strash_;
};

/// Incremental polarity-aware Tseitin encoder for the cones of an Aig.
/// Only the implication directions required by the requested polarities are
/// emitted (Plaisted-Greenbaum); gates already encoded are not repeated.
class AigEncoder {
public:
  explicit AigEncoder(const Aig &aig) : aig_(aig) {}

  /// Encodes so that `root` may be asserted true.
  void require(Lit root, CnfFormula &out) { encode(root, 1, out); }
  /// Encodes both directions (root is functionally defined).
  void define(Lit root, CnfFormula &out) { encode(root, 3, out); }
  /// Same, straight into a session.
  void require(Lit root, SatSession &s);
  void define(Lit root, SatSession &s);

private:
  // mask bit 1: gate may be assumed true (out -> a & b);
  // bit 2: gate may be assumed false (a & b -> out).
  void encode(Lit root, unsigned mask, CnfFormula &out);
  const Aig &aig_;
  std::unordered_map<uint32_t, unsigned> done_;
};

/// Asserts `lit` in a session, encoding its cone with `enc`.
void assert_lit(SatSession &s, AigEncoder &enc, Lit lit);

} // namespace safesynth
