#pragma once

#include "safesynth/var.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace safesynth {

/// Sorted, duplicate-free literal sequence shared by Clause and Cube.
class LitSeq {
public:
  using const_iterator = std::vector<Lit>::const_iterator;

  size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  Lit operator[](size_t k) const { return lits_[k]; }
  const_iterator begin() const { return lits_.begin(); }
  const_iterator end() const { return lits_.end(); }
  const std::vector<Lit> &lits() const { return lits_; }
  bool contains(Lit l) const;
  bool contains_var(Var v) const;
  /// Every literal of this sequence also occurs in `other`.
  bool subset_of(const LitSeq &other) const;

  auto operator<=>(const LitSeq &) const = default;

protected:
  LitSeq() = default;
  /// Sorts and dedups; returns false if both polarities of a variable occur.
  bool canonicalize(std::vector<Lit> lits);
  std::vector<Lit> lits_;
};

class Cube;

class Clause : public LitSeq {
public:
  Clause() = default;
  /// Throws std::invalid_argument on tautologies or constant literals.
  explicit Clause(std::vector<Lit> lits);
  Clause(std::initializer_list<Lit> lits) : Clause(std::vector<Lit>(lits)) {}
  /// Returns nullopt if the literals form a tautology. Constant false
  /// literals are dropped, constant true makes the clause a tautology.
  static std::optional<Clause> try_make(std::vector<Lit> lits);

  bool subsumes(const Clause &other) const { return subset_of(other); }
  Cube negate() const;
  bool eval(const std::function<bool(Var)> &val) const;
};

class Cube : public LitSeq {
public:
  Cube() = default;
  /// Throws std::invalid_argument on contradictory or constant literals.
  explicit Cube(std::vector<Lit> lits);
  Cube(std::initializer_list<Lit> lits) : Cube(std::vector<Lit>(lits)) {}
  static std::optional<Cube> try_make(std::vector<Lit> lits);

  Clause negate() const;
  bool eval(const std::function<bool(Var)> &val) const;
  /// Literals restricted to the given variables.
  Cube restrict_to(std::span<const Var> vars) const;
  Cube without(Lit l) const;
  /// Conjunction; nullopt when contradictory.
  std::optional<Cube> conjoin(const Cube &other) const;
};

class CnfFormula {
public:
  CnfFormula() = default;
  CnfFormula(std::initializer_list<Clause> clauses) : clauses_(clauses) {}
  explicit CnfFormula(std::vector<Clause> clauses) : clauses_(std::move(clauses)) {}

  static CnfFormula constant(bool value);

  const std::vector<Clause> &clauses() const { return clauses_; }
  size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }
  const Clause &operator[](size_t k) const { return clauses_[k]; }
  auto begin() const { return clauses_.begin(); }
  auto end() const { return clauses_.end(); }

  void add_clause(Clause c) { clauses_.push_back(std::move(c)); }
  void add_unit(Lit l) { clauses_.push_back(Clause{l}); }
  void append(const CnfFormula &other);
  /// Adds c unless an existing clause subsumes it; removes all supersets of c.
  /// Returns false if c was subsumed.
  bool add_clause_with_subsumption(const Clause &c);

  /// Contains the empty clause.
  bool is_false() const;
  /// Sorted set of variables occurring in the clauses.
  std::vector<Var> vars() const;
  size_t literal_count() const;
  bool eval(const std::function<bool(Var)> &val) const;

  bool operator==(const CnfFormula &) const = default;

private:
  std::vector<Clause> clauses_;
};

/// Result of a Plaisted-Greenbaum negation.
struct PgNegation {
  CnfFormula cnf;
  std::vector<Var> aux;
};

/// CNF over f.vars plus fresh auxiliaries that is satisfiable at an
/// assignment to f.vars iff f is false there.
PgNegation negate_pg(const CnfFormula &f);

/// Negation with a per-clause auxiliary cache, so that repeated negation of
/// formulas that share clauses reuses the same selector variables.
class PgNegator {
public:
  /// Appends clauses for the negation of f to out. The negation is enforced
  /// only while `act` holds; selector definitions are unconditional.
  void negate_into(const CnfFormula &f, CnfFormula &out, Lit act = Lit::True());
  const std::vector<Var> &aux() const { return aux_; }

private:
  std::map<Clause, Lit> selectors_;
  std::vector<Var> aux_;
};

/// CNF over exactly f.vars equivalent to the negation of f.
CnfFormula neg_learn(const CnfFormula &f, uint64_t seed = 0);

/// Equivalent CNF without implied clauses; optionally shrinks clauses first.
CnfFormula compress_cnf(const CnfFormula &f, bool drop_literals, uint64_t seed = 0);

using VarMap = std::unordered_map<Var, Var>;

/// Literal-wise renaming. Throws std::invalid_argument if the map is not
/// injective on f.vars (unmapped variables map to themselves).
CnfFormula rename(const CnfFormula &f, const VarMap &map);
Clause rename(const Clause &c, const VarMap &map);
Cube rename(const Cube &c, const VarMap &map);

using LitMap = std::unordered_map<Var, Lit>;

/// Replaces variables by arbitrary literals or constants, simplifying the
/// result (satisfied clauses dropped, false literals removed). Unlike rename
/// the map need not be injective.
CnfFormula substitute(const CnfFormula &f, const LitMap &map);

/// `p cnf V C` text with variable ids as DIMACS indices.
std::string to_dimacs(const CnfFormula &f, const std::vector<std::string> &comments = {});

std::string to_string(const Clause &c);
std::string to_string(const Cube &c);

/// Minterm over vars built from a valuation.
Cube minterm(std::span<const Var> vars, const std::function<bool(Var)> &val);

} // namespace safesynth
