#pragma once

#include "safesynth/cnf.hpp"
#include "safesynth/common.hpp"

#include <memory>
#include <span>
#include <vector>

namespace safesynth {

enum class Verdict { Sat, Unsat };

struct SolveResult {
  Verdict verdict = Verdict::Unsat;
  /// Assignment to the requested variables (valid iff sat).
  Cube model;
  /// Subset of the assumptions (valid iff unsat).
  Cube core;
  bool sat() const { return verdict == Verdict::Sat; }
};

struct SatStats {
  uint64_t calls = 0;
  uint64_t conflicts = 0;
  uint64_t decisions = 0;
  uint64_t propagations = 0;
};

class Cdcl;

/// Incremental SAT session over global variables, backed by the built-in
/// CDCL solver. Not shareable between threads.
class SatSession {
public:
  explicit SatSession(uint64_t seed = 0);
  ~SatSession();
  SatSession(SatSession &&) noexcept;
  SatSession &operator=(SatSession &&) noexcept;

  void add_clause(const Clause &c);
  /// Accepts arbitrary literal lists (duplicates, tautologies, constants).
  void add_clause(std::span<const Lit> lits);
  void add_clause(std::initializer_list<Lit> lits) {
    add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }
  void assert_clauses(const CnfFormula &f);
  /// Adds f with every clause disjoined with ~act.
  void assert_guarded(const CnfFormula &f, Lit act);

  SolveResult solve(const Cube &assumptions = {}, std::span<const Var> model_vars = {});
  /// Raw interface: assumptions in the given order.
  bool solve_lits(std::span<const Lit> assumptions);
  /// Value after a sat answer; unknown variables read as false.
  bool value(Var v) const;
  bool value(Lit l) const { return value(l.var()) != l.negated(); }
  Cube model_cube(std::span<const Var> vars) const;
  /// Assumption literals in the final conflict after an unsat answer.
  std::vector<Lit> core_lits() const;

  /// Minimal c' within cube such that c' and fixed and the database are
  /// unsat. Throws CorePreconditionError if cube and fixed are satisfiable.
  Cube min_unsat_core(const Cube &cube, std::span<const Lit> fixed = {});
  /// Same for an ordered literal list; keeps the given order.
  std::vector<Lit> min_unsat_core_lits(std::span<const Lit> lits, std::span<const Lit> fixed = {});

  /// Fresh activation literal owned by this session.
  Lit new_activation();
  /// Permanently disables an activation literal.
  void retire(Lit act) { add_clause({~act}); }

  /// Conflict limit per call (negative: unlimited); exceeding throws BudgetExceeded.
  void set_conflict_limit(int64_t limit) { conflict_limit_ = limit; }
  SatStats stats() const;
  size_t num_clauses() const { return added_clauses_; }
  size_t num_vars() const;

private:
  int internal(Var v);
  int internal_lit(Lit l);

  std::unique_ptr<Cdcl> solver_;
  std::unordered_map<uint32_t, int> map_;
  std::vector<Var> back_;
  size_t added_clauses_ = 0;
  int64_t conflict_limit_ = -1;
  uint64_t calls_ = 0;
  bool const_true_ = false;
};

} // namespace safesynth
