#pragma once

#include "safesynth/cnf.hpp"
#include "safesynth/common.hpp"

#include <string>
#include <vector>

namespace safesynth {

/// Closed query  exists A . forall B . exists C . matrix.
struct TwoQbfQuery {
  std::vector<Var> a;
  std::vector<Var> b;
  std::vector<Var> c;
  CnfFormula matrix;

  /// Adds every matrix variable not listed in a block to C.
  void complete_inner();
  /// Throws std::invalid_argument if blocks overlap or miss matrix vars.
  void validate() const;
};

struct QbfResult {
  bool sat = false;
  /// Assignment to block A (valid iff sat).
  Cube model;
  uint64_t iterations = 0;
};

struct QbfConfig {
  /// Combined outer and inner refinement budget.
  uint64_t max_iterations = 2'000'000;
  uint64_t seed = 0;
  const Budget *budget = nullptr;
};

struct QbfResourceError : BudgetExceeded {
  using BudgetExceeded::BudgetExceeded;
};

/// Counterexample-guided abstraction refinement over the universal block.
QbfResult qbf_solve(const TwoQbfQuery &q, const QbfConfig &cfg = {});

/// Expands all universals and solves the propositional result.
/// Throws std::length_error if |B| exceeds the bound.
QbfResult qbf_solve_expansion(const TwoQbfQuery &q, size_t bound = 16);

/// Brute-force check that  forall B exists C  matrix  holds under model.
bool qbf_validate_model(const TwoQbfQuery &q, const Cube &model);

std::string to_qdimacs(const TwoQbfQuery &q);

} // namespace safesynth
