#pragma once

#include "safesynth/aiger.hpp"
#include "safesynth/controller.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace safesynth {

/// Set of states; bit k of a state index is the value of spec.x[k].
using StateSet = std::vector<bool>;

/// Explicit-state game built by evaluating the source AIGER circuit
/// directly. Move index = i-bits | (c-bits << |i|).
struct ExplicitGame {
  size_t nx = 0, ni = 0, nc = 0;
  std::vector<uint32_t> succ;
  StateSet unsafe;
  StateSet initial;

  size_t num_states() const { return size_t{1} << nx; }
  size_t num_moves() const { return size_t{1} << (ni + nc); }
  uint32_t next(uint32_t s, uint32_t i, uint32_t c) const {
    return succ[(size_t(s) << (ni + nc)) | (size_t(c) << ni) | i];
  }
};

struct OracleLimits {
  size_t max_state_bits = 16;
  size_t max_move_bits = 12;
};

/// Throws BudgetExceeded beyond the limits.
ExplicitGame build_explicit_game(const SafetySpec &spec, OracleLimits lim = {});

/// Next-state values by evaluating the source circuit; `x`, `i`, `c` are
/// indexed like spec.x, spec.i, spec.c.
std::vector<bool> eval_source_step(const SafetySpec &spec, const std::vector<bool> &x,
                                   const std::vector<bool> &i, const std::vector<bool> &c);

/// States where the system can enforce reaching `f` in one step.
StateSet force_s1(const ExplicitGame &g, const StateSet &f);
/// States where the environment can enforce reaching `f` in one step.
StateSet force_e1(const ExplicitGame &g, const StateSet &f);
/// States with some move into `f`.
StateSet reach1(const ExplicitGame &g, const StateSet &f);

/// Greatest fixpoint of F = P and Force_s1(F).
StateSet explicit_attractor(const ExplicitGame &g);
StateSet explicit_attractor(const SafetySpec &spec);
bool explicit_realizable(const ExplicitGame &g, const StateSet &win);

/// Exact CNF over spec.x of a state set.
CnfFormula states_to_cnf(const SafetySpec &spec, const StateSet &s);
/// States satisfying f (auxiliary variables are projected).
StateSet cnf_to_states(const SafetySpec &spec, const CnfFormula &f);

/// f implies g, decided by SAT over all variables of both formulas.
bool implies(const CnfFormula &f, const CnfFormula &g);
bool equivalent(const CnfFormula &f, const CnfFormula &g);

struct CheckResult {
  std::string name;
  bool pass = true;
  /// Failing assignment, if any.
  std::string witness;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  uint64_t sim_steps = 0;
  bool ok() const;
  const CheckResult *find(const std::string &name) const;
  /// One line per check: "check=<name> result=PASS|FAIL [witness=...]".
  std::string to_text() const;
};

/// I -> F, F -> P and F -> Force_s1(F), all SAT/QBF based.
VerifyReport check_winning_area(const SafetySpec &spec, const CnfFormula &f);

/// I -> W, W -> P, W and T|ctrl -> W', plus seeded random simulation.
VerifyReport verify_controller(const SafetySpec &spec, const ControllerCircuit &ctrl,
                               const CnfFormula &w, uint64_t sim_steps = 10000, uint64_t seed = 1);

/// Explores every reachable state of the closed loop; true if all are safe.
bool explicit_closed_loop_safe(const SafetySpec &spec, const ControllerCircuit &ctrl,
                               OracleLimits lim = {});

} // namespace safesynth
