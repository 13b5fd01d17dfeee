#pragma once

#include "safesynth/aiger.hpp"
#include "safesynth/controller.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace safesynth {

/// W is not a winning area for the specification.
struct CertificateError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ExtractConfig {
  /// Let a control also depend on solved controls and transition gates that
  /// do not depend on it.
  bool dep_opt = true;
  /// Drop literals and clauses of every solution once all are known.
  bool minimize = false;
  /// Processing order; empty means descending index (sat) or ascending (qbf).
  std::vector<Var> order;
  /// Check W with check_winning_area before extracting.
  bool check_w = true;
  uint64_t seed = 0;
  const Budget *budget = nullptr;
};

struct ExtractStats {
  uint64_t interpol_iterations = 0;
  size_t literals_before_min = 0;
  size_t literals_after_min = 0;
  size_t gates = 0;
  int64_t time_ms = 0;
};

/// One solution per control, over x, i and whatever the control was
/// allowed to depend on (other controls, transition gates).
using ControlSolutions = std::vector<std::pair<Var, CnfFormula>>;

struct ExtractResult {
  ControllerCircuit circuit;
  ControlSolutions solutions;
  ExtractStats stats;
  std::string origin;
};

/// The two formulas whose interpolant defines `control`: M1 says the
/// control may be 1 and must not be 0, M0 the reverse. Controls in
/// `solved` are fixed to their solutions; other controls are inputs.
struct InterpolationPair {
  CnfFormula m1, m0;
  std::vector<Var> shared;
};
InterpolationPair build_m1_m0(const SafetySpec &spec, const CnfFormula &w, Var control,
                              const ControlSolutions &solved, bool dep_opt = false);

/// F over `shared` with M1 -> F -> not M0. Throws std::logic_error if M1
/// and M0 intersect.
CnfFormula cnf_interpol(const CnfFormula &m1, const CnfFormula &m0, std::span<const Var> shared,
                        const Budget *budget = nullptr);

ExtractResult extract_sat_learn(const SafetySpec &spec, const CnfFormula &w, const ExtractConfig &cfg = {});
ExtractResult extract_qbf_learn(const SafetySpec &spec, const CnfFormula &w, const ExtractConfig &cfg = {});

/// Shrinks every solution of a correct cascade: literals are dropped while
/// M1 -> F holds, then clauses (longest first) while F -> not M0 holds.
/// Never increases the literal count of a solution.
ControlSolutions minimize_solutions(const SafetySpec &spec, const CnfFormula &w, const ControlSolutions &solutions,
                                    uint64_t seed = 0, const Budget *budget = nullptr);

/// Gate network for the solutions with the cascade inlined, so outputs
/// depend on x and i only. Throws std::logic_error on cyclic definitions.
ControllerCircuit dump_circuit(const SafetySpec &spec, const ControlSolutions &solutions);

} // namespace safesynth
