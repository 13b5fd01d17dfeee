#pragma once

#include "safesynth/aiger.hpp"
#include "safesynth/common.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace safesynth {

enum class Realizability { Realizable, Unrealizable, Unknown };
const char *to_string(Realizability r);

enum class AreaKind {
  WinningRegion,
  WinningArea,
  /// W decides realizability but need not be a winning area (RC).
  RealizabilityOnly,
};
const char *to_string(AreaKind k);

enum class WinBackend { Qbf, Sat1 };

struct WinConfig {
  WinBackend backend = WinBackend::Sat1;
  /// false: G and U are reset after every refinement of F.
  bool lazy_g = true;
  bool opt_rg = false;
  bool opt_rc = false;
  /// Expand all controls in the counterexample query (sat1).
  bool expand_cex = false;
  /// Expand one input in the generalization query (sat1).
  bool expand_gen = false;
  size_t expand_max_gates = 200000;
  /// qbf: recompress F once it grows past this factor of its compressed size.
  double compress_factor = 2.0;
  /// sat1: rebuild solverG once it holds this many redundant F clauses.
  size_t g_reset_excess = 5000;
  uint64_t max_iterations = 0;
  uint64_t seed = 0;
  const Budget *budget = nullptr;

  /// Called with every clause added to F by this run.
  std::function<void(const Clause &)> on_clause;
  /// Polled at iteration boundaries for clauses learned elsewhere.
  std::function<std::vector<Clause>()> poll_clauses;
  /// Called after each refinement with the blocked cube and the
  /// counterexample it generalizes.
  std::function<void(const Cube &blocked, const Cube &cex)> on_refine;
  /// Called at the start of every iteration with F, G and U (sat1; G = F
  /// and U empty for qbf).
  std::function<void(const CnfFormula &f, const CnfFormula &g, const std::vector<Clause> &u)> on_iteration;
};

struct WinStats {
  uint64_t refinements = 0;
  uint64_t cex_candidates = 0;
  uint64_t u_refinements = 0;
  uint64_t g_syncs = 0;
  uint64_t g_resets = 0;
  uint64_t shared_in = 0;
  uint64_t renamings = 0;
  bool expansion_fallback = false;
  int64_t time_ms = 0;
};

struct WinningOutcome {
  Realizability verdict = Realizability::Unknown;
  /// Over spec.x; valid iff realizable.
  CnfFormula w;
  AreaKind kind = AreaKind::WinningRegion;
  WinStats stats;
  std::string origin;
};

WinningOutcome qbf_win(const SafetySpec &spec, const WinConfig &cfg = {});
WinningOutcome sat_win1(const SafetySpec &spec, const WinConfig &cfg = {});
/// Dispatches on cfg.backend.
WinningOutcome solve_win(const SafetySpec &spec, const WinConfig &cfg);

/// A pair (x, i) from which no control keeps F, found with the U-refining
/// candidate loop of the SAT backend; nullopt if F -> Force_s1(F).
struct ForceCounterexample {
  Cube x, i;
};
std::optional<ForceCounterexample> find_force_counterexample(const SafetySpec &spec, const CnfFormula &f,
                                                             const Budget *budget = nullptr);

/// I and not P satisfiable.
bool trivially_unrealizable(const SafetySpec &spec);

/// DIMACS text over the state variables with "c x <index> <name>" lines.
std::string export_w(const SafetySpec &spec, const CnfFormula &w);
/// Inverse of export_w; throws std::invalid_argument on mismatch.
CnfFormula import_w(const SafetySpec &spec, const std::string &text);

} // namespace safesynth
