#pragma once

#include "safesynth/aiger.hpp"
#include "safesynth/win.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace safesynth {

enum class TemplateKind { Cnf, Aig };
const char *to_string(TemplateKind k);

struct TriviallyUnrealizable : std::runtime_error {
  TriviallyUnrealizable() : std::runtime_error("initial state violates the safety property") {}
};

/// Parameterized shape H(x, k) for a winning area, wrapped as
/// (H'(x, k) and P(x)) or I(x) so that I -> H -> P holds for every k.
struct Template {
  TemplateKind kind = TemplateKind::Cnf;
  size_t n = 0;
  /// All parameters in a fixed order.
  std::vector<Var> params;

  // Parameter groups, indexed [i] or [i][j].
  std::vector<Var> kc;                    // cnf: clause i used
  std::vector<std::vector<Var>> kv, kn;   // variable j used / negated
  std::vector<std::vector<Var>> ku, km;   // aig: gate j < i feeds gate i / negated
  Var kout;                               // aig: output negated

  std::shared_ptr<Aig> aig;
  std::vector<Var> x;
  /// Unwrapped template H'(x, k).
  Lit core;
  /// Wrapped template H(x, k).
  Lit h;

  /// H over x with the parameters fixed by `k` (CNF over x only).
  CnfFormula instantiate(const Cube &k) const;
  /// H' with the parameters fixed by `k`.
  CnfFormula instantiate_core(const Cube &k) const;
};

size_t template_param_count(TemplateKind kind, size_t num_x, size_t n);

/// Throws TriviallyUnrealizable when I and not P is satisfiable.
Template build_template(const SafetySpec &spec, TemplateKind kind, size_t n);

struct TemplConfig {
  WinBackend backend = WinBackend::Sat1;
  uint64_t max_iterations = 0;
  uint64_t seed = 0;
  const Budget *budget = nullptr;
};

/// Single 2QBF query over k; the instantiated winning area or nullopt.
std::optional<CnfFormula> templ_win_qbf(const SafetySpec &spec, const Template &t, const TemplConfig &cfg = {});
/// CEGIS over k with SAT-based counterexample search.
std::optional<CnfFormula> templ_win_sat(const SafetySpec &spec, const Template &t, const TemplConfig &cfg = {});

/// Sizes tried by the schedule: 1, 2, 3, 4, 8, 16, ...
size_t templ_next_n(size_t n);

/// Tries growing N until a winning area is found or a failure at N large
/// enough to express every state set proves unrealizability. Budget
/// exhaustion yields an Unknown verdict.
WinningOutcome templ_schedule(const SafetySpec &spec, TemplateKind kind, const TemplConfig &cfg = {});

/// Exact CNF over `vars` of an AIG function whose support lies in `vars`.
CnfFormula aig_function_to_cnf(const Aig &aig, Lit root, std::span<const Var> vars);

} // namespace safesynth
