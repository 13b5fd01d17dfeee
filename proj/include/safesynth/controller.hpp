#pragma once

#include "safesynth/aig.hpp"

#include <vector>

namespace safesynth {

/// Combinational definitions for the controllable inputs over (x, i).
struct ControllerCircuit {
  Aig aig;
  /// (control variable, defining literal in aig)
  std::vector<std::pair<Var, Lit>> outputs;

  Lit output(Var control) const;
  /// Gates in the shared cone of all outputs.
  size_t gate_count() const;
  /// Variables the definitions depend on.
  std::vector<Var> support() const;
};

} // namespace safesynth
