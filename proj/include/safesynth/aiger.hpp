#pragma once

#include "safesynth/aig.hpp"
#include "safesynth/common.hpp"
#include "safesynth/controller.hpp"

#include <memory>
#include <string>
#include <vector>

namespace safesynth {

/// Raw ASCII AIGER circuit with AIGER literal numbering.
struct AigCircuit {
  struct Latch {
    uint32_t lit;
    uint32_t next;
  };
  struct And {
    uint32_t lhs, rhs0, rhs1;
  };

  uint32_t max_var = 0;
  std::vector<uint32_t> inputs;
  std::vector<Latch> latches;
  std::vector<uint32_t> outputs;
  /// Topologically ordered.
  std::vector<And> ands;
  std::vector<std::string> input_names;
  std::vector<std::string> latch_names;
  std::vector<std::string> output_names;
};

enum class ParseErrorKind {
  MalformedHeader,
  BinaryFormat,
  DanglingLiteral,
  MultipleOutputs,
  NonzeroLatchInit,
  Syntax,
};

struct ParseError : std::runtime_error {
  ParseError(ParseErrorKind k, const std::string &msg) : std::runtime_error(msg), kind(k) {}
  ParseErrorKind kind;
};

inline constexpr const char *kControllablePrefix = "controllable_";

/// The safety game (x, i, c, I, T, P).
struct SafetySpec {
  AigCircuit source;
  /// Original latches followed by the appended error latch.
  std::vector<Var> x;
  std::vector<Var> i;
  std::vector<Var> c;
  /// Next-state copies, parallel to x.
  std::vector<Var> xn;
  Cube init;
  CnfFormula safe;

  /// Transition gates; next-state functions and error output live here.
  std::shared_ptr<const Aig> circuit;
  std::vector<Lit> next_fn;
  Lit error_out;

  /// CNF of T over x, i, c, xn and trans_aux.
  CnfFormula trans;
  std::vector<Var> trans_aux;

  Var err_latch() const { return x.back(); }
  size_t num_state_bits() const { return x.size(); }
  /// Leaf map x -> x', used to move state formulas to the next state.
  VarMap next_map() const;
  CnfFormula to_next(const CnfFormula &f) const { return rename(f, next_map()); }
};

AigCircuit parse_aag_circuit(const std::string &text);
SafetySpec parse_aag(const std::string &text);
SafetySpec spec_from_circuit(AigCircuit circuit);

/// CNF defining x' (and auxiliaries) functionally from (x, i, c).
CnfFormula encode_transition(const SafetySpec &spec);

/// A copy of T with leaves substituted; the next-state functions are
/// returned as literals of `dst`.
std::vector<Lit> instantiate_transition(const SafetySpec &spec, Aig &dst,
                                        std::unordered_map<uint32_t, Lit> leaves);

/// CNF of T(x*, i*, c*, x*') for arbitrary variable vectors; gates fresh.
CnfFormula transition_copy(const SafetySpec &spec, std::span<const Var> x, std::span<const Var> i,
                           std::span<const Var> c, std::span<const Var> xn);

struct Expansion {
  std::shared_ptr<Aig> aig;
  /// Distinct next-state vectors, one literal per x.
  std::vector<std::vector<Lit>> renamings;
  /// For each renaming, the assignments to the expanded vars it represents.
  std::vector<std::vector<Cube>> represents;
  /// Fresh copies of `freshen` per renaming.
  std::vector<LitMap> fresh;
};

/// Universal expansion of T at the circuit level over `over`. Vars listed in
/// `freshen` get a fresh copy per assignment. Throws BudgetExceeded when
/// more than max_gates gates would be created.
Expansion expand_circuit(const SafetySpec &spec, std::span<const Var> over,
                         std::span<const Var> freshen = {}, size_t max_gates = 200000);

/// Input whose expansion duplicates the fewest gates (invalid Var if none).
Var choose_expansion_input(const SafetySpec &spec);

/// AIGER text of the original circuit with controls replaced by the
/// controller. Throws std::invalid_argument on undefined references.
std::string write_aag(const SafetySpec &spec, const ControllerCircuit &ctrl);
std::string write_aag(const AigCircuit &circuit);

} // namespace safesynth
