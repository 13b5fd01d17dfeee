#include "safesynth/aiger.hpp"
#include "safesynth/bench.hpp"
#include "safesynth/sat.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace safesynth;
using namespace safesynth::testing;

namespace {

const char *kExample = "aag 4 2 1 1 1\n"
                       "2\n"
                       "4\n"
                       "6 8\n"
                       "8\n"
                       "8 6 4\n"
                       "i0 controllable_c\n"
                       "i1 u\n";

ParseErrorKind kind_of(const std::string &text) {
  try {
    parse_aag(text);
  } catch (const ParseError &e) {
    return e.kind;
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ParseErrorKind::Syntax;
}

// Next-state vector by direct AIG evaluation.
std::vector<bool> step(const SafetySpec &s, const Assignment &a) {
  std::vector<bool> out;
  for (Lit f : s.next_fn)
    out.push_back(s.circuit->eval(f, [&](Var v) { return a.at(v); }));
  return out;
}

std::vector<Var> all_current(const SafetySpec &s) {
  std::vector<Var> v = s.x;
  v.insert(v.end(), s.i.begin(), s.i.end());
  v.insert(v.end(), s.c.begin(), s.c.end());
  return v;
}

} // namespace

TEST(Parse, ExampleCounts) {
  SafetySpec s = parse_aag(kExample);
  EXPECT_EQ(s.x.size(), 2u);
  EXPECT_EQ(s.i.size(), 1u);
  EXPECT_EQ(s.c.size(), 1u);
  EXPECT_EQ(s.init.size(), 2u);
  ASSERT_EQ(s.safe.size(), 1u);
  EXPECT_EQ(s.safe.clauses()[0], Clause{neg(s.err_latch())});
}

TEST(Parse, NoControls) {
  SafetySpec s = parse_aag("aag 3 1 1 1 1\n2\n4 6\n6\n6 4 2\ni0 u\n");
  EXPECT_TRUE(s.c.empty());
  EXPECT_EQ(s.i.size(), 1u);
}

TEST(Parse, DistinctErrors) {
  EXPECT_EQ(kind_of("aig 0 0 0 1 0\n0\n"), ParseErrorKind::BinaryFormat);
  EXPECT_EQ(kind_of("aag 1 1\n"), ParseErrorKind::MalformedHeader);
  EXPECT_EQ(kind_of("xyz\n"), ParseErrorKind::MalformedHeader);
  EXPECT_EQ(kind_of("aag 2 1 0 1 0\n2\n4\n"), ParseErrorKind::DanglingLiteral);
  EXPECT_EQ(kind_of("aag 1 1 0 2 0\n2\n2\n3\n"), ParseErrorKind::MultipleOutputs);
  EXPECT_EQ(kind_of("aag 1 1 0 0 0\n2\n"), ParseErrorKind::MultipleOutputs);
  EXPECT_EQ(kind_of("aag 2 1 1 1 0\n2\n4 2 1\n4\n"), ParseErrorKind::NonzeroLatchInit);
  EXPECT_EQ(kind_of("aag 3 1 0 1 2\n2\n6\n4 6 2\n6 4 2\n"), ParseErrorKind::Syntax);
}

TEST(Parse, ExplicitZeroInitAccepted) {
  SafetySpec s = parse_aag("aag 2 1 1 1 0\n2\n4 2 0\n4\n");
  EXPECT_EQ(s.x.size(), 2u);
}

TEST(Parse, Cnt2Counts) {
  SafetySpec s = parse_aag(gen_benchmark({BenchFamily::Cnt, 2, false}));
  EXPECT_EQ(s.x.size(), 3u);
  EXPECT_EQ(s.i.size(), 1u);
  EXPECT_EQ(s.c.size(), 1u);
}

TEST(Transition, CopyOfControl) {
  // x' = c
  SafetySpec s = parse_aag("aag 2 1 1 1 0\n2\n4 2\n0\ni0 controllable_c\n");
  Var x = s.x[0], c = s.c[0], xn = s.xn[0];
  std::vector<Var> vars{x, c, xn};
  CnfFormula expect{Clause{neg(xn), pos(c)}, Clause{pos(xn), neg(c)}};
  // Project T onto (x, c, x') by checking satisfiability per assignment.
  for (uint64_t bits = 0; bits < 8; ++bits) {
    Assignment a = assignment_of(vars, bits);
    a[s.err_latch()] = false;
    EXPECT_EQ(sat_under(s.trans, a), eval(expect, a));
  }
}

TEST(Transition, ConstantFalseErrorKeepsLatchLow) {
  SafetySpec s = parse_aag("aag 1 1 0 1 0\n2\n0\n");
  SatSession ss;
  ss.assert_clauses(s.trans);
  EXPECT_FALSE(ss.solve(Cube{neg(s.err_latch()), pos(s.xn.back())}).sat());
}

TEST(Transition, DeterministicAndComplete) {
  for (auto p : {BenchParams{BenchFamily::Cnt, 2, false}, BenchParams{BenchFamily::Cnt, 4, false},
                 BenchParams{BenchFamily::Mv, 3, false}, BenchParams{BenchFamily::Add, 2, false}}) {
    SafetySpec s = parse_aag(gen_benchmark(p));
    auto cur = all_current(s);
    ASSERT_LE(cur.size() + 0, 14u);
    SatSession ss;
    ss.assert_clauses(s.trans);
    for (uint64_t bits = 0; bits < (1ull << cur.size()); ++bits) {
      Assignment a = assignment_of(cur, bits);
      Cube asm_ = as_cube(a);
      auto r = ss.solve(asm_, s.xn);
      ASSERT_TRUE(r.sat()) << bench_name(p);
      // The next state equals direct evaluation; blocking it leaves no model.
      auto expect = step(s, a);
      std::vector<Lit> lits(asm_.begin(), asm_.end());
      std::vector<Lit> other;
      for (size_t k = 0; k < s.xn.size(); ++k) {
        ASSERT_EQ(ss.value(s.xn[k]), static_cast<bool>(expect[k]));
        other.push_back(Lit::make(s.xn[k], expect[k]));
      }
      Lit act = ss.new_activation();
      other.push_back(~act);
      ss.add_clause(other);
      lits.push_back(act);
      EXPECT_FALSE(ss.solve_lits(lits));
      ss.retire(act);
    }
  }
}

TEST(Transition, CopyMatchesEncoding) {
  SafetySpec s = parse_aag(gen_benchmark({BenchFamily::Cnt, 3, false}));
  auto x2 = fresh_vars(s.x.size(), VarKind::State);
  auto i2 = fresh_vars(s.i.size(), VarKind::Input);
  auto c2 = fresh_vars(s.c.size(), VarKind::Control);
  auto n2 = fresh_vars(s.x.size(), VarKind::NextState);
  CnfFormula t2 = transition_copy(s, x2, i2, c2, n2);
  SatSession ss;
  ss.assert_clauses(t2);
  std::vector<Var> cur = x2;
  cur.insert(cur.end(), i2.begin(), i2.end());
  cur.insert(cur.end(), c2.begin(), c2.end());
  for (uint64_t bits = 0; bits < (1ull << cur.size()); ++bits) {
    Assignment a2 = assignment_of(cur, bits);
    Assignment a = assignment_of(all_current(s), bits);
    ASSERT_TRUE(ss.solve(as_cube(a2)).sat());
    auto expect = step(s, a);
    for (size_t k = 0; k < n2.size(); ++k)
      EXPECT_EQ(ss.value(n2[k]), static_cast<bool>(expect[k]));
  }
}

TEST(Expansion, IndependentControlGivesOneRenaming) {
  // x' = u, control unused.
  SafetySpec s = parse_aag("aag 3 2 1 1 0\n2\n4\n6 4\n6\ni0 controllable_c\ni1 u\n");
  Expansion e = expand_circuit(s, s.c);
  EXPECT_EQ(e.renamings.size(), 1u);
  EXPECT_EQ(e.represents[0].size(), 2u);
}

TEST(Expansion, TwoVarsAtMostFour) {
  SafetySpec s = parse_aag(gen_benchmark({BenchFamily::Mv, 3, false}));
  ASSERT_EQ(s.c.size(), 2u);
  Expansion e = expand_circuit(s, s.c);
  EXPECT_LE(e.renamings.size(), 4u);
  EXPECT_GE(e.renamings.size(), 2u);
}

TEST(Expansion, Cnt4SoundByEnumeration) {
  SafetySpec s = parse_aag(gen_benchmark({BenchFamily::Cnt, 4, false}));
  Expansion e = expand_circuit(s, s.c);
  EXPECT_LE(e.renamings.size(), 2u);
  std::vector<Var> rest = s.x;
  rest.insert(rest.end(), s.i.begin(), s.i.end());
  for (size_t r = 0; r < e.renamings.size(); ++r)
    for (const Cube &asg : e.represents[r])
      for (uint64_t bits = 0; bits < (1ull << rest.size()); ++bits) {
        Assignment a = assignment_of(rest, bits);
        for (Lit l : asg)
          a[l.var()] = !l.negated();
        auto expect = step(s, a);
        for (size_t k = 0; k < s.x.size(); ++k) {
          bool got = e.aig->eval(e.renamings[r][k], [&](Var v) { return a.at(v); });
          ASSERT_EQ(got, static_cast<bool>(expect[k]));
        }
      }
}

TEST(Expansion, FreshenedCopiesAreDistinct) {
  SafetySpec s = parse_aag(gen_benchmark({BenchFamily::Mv, 3, false}));
  std::vector<Var> over{s.i[0]};
  Expansion e = expand_circuit(s, over, s.c);
  ASSERT_EQ(e.fresh.size(), e.renamings.size());
  for (const auto &m : e.fresh)
    for (Var c : s.c)
      EXPECT_NE(m.at(c).var(), c);
}

TEST(Expansion, BudgetThrows) {
  SafetySpec s = parse_aag(gen_benchmark({BenchFamily::Mult, 2, false}));
  EXPECT_THROW(expand_circuit(s, s.c, {}, 5), BudgetExceeded);
}

TEST(Expansion, HeuristicPicksCheapestInput) {
  // u0 feeds one gate; u1 feeds the output and through it the error latch.
  SafetySpec s =
      parse_aag("aag 5 2 1 1 2\n2\n4\n6 8\n10\n8 6 2\n10 6 4\ni0 u0\ni1 u1\n");
  EXPECT_EQ(choose_expansion_input(s), s.i[0]);
}

TEST(Write, ConstantController) {
  SafetySpec s = parse_aag(kExample);
  ControllerCircuit ctrl;
  ctrl.outputs.push_back({s.c[0], Lit::True()});
  std::string text = write_aag(s, ctrl);
  AigCircuit c = parse_aag_circuit(text);
  EXPECT_EQ(c.inputs.size(), 1u);
  EXPECT_EQ(c.latches.size(), 1u);
  SafetySpec back = parse_aag(text);
  EXPECT_TRUE(back.c.empty());
}

TEST(Write, UndefinedReferenceRejected) {
  SafetySpec s = parse_aag(kExample);
  ControllerCircuit ctrl;
  ctrl.outputs.push_back({s.c[0], pos(new_var(VarKind::Input, "stray"))});
  EXPECT_THROW(write_aag(s, ctrl), std::invalid_argument);
  ControllerCircuit missing;
  EXPECT_THROW(write_aag(s, missing), std::invalid_argument);
}

TEST(Write, RoundTripPreservesControllerGates) {
  SafetySpec s = parse_aag(gen_benchmark({BenchFamily::Mv, 3, false}));
  ControllerCircuit ctrl;
  Lit g = ctrl.aig.make_and(pos(s.x[0]), neg(s.i[0]));
  ctrl.outputs.push_back({s.c[0], g});
  ctrl.outputs.push_back({s.c[1], ctrl.aig.make_or(g, pos(s.x[1]))});
  std::string text = write_aag(s, ctrl);
  AigCircuit c = parse_aag_circuit(text);
  EXPECT_EQ(c.latches.size(), s.source.latches.size());
  EXPECT_EQ(c.ands.size(), s.source.ands.size() + ctrl.gate_count());
}

TEST(Write, Fixpoint) {
  for (auto p : {BenchParams{BenchFamily::Cnt, 3, false}, BenchParams{BenchFamily::Bs, 8, false},
                 BenchParams{BenchFamily::Mult, 2, false}}) {
    std::string first = gen_benchmark(p);
    std::string second = write_aag(parse_aag_circuit(first));
    std::string third = write_aag(parse_aag_circuit(second));
    EXPECT_EQ(second, third);
    EXPECT_EQ(first, second);
  }
}

TEST(Write, ControllerFixpoint) {
  SafetySpec s = parse_aag(gen_benchmark({BenchFamily::Cnt, 3, false}));
  ControllerCircuit ctrl;
  ctrl.outputs.push_back({s.c[0], neg(s.x[1])});
  std::string once = write_aag(s, ctrl);
  std::string twice = write_aag(parse_aag_circuit(once));
  EXPECT_EQ(once, twice);
}

TEST(Bench, TableCounts) {
  struct Row {
    BenchParams p;
    size_t x, i, c;
  };
  for (const Row &r : {Row{{BenchFamily::Cnt, 2, false}, 3, 1, 1}, Row{{BenchFamily::Cnt, 7, true}, 8, 1, 1},
                       Row{{BenchFamily::Mv, 4, false}, 5, 3, 3}, Row{{BenchFamily::Add, 3, false}, 2, 6, 3},
                       Row{{BenchFamily::Mult, 2, false}, 1, 4, 4}, Row{{BenchFamily::Bs, 8, false}, 9, 3, 1}}) {
    SafetySpec s = parse_aag(gen_benchmark(r.p));
    EXPECT_EQ(s.x.size(), r.x) << bench_name(r.p);
    EXPECT_EQ(s.i.size(), r.i) << bench_name(r.p);
    EXPECT_EQ(s.c.size(), r.c) << bench_name(r.p);
  }
}

TEST(Bench, InvalidParams) {
  EXPECT_THROW(gen_benchmark({BenchFamily::Cnt, 1, false}), std::invalid_argument);
  EXPECT_THROW(parse_family("stay"), std::invalid_argument);
}
