#include "safesynth/bench.hpp"
#include "safesynth/extract.hpp"
#include "safesynth/verify.hpp"
#include "safesynth/win.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace safesynth;
using namespace safesynth::testing;

namespace {

// One latch and one control; x' = c or x' = not c. Error when x is 0.
const char *kCopy = "aag 2 1 1 1 0\n2\n4 2\n5\ni0 controllable_c\nl0 x\n";
const char *kInvert = "aag 2 1 1 1 0\n2\n4 3\n5\ni0 controllable_c\nl0 x\n";

SafetySpec starting_high(const char *text) {
  SafetySpec s = parse_aag(text);
  s.init = Cube{pos(s.x[0]), neg(s.err_latch())};
  return s;
}

CnfFormula high_area(const SafetySpec &s) { return CnfFormula{Clause{pos(s.x[0])}, Clause{neg(s.err_latch())}}; }

SafetySpec bench(BenchFamily f, int k) { return parse_aag(gen_benchmark({f, k, false})); }

CnfFormula region(const SafetySpec &s) {
  WinConfig cfg;
  cfg.backend = WinBackend::Sat1;
  WinningOutcome o = sat_win1(s, cfg);
  EXPECT_EQ(o.verdict, Realizability::Realizable);
  return o.w;
}

bool projection_sat(const CnfFormula &f, const Assignment &a) { return sat_under(f, a); }

} // namespace

TEST(Extract, M1M0Copy) {
  SafetySpec s = starting_high(kCopy);
  CnfFormula w = high_area(s);
  InterpolationPair p = build_m1_m0(s, w, s.c[0], {});
  std::vector<Var> xs = s.x;
  for (uint64_t b = 0; b < 4; ++b) {
    Assignment a = assignment_of(xs, b);
    EXPECT_EQ(projection_sat(p.m1, a), a[s.x[0]] && !a[s.err_latch()]);
    EXPECT_FALSE(projection_sat(p.m0, a));
  }
}

TEST(Extract, M1M0Invert) {
  SafetySpec s = starting_high(kInvert);
  CnfFormula w = high_area(s);
  InterpolationPair p = build_m1_m0(s, w, s.c[0], {});
  for (uint64_t b = 0; b < 4; ++b) {
    Assignment a = assignment_of(s.x, b);
    EXPECT_FALSE(projection_sat(p.m1, a));
    EXPECT_EQ(projection_sat(p.m0, a), a[s.x[0]] && !a[s.err_latch()]);
  }
}

TEST(Extract, M1M0EmptyWhenEverythingWins) {
  SafetySpec s = parse_aag("aag 2 1 1 1 0\n2\n4 2\n0\ni0 controllable_c\nl0 x\n");
  CnfFormula w{Clause{neg(s.err_latch())}};
  InterpolationPair p = build_m1_m0(s, w, s.c[0], {});
  SatSession a, b;
  a.assert_clauses(p.m1);
  b.assert_clauses(p.m0);
  EXPECT_FALSE(a.solve_lits({}));
  EXPECT_FALSE(b.solve_lits({}));
}

TEST(Extract, ConstantControllers) {
  SafetySpec copy = starting_high(kCopy);
  ExtractResult r = extract_sat_learn(copy, high_area(copy));
  EXPECT_EQ(r.circuit.output(copy.c[0]), Lit::True());
  EXPECT_EQ(r.stats.gates, 0u);
  SafetySpec inv = starting_high(kInvert);
  ExtractResult q = extract_qbf_learn(inv, high_area(inv));
  EXPECT_EQ(q.circuit.output(inv.c[0]), Lit::False());
  EXPECT_EQ(extract_sat_learn(inv, high_area(inv)).circuit.output(inv.c[0]), Lit::False());
}

TEST(Extract, RejectsBadArea) {
  SafetySpec s = starting_high(kCopy);
  CnfFormula w{Clause{neg(s.err_latch())}};
  EXPECT_THROW(extract_sat_learn(s, w), CertificateError);
  EXPECT_THROW(extract_qbf_learn(s, w), CertificateError);
  ExtractConfig cfg;
  cfg.check_w = false;
  // x = 0 is in W but every move leaves it; the unchecked result is wrong.
  ExtractResult r = extract_sat_learn(s, w, cfg);
  EXPECT_FALSE(verify_controller(s, r.circuit, w).ok());
}

TEST(Extract, InterpolantExamples) {
  auto v = fresh_vars(3);
  Var a = v[0], b = v[1], p = v[2];
  // M1 = a and p, M0 = not a and not p: F must contain a and exclude not a.
  CnfFormula m1{Clause{pos(a)}, Clause{pos(p)}};
  CnfFormula m0{Clause{neg(a)}, Clause{neg(p)}};
  std::vector<Var> shared{a, b};
  CnfFormula f = cnf_interpol(m1, m0, shared);
  for (Var u : f.vars())
    EXPECT_TRUE(u == a || u == b);
  EXPECT_TRUE(equivalent_tt(f, CnfFormula{Clause{pos(a)}}, shared));
  EXPECT_TRUE(cnf_interpol(m1, CnfFormula::constant(false), shared).empty());
  EXPECT_TRUE(cnf_interpol(CnfFormula::constant(false), m0, shared).is_false());
  EXPECT_THROW(cnf_interpol(m1, CnfFormula{Clause{pos(a)}}, shared), std::logic_error);
}

TEST(Extract, RandomInterpolants) {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int round = 0; round < 150; ++round) {
    auto shared = fresh_vars(4);
    auto pa = fresh_vars(2), pb = fresh_vars(2);
    std::vector<Var> va = shared, vb = shared;
    va.insert(va.end(), pa.begin(), pa.end());
    vb.insert(vb.end(), pb.begin(), pb.end());
    CnfFormula m1 = random_cnf(rng, va, 6, 3), m0 = random_cnf(rng, vb, 6, 3);
    bool overlap = false;
    for (uint64_t bits = 0; bits < 16 && !overlap; ++bits) {
      Assignment s = assignment_of(shared, bits);
      overlap = projection_sat(m1, s) && projection_sat(m0, s);
    }
    if (overlap) {
      EXPECT_THROW(cnf_interpol(m1, m0, shared), std::logic_error);
      continue;
    }
    CnfFormula f = cnf_interpol(m1, m0, shared);
    ++checked;
    for (uint64_t bits = 0; bits < 16; ++bits) {
      Assignment s = assignment_of(shared, bits);
      if (projection_sat(m1, s))
        EXPECT_TRUE(eval(f, s));
      if (projection_sat(m0, s))
        EXPECT_FALSE(eval(f, s));
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(Extract, ControllersPassVerification) {
  std::vector<std::pair<BenchFamily, int>> suite{
      {BenchFamily::Cnt, 3}, {BenchFamily::Cnt, 4}, {BenchFamily::Mv, 3},
      {BenchFamily::Add, 2}, {BenchFamily::Mult, 2}, {BenchFamily::Bs, 4}};
  for (auto [fam, k] : suite) {
    SafetySpec s = bench(fam, k);
    CnfFormula w = region(s);
    std::string name = bench_name({fam, k, false});
    std::vector<ExtractResult> results;
    for (bool dep : {false, true})
      for (bool min : {false, true}) {
        ExtractConfig cfg;
        cfg.dep_opt = dep;
        cfg.minimize = min;
        results.push_back(extract_sat_learn(s, w, cfg));
      }
    results.push_back(extract_qbf_learn(s, w));
    for (const ExtractResult &r : results) {
      VerifyReport rep = verify_controller(s, r.circuit, w);
      EXPECT_TRUE(rep.ok()) << name << " " << r.origin << "\n" << rep.to_text();
      EXPECT_TRUE(explicit_closed_loop_safe(s, r.circuit)) << name << " " << r.origin;
      EXPECT_EQ(r.solutions.size(), s.c.size());
      for (Var v : r.circuit.support())
        EXPECT_TRUE(std::find(s.x.begin(), s.x.end(), v) != s.x.end() ||
                    std::find(s.i.begin(), s.i.end(), v) != s.i.end())
            << name << " " << r.origin;
    }
  }
}

TEST(Extract, MinimizationIsMonotone) {
  for (auto [fam, k] : std::vector<std::pair<BenchFamily, int>>{
           {BenchFamily::Cnt, 4}, {BenchFamily::Add, 2}, {BenchFamily::Mult, 2}}) {
    SafetySpec s = bench(fam, k);
    CnfFormula w = region(s);
    ExtractConfig cfg;
    cfg.minimize = true;
    ExtractResult r = extract_sat_learn(s, w, cfg);
    EXPECT_LE(r.stats.literals_after_min, r.stats.literals_before_min);
    cfg.minimize = false;
    EXPECT_EQ(extract_sat_learn(s, w, cfg).stats.literals_after_min, r.stats.literals_before_min);
    // Any correct cascade can be minimized, including the QBF one.
    ExtractResult q = extract_qbf_learn(s, w);
    ControlSolutions small = minimize_solutions(s, w, q.solutions);
    for (size_t k = 0; k < small.size(); ++k)
      EXPECT_LE(small[k].second.literal_count(), q.solutions[k].second.literal_count());
    EXPECT_TRUE(verify_controller(s, dump_circuit(s, small), w).ok());
  }
}

TEST(Extract, ExplicitOrder) {
  SafetySpec s = bench(BenchFamily::Add, 2);
  ASSERT_GE(s.c.size(), 2u);
  CnfFormula w = region(s);
  ExtractConfig cfg;
  cfg.order = s.c;
  ExtractResult r = extract_sat_learn(s, w, cfg);
  EXPECT_TRUE(verify_controller(s, r.circuit, w).ok());
  EXPECT_EQ(r.solutions.front().first, s.c.front());
  cfg.order.pop_back();
  EXPECT_THROW(extract_sat_learn(s, w, cfg), std::invalid_argument);
}

TEST(Extract, DumpCircuitInlinesCascade) {
  SafetySpec s = bench(BenchFamily::Add, 2);
  ASSERT_GE(s.c.size(), 2u);
  ASSERT_GE(s.i.size(), 1u);
  Var c0 = s.c[0], c1 = s.c[1], u = s.i[0], x0 = s.x[0];
  ControlSolutions sol{{c0, CnfFormula{Clause{pos(x0)}}}, {c1, CnfFormula{Clause{pos(c0)}, Clause{neg(u)}}}};
  for (size_t k = 2; k < s.c.size(); ++k)
    sol.push_back({s.c[k], CnfFormula{}});
  ControllerCircuit circ = dump_circuit(s, sol);
  std::vector<Var> vars{x0, u};
  for (uint64_t b = 0; b < 4; ++b) {
    Assignment a = assignment_of(vars, b);
    auto leaf = [&](Var v) { return a.count(v) ? a[v] : false; };
    EXPECT_EQ(circ.aig.eval(circ.output(c0), leaf), a[x0]);
    EXPECT_EQ(circ.aig.eval(circ.output(c1), leaf), a[x0] && !a[u]);
  }
  EXPECT_EQ(circ.gate_count(), 1u);
  for (Var v : circ.support())
    EXPECT_TRUE(v == x0 || v == u);
}

TEST(Extract, DumpCircuitRejectsCycles) {
  SafetySpec s = bench(BenchFamily::Add, 2);
  ASSERT_GE(s.c.size(), 2u);
  ControlSolutions sol{{s.c[0], CnfFormula{Clause{pos(s.c[1])}}}, {s.c[1], CnfFormula{Clause{neg(s.c[0])}}}};
  for (size_t k = 2; k < s.c.size(); ++k)
    sol.push_back({s.c[k], CnfFormula{}});
  EXPECT_THROW(dump_circuit(s, sol), std::logic_error);
  sol.pop_back();
  if (s.c.size() > 2)
    EXPECT_THROW(dump_circuit(s, sol), std::invalid_argument);
}

TEST(Extract, DependencyOptionUsesGates) {
  SafetySpec s = bench(BenchFamily::Mult, 2);
  CnfFormula w = region(s);
  ExtractConfig cfg;
  cfg.dep_opt = true;
  ExtractResult r = extract_sat_learn(s, w, cfg);
  std::unordered_set<Var> allowed(s.x.begin(), s.x.end());
  allowed.insert(s.i.begin(), s.i.end());
  allowed.insert(s.c.begin(), s.c.end());
  allowed.insert(s.trans_aux.begin(), s.trans_aux.end());
  for (const auto &[c, f] : r.solutions)
    for (Var v : f.vars()) {
      EXPECT_TRUE(allowed.count(v)) << VarPool::global().name(v);
      EXPECT_NE(v, c);
    }
  EXPECT_TRUE(verify_controller(s, r.circuit, w).ok());
}
