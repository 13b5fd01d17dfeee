#include "safesynth/bench.hpp"
#include "safesynth/verify.hpp"
#include "safesynth/win.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace safesynth;
using namespace safesynth::testing;

namespace {

SafetySpec bench(BenchFamily f, int k, bool unreal = false) {
  return parse_aag(gen_benchmark({f, k, unreal}));
}

struct Variant {
  const char *name;
  WinConfig cfg;
};

std::vector<Variant> exact_variants() {
  std::vector<Variant> v;
  WinConfig c;
  c.backend = WinBackend::Qbf;
  v.push_back({"qbf", c});
  c = {};
  v.push_back({"sat1", c});
  c.lazy_g = false;
  v.push_back({"sat1-eager", c});
  c = {};
  c.expand_cex = true;
  v.push_back({"sat1-expand-cex", c});
  c = {};
  c.expand_gen = true;
  v.push_back({"sat1-expand-gen", c});
  c.expand_cex = true;
  v.push_back({"sat1-expand-both", c});
  return v;
}

std::vector<BenchParams> small_specs() {
  return {{BenchFamily::Cnt, 3, false}, {BenchFamily::Cnt, 3, true}, {BenchFamily::Cnt, 4, false},
          {BenchFamily::Mv, 3, false},  {BenchFamily::Mv, 3, true},  {BenchFamily::Add, 2, false},
          {BenchFamily::Add, 2, true},  {BenchFamily::Mult, 2, false}, {BenchFamily::Mult, 2, true},
          {BenchFamily::Bs, 4, false},  {BenchFamily::Bs, 4, true}};
}

// a' = u and not c, b' = b, error when a, b and u all hold. States with b
// set are unreachable, so RG may block b alone.
const char *kUnreachable = "aag 7 2 2 1 3\n2\n4\n6 14\n8 8\n12\n10 6 8\n12 10 2\n14 2 5\n"
                           "i0 u\ni1 controllable_c\nl0 a\nl1 b\n";

} // namespace

TEST(Win, TriviallyUnrealizable) {
  SafetySpec s = bench(BenchFamily::Cnt, 3);
  s.init = Cube{pos(s.err_latch())};
  EXPECT_TRUE(trivially_unrealizable(s));
  for (const Variant &v : exact_variants()) {
    WinningOutcome o = solve_win(s, v.cfg);
    EXPECT_EQ(o.verdict, Realizability::Unrealizable) << v.name;
    EXPECT_EQ(o.stats.refinements, 0u) << v.name;
  }
}

TEST(Win, SafeEverywhere) {
  SafetySpec s = bench(BenchFamily::Cnt, 3);
  s.safe = CnfFormula{};
  for (const Variant &v : exact_variants()) {
    WinningOutcome o = solve_win(s, v.cfg);
    EXPECT_EQ(o.verdict, Realizability::Realizable) << v.name;
    EXPECT_TRUE(o.w.empty()) << v.name;
    EXPECT_EQ(o.stats.refinements, 0u) << v.name;
  }
}

TEST(Win, RegionMatchesOracle) {
  for (const BenchParams &p : small_specs()) {
    SafetySpec s = parse_aag(gen_benchmark(p));
    StateSet region = explicit_attractor(s);
    bool realizable = explicit_realizable(build_explicit_game(s), region);
    for (const Variant &v : exact_variants()) {
      WinningOutcome o = solve_win(s, v.cfg);
      ASSERT_EQ(o.verdict == Realizability::Realizable, realizable) << bench_name(p) << " " << v.name;
      EXPECT_EQ(o.kind, AreaKind::WinningRegion);
      if (realizable)
        EXPECT_EQ(cnf_to_states(s, o.w), region) << bench_name(p) << " " << v.name;
    }
  }
}

TEST(Win, Cnt4CertificateChecks) {
  SafetySpec s = bench(BenchFamily::Cnt, 4);
  for (const Variant &v : exact_variants()) {
    WinningOutcome o = solve_win(s, v.cfg);
    ASSERT_EQ(o.verdict, Realizability::Realizable);
    VerifyReport r = check_winning_area(s, o.w);
    EXPECT_TRUE(r.ok()) << v.name << "\n" << r.to_text();
  }
}

TEST(Win, InvariantsEachIteration) {
  SafetySpec s = bench(BenchFamily::Mv, 3);
  ExplicitGame game = build_explicit_game(s);
  CnfFormula init_cnf;
  for (Lit l : s.init)
    init_cnf.add_unit(l);
  for (bool lazy : {true, false}) {
    WinConfig cfg;
    cfg.lazy_g = lazy;
    size_t checked = 0;
    CnfFormula last;
    cfg.on_iteration = [&](const CnfFormula &f, const CnfFormula &g, const std::vector<Clause> &u) {
      ++checked;
      EXPECT_TRUE(implies(init_cnf, f));
      EXPECT_TRUE(implies(f, s.safe));
      EXPECT_TRUE(implies(f, g));
      EXPECT_TRUE(implies(f, last));
      last = f;
      StateSet fs = cnf_to_states(s, f), gs = cnf_to_states(s, g);
      CnfFormula uf(u);
      for (uint32_t st = 0; st < game.num_states(); ++st) {
        if (!fs[st])
          continue;
        for (uint32_t in = 0; in < (1u << game.ni); ++in) {
          Assignment a = assignment_of(s.x, st);
          for (size_t k = 0; k < s.i.size(); ++k)
            a[s.i[k]] = (in >> k) & 1u;
          if (eval(uf, a))
            continue;
          bool response = false;
          for (uint32_t c = 0; c < (1u << game.nc) && !response; ++c)
            response = gs[game.next(st, in, c)];
          EXPECT_TRUE(response) << "state " << st << " input " << in;
        }
      }
    };
    uint64_t refinements = 0;
    cfg.on_refine = [&](const Cube &blocked, const Cube &cex) {
      ++refinements;
      EXPECT_FALSE(blocked.negate().eval([&](Var v) { return cex.contains(pos(v)); }));
    };
    WinningOutcome o = sat_win1(s, cfg);
    EXPECT_EQ(o.verdict, Realizability::Realizable);
    EXPECT_EQ(refinements, o.stats.refinements);
    EXPECT_GT(checked, 1u);
  }
}

TEST(Win, LazyAvoidsSyncs) {
  SafetySpec s = bench(BenchFamily::Cnt, 5);
  WinConfig lazy, eager;
  eager.lazy_g = false;
  WinningOutcome a = sat_win1(s, lazy), b = sat_win1(s, eager);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_LE(a.stats.g_syncs, b.stats.g_syncs);
  EXPECT_EQ(b.stats.g_syncs, b.stats.refinements);
}

TEST(Win, RgDropsUnreachable) {
  SafetySpec s = parse_aag(kUnreachable);
  WinConfig plain, rg;
  rg.opt_rg = true;
  WinningOutcome a = sat_win1(s, plain), b = sat_win1(s, rg);
  ASSERT_EQ(a.verdict, Realizability::Realizable);
  ASSERT_EQ(b.verdict, Realizability::Realizable);
  EXPECT_EQ(b.kind, AreaKind::WinningArea);
  EXPECT_LT(b.w.literal_count(), a.w.literal_count());
  EXPECT_TRUE(check_winning_area(s, b.w).ok());
  EXPECT_TRUE(implies(b.w, a.w));
  EXPECT_FALSE(equivalent(b.w, a.w));

  rg.backend = WinBackend::Qbf;
  WinningOutcome c = qbf_win(s, rg);
  ASSERT_EQ(c.verdict, Realizability::Realizable);
  EXPECT_TRUE(check_winning_area(s, c.w).ok());
  EXPECT_FALSE(equivalent(c.w, a.w));
}

TEST(Win, RgKeepsVerdictsAndCertificates) {
  for (const BenchParams &p : small_specs()) {
    SafetySpec s = parse_aag(gen_benchmark(p));
    StateSet region = explicit_attractor(s);
    bool realizable = explicit_realizable(build_explicit_game(s), region);
    for (WinBackend be : {WinBackend::Sat1, WinBackend::Qbf}) {
      WinConfig cfg;
      cfg.backend = be;
      cfg.opt_rg = true;
      WinningOutcome o = solve_win(s, cfg);
      ASSERT_EQ(o.verdict == Realizability::Realizable, realizable) << bench_name(p);
      if (!realizable)
        continue;
      EXPECT_TRUE(check_winning_area(s, o.w).ok()) << bench_name(p);
      StateSet w = cnf_to_states(s, o.w);
      for (size_t st = 0; st < w.size(); ++st)
        EXPECT_TRUE(!w[st] || region[st]) << bench_name(p);
    }
  }
}

TEST(Win, RgWithAllStatesInitial) {
  SafetySpec s = bench(BenchFamily::Cnt, 3);
  s.init = Cube{neg(s.err_latch())};
  WinConfig plain, rg;
  rg.opt_rg = true;
  WinningOutcome a = sat_win1(s, plain), b = sat_win1(s, rg);
  EXPECT_EQ(a.verdict, b.verdict);
  if (a.verdict == Realizability::Realizable)
    EXPECT_TRUE(equivalent(a.w, b.w));
}

TEST(Win, RcVerdicts) {
  for (const BenchParams &p : small_specs()) {
    SafetySpec s = parse_aag(gen_benchmark(p));
    bool realizable = explicit_realizable(build_explicit_game(s), explicit_attractor(s));
    for (WinBackend be : {WinBackend::Sat1, WinBackend::Qbf}) {
      WinConfig cfg;
      cfg.backend = be;
      cfg.opt_rc = true;
      WinningOutcome o = solve_win(s, cfg);
      EXPECT_EQ(o.verdict == Realizability::Realizable, realizable) << bench_name(p);
      EXPECT_EQ(o.kind, AreaKind::RealizabilityOnly);
    }
  }
}

TEST(Win, Cnt6OptionsAgree) {
  SafetySpec s = bench(BenchFamily::Cnt, 6);
  WinningOutcome base = sat_win1(s);
  ASSERT_EQ(base.verdict, Realizability::Realizable);
  WinConfig cfg;
  cfg.expand_cex = true;
  WinningOutcome ex = sat_win1(s, cfg);
  EXPECT_TRUE(equivalent(base.w, ex.w));
  EXPECT_EQ(ex.stats.renamings, 2u);
  cfg = {};
  cfg.opt_rg = true;
  WinningOutcome rg = sat_win1(s, cfg);
  EXPECT_TRUE(check_winning_area(s, rg.w).ok());
  cfg = {};
  cfg.opt_rc = true;
  EXPECT_EQ(sat_win1(s, cfg).verdict, Realizability::Realizable);
}

TEST(Win, ExpansionIndependentControl) {
  // The control never influences the transition.
  SafetySpec s = parse_aag("aag 6 2 2 1 2\n2\n4\n6 2\n8 8\n12\n10 6 8\n12 10 2\n"
                           "i0 u\ni1 controllable_c\nl0 a\nl1 b\n");
  WinConfig cfg;
  cfg.expand_cex = true;
  WinningOutcome o = sat_win1(s, cfg);
  EXPECT_EQ(o.stats.renamings, 1u);
  EXPECT_TRUE(equivalent(o.w, sat_win1(s).w));
}

TEST(Win, ExpansionFallsBack) {
  SafetySpec s = bench(BenchFamily::Cnt, 4);
  WinConfig cfg;
  cfg.expand_cex = true;
  cfg.expand_max_gates = 1;
  WinningOutcome o = sat_win1(s, cfg);
  EXPECT_TRUE(o.stats.expansion_fallback);
  EXPECT_EQ(o.verdict, Realizability::Realizable);
}

TEST(Win, CntRefinementGrowth) {
  for (int k = 4; k <= 6; ++k) {
    WinningOutcome o = sat_win1(bench(BenchFamily::Cnt, k));
    EXPECT_GE(o.stats.refinements, 1u << (k - 2)) << k;
    EXPECT_LE(o.stats.refinements, 1u << k) << k;
  }
}

TEST(Win, IterationBudget) {
  WinConfig cfg;
  cfg.max_iterations = 1;
  EXPECT_THROW(sat_win1(bench(BenchFamily::Cnt, 5), cfg), BudgetExceeded);
  cfg.backend = WinBackend::Qbf;
  EXPECT_THROW(qbf_win(bench(BenchFamily::Cnt, 5), cfg), BudgetExceeded);
}

TEST(Win, SharedClausesInjected) {
  SafetySpec s = bench(BenchFamily::Cnt, 4);
  WinningOutcome ref = sat_win1(s);
  std::vector<Clause> pending(ref.w.begin(), ref.w.end());
  // A clause excluding the initial state must be ignored.
  Clause bad;
  {
    std::vector<Lit> lits;
    for (Lit l : s.init)
      lits.push_back(~l);
    bad = Clause(lits);
  }
  pending.push_back(bad);
  WinConfig cfg;
  cfg.poll_clauses = [&] { return std::exchange(pending, {}); };
  WinningOutcome o = sat_win1(s, cfg);
  EXPECT_EQ(o.verdict, Realizability::Realizable);
  EXPECT_EQ(o.stats.shared_in, ref.w.size());
  EXPECT_TRUE(equivalent(o.w, ref.w));
}

TEST(Win, ExportImportRoundTrip) {
  SafetySpec s = bench(BenchFamily::Cnt, 4);
  WinningOutcome o = sat_win1(s);
  std::string text = export_w(s, o.w);
  EXPECT_EQ(import_w(s, text), o.w);
  SafetySpec other = bench(BenchFamily::Mv, 3);
  EXPECT_THROW(import_w(other, text), std::invalid_argument);
}
