#include "safesynth/bench.hpp"
#include "safesynth/portfolio.hpp"
#include "safesynth/verify.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

using namespace safesynth;

namespace {

SafetySpec bench(BenchFamily f, int k, bool unreal = false) { return parse_aag(gen_benchmark({f, k, unreal})); }

} // namespace

TEST(Portfolio, VerdictsMatchOracle) {
  std::vector<BenchParams> suite{{BenchFamily::Cnt, 3, false}, {BenchFamily::Cnt, 3, true},
                                 {BenchFamily::Mv, 3, false},  {BenchFamily::Mv, 3, true},
                                 {BenchFamily::Add, 2, false}, {BenchFamily::Mult, 2, true}};
  for (const BenchParams &p : suite) {
    SafetySpec s = parse_aag(gen_benchmark(p));
    bool real = explicit_realizable(build_explicit_game(s), explicit_attractor(s));
    for (unsigned t : {1u, 2u, 3u}) {
      PortfolioConfig cfg;
      cfg.threads = t;
      PortfolioWinResult r = run_portfolio_win(s, cfg);
      EXPECT_EQ(r.outcome.verdict, real ? Realizability::Realizable : Realizability::Unrealizable)
          << bench_name(p) << " threads=" << t << " " << r.outcome.origin;
      EXPECT_EQ(r.engines.size(), t);
      if (real && r.outcome.verdict == Realizability::Realizable)
        EXPECT_TRUE(check_winning_area(s, r.outcome.w).ok());
    }
  }
}

TEST(Portfolio, SharingKeepsVerdicts) {
  SafetySpec s = bench(BenchFamily::Cnt, 6);
  PortfolioConfig cfg;
  cfg.threads = 3;
  PortfolioWinResult r = run_portfolio_win(s, cfg);
  ASSERT_EQ(r.outcome.verdict, Realizability::Realizable);
  EXPECT_TRUE(check_winning_area(s, r.outcome.w).ok());
  cfg.share_clauses = false;
  EXPECT_EQ(run_portfolio_win(s, cfg).outcome.verdict, Realizability::Realizable);
}

TEST(Portfolio, CancelledByCaller) {
  std::stop_source src;
  src.request_stop();
  Budget b(-1, src.get_token());
  PortfolioConfig cfg;
  cfg.threads = 3;
  cfg.budget = &b;
  PortfolioWinResult r = run_portfolio_win(bench(BenchFamily::Cnt, 8), cfg);
  EXPECT_EQ(r.outcome.verdict, Realizability::Unknown);
}

TEST(Portfolio, ExtractPicksSmallest) {
  for (auto [fam, k] : std::vector<std::pair<BenchFamily, int>>{{BenchFamily::Cnt, 4}, {BenchFamily::Add, 2}}) {
    SafetySpec s = bench(fam, k);
    WinningOutcome o = sat_win1(s);
    ASSERT_EQ(o.verdict, Realizability::Realizable);
    PortfolioConfig cfg;
    cfg.threads = 3;
    cfg.wait_ratio = std::numeric_limits<double>::infinity();
    PortfolioExtractResult r = run_portfolio_extract(s, o.w, cfg);
    size_t best = SIZE_MAX;
    for (const ExtractCandidate &c : r.candidates) {
      EXPECT_TRUE(c.finished && c.verified) << c.origin << " " << c.error;
      best = std::min(best, c.gates);
    }
    EXPECT_EQ(r.best.stats.gates, best);
    EXPECT_TRUE(verify_controller(s, r.best.circuit, o.w).ok());
  }
}

TEST(Portfolio, ExtractSingleThread) {
  SafetySpec s = bench(BenchFamily::Mv, 3);
  WinningOutcome o = sat_win1(s);
  PortfolioConfig cfg;
  PortfolioExtractResult r = run_portfolio_extract(s, o.w, cfg);
  ASSERT_EQ(r.candidates.size(), 1u);
  EXPECT_EQ(r.candidates[0].origin, "sat-learn-dep");
  EXPECT_TRUE(explicit_closed_loop_safe(s, r.best.circuit));
}

TEST(Portfolio, ExtractRejectsBadArea) {
  SafetySpec s = bench(BenchFamily::Cnt, 3);
  EXPECT_THROW(run_portfolio_extract(s, CnfFormula{}, {}), CertificateError);
}

// Every clause a sat1-rge thread broadcasts keeps the winning states that
// some implementation can reach from I.
TEST(Portfolio, BroadcastClausesAreSound) {
  std::vector<BenchParams> suite{{BenchFamily::Cnt, 4, false}, {BenchFamily::Mv, 3, false},
                                 {BenchFamily::Add, 2, false}, {BenchFamily::Bs, 4, false},
                                 {BenchFamily::Cnt, 3, true}};
  for (const BenchParams &p : suite) {
    SafetySpec s = parse_aag(gen_benchmark(p));
    ExplicitGame g = build_explicit_game(s);
    StateSet win = explicit_attractor(g);
    StateSet reach(g.num_states());
    std::vector<uint32_t> todo;
    for (uint32_t st = 0; st < g.num_states(); ++st)
      if (g.initial[st] && win[st]) {
        reach[st] = true;
        todo.push_back(st);
      }
    while (!todo.empty()) {
      uint32_t st = todo.back();
      todo.pop_back();
      for (uint32_t c = 0; c < (1u << g.nc); ++c) {
        bool stays = true;
        for (uint32_t i = 0; i < (1u << g.ni) && stays; ++i)
          stays = win[g.next(st, i, c)];
        if (!stays)
          continue;
        for (uint32_t i = 0; i < (1u << g.ni); ++i) {
          uint32_t n = g.next(st, i, c);
          if (!reach[n]) {
            reach[n] = true;
            todo.push_back(n);
          }
        }
      }
    }
    std::vector<Clause> sent;
    WinConfig wc;
    wc.opt_rg = true;
    wc.expand_gen = true;
    wc.on_clause = [&](const Clause &c) { sent.push_back(c); };
    sat_win1(s, wc);
    ASSERT_FALSE(sent.empty()) << bench_name(p);
    for (const Clause &c : sent) {
      StateSet kept = cnf_to_states(s, CnfFormula{c});
      for (uint32_t st = 0; st < g.num_states(); ++st)
        EXPECT_FALSE(reach[st] && !kept[st]) << bench_name(p) << " " << to_string(c) << " state " << st;
    }
  }
}
