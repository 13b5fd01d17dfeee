#include "safesynth/qbf.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace safesynth;
using namespace safesynth::testing;

namespace {

/// Brute-force semantics: exists a, forall b, exists c.
bool brute(const TwoQbfQuery &q) {
  std::vector<Var> all = q.a;
  all.insert(all.end(), q.b.begin(), q.b.end());
  all.insert(all.end(), q.c.begin(), q.c.end());
  auto get = [](const Assignment &m, Var v) { return m.at(v); };
  for (uint64_t ab = 0; ab < (1ull << q.a.size()); ++ab) {
    bool all_b = true;
    for (uint64_t bb = 0; bb < (1ull << q.b.size()) && all_b; ++bb) {
      bool some_c = false;
      for (uint64_t cb = 0; cb < (1ull << q.c.size()) && !some_c; ++cb) {
        Assignment m = assignment_of(q.a, ab);
        for (auto [v, x] : assignment_of(q.b, bb))
          m[v] = x;
        for (auto [v, x] : assignment_of(q.c, cb))
          m[v] = x;
        some_c = q.matrix.eval([&](Var v) { return get(m, v); });
      }
      all_b = some_c;
    }
    if (all_b)
      return true;
  }
  return false;
}

TwoQbfQuery random_query(std::mt19937_64 &rng, size_t na, size_t nb, size_t nc, int clauses) {
  TwoQbfQuery q;
  q.a = fresh_vars(na);
  q.b = fresh_vars(nb);
  q.c = fresh_vars(nc);
  std::vector<Var> all = q.a;
  all.insert(all.end(), q.b.begin(), q.b.end());
  all.insert(all.end(), q.c.begin(), q.c.end());
  q.matrix = random_cnf(rng, all, clauses, 3);
  return q;
}

} // namespace

TEST(Qbf, ExistsForallOr) {
  auto v = fresh_vars(2);
  TwoQbfQuery q{{v[0]}, {v[1]}, {}, CnfFormula{Clause{pos(v[0]), pos(v[1])}}};
  auto r = qbf_solve(q);
  ASSERT_TRUE(r.sat);
  EXPECT_EQ(r.model, Cube{pos(v[0])});
}

TEST(Qbf, XorUnsat) {
  auto v = fresh_vars(2);
  TwoQbfQuery q{{v[0]},
                {v[1]},
                {},
                CnfFormula{Clause{pos(v[0]), pos(v[1])}, Clause{neg(v[0]), neg(v[1])}}};
  EXPECT_FALSE(qbf_solve(q).sat);
  EXPECT_FALSE(qbf_solve_expansion(q).sat);
}

TEST(Qbf, SkolemizedInner) {
  auto v = fresh_vars(2);
  TwoQbfQuery q{{}, {v[0]}, {v[1]},
                CnfFormula{Clause{pos(v[0]), neg(v[1])}, Clause{neg(v[0]), pos(v[1])}}};
  EXPECT_TRUE(qbf_solve(q).sat);
  EXPECT_TRUE(qbf_solve_expansion(q).sat);
}

TEST(Qbf, ValidateRejectsUnboundVar) {
  auto v = fresh_vars(2);
  TwoQbfQuery q{{v[0]}, {}, {}, CnfFormula{Clause{pos(v[0]), pos(v[1])}}};
  EXPECT_THROW(qbf_solve(q), std::invalid_argument);
  q.complete_inner();
  EXPECT_NO_THROW(qbf_solve(q));
}

TEST(Qbf, ExpansionBound) {
  TwoQbfQuery q;
  q.b = fresh_vars(17);
  EXPECT_THROW(qbf_solve_expansion(q), std::length_error);
}

TEST(Qbf, IterationBudget) {
  std::mt19937_64 rng(1);
  // x_k <-> y_k for all k needs one refinement per universal assignment.
  TwoQbfQuery q;
  q.b = fresh_vars(6);
  q.c = fresh_vars(6);
  for (size_t k = 0; k < 6; ++k) {
    q.matrix.add_clause(Clause{pos(q.b[k]), neg(q.c[k])});
    q.matrix.add_clause(Clause{neg(q.b[k]), pos(q.c[k])});
  }
  QbfConfig cfg;
  cfg.max_iterations = 2;
  EXPECT_THROW(qbf_solve(q, cfg), QbfResourceError);
  EXPECT_TRUE(qbf_solve(q).sat);
}

TEST(Qbf, RandomAgainstBruteForce) {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 200; ++round) {
    auto q = random_query(rng, 1 + rng() % 3, 1 + rng() % 3, rng() % 3, 3 + rng() % 10);
    auto r = qbf_solve(q);
    ASSERT_EQ(r.sat, brute(q)) << round;
    if (r.sat)
      EXPECT_TRUE(qbf_validate_model(q, r.model));
  }
}

TEST(Qbf, RandomAgainstExpansion) {
  std::mt19937_64 rng(123);
  for (int round = 0; round < 100; ++round) {
    auto q = random_query(rng, 4, 4, 4, 10 + rng() % 30);
    auto r = qbf_solve(q);
    ASSERT_EQ(r.sat, qbf_solve_expansion(q).sat) << round;
    if (r.sat)
      EXPECT_TRUE(qbf_validate_model(q, r.model));
  }
}

TEST(Qbf, QdimacsBlocks) {
  auto v = fresh_vars(3);
  TwoQbfQuery q{{v[0]}, {v[1]}, {v[2]}, CnfFormula{Clause{pos(v[0]), pos(v[1]), neg(v[2])}}};
  std::string s = to_qdimacs(q);
  EXPECT_NE(s.find("a " + std::to_string(v[1].id) + " 0"), std::string::npos);
  EXPECT_NE(s.find("p cnf"), std::string::npos);
}
