#include <gtest/gtest.h>

#include "brute_force.hpp"
#include "generators.hpp"
#include "smlab/error.hpp"
#include "smlab/sat_reduction.hpp"

namespace smlab {
namespace {

TEST(SatReduction, UnitClause) {
  const Cnf cnf{1, {{1}}};
  const MixedInstance inst = reduce_3sat(cnf);
  EXPECT_EQ(inst.n, 3);
  EXPECT_TRUE(testing::mixed_consistent_by_filter(inst));
  EXPECT_TRUE(decide_mixed_consistent(inst));
}

TEST(SatReduction, Contradiction) {
  const Cnf cnf{1, {{1}, {-1}}};
  EXPECT_FALSE(satisfiable_by_truth_table(cnf));
  EXPECT_FALSE(testing::mixed_consistent_by_filter(reduce_3sat(cnf)));
  EXPECT_FALSE(decide_mixed_consistent(reduce_3sat(cnf)));
}

TEST(SatReduction, MixedExamples) {
  EXPECT_TRUE(decide_mixed_consistent(MixedInstance{}));
  MixedInstance both{2, {make_constraint(1, {0})}, {make_constraint(1, {0})}};
  EXPECT_FALSE(decide_mixed_consistent(both));
  EXPECT_FALSE(testing::mixed_consistent_by_filter(both));
}

TEST(SatReduction, RandomFormulasAgree) {
  Rng rng(31);
  for (int t = 0; t < 60; ++t) {
    const int v = 1 + rng.uniform_index(4);
    const Cnf cnf = testing::random_cnf(v, 1 + rng.uniform_index(6), rng);
    const bool sat = testing::cnf_satisfiable_by_search(cnf);
    EXPECT_EQ(satisfiable_by_truth_table(cnf), sat);
    const MixedInstance inst = reduce_3sat(cnf);
    EXPECT_EQ(decide_mixed_consistent(inst), sat);
    if (v <= 3) EXPECT_EQ(testing::mixed_consistent_by_filter(inst), sat);
  }
}

TEST(SatReduction, MalformedClauses) {
  EXPECT_THROW(reduce_3sat(Cnf{2, {{}}}), Error);
  EXPECT_THROW(reduce_3sat(Cnf{4, {{1, 2, 3, 4}}}), Error);
  EXPECT_THROW(reduce_3sat(Cnf{1, {{2}}}), Error);
}

TEST(SatReduction, DimacsRoundTrip) {
  Rng rng(32);
  for (int t = 0; t < 50; ++t) {
    const Cnf cnf = testing::random_cnf(1 + rng.uniform_index(4), 1 + rng.uniform_index(6), rng);
    const Cnf back = parse_dimacs(write_dimacs(cnf));
    EXPECT_EQ(back.num_vars, cnf.num_vars);
    EXPECT_EQ(back.clauses, cnf.clauses);
  }
  const Cnf c = parse_dimacs("c comment\np cnf 2 2\n1 -2 0\n2 0\n");
  EXPECT_EQ(c.clauses, (std::vector<std::vector<int>>{{1, -2}, {2}}));
  EXPECT_THROW(parse_dimacs("1 2 0\n"), Error);
}

TEST(SatReduction, CapEnforced) {
  const Cnf cnf{5, {{1, 2, 3}}};
  try {
    decide_mixed_consistent(reduce_3sat(cnf));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

}  // namespace
}  // namespace smlab
