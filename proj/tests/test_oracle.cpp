#include <gtest/gtest.h>

#include <random>

#include "dkforget/oracle.hpp"

using namespace dkforget;

TEST(RelationCount, SmallFrames) {
  EXPECT_EQ(relation_count(Base::K, 1), 2u);
  EXPECT_EQ(relation_count(Base::K, 2), 16u);
  EXPECT_EQ(relation_count(Base::T, 2), 4u);
  EXPECT_EQ(relation_count(Base::S5, 1), 1u);
  EXPECT_EQ(relation_count(Base::S5, 3), 5u);
  EXPECT_EQ(relation_count(Base::KD45, 2), 4u);
  EXPECT_EQ(relation_count(Base::K45, 2), 7u);
}

TEST(Enumerate, OneWorldCounts) {
  std::size_t k = 0, s5 = 0;
  enumerate_models_of_size({"p"}, 1, Base::K, 1, [&](const KripkeModel&) { return ++k, true; });
  enumerate_models_of_size({"p"}, 1, Base::S5, 1, [&](const KripkeModel&) { return ++s5, true; });
  EXPECT_EQ(k, 4u);
  EXPECT_EQ(s5, 2u);
}

TEST(Enumerate, ConformsToTheFrame) {
  for (Base b : {Base::K, Base::D, Base::T, Base::K45, Base::KD45, Base::S5}) {
    std::size_t n = 0;
    enumerate_models({"p"}, 2, b, 3, [&](const KripkeModel& m) {
      ++n;
      EXPECT_TRUE(check_frame(m, b).verdict) << base_name(b);
      EXPECT_EQ(m.actual, std::optional<int>(0));
      return n < 5000;
    });
    EXPECT_GT(n, 0u);
  }
}

TEST(Enumerate, RootedOnlySkipsUnreachableWorlds) {
  EnumOptions opts;
  opts.rooted_only = true;
  enumerate_models({"p"}, 1, Base::K, 3, [&](const KripkeModel& m) {
    auto r = reachable(m, 0);
    for (int w = 1; w < m.size(); ++w) EXPECT_TRUE(std::binary_search(r.begin(), r.end(), w));
    return true;
  }, opts);
}

TEST(Enumerate, Limit) {
  EnumOptions opts;
  opts.limit = 7;
  std::size_t n = 0;
  EXPECT_FALSE(enumerate_models({"p"}, 1, Base::K, 3, [&](const KripkeModel&) { return ++n, true; }, opts));
  EXPECT_EQ(n, 7u);
}

TEST(Sample, DeterministicAndConforming) {
  std::vector<std::string> a, b;
  sample_models({"p", "q"}, 2, Base::S5, 4, 20, 9, [&](const KripkeModel& m) {
    EXPECT_TRUE(check_frame(m, Base::S5).verdict);
    a.push_back(serialize_model(m));
    return true;
  });
  sample_models({"p", "q"}, 2, Base::S5, 4, 20, 9, [&](const KripkeModel& m) {
    b.push_back(serialize_model(m));
    return true;
  });
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 20u);
}

TEST(NaiveEval, AgreesWithEvaluate) {
  std::mt19937_64 rng(41);
  sample_models({"p", "q"}, 3, Base::K, 4, 200, 41, [&](const KripkeModel& m) {
    for (int i = 0; i < 10; ++i) {
      Formula f = random_formula({"p", "q"}, 3, 3, rng, true);
      for (int w = 0; w < m.size(); ++w) EXPECT_EQ(naive_eval(m, w, f), evaluate(m, w, f)) << render_formula(f);
    }
    return true;
  });
}

TEST(BruteSat, Examples) {
  EXPECT_EQ(brute_sat(parse_formula("p & ~p"), Base::K, 2).kind, OracleKind::Unknown);
  EXPECT_EQ(brute_sat(parse_formula("K 1 p & ~p"), Base::K, 2).kind, OracleKind::True);
  EXPECT_EQ(brute_sat(parse_formula("K 1 p & ~p"), Base::T, 2).kind, OracleKind::Unknown);
  EXPECT_EQ(brute_sat(parse_formula("K 1 false"), Base::D, 2).kind, OracleKind::Unknown);
  auto v = brute_sat(parse_formula("~K 1 p & ~K 1 ~p"), Base::S5, 3);
  ASSERT_EQ(v.kind, OracleKind::True);
  ASSERT_TRUE(v.model);
  EXPECT_GE(v.model->size(), 2);
  EXPECT_TRUE(evaluate(*v.model, *v.model->actual, parse_formula("~K 1 p & ~K 1 ~p")));
}

TEST(BruteEntails, GroupMonotonicity) {
  Formula small = parse_formula("D {1} p");
  Formula big = parse_formula("D {1,2} p");
  EXPECT_EQ(brute_entails(small, big, Base::K, 3).kind, OracleKind::Unknown);
  auto v = brute_entails(big, small, Base::K, 3);
  ASSERT_EQ(v.kind, OracleKind::False);
  ASSERT_TRUE(v.model);
  EXPECT_TRUE(evaluate(*v.model, *v.model->actual, big));
  EXPECT_FALSE(evaluate(*v.model, *v.model->actual, small));
}

TEST(BruteGuard, RejectsLargeInstances) {
  EXPECT_THROW(brute_sat(parse_formula("p"), Base::K, kOracleMaxWorlds + 1), OracleGuardError);
  EXPECT_THROW(brute_sat(parse_formula("a & b & c & d"), Base::K, 1), OracleGuardError);
}

TEST(RandomFormula, RespectsBounds) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula({"q"}, 2, 2, rng, true);
    EXPECT_LE(modal_depth(f), 2);
    EXPECT_LE(max_agent(f), 2);
    EXPECT_TRUE(is_dpc_formula(f));
    for (const auto& a : atoms_of(f)) EXPECT_EQ(a, "q");
  }
}
