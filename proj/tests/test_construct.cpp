#include <gtest/gtest.h>

#include <random>

#include "dkforget/construct.hpp"
#include "dkforget/fixtures.hpp"
#include "support.hpp"

using namespace dkforget;
using namespace dkforget::test_support;

namespace {

void check_pointed(Base base, int depth, std::uint64_t seed,
                   const std::function<ConstructionResult(CanonId, const KripkeModel&)>& build) {
  std::mt19937_64 rng(seed);
  VocabId v = vocab_of({"p", "q"}, 2);
  for (const auto& m : random_models({"p", "q"}, 2, base, 3, 40, seed)) {
    CanonId d = canonical_of_model(m, 0, v, depth);
    KripkeModel src = duplicate_and_flip(m, "p", rng);
    ConstructionResult cr = build(d, src);
    auto rep = postcheck_pointed(cr, d, src, base);
    ASSERT_TRUE(rep.ok()) << rep.detail << "\n" << serialize_model(src);
  }
}

}  // namespace

TEST(Basic, KAndD) {
  for (Base base : {Base::K, Base::D})
    check_pointed(base, 2, 61 + static_cast<int>(base),
                  [&](CanonId d, const KripkeModel& s) { return build_model_basic(d, s, "p", base); });
}

TEST(Reflexive, T) {
  check_pointed(Base::T, 2, 63, [](CanonId d, const KripkeModel& s) { return build_model_reflexive(d, s, "p"); });
}

TEST(Minterm, TransitiveEuclideanDepthZero) {
  for (Base base : {Base::K45, Base::KD45, Base::S5})
    check_pointed(base, 0, 64 + static_cast<int>(base),
                  [&](CanonId d, const KripkeModel& s) { return build_model_minterm(d, s, "p", base); });
}

TEST(Minterm, RejectsModalFormulas) {
  VocabId v = vocab_of({"p"}, 1);
  KripkeModel m = parse_model("agents 1\natoms p\nworld s p=1\nedge 1 s s\nactual s\n");
  EXPECT_THROW(build_model_minterm(canonical_of_model(m, 0, v, 1), m, "p", Base::S5), ConstructionError);
}

TEST(Basic, RelationPairsTheRoots) {
  VocabId v = vocab_of({"p"}, 1);
  KripkeModel src = parse_model("agents 1\natoms p\nworld s p=0\nworld t p=0\nedge 1 s t\nactual s\n");
  KripkeModel m = parse_model("agents 1\natoms p\nworld s p=1\nworld t p=0\nedge 1 s t\nactual s\n");
  CanonId d = canonical_of_model(m, 0, v, 1);
  auto cr = build_model_basic(d, src, "p", Base::K);
  EXPECT_NE(std::find(cr.rho.pairs.begin(), cr.rho.pairs.end(), std::make_pair(*cr.model.actual, 0)),
            cr.rho.pairs.end());
  EXPECT_TRUE(evaluate(cr.model, *cr.model.actual, parse_formula("p & K 1 ~p")));
}

TEST(Equivalence, Examples) {
  KripkeModel s5 = parse_model(
      "agents 1\natoms p\nworld a p=0\nworld b p=1\nworld c p=1\n"
      "edge 1 a a\nedge 1 a b\nedge 1 b a\nedge 1 b b\nedge 1 c c\n");
  EXPECT_EQ(quasi_equivalence_check(s5, {0, 1}, agent_bit(1)), Equivalence::Full);
  EXPECT_EQ(quasi_equivalence_check(s5, {0, 1, 2}, agent_bit(1)), Equivalence::Neither);
  KripkeModel k45 = parse_model("agents 1\natoms p\nworld a p=0\nworld b p=1\nedge 1 a b\nedge 1 b b\n");
  EXPECT_EQ(quasi_equivalence_check(k45, {0, 1}, agent_bit(1)), Equivalence::Quasi);
  EXPECT_EQ(equivalence_name(Equivalence::Quasi), "quasi");
}

TEST(Merge, JoinsTwoClasses) {
  KripkeModel m = parse_model("agents 1\natoms p\nworld x p=0\nworld y p=1\nedge 1 x x\nedge 1 y y\n");
  KripkeModel out = merge_equivalent(m, {{0}, {1}}, 1);
  EXPECT_TRUE(out.has_edge(1, 0, 1));
  EXPECT_TRUE(out.has_edge(1, 1, 0));
  EXPECT_TRUE(check_frame(out, Base::S5).verdict);
  KripkeModel chain = parse_model("agents 1\natoms p\nworld x p=0\nworld y p=1\nedge 1 x y\n");
  EXPECT_THROW(merge_equivalent(chain, {{0, 1}}, 1), ConstructionError);
}

TEST(TransitiveEuclidean, RejectsBadParameters) {
  VocabId v = vocab_of({"p"}, 2);
  KripkeModel m = parse_model("agents 2\natoms p\nworld s p=1\nedge 1 s s\nedge 2 s s\nactual s\n");
  CanonId g = canonical_of_model(m, 0, v, 2);
  EXPECT_THROW(construct_transitive_euclidean(TEParams{g, g, 1, 0, 0, false}, m, "p", Base::S5), ConstructionError);
  EXPECT_THROW(construct_transitive_euclidean(TEParams{g, g, 0, 0, 0, false}, m, "p", Base::K), ConstructionError);
}

TEST(TransitiveEuclidean, TwoAgentVariant) {
  std::mt19937_64 rng(66);
  VocabId v = vocab_of({"p", "q"}, 2);
  for (Base base : {Base::K45, Base::S5})
    for (const auto& m : random_models({"p", "q"}, 2, base, 3, 20, 66 + static_cast<int>(base))) {
      CanonId g = canonical_of_model(m, 0, v, 1);
      KripkeModel src = duplicate_and_flip(m, "p", rng);
      TEParams params{g, g, 0, 0, 0, true};
      auto cr = construct_transitive_euclidean(params, src, "p", base);
      auto rep = postcheck_multipointed(cr, params, src, base);
      ASSERT_TRUE(rep.ok()) << rep.detail;
      auto rooted = attach_root(g, cr, src, base);
      auto prep = postcheck_pointed(rooted, g, src, base);
      ASSERT_TRUE(prep.ok()) << prep.detail;
    }
}

TEST(S5Dpc, DepthZeroAndOne) {
  std::mt19937_64 rng(67);
  VocabId v = vocab_of({"p", "q"}, 2, true);
  for (const auto& m : random_models({"p", "q"}, 2, Base::S5, 3, 30, 67))
    for (int depth : {0, 1}) {
      CanonId d = canonical_of_model(m, 0, v, depth);
      KripkeModel src = duplicate_and_flip(m, "p", rng);
      auto cr = construct_s5_dpc(d, d, src, "p");
      auto rep = postcheck_pointed(cr, d, src, Base::S5);
      ASSERT_TRUE(rep.ok()) << rep.detail;
    }
}

TEST(K45Dpc, KnownFailure) {
  auto f = k45dpc_fail();
  try {
    construct_k45_dpc_attempt(f.gamma, f.gamma, f.source, "p");
    FAIL() << "the construction succeeded";
  } catch (const ConstructionError& e) {
    EXPECT_NE(std::string(e.what()).find("~p & q"), std::string::npos) << e.what();
  }
}
