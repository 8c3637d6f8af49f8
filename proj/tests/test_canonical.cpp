#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dkforget/canonical.hpp"
#include "dkforget/fixtures.hpp"
#include "dkforget/sat.hpp"
#include "support.hpp"

using namespace dkforget;
using namespace dkforget::test_support;

namespace {

CanonSet none() { return {}; }

std::vector<CanonSet> groups(VocabId v, std::vector<std::pair<AgentMask, CanonSet>> given) {
  std::vector<CanonSet> ch(vocab(v).group_count());
  for (auto& [g, s] : given) ch[g - 1] = s;
  return ch;
}

}  // namespace

TEST(Interning, EqualShapesShareAHandle) {
  VocabId v = vocab_of({"p"}, 1);
  CanonId a = canon_make(v, 1, 1, 0, groups(v, {{1, {canon_leaf(v, 0), canon_leaf(v, 1)}}}));
  CanonId b = canon_make(v, 1, 1, 0, groups(v, {{1, {canon_leaf(v, 1), canon_leaf(v, 0), canon_leaf(v, 1)}}}));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, canon_make(v, 1, 0, 0, groups(v, {{1, {canon_leaf(v, 0), canon_leaf(v, 1)}}})));
}

TEST(CanonicalOfModel, OneWorld) {
  VocabId v = vocab_of({"p", "q"}, 1);
  KripkeModel m = parse_model("agents 1\natoms p q\nworld s p=0 q=1\nedge 1 s s\nactual s\n");
  CanonId d0 = canonical_of_model(m, 0, v, 0);
  EXPECT_EQ(d0, canon_leaf(v, 2));
  CanonId d1 = canonical_of_model(m, 0, v, 1);
  EXPECT_EQ(d1, canon_make(v, 1, 2, 0, groups(v, {{1, {d0}}})));
  EXPECT_EQ(render_formula(canonical_to_formula(d0)), "~p & q");
}

TEST(CanonicalOfModel, NoSuccessorsGivesEmptySets) {
  VocabId v = vocab_of({"p"}, 2);
  KripkeModel m = parse_model("agents 2\natoms p\nworld s p=1\nactual s\n");
  CanonId d = canonical_of_model(m, 0, v, 1);
  for (AgentMask g : nonempty_groups(2)) EXPECT_TRUE(canon_children(d, g).empty());
  EXPECT_TRUE(entails(d, parse_formula("K 1 false")));
}

TEST(CanonicalOfModel, GroupChildrenFollowIntersections) {
  VocabId v = vocab_of({"p", "q"}, 3);
  KripkeModel m = counter_left();
  CanonId d = canonical_of_model(m, m.world("t2"), v, 1);
  std::set<Minterm> seen;
  for (CanonId c : canon_children(d, agent_bit(1) | agent_bit(2))) seen.insert(canon_minterm(c));
  // t2 is p & ~q, t4 is p & q.
  EXPECT_EQ(seen, (std::set<Minterm>{1, 3}));
}

TEST(CanonicalOfModel, SubVocabularyMatchesElimination) {
  VocabId full = vocab_of({"p", "q"}, 2);
  VocabId reduced = vocab_of({"q"}, 2);
  for (const auto& m : random_models({"p", "q"}, 2, Base::K, 3, 80, 31))
    for (int k = 0; k <= 2; ++k)
      EXPECT_EQ(eliminate_in_canonical(canonical_of_model(m, 0, full, k), "p"), canonical_of_model(m, 0, reduced, k));
}

TEST(CanonicalOfModel, CharacterizesTheWorld) {
  std::mt19937_64 rng(32);
  VocabId v = vocab_of({"p", "q"}, 2);
  for (const auto& m : random_models({"p", "q"}, 2, Base::K, 3, 60, 32)) {
    CanonId d = canonical_of_model(m, 0, v, 2);
    EXPECT_TRUE(evaluate(m, 0, canonical_to_formula(d)));
    for (int i = 0; i < 20; ++i) {
      Formula f = random_formula({"p", "q"}, 2, 2, rng);
      ASSERT_EQ(entails(d, f), evaluate(m, 0, f)) << render_formula(f);
      ASSERT_NE(entails(d, f), entails(d, mk_not(f)));
    }
  }
}

TEST(CanonicalOfModel, DpcClosureListsReachableMinterms) {
  VocabId v = vocab_of({"p"}, 1, true);
  KripkeModel m = parse_model("agents 1\natoms p\nworld s p=0\nworld t p=1\nedge 1 s t\nedge 1 t t\nactual s\n");
  CanonId d = canonical_of_model(m, 0, v, 0);
  EXPECT_EQ(canon_tc(d), MintermSet{1} << 1);
  EXPECT_TRUE(entails(d, parse_formula("C p")));
  EXPECT_FALSE(entails(d, parse_formula("C ~p")));
}

TEST(Prune, UpAndDownExamples) {
  VocabId v = vocab_of({"p"}, 1);
  CanonId leaf0 = canon_leaf(v, 0), leaf1 = canon_leaf(v, 1);
  CanonId mid = canon_make(v, 1, 1, 0, groups(v, {{1, {leaf0}}}));
  CanonId top = canon_make(v, 2, 0, 0, groups(v, {{1, {mid}}}));
  EXPECT_EQ(prune_up(top, 0), leaf0);
  EXPECT_EQ(prune_up(top, 1), canon_make(v, 1, 0, 0, groups(v, {{1, {leaf1}}})));
  EXPECT_EQ(prune_up(top, 5), top);
  EXPECT_EQ(prune_down(top, 0), top);
  EXPECT_EQ(prune_down(top, 2), leaf0);
  // prune_down drops the bottom levels, so it meets prune_up from the other side.
  EXPECT_EQ(prune_down(top, 1), prune_up(top, 1));
  EXPECT_THROW(prune_down(top, 3), CanonError);
}

TEST(Prune, LawsOnSampledModels) {
  VocabId v = vocab_of({"p", "q"}, 2);
  for (const auto& m : random_models({"p", "q"}, 2, Base::KD45, 4, 60, 33)) {
    CanonId d = canonical_of_model(m, 0, v, 3);
    for (int a = 0; a <= 3; ++a) {
      EXPECT_EQ(prune_up(d, a), canonical_of_model(m, 0, v, a));
      for (int b = 0; a + b <= 3; ++b) EXPECT_EQ(prune_up(prune_down(d, a), b), prune_down(prune_up(d, a + b), a));
    }
  }
}

TEST(Eliminate, CollapsesMinterms) {
  VocabId v = vocab_of({"p", "q"}, 1);
  CanonId a = canon_make(v, 1, 0, 0, groups(v, {{1, {canon_leaf(v, 2), canon_leaf(v, 3)}}}));
  CanonId e = eliminate_in_canonical(a, "p");
  VocabId w = eliminated_vocab(v, "p");
  EXPECT_EQ(vocab(w).atoms, std::vector<std::string>{"q"});
  EXPECT_EQ(e, canon_make(w, 1, 0, 0, groups(w, {{1, {canon_leaf(w, 1)}}})));
  EXPECT_EQ(eliminate_minterm(0b101, 1), 0b11u);
  EXPECT_EQ(eliminate_minterm(0b101, 0), 0b10u);
}

TEST(Eliminate, CounterexampleReductIsSatisfiedByTheRightModel) {
  KripkeModel r = counter_right();
  EXPECT_TRUE(evaluate(r, *r.actual, canonical_to_formula(eliminate_in_canonical(delta2cou(), "p"))));
}

TEST(Entails, Examples) {
  VocabId v = vocab_of({"p"}, 2);
  CanonId d = canon_make(v, 1, 1, 0, groups(v, {{1, {canon_leaf(v, 0)}}, {2, {canon_leaf(v, 1)}}, {3, none()}}));
  EXPECT_TRUE(entails(d, parse_formula("p & K 1 ~p & K 2 p")));
  EXPECT_TRUE(entails(d, parse_formula("D {1,2} false")));
  EXPECT_FALSE(entails(d, parse_formula("K 1 p")));
  EXPECT_TRUE(entails(d, parse_formula("~D {1} p")));
}

TEST(WhollyOccurring, RootFirstAndUnique) {
  CanonId d = delta2cou();
  auto w = wholly_occurring(d);
  ASSERT_FALSE(w.empty());
  EXPECT_EQ(w.front(), d);
  std::set<CanonId> u(w.begin(), w.end());
  EXPECT_EQ(u.size(), w.size());
  for (CanonId c : w) EXPECT_LE(canon_depth(c), 2);
}

TEST(Decompose, PropositionalExamples) {
  Budget budget;
  VocabId v = vocab_of({"p"}, 1);
  auto p = decompose(parse_formula("p"), v, Base::K, 0, budget);
  EXPECT_TRUE(p.complete);
  EXPECT_EQ(p.items, CanonSet{canon_leaf(v, 1)});
  auto t = decompose(mk_top(), v, Base::K, 0, budget);
  EXPECT_EQ(t.items.size(), 2u);
  EXPECT_TRUE(decompose(parse_formula("p & ~p"), v, Base::K, 0, budget).items.empty());
}

TEST(Decompose, DepthOneCounts) {
  Budget budget;
  VocabId v = vocab_of({"p"}, 1);
  // Root minterm times successor set: 2 * 4 under K, the empty set dropped under D.
  EXPECT_EQ(decompose(mk_top(), v, Base::K, 1, budget).items.size(), 8u);
  EXPECT_EQ(decompose(mk_top(), v, Base::D, 1, budget).items.size(), 6u);
  // Under T the root minterm must be a successor: 2 * 2.
  EXPECT_EQ(decompose(mk_top(), v, Base::T, 1, budget).items.size(), 4u);
}

TEST(Decompose, MatchesModelsAtDepthOne) {
  std::mt19937_64 rng(34);
  Budget budget;
  VocabId v = vocab_of({"p", "q"}, 1);
  for (Base base : {Base::K, Base::T, Base::KD45, Base::S5})
    for (int i = 0; i < 15; ++i) {
      Formula f = random_formula({"p", "q"}, 1, 1, rng);
      auto got = decompose(f, v, base, 1, budget);
      ASSERT_TRUE(got.complete);
      std::set<CanonId> want;
      // Every formula realized in a small model must be among the candidates.
      enumerate_models({"p", "q"}, 1, base, 3, [&](const KripkeModel& m) {
        if (evaluate(m, 0, f)) want.insert(canonical_of_model(m, 0, v, 1));
        return true;
      });
      for (CanonId c : want)
        EXPECT_TRUE(std::binary_search(got.items.begin(), got.items.end(), c)) << render_formula(f);
      for (CanonId c : got.items) EXPECT_TRUE(entails(c, f));
    }
}
