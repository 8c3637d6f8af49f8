#include <gtest/gtest.h>

#include <random>

#include "dkforget/forget.hpp"
#include "support.hpp"

using namespace dkforget;
using namespace dkforget::test_support;

namespace {

const System kK{Base::K, Lang::D};

// No counter-model in either direction within the bound.
void expect_equivalent(const Formula& a, const Formula& b, Base base, int worlds, const std::vector<std::string>& atoms,
                       int agents) {
  EXPECT_NE(brute_entails(a, b, base, worlds, atoms, agents).kind, OracleKind::False)
      << render_formula(a) << " vs " << render_formula(b);
  EXPECT_NE(brute_entails(b, a, base, worlds, atoms, agents).kind, OracleKind::False)
      << render_formula(b) << " vs " << render_formula(a);
}

}  // namespace

TEST(Forget, PropositionalExamples) {
  Budget budget;
  auto r = forget(parse_formula("p & q"), "p", kK, 1, budget);
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.path, ForgetPath::KDTDirect);
  expect_equivalent(r.interpolant, parse_formula("q"), Base::K, 2, {"q"}, 1);
  auto t = forget(parse_formula("p | ~p"), "p", kK, 1, budget);
  expect_equivalent(t.interpolant, mk_top(), Base::K, 2, {"q"}, 1);
}

TEST(Forget, ModalExample) {
  Budget budget;
  // Agent 1 sees only p-worlds and agent 2 only ~p-worlds, so no world is shared.
  auto r = forget(parse_formula("K 1 (p & q) & K 2 ~p"), "p", kK, 2, budget);
  expect_equivalent(r.interpolant, parse_formula("K 1 q & D {1,2} false"), Base::K, 3, {"q"}, 2);
}

TEST(Forget, NoOpWhenAbsent) {
  auto r = forget(parse_formula("K 1 q"), "p", kK, 1, Budget{});
  EXPECT_EQ(r.path, ForgetPath::NoOp);
  EXPECT_TRUE(structurally_equal(r.interpolant, parse_formula("K 1 q")));
}

TEST(Forget, ResultNeverMentionsTheAtom) {
  std::mt19937_64 rng(71);
  for (Base base : {Base::K, Base::T, Base::S5})
    for (int i = 0; i < 15; ++i) {
      Formula f = random_formula({"p", "q"}, 2, 1, rng);
      ForgetResult r;
      try {
        r = forget(f, "p", System{base, Lang::D}, 2, Budget{});
      } catch (const ForgetError& e) {
        EXPECT_EQ(e.kind(), ForgetError::Kind::Unsat) << e.what();
        continue;
      }
      EXPECT_FALSE(atoms_of(r.interpolant).count("p")) << render_formula(f);
      EXPECT_LE(modal_depth(r.interpolant), std::max(1, modal_depth(f)));
    }
}

TEST(Forget, Idempotent) {
  std::mt19937_64 rng(72);
  for (int i = 0; i < 10; ++i) {
    Formula f = random_formula({"p", "q"}, 1, 1, rng);
    try {
      auto once = forget(f, "p", kK, 1, Budget{});
      auto twice = forget(once.interpolant, "p", kK, 1, Budget{});
      EXPECT_EQ(twice.path, ForgetPath::NoOp);
    } catch (const ForgetError& e) {
      EXPECT_EQ(e.kind(), ForgetError::Kind::Unsat);
    }
  }
}

TEST(Forget, DistributesOverDisjunction) {
  std::mt19937_64 rng(73);
  for (int i = 0; i < 8; ++i) {
    Formula a = random_formula({"p", "q"}, 1, 1, rng);
    Formula b = random_formula({"p", "q"}, 1, 1, rng);
    auto fa = [&](const Formula& f) -> Formula {
      try {
        return forget(f, "p", kK, 1, Budget{}).interpolant;
      } catch (const ForgetError& e) {
        if (e.kind() != ForgetError::Kind::Unsat) throw;
        return mk_bot();
      }
    };
    expect_equivalent(fa(mk_or(a, b)), mk_or(fa(a), fa(b)), Base::K, 3, {"q"}, 1);
  }
}

TEST(Forget, TransitiveEuclideanPaths) {
  Budget budget;
  auto d1 = forget(parse_formula("K 1 p & ~K 2 q"), "p", System{Base::KD45, Lang::D}, 2, budget);
  EXPECT_EQ(d1.path, ForgetPath::Depth1Direct);
  VocabId v = vocab_of({"p", "q"}, 2);
  for (const auto& m : random_models({"p", "q"}, 2, Base::S5, 3, 10, 74)) {
    CanonId d = canonical_of_model(m, 0, v, 2);
    auto d2 = forget_canonical(d, "p", Base::S5, budget);
    EXPECT_EQ(d2.path, ForgetPath::TwoAgentDirect);
    EXPECT_EQ(d2.disjuncts, std::vector<CanonId>{eliminate_in_canonical(d, "p")});
  }
  ForgetOptions force;
  force.force_extensions = true;
  VocabId v3 = vocab_of({"p"}, 3);
  KripkeModel one = parse_model("agents 3\natoms p\nworld s p=1\nedge 1 s s\nedge 2 s s\nedge 3 s s\nactual s\n");
  EXPECT_EQ(forget_canonical(canonical_of_model(one, 0, v3, 2), "p", Base::S5, budget, force).path,
            ForgetPath::ExtensionEnumeration);
}

TEST(Forget, PartialResultKeepsItsPath) {
  Budget tiny;
  tiny.max_nodes = 10;
  auto r = forget(parse_formula("K 1 K 2 (p | q)"), "p", System{Base::S5, Lang::D}, 2, tiny);
  EXPECT_FALSE(r.complete);
  EXPECT_EQ(r.path, ForgetPath::TwoAgentDirect);
}

TEST(Forget, Errors) {
  Budget budget;
  try {
    forget(parse_formula("C p & K 1 p"), "p", System{Base::K45, Lang::DPC}, 1, budget);
    FAIL() << "accepted an unsupported combination";
  } catch (const ForgetError& e) {
    EXPECT_EQ(e.kind(), ForgetError::Kind::Unsupported);
  }
  try {
    forget(parse_formula("C p"), "p", kK, 1, budget);
    FAIL() << "accepted C outside the dpc language";
  } catch (const ForgetError& e) {
    EXPECT_EQ(e.kind(), ForgetError::Kind::Input);
  }
  try {
    forget(parse_formula("p & ~p"), "p", kK, 1, budget);
    FAIL() << "accepted an unsatisfiable formula";
  } catch (const ForgetError& e) {
    EXPECT_EQ(e.kind(), ForgetError::Kind::Unsat);
  }
}

TEST(Forget, DpcCommonKnowledgeSurvives) {
  auto r = forget(parse_formula("C (p & q)"), "p", System{Base::S5, Lang::DPC}, 2, Budget{});
  EXPECT_EQ(r.path, ForgetPath::DpcDirect);
  expect_equivalent(r.interpolant, parse_formula("C q"), Base::S5, 3, {"q"}, 2);
}

TEST(Verify, PassesForAForgottenFormula) {
  Formula phi = parse_formula("p & K 1 (p | q)");
  auto r = forget(phi, "p", kK, 1, Budget{});
  VerifyOptions opts;
  opts.max_worlds = 3;
  auto rep = verify_uniform_interpolant(phi, r.interpolant, "p", kK, 1, Budget{}, opts);
  EXPECT_TRUE(rep.all_pass()) << rep.entailment.detail << "; " << rep.consequence.detail << "; " << rep.back.detail;
}

TEST(Verify, RejectsTooStrongAndTooWeak) {
  Formula phi = parse_formula("p & K 1 q");
  VerifyOptions opts;
  opts.max_worlds = 3;
  auto strong = verify_uniform_interpolant(phi, parse_formula("K 1 q & q"), "p", kK, 1, Budget{}, opts);
  EXPECT_EQ(strong.entailment.verdict, Check::Fail);
  auto weak = verify_uniform_interpolant(phi, mk_top(), "p", kK, 1, Budget{}, opts);
  EXPECT_EQ(weak.entailment.verdict, Check::Pass);
  EXPECT_EQ(weak.back.verdict, Check::Fail);
  auto mentions = verify_uniform_interpolant(phi, parse_formula("p"), "p", kK, 1, Budget{}, opts);
  EXPECT_FALSE(mentions.all_pass());
}

TEST(Names, Stable) {
  EXPECT_EQ(path_name(ForgetPath::KDTDirect), "kdt-direct");
  EXPECT_EQ(path_name(ForgetPath::DpcExtension), "dpc-extension");
  EXPECT_EQ(check_name(Check::Unknown), "unknown");
}
