// Acceptance criteria: one PASS/FAIL line each. `acceptance N` runs one.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dkforget/bisim.hpp"
#include "dkforget/canonical.hpp"
#include "dkforget/construct.hpp"
#include "dkforget/fixtures.hpp"
#include "dkforget/forget.hpp"
#include "dkforget/formula.hpp"
#include "dkforget/model.hpp"
#include "dkforget/oracle.hpp"
#include "dkforget/sat.hpp"
#include "support.hpp"

using namespace dkforget;
using namespace dkforget::test_support;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
};

Outcome criterion1() {
  Outcome o;
  KripkeModel left = counter_left();
  KripkeModel right = counter_right();
  if (!check_frame(left, Base::S5).verdict) return {false, "fig3-left is not an S5 model"};
  CanonId d = delta2cou();
  if (canon_minterm(d) != 0) return {false, "delta2cou root is not ~p & ~q"};
  Formula elim = canonical_to_formula(eliminate_in_canonical(d, "p"));
  if (!evaluate(right, *right.actual, elim)) return {false, "fig3-right does not satisfy the eliminated formula"};
  auto rho = maximal_collective_p_bisim(left, right, "p");
  for (const auto& [u, v] : rho.pairs)
    if (u == *left.actual && v == *right.actual) return {false, "(s2, s') is in the maximal p-bisimulation"};
  o.detail = "S5 frame, M' |= delta^p, no (s2,s') pair among " + std::to_string(rho.pairs.size());
  return o;
}

Outcome criterion2() {
  auto f = k45dpc_fail();
  VocabId vp = eliminated_vocab(canon_vocab(f.gamma), "p");
  if (canonical_of_model(f.source, *f.source.actual, vp, 1) != eliminate_in_canonical(f.gamma, "p"))
    return {false, "the source does not satisfy gamma^p"};
  try {
    construct_k45_dpc_attempt(f.gamma, f.gamma, f.source, "p");
  } catch (const ConstructionError& e) {
    std::string msg = e.what();
    if (msg.find("The model construction fails") != std::string::npos && msg.find("~p & q") != std::string::npos)
      return {true, msg};
    return {false, "unexpected diagnostic: " + msg};
  }
  return {false, "the construction did not fail"};
}

Outcome criterion3() {
  std::mt19937_64 rng(3);
  std::size_t pairs = 0, formulas = 0;
  const std::vector<Base> bases = {Base::K, Base::D, Base::T, Base::K45, Base::KD45, Base::S5};
  for (int round = 0; pairs < 540; ++round) {
    Base base = bases[round % bases.size()];
    int agents = 1 + round % 3;
    std::vector<std::string> atoms = round % 2 ? std::vector<std::string>{"p", "q"} : std::vector<std::string>{"p"};
    std::vector<std::string> free_atoms(atoms.begin() + 1, atoms.end());
    auto ms = random_models(atoms, agents, base, 3, 30, 100 + round);
    for (const auto& m : ms) {
      KripkeModel a = m;
      KripkeModel b = duplicate_and_flip(m, "p", rng);
      for (int extra = 0; extra < 2 && b.size() < 6; ++extra) b = duplicate_and_flip(b, "p", rng);
      if (!are_p_bisimilar(a, b, "p")) return {false, "constructed pair is not p-bisimilar"};
      ++pairs;
      for (int k = 0; k < 100; ++k) {
        Formula f = random_formula(free_atoms, agents, 3, rng);
        ++formulas;
        if (evaluate(a, *a.actual, f) != evaluate(b, *b.actual, f))
          return {false, "disagreement on " + render_formula(f) + "\n" + serialize_model(a) + serialize_model(b)};
      }
    }
  }
  return {true, std::to_string(pairs) + " pairs, " + std::to_string(formulas) + " formula checks, 0 disagreements"};
}

Outcome criterion4() {
  std::mt19937_64 rng(4);
  std::size_t models = 0, checks = 0;
  const std::vector<Base> bases = {Base::K, Base::D, Base::T, Base::K45, Base::KD45, Base::S5};
  for (int round = 0; models < 240; ++round) {
    Base base = bases[round % bases.size()];
    int agents = 1 + round % 2;
    std::vector<std::string> atoms = {"p", "q"};
    VocabId v = vocab_of(atoms, agents);
    auto ms = random_models(atoms, agents, base, 3, 20, 400 + round);
    for (const auto& m : ms) {
      ++models;
      const int k = 1 + static_cast<int>(models % 2);
      auto table = canonical_of_model_all(m, v, k);
      CanonId d = table[*m.actual];
      Formula df = canonical_to_formula(d);
      if (!evaluate(m, *m.actual, df)) return {false, "model does not satisfy its canonical formula"};
      for (int w = 0; w < m.size(); ++w)
        if (table[w] != d && evaluate(m, w, df)) return {false, "a world satisfies another world's canonical formula"};
      auto st = check_structural(d, base);
      if (!st.ok) return {false, "structural check fails on a realized formula: " + st.condition + " at " + st.path};
      for (int s = 0; s < 10; ++s) {
        Formula f = random_formula(atoms, agents, k, rng);
        bool pos = entails(d, f), neg = entails(d, mk_not(f));
        ++checks;
        if (pos == neg) return {false, "dichotomy fails on " + render_formula(f)};
        if (pos != evaluate(m, *m.actual, f)) return {false, "entails disagrees with evaluation on " + render_formula(f)};
      }
      for (int l = 0; l <= k; ++l) {
        if (prune_down(d, l) != prune_up(d, k - l)) return {false, "prune_down and prune_up disagree"};
        if (!entails(d, canonical_to_formula(prune_down(d, l)))) return {false, "delta does not entail its pruning"};
        if (eliminate_in_canonical(prune_down(d, l), "p") != prune_down(eliminate_in_canonical(d, "p"), l))
          return {false, "pruning and elimination do not commute"};
        if (!entails(d, canonical_to_formula(eliminate_in_canonical(d, "p"))))
          return {false, "delta does not entail delta^p"};
      }
    }
  }
  return {true, std::to_string(models) + " models, " + std::to_string(checks) + " dichotomy checks, 0 violations"};
}

// One forget-and-verify round for a canonical formula under K, D or T.
std::string kdt_round(CanonId d, Base base, int agents) {
  Budget budget;
  auto r = forget_canonical(d, "p", base, budget);
  if (r.path != ForgetPath::KDTDirect || r.disjuncts.size() != 1 || r.disjuncts[0] != eliminate_in_canonical(d, "p"))
    return "forget did not return delta^p";
  VerifyOptions opts;
  opts.max_worlds = 4;
  auto rep = verify_uniform_interpolant(canonical_to_formula(d), r.interpolant, "p", System{base, Lang::D}, agents,
                                        budget, opts);
  if (!rep.all_pass())
    return "verify: entailment " + check_name(rep.entailment.verdict) + " (" + rep.entailment.detail +
           "), consequence " + check_name(rep.consequence.verdict) + " (" + rep.consequence.detail + "), back " +
           check_name(rep.back.verdict) + " (" + rep.back.detail + ")";
  return "";
}

Outcome criterion5() {
  std::size_t rounds = 0;
  Budget budget;
  for (Base base : {Base::K, Base::D, Base::T}) {
    VocabId v = vocab_of({"p"}, 2);
    auto all = decompose(mk_top(), v, base, 1, budget);
    if (!all.complete || all.unknown) return {false, "decomposition of true is incomplete under " + base_name(base)};
    for (CanonId d : all.items) {
      auto err = kdt_round(d, base, 2);
      ++rounds;
      if (!err.empty()) return {false, base_name(base) + " depth 1: " + err};
    }
    auto ms = random_models({"p"}, 2, base, 3, 6, 500 + static_cast<int>(base));
    for (const auto& m : ms) {
      CanonId d = canonical_of_model(m, *m.actual, v, 2);
      auto err = kdt_round(d, base, 2);
      ++rounds;
      if (!err.empty()) return {false, base_name(base) + " depth 2: " + err};
    }
  }
  return {true, std::to_string(rounds) + " formulas forgotten and verified at 4 worlds"};
}

Outcome criterion6() {
  std::mt19937_64 rng(6);
  std::size_t d1 = 0, d2 = 0;
  std::ostringstream per;
  for (Base base : {Base::K45, Base::KD45, Base::S5})
    for (int agents : {2, 3}) {
      VocabId v = vocab_of({"p", "q"}, agents);
      std::set<CanonId> seen1, seen2;
      auto ms = random_models({"p", "q"}, agents, base, 4, 400, 600 + agents * 10 + static_cast<int>(base));
      for (const auto& m : ms) {
        for (int depth : {1, 2}) {
          auto& seen = depth == 1 ? seen1 : seen2;
          const std::size_t want = depth == 1 ? 50 : 10;
          if (seen.size() >= want) continue;
          CanonId g = canonical_of_model(m, *m.actual, v, depth);
          if (!seen.insert(g).second) continue;
          KripkeModel src = duplicate_and_flip(m, "p", rng);
          TEParams params{g, g, 0, depth - 1, 0, false};
          ConstructionResult cr;
          try {
            cr = construct_transitive_euclidean(params, src, "p", base);
          } catch (const ConstructionError& e) {
            return {false, base_name(base) + " n=" + std::to_string(agents) + ": " + e.what()};
          }
          auto rep = postcheck_multipointed(cr, params, src, base);
          if (!rep.ok()) return {false, base_name(base) + " n=" + std::to_string(agents) + ": " + rep.detail};
        }
      }
      if (seen1.size() < 50 || seen2.size() < 10)
        return {false, "too few distinct formulas for " + base_name(base) + " n=" + std::to_string(agents)};
      d1 += seen1.size();
      d2 += seen2.size();
    }
  return {true, std::to_string(d1) + " depth-1 and " + std::to_string(d2) + " depth-2 constructions checked"};
}

Outcome criterion7() {
  Budget budget;
  budget.max_nodes = 1000000;
  VocabId v = vocab_of({"p", "q"}, 2);
  auto ms = random_models({"p", "q"}, 2, Base::S5, 3, 200, 700);
  std::set<CanonId> ds;
  for (const auto& m : ms) {
    if (ds.size() >= 10) break;
    ds.insert(canonical_of_model(m, *m.actual, v, 2));
  }
  std::size_t completed = 0, skipped = 0, checked = 0;
  for (CanonId d : ds) {
    ForgetOptions force;
    force.force_extensions = true;
    auto ext = forget_canonical(d, "p", Base::S5, budget, force);
    ++checked;
    if (!ext.complete) {
      ++skipped;
      continue;
    }
    auto direct = forget_canonical(d, "p", Base::S5, budget);
    for (auto [a, b] : {std::pair{ext.interpolant, direct.interpolant}, std::pair{direct.interpolant, ext.interpolant}}) {
      auto o = brute_entails(a, b, Base::S5, 4, {"q"}, 2);
      if (o.kind == OracleKind::False) return {false, "the two interpolants differ on a 4-world model"};
    }
    ++completed;
  }
  std::string detail = std::to_string(completed) + " of " + std::to_string(checked) + " completed, " +
                       std::to_string(skipped) + " exceeded the budget of 1000000 nodes";
  return {completed >= 5 && checked >= 10, detail};
}

Outcome criterion8() {
  Budget budget;
  VocabId v = vocab_of({"p"}, 2);
  auto all = decompose(mk_top(), v, Base::S5, 1, budget);
  if (!all.complete || all.unknown) return {false, "decomposition of true is incomplete"};
  for (CanonId d : all.items) {
    auto r = forget_canonical(d, "p", Base::S5, budget);
    if (r.path != ForgetPath::Depth1Direct || r.disjuncts.size() != 1 ||
        r.disjuncts[0] != eliminate_in_canonical(d, "p"))
      return {false, "forget did not return delta^p"};
    auto rep = verify_uniform_interpolant(canonical_to_formula(d), r.interpolant, "p", System{Base::S5, Lang::D}, 2,
                                          budget);
    if (!rep.all_pass())
      return {false, "verify: " + check_name(rep.entailment.verdict) + "/" + check_name(rep.consequence.verdict) +
                         "/" + check_name(rep.back.verdict) + " " + rep.back.detail};
  }
  return {true, std::to_string(all.items.size()) + " depth-1 formulas verified"};
}

Outcome criterion9() {
  std::mt19937_64 rng(9);
  std::size_t pairs = 0;
  const std::vector<Base> bases = {Base::K, Base::D, Base::T, Base::K45, Base::KD45, Base::S5};
  for (int round = 0; pairs < 10000; ++round) {
    Base base = bases[round % bases.size()];
    int agents = 1 + round % 3;
    std::vector<std::string> atoms = {"p", "q"};
    auto ms = random_models(atoms, agents, base, 4, 20, 900 + round);
    for (const auto& m : ms)
      for (int k = 0; k < 10 && pairs < 10000; ++k) {
        Formula f = random_formula(atoms, agents, 3, rng, true);
        int w = std::uniform_int_distribution<int>(0, m.size() - 1)(rng);
        ++pairs;
        if (evaluate(m, w, f) != naive_eval(m, w, f)) return {false, "evaluators disagree on " + render_formula(f)};
      }
  }
  return {true, std::to_string(pairs) + " pairs, 0 disagreements"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "counterexample reproduction", 1, criterion1},
      {2, "K45 dpc construction failure", 1, criterion2},
      {3, "adequacy of p-bisimulation", 30, criterion3},
      {4, "canonical machinery", 60, criterion4},
      {5, "K, D, T forgetting end to end", 300, criterion5},
      {6, "construction postconditions", 600, criterion6},
      {7, "two-agent consistency", 600, criterion7},
      {8, "depth-1 forgetting in S5", 60, criterion8},
      {9, "evaluator independence", 30, criterion9},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s > c.limit_s) {
      o.ok = false;
      o.detail += "; exceeded " + std::to_string(static_cast<int>(c.limit_s)) + " s";
    }
    std::ostringstream t;
    t.precision(2);
    t << std::fixed << s;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << ": " << o.detail << " ("
              << t.str() << " s)" << std::endl;
    failures += o.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
