#include "dkforget/forget.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "dkforget/bisim.hpp"
#include "dkforget/construct.hpp"
#include "dkforget/oracle.hpp"

namespace dkforget {

std::string path_name(ForgetPath p) {
  switch (p) {
    case ForgetPath::NoOp: return "no-op";
    case ForgetPath::KDTDirect: return "kdt-direct";
    case ForgetPath::TwoAgentDirect: return "two-agent-direct";
    case ForgetPath::Depth1Direct: return "depth1-direct";
    case ForgetPath::ExtensionEnumeration: return "extension-enumeration";
    case ForgetPath::DpcDirect: return "dpc-direct";
    case ForgetPath::DpcExtension: return "dpc-extension";
  }
  return "?";
}

std::string check_name(Check c) {
  switch (c) {
    case Check::Pass: return "pass";
    case Check::Fail: return "fail";
    case Check::Unknown: return "unknown";
  }
  return "?";
}

namespace {

Formula disjunction(const std::vector<CanonId>& ds) {
  if (ds.empty()) return mk_bot();
  Formula f = canonical_to_formula(ds[0]);
  for (std::size_t i = 1; i < ds.size(); ++i) f = mk_or(f, canonical_to_formula(ds[i]));
  return f;
}

void add_unique(std::vector<CanonId>& out, std::set<CanonId>& seen, CanonId x) {
  if (seen.insert(x).second) out.push_back(x);
}

bool k45_family(Base b) { return needs_trans_eucl(b); }

void refuse_open_combination(Base base, bool dpc) {
  if (dpc && (base == Base::K45 || base == Base::KD45))
    throw ForgetError(ForgetError::Kind::Unsupported,
                      "unsupported: forgetting in " + base_name(base) +
                          " with common knowledge has no known construction");
}

}  // namespace

VocabId formula_vocab(const std::vector<Formula>& fs, const std::string& extra_atom, int agents, bool dpc) {
  std::set<std::string> atoms;
  if (!extra_atom.empty()) atoms.insert(extra_atom);
  int n = agents;
  for (const auto& f : fs) {
    auto a = atoms_of(f);
    atoms.insert(a.begin(), a.end());
    n = std::max(n, max_agent(f));
    dpc = dpc || mentions_common(f);
  }
  if (static_cast<int>(atoms.size()) > kMaxCanonAtoms)
    throw ForgetError(ForgetError::Kind::Input,
                      "too many atoms: " + std::to_string(atoms.size()) + " (limit " +
                          std::to_string(kMaxCanonAtoms) + ")");
  if (n < 1 || n > kMaxAgents)
    throw ForgetError(ForgetError::Kind::Input, "agent count out of range: " + std::to_string(n));
  return intern_vocab(Vocab{std::vector<std::string>(atoms.begin(), atoms.end()), n, dpc});
}

namespace {

// Path taken for a canonical formula of the given depth.
ForgetPath dispatch(Base base, bool dpc, int depth, int agents, const ForgetOptions& opts) {
  if (!k45_family(base)) return dpc ? ForgetPath::DpcDirect : ForgetPath::KDTDirect;
  if (depth == 0) return dpc ? ForgetPath::DpcDirect : ForgetPath::Depth1Direct;
  if (!dpc && !opts.force_extensions && depth == 1) return ForgetPath::Depth1Direct;
  if (!dpc && !opts.force_extensions && agents == 2) return ForgetPath::TwoAgentDirect;
  return dpc ? ForgetPath::DpcExtension : ForgetPath::ExtensionEnumeration;
}

}  // namespace

ForgetResult forget_canonical(CanonId delta, const std::string& p, Base base, const Budget& budget,
                              const ForgetOptions& opts) {
  const Vocab& v = vocab(canon_vocab(delta));
  ForgetResult r;
  if (std::find(v.atoms.begin(), v.atoms.end(), p) == v.atoms.end()) {
    r.interpolant = canonical_to_formula(delta);
    r.disjuncts = {delta};
    r.sources = {delta};
    return r;
  }
  refuse_open_combination(base, v.dpc);

  auto sv = satisfiable(delta, base, budget);
  if (sv.kind == SatKind::Unsat) throw ForgetError(ForgetError::Kind::Unsat, "unsatisfiable: " + sv.reason);
  if (sv.kind == SatKind::Unknown) {
    r.complete = false;
    r.unknown = 1;
  }

  const int depth = canon_depth(delta);
  auto direct = [&](ForgetPath path) {
    r.path = path;
    r.sources = {delta};
    r.disjuncts = {eliminate_in_canonical(delta, p)};
  };

  const ForgetPath path = dispatch(base, v.dpc, depth, v.agents, opts);
  if (path != ForgetPath::ExtensionEnumeration && path != ForgetPath::DpcExtension) {
    direct(path);
  } else {
    r.path = path;
    const int target = opts.target_depth.value_or(2 * (depth - 1) + 1);
    if (target < depth)
      throw ForgetError(ForgetError::Kind::Input, "target depth " + std::to_string(target) +
                                                      " is below the formula depth " + std::to_string(depth));
    auto ext = extensions(delta, target, base, budget);
    r.nodes += ext.nodes;
    r.unknown += ext.unknown;
    if (!ext.complete || ext.unknown > 0) r.complete = false;
    std::set<CanonId> seen;
    r.sources = ext.items;
    for (CanonId g : ext.items) add_unique(r.disjuncts, seen, eliminate_in_canonical(g, p));
    if (ext.items.empty()) r.complete = false;
  }
  r.interpolant = disjunction(r.disjuncts);
  return r;
}

ForgetResult forget(const Formula& phi, const std::string& p, System sys, int agents, const Budget& budget,
                    const ForgetOptions& opts) {
  const bool dpc = sys.lang == Lang::DPC;
  if (mentions_common(phi) && !dpc)
    throw ForgetError(ForgetError::Kind::Input, "common knowledge needs the dpc language");
  if (!is_dpc_formula(phi))
    throw ForgetError(ForgetError::Kind::Input, "common knowledge applies to propositional formulas only");
  ForgetResult r;
  if (!atoms_of(phi).count(p)) {
    r.interpolant = phi;
    return r;
  }
  refuse_open_combination(sys.base, dpc);
  const VocabId v = formula_vocab({phi}, p, agents, dpc);
  auto dec = decompose(phi, v, sys.base, modal_depth(phi), budget);
  r.nodes = dec.nodes;
  r.unknown = dec.unknown;
  r.complete = dec.complete;
  if (dec.items.empty()) {
    if (dec.complete) throw ForgetError(ForgetError::Kind::Unsat, "unsatisfiable: no canonical formula entails it");
    r.interpolant = mk_bot();
    r.complete = false;
    r.path = dispatch(sys.base, dpc, modal_depth(phi), vocab(v).agents, opts);
    return r;
  }
  std::set<CanonId> seen;
  std::size_t inner_unknown = 0;
  bool any = false;
  for (CanonId delta : dec.items) {
    ForgetResult one;
    try {
      one = forget_canonical(delta, p, sys.base, budget, opts);
    } catch (const ForgetError& e) {
      if (e.kind() == ForgetError::Kind::Unsat) continue;
      throw;
    }
    any = true;
    r.path = one.path;
    r.complete = r.complete && one.complete;
    r.nodes += one.nodes;
    inner_unknown += one.unknown;
    r.sources.insert(r.sources.end(), one.sources.begin(), one.sources.end());
    for (CanonId d : one.disjuncts) add_unique(r.disjuncts, seen, d);
  }
  if (!any) {
    if (r.complete) throw ForgetError(ForgetError::Kind::Unsat, "unsatisfiable: every candidate was refuted");
    r.complete = false;
  }
  r.unknown = std::max(r.unknown, inner_unknown);
  r.interpolant = disjunction(r.disjuncts);
  return r;
}

std::optional<KripkeModel> back_witness(CanonId delta, const KripkeModel& src, const std::string& p, Base base,
                                        const std::vector<CanonId>& gammas, std::string* why) {
  auto fail = [&](const std::string& msg) -> std::optional<KripkeModel> {
    if (why) *why = msg;
    return std::nullopt;
  };
  const Vocab& v = vocab(canon_vocab(delta));
  const int depth = canon_depth(delta);
  const int k = depth - 1;
  auto find_gamma = [&]() -> std::optional<CanonId> {
    if (depth == 1) return delta;
    if (!src.actual) return std::nullopt;
    for (CanonId g : gammas) {
      if (canon_vocab(g) != canon_vocab(delta) || canon_depth(g) != 2 * k + 1) continue;
      if (prune_up(g, k + 1) != delta) continue;
      if (canonical_of_model(src, *src.actual, eliminated_vocab(canon_vocab(g), p), canon_depth(g)) !=
          eliminate_in_canonical(g, p))
        continue;
      return g;
    }
    return std::nullopt;
  };
  try {
    ConstructionResult cr;
    if (base == Base::K || base == Base::D) {
      cr = build_model_basic(delta, src, p, base);
    } else if (base == Base::T) {
      cr = build_model_reflexive(delta, src, p);
    } else if (v.dpc) {
      if (base != Base::S5) return fail("no construction for " + base_name(base) + " with common knowledge");
      if (depth == 0) {
        cr = construct_s5_dpc(delta, delta, src, p);
      } else {
        auto g = find_gamma();
        if (!g) return fail("no extension of depth " + std::to_string(2 * k + 1) + " holds at the source");
        cr = construct_s5_dpc(delta, *g, src, p);
      }
    } else if (depth == 0) {
      cr = build_model_minterm(delta, src, p, base);
    } else if (depth == 1) {
      TEParams params{delta, delta, 0, 0, 0, false};
      cr = attach_root(delta, construct_transitive_euclidean(params, src, p, base), src, base);
    } else if (v.agents == 2) {
      TEParams params{delta, delta, k, 0, 0, true};
      cr = attach_root(delta, construct_transitive_euclidean(params, src, p, base), src, base);
    } else {
      auto g = find_gamma();
      if (!g) return fail("no extension of depth " + std::to_string(2 * k + 1) + " holds at the source");
      TEParams params{*g, *g, k, k, 0, false};
      cr = attach_root(delta, construct_transitive_euclidean(params, src, p, base), src, base);
    }
    auto rep = postcheck_pointed(cr, delta, src, base);
    if (!rep.ok()) return fail("post-check: " + rep.detail);
    return cr.model;
  } catch (const ConstructionError& e) {
    return fail(e.what());
  }
}

namespace {

bool within_guard(const Vocab& v) {
  return static_cast<int>(v.atoms.size()) <= kOracleMaxAtoms && v.agents <= kOracleMaxAgents;
}

// Entailment check for every member of a decomposition; Unknown if any
// member is undecided or the list is truncated.
struct ListEntails {
  bool all = true;
  bool exact = true;
  CanonId witness = 0;
};

ListEntails list_entails(const CanonList& l, const Formula& f) {
  ListEntails r;
  r.exact = l.complete && l.unknown == 0;
  for (CanonId d : l.items)
    if (!entails(d, f)) {
      r.all = false;
      r.witness = d;
      return r;
    }
  return r;
}

CheckReport check_entailment(const Formula& phi, const Formula& psi, VocabId v, Base base, const Budget& budget,
                             const VerifyOptions& opts) {
  CheckReport rep;
  const int depth = std::max(modal_depth(phi), modal_depth(psi));
  auto dec = decompose(phi, v, base, depth, budget);
  for (CanonId d : dec.items) {
    if (entails(d, psi)) continue;
    auto sv = satisfiable(d, base, budget);
    if (sv.kind == SatKind::Sat) {
      rep.verdict = Check::Fail;
      rep.detail = "a satisfiable canonical formula of phi does not entail psi";
      return rep;
    }
    dec.complete = false;
  }
  if (dec.complete && dec.unknown == 0) {
    rep.verdict = Check::Pass;
    rep.detail = "all " + std::to_string(dec.items.size()) + " canonical formulas of phi entail psi";
    return rep;
  }
  const Vocab& vv = vocab(v);
  if (within_guard(vv)) {
    auto o = brute_entails(phi, psi, base, std::min(opts.max_worlds, kOracleMaxWorlds), vv.atoms, vv.agents);
    if (o.kind == OracleKind::False) {
      rep.verdict = Check::Fail;
      rep.detail = "counter-model found by enumeration";
      return rep;
    }
  }
  rep.verdict = Check::Unknown;
  rep.detail = "decomposition incomplete; no counter-model up to " + std::to_string(opts.max_worlds) + " worlds";
  return rep;
}

CheckReport check_consequence(const Formula& phi, const Formula& psi, VocabId v, VocabId vp, Base base,
                              const Budget& budget, const VerifyOptions& opts) {
  CheckReport rep;
  const int dphi = modal_depth(phi);
  const int dpsi = modal_depth(psi);
  const int c = std::min(dphi, dpsi);
  auto lphi = decompose(phi, v, base, dphi, budget);
  auto lpsi = decompose(psi, vp, base, dpsi, budget);
  const bool exact = lphi.complete && lphi.unknown == 0 && lpsi.complete && lpsi.unknown == 0;

  std::vector<Formula> chis;
  auto shapes = decompose(mk_top(), vp, base, std::min(c, 1), budget);
  for (CanonId s : shapes.items) {
    if (chis.size() >= 2000) break;
    chis.push_back(canonical_to_formula(s));
  }
  const Vocab& vv = vocab(vp);
  std::mt19937_64 rng(opts.seed);
  for (std::size_t i = 0; i < opts.random_chi; ++i) chis.push_back(random_formula(vv.atoms, vv.agents, c, rng, vv.dpc));

  std::size_t checked = 0;
  for (const auto& chi : chis) {
    auto a = list_entails(lphi, chi);
    auto b = list_entails(lpsi, chi);
    ++checked;
    if (a.all == b.all) continue;
    rep.verdict = exact ? Check::Fail : Check::Unknown;
    rep.detail = std::string(a.all ? "phi" : "psi") + " entails " + render_formula(chi) + " but " +
                 (a.all ? "psi" : "phi") + " does not";
    return rep;
  }
  rep.verdict = exact ? Check::Pass : Check::Unknown;
  rep.detail = std::to_string(checked) + " p-free formulas up to depth " + std::to_string(c) +
               (exact ? "" : "; a decomposition is incomplete");
  return rep;
}

// Bounded search for a model of phi p-bisimilar to m.
bool search_bisimilar(const Formula& phi, const KripkeModel& m, const std::string& p, VocabId v, Base base,
                      int worlds) {
  const Vocab& vv = vocab(v);
  if (!within_guard(vv)) return false;
  bool found = false;
  enumerate_models(vv.atoms, vv.agents, base, std::min(worlds, kOracleMaxWorlds), [&](const KripkeModel& c) {
    if (evaluate(c, *c.actual, phi) && are_p_bisimilar(c, m, p)) found = true;
    return !found;
  });
  return found;
}

CheckReport check_back(const Formula& phi, const Formula& psi, const std::string& p, VocabId v, VocabId vp,
                       Base base, const Budget& budget, const VerifyOptions& opts) {
  CheckReport rep;
  const Vocab& vv = vocab(vp);
  const int dphi = modal_depth(phi);
  auto lphi = decompose(phi, v, base, dphi, budget);

  // Elimination of each candidate, looked up by the source's canonical formula.
  std::map<CanonId, std::vector<CanonId>> by_elim;
  for (CanonId d : lphi.items) by_elim[eliminate_in_canonical(d, p)].push_back(d);

  // Extensions are needed where neither delta^p nor the two-agent variant applies.
  std::vector<CanonId> gammas = opts.gammas;
  const bool needs_gammas = needs_trans_eucl(base) && dphi >= 2 && (vocab(v).agents > 2 || vocab(v).dpc);
  bool have_gammas = !gammas.empty();

  std::size_t seen = 0;
  std::string failure;
  // Bisimilar models of psi share their answer: a model p-bisimilar to one
  // is p-bisimilar to the other. On models of at most n worlds, equal
  // canonical formulas at depth 2n identify bisimilar ones.
  const int key_depth = 2 * std::min(opts.max_worlds, kOracleMaxWorlds);
  std::set<CanonId> done;
  std::size_t classes = 0;
  auto visit = [&](const KripkeModel& m) {
    const int a = *m.actual;
    if (!evaluate(m, a, psi)) return true;
    ++seen;
    if (m.size() <= key_depth / 2 && !done.insert(canonical_of_model(m, a, vp, key_depth)).second) return true;
    ++classes;
    CanonId key = canonical_of_model(m, a, vp, dphi);
    std::string why = "no canonical formula of phi eliminates to the model's";
    auto it = by_elim.find(key);
    if (it != by_elim.end())
      for (CanonId d : it->second) {
        if (needs_gammas && !have_gammas) {
          for (CanonId x : lphi.items) {
            auto ext = extensions(x, 2 * dphi - 1, base, budget);
            gammas.insert(gammas.end(), ext.items.begin(), ext.items.end());
          }
          have_gammas = true;
        }
        if (back_witness(d, m, p, base, gammas, &why)) return true;
      }
    if (search_bisimilar(phi, m, p, v, base, opts.search_worlds)) return true;
    failure = "model of psi #" + std::to_string(seen) + " (" + std::to_string(m.size()) +
              " worlds) has no p-bisimilar model of phi: " + why + "; search up to " +
              std::to_string(opts.search_worlds) + " worlds found none";
    return false;
  };

  for (const auto& m : opts.extra_models) {
    KripkeModel mm = m;
    if (!mm.actual) mm.actual = 0;
    if (!visit(mm)) {
      rep.verdict = Check::Fail;
      rep.detail = failure + "; supplied model";
      return rep;
    }
  }
  bool enumerated = false;
  if (within_guard(vv)) {
    enumerated = true;
    for (int n = 1; n <= std::min(opts.max_worlds, kOracleMaxWorlds); ++n) {
      double count = static_cast<double>(std::uint64_t{1} << (vv.atoms.size() * n));
      for (int i = 0; i < vv.agents; ++i) count *= static_cast<double>(relation_count(base, n));
      bool ok = true;
      if (count <= static_cast<double>(opts.exhaustive_cap)) {
        ok = enumerate_models_of_size(vv.atoms, vv.agents, base, n, visit, {true, 0}) || failure.empty();
      } else {
        sample_models(vv.atoms, vv.agents, base, n, opts.samples, opts.seed + n, visit, true);
        ok = failure.empty();
      }
      if (!ok) {
        rep.verdict = Check::Fail;
        rep.detail = failure;
        return rep;
      }
    }
  }
  if (!enumerated && opts.extra_models.empty()) {
    rep.verdict = Check::Unknown;
    rep.detail = "vocabulary beyond the enumeration guard";
    return rep;
  }
  rep.verdict = Check::Pass;
  rep.detail = std::to_string(seen) + " models of psi up to " + std::to_string(opts.max_worlds) + " worlds (" +
               std::to_string(classes) + " up to bisimilarity) each have a p-bisimilar model of phi";
  return rep;
}

}  // namespace

VerifyReport verify_uniform_interpolant(const Formula& phi, const Formula& psi, const std::string& p, System sys,
                                        int agents, const Budget& budget, const VerifyOptions& opts) {
  VerifyReport rep;
  if (atoms_of(psi).count(p)) {
    CheckReport bad{Check::Fail, "psi mentions " + p};
    rep.entailment = rep.consequence = rep.back = bad;
    return rep;
  }
  if (!atoms_of(phi).count(p) && structurally_equal(phi, psi)) {
    CheckReport ok{Check::Pass, p + " does not occur; psi is phi"};
    rep.entailment = rep.consequence = rep.back = ok;
    return rep;
  }
  const bool dpc = sys.lang == Lang::DPC;
  const VocabId v = formula_vocab({phi, psi}, p, agents, dpc);
  const VocabId vp = eliminated_vocab(v, p);
  rep.entailment = check_entailment(phi, psi, v, sys.base, budget, opts);
  rep.consequence = check_consequence(phi, psi, v, vp, sys.base, budget, opts);
  rep.back = check_back(phi, psi, p, v, vp, sys.base, budget, opts);
  return rep;
}

}  // namespace dkforget
