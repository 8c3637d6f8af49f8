#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
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

using namespace dkforget;

namespace {

constexpr int kExitPositive = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Key/value report. Structured output is one "key: value" line per entry;
// text output prints the first value alone and the rest indented.
class Report {
 public:
  void add(const std::string& k, const std::string& v) { kv_.emplace_back(k, v); }
  void add(const std::string& k, long long v) { add(k, std::to_string(v)); }
  void flag(const std::string& k, bool v) { add(k, v ? "true" : "false"); }

  std::string render(bool structured) const {
    std::ostringstream out;
    for (std::size_t i = 0; i < kv_.size(); ++i) {
      std::string v = kv_[i].second;
      for (auto& c : v)
        if (c == '\n') c = ' ';
      if (structured)
        out << kv_[i].first << ": " << v << "\n";
      else if (i == 0)
        out << v << "\n";
      else
        out << "  " << kv_[i].first << ": " << v << "\n";
    }
    return out.str();
  }

 private:
  std::vector<std::pair<std::string, std::string>> kv_;
};

struct Common {
  std::string system = "K";
  std::string lang = "d";
  int agents = 1;
  std::uint64_t budget_nodes = 0;
  int budget_worlds = 0;
  std::string format = "text";
  std::string out;

  System sys() const {
    auto b = parse_base(system);
    if (!b) throw UsageError("unknown system " + system);
    if (lang != "d" && lang != "dpc") throw UsageError("unknown language " + lang);
    return System{*b, lang == "dpc" ? Lang::DPC : Lang::D};
  }
  Budget budget() const {
    Budget b = Budget::from_env();
    if (budget_nodes) b.max_nodes = budget_nodes;
    if (budget_worlds) b.max_worlds = budget_worlds;
    return b;
  }
  bool structured() const { return format == "structured"; }
};

void add_common(CLI::App* app, Common& c, bool with_system = true) {
  if (with_system) {
    app->add_option("--system", c.system, "K, D, T, K45, KD45 or S5")->check(CLI::IsMember({"K", "D", "T", "K45", "KD45", "S5"}));
    app->add_option("--lang", c.lang, "d or dpc")->check(CLI::IsMember({"d", "dpc"}));
    app->add_option("--agents", c.agents, "agent count (at least those the input mentions)")->check(CLI::Range(1, kMaxAgents));
    app->add_option("--budget-nodes", c.budget_nodes, "enumeration step budget")->check(CLI::PositiveNumber);
    app->add_option("--budget-worlds", c.budget_worlds, "oracle model size")->check(CLI::PositiveNumber);
  }
  app->add_option("--format", c.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  app->add_option("--out", c.out, "write the report here instead of stdout");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Formula formula_arg(const std::string& text, const std::string& file) {
  if (!text.empty() && !file.empty()) throw UsageError("give --formula or --formula-file, not both");
  if (text.empty() && file.empty()) throw UsageError("a formula is required");
  return parse_formula(file.empty() ? text : read_file(file));
}

KripkeModel model_arg(const std::string& path) { return parse_model(read_file(path)); }

int pointed_world(const KripkeModel& m, const std::string& name) {
  if (!name.empty()) {
    int w = m.world(name);
    if (w < 0) throw UsageError("no world named " + name);
    return w;
  }
  if (!m.actual) throw UsageError("the model has no actual world; pass --world");
  return *m.actual;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw UsageError("cannot write " + c.out);
  f << text;
}

// ---------------------------------------------------------------- subcommands

struct ForgetArgs {
  Common c;
  std::string atom, formula, file;
  int target_depth = -1;
  bool force = false;
};

int run_forget(const ForgetArgs& a) {
  ForgetOptions opts;
  if (a.target_depth >= 0) opts.target_depth = a.target_depth;
  opts.force_extensions = a.force;
  Formula phi = formula_arg(a.formula, a.file);
  auto r = forget(phi, a.atom, a.c.sys(), a.c.agents, a.c.budget(), opts);
  Report rep;
  rep.add("interpolant", render_formula(r.interpolant));
  rep.add("path", path_name(r.path));
  rep.add("complete", r.complete ? "complete" : "partial");
  rep.add("disjuncts", static_cast<long long>(r.disjuncts.size()));
  rep.add("sources", static_cast<long long>(r.sources.size()));
  rep.add("nodes", static_cast<long long>(r.nodes));
  rep.add("unknown", static_cast<long long>(r.unknown));
  emit(a.c, rep.render(a.c.structured()));
  return r.complete ? kExitPositive : kExitUnknown;
}

struct SatArgs {
  Common c;
  std::string formula, file;
  bool witness = false;
};

int run_sat(const SatArgs& a) {
  Formula f = formula_arg(a.formula, a.file);
  System sys = a.c.sys();
  if (mentions_common(f) && sys.lang != Lang::DPC) throw UsageError("common knowledge needs --lang dpc");
  VocabId v = formula_vocab({f}, "", a.c.agents, sys.lang == Lang::DPC);
  Budget b = a.c.budget();
  auto dec = decompose(f, v, sys.base, modal_depth(f), b);
  Report rep;
  std::optional<KripkeModel> witness;
  std::string reason;
  for (CanonId d : dec.items) {
    auto sv = satisfiable(d, sys.base, b);
    if (sv.kind == SatKind::Sat) {
      witness = sv.witness;
      break;
    }
    reason = sv.reason;
  }
  int code;
  if (witness) {
    rep.add("verdict", "sat");
    code = kExitPositive;
  } else if (dec.items.empty() && dec.complete) {
    rep.add("verdict", "unsat");
    code = kExitNegative;
  } else {
    rep.add("verdict", "unknown");
    code = kExitUnknown;
  }
  rep.add("canonical_members", static_cast<long long>(dec.items.size()));
  rep.flag("complete", dec.complete);
  rep.add("nodes", static_cast<long long>(dec.nodes));
  if (witness) rep.add("witness_worlds", witness->size());
  if (!reason.empty() && !witness) rep.add("reason", reason);
  std::string text = rep.render(a.c.structured());
  if (witness && a.witness) text += serialize_model(*witness);
  emit(a.c, text);
  return code;
}

struct CanonArgs {
  Common c;
  std::string model, world, formula, atoms;
  int depth = 0;
};

int run_canon(const CanonArgs& a) {
  System sys = a.c.sys();
  Report rep;
  if (!a.model.empty()) {
    if (!a.formula.empty()) throw UsageError("give --model or --formula, not both");
    KripkeModel m = model_arg(a.model);
    int w = pointed_world(m, a.world);
    std::vector<std::string> atoms = m.atoms();
    if (!a.atoms.empty()) {
      atoms.clear();
      std::istringstream s(a.atoms);
      for (std::string t; std::getline(s, t, ',');) atoms.push_back(t);
      std::sort(atoms.begin(), atoms.end());
    }
    VocabId v = intern_vocab(Vocab{atoms, m.agents(), sys.lang == Lang::DPC});
    CanonId id = canonical_of_model(m, w, v, a.depth);
    rep.add("canonical", render_formula(canonical_to_formula(id)));
    rep.add("depth", a.depth);
    rep.add("root", minterm_to_string(vocab(v), canon_minterm(id)));
    emit(a.c, rep.render(a.c.structured()));
    return kExitPositive;
  }
  Formula f = formula_arg(a.formula, "");
  VocabId v = formula_vocab({f}, "", a.c.agents, sys.lang == Lang::DPC);
  int k = std::max(a.depth, modal_depth(f));
  auto dec = decompose(f, v, sys.base, k, a.c.budget());
  rep.add("members", static_cast<long long>(dec.items.size()));
  rep.flag("complete", dec.complete);
  rep.add("unknown", static_cast<long long>(dec.unknown));
  for (std::size_t i = 0; i < dec.items.size(); ++i)
    rep.add("member." + std::to_string(i), render_formula(canonical_to_formula(dec.items[i])));
  emit(a.c, rep.render(a.c.structured()));
  return dec.complete && dec.unknown == 0 ? kExitPositive : kExitUnknown;
}

struct EvalArgs {
  Common c;
  std::string model, world, formula;
};

int run_eval(const EvalArgs& a) {
  KripkeModel m = model_arg(a.model);
  int w = pointed_world(m, a.world);
  Formula f = parse_formula(a.formula);
  bool v = evaluate(m, w, f);
  Report rep;
  rep.add("value", v ? "true" : "false");
  rep.add("world", m.name(w));
  emit(a.c, rep.render(a.c.structured()));
  return v ? kExitPositive : kExitNegative;
}

struct BisimArgs {
  Common c;
  std::string a, b, atom;
};

int run_bisim(const BisimArgs& x) {
  KripkeModel ma = model_arg(x.a);
  KripkeModel mb = model_arg(x.b);
  if (ma.agents() != mb.agents()) throw UsageError("the models have different agent counts");
  auto rho = maximal_collective_p_bisim(ma, mb, x.atom);
  bool roots = false;
  if (ma.actual && mb.actual)
    for (const auto& [u, v] : rho.pairs) roots = roots || (u == *ma.actual && v == *mb.actual);
  Report rep;
  rep.add("bisimilar", roots ? "true" : "false");
  rep.add("pairs", static_cast<long long>(rho.pairs.size()));
  std::vector<std::string> listed;
  for (const auto& [u, v] : rho.pairs) listed.push_back(ma.name(u) + "~" + mb.name(v));
  std::string all;
  for (const auto& s : listed) all += (all.empty() ? "" : " ") + s;
  rep.add("relation", all);
  emit(x.c, rep.render(x.c.structured()));
  return roots ? kExitPositive : kExitNegative;
}

struct VerifyArgs {
  Common c;
  std::string atom, formula, interpolant;
  std::vector<std::string> extra;
  int max_worlds = 4;
};

int run_verify(const VerifyArgs& a) {
  VerifyOptions opts;
  opts.max_worlds = a.max_worlds;
  for (const auto& path : a.extra) opts.extra_models.push_back(model_arg(path));
  Formula phi = parse_formula(a.formula);
  Formula psi = parse_formula(a.interpolant);
  auto r = verify_uniform_interpolant(phi, psi, a.atom, a.c.sys(), a.c.agents, a.c.budget(), opts);
  bool fail = false, unknown = false;
  for (const auto* c : {&r.entailment, &r.consequence, &r.back}) {
    fail = fail || c->verdict == Check::Fail;
    unknown = unknown || c->verdict == Check::Unknown;
  }
  Report rep;
  rep.add("verdict", fail ? "fail" : unknown ? "unknown" : "pass");
  auto put = [&](const std::string& k, const CheckReport& c) {
    rep.add(k, check_name(c.verdict));
    rep.add(k + "_detail", c.detail);
  };
  put("entailment", r.entailment);
  put("consequence", r.consequence);
  put("back", r.back);
  emit(a.c, rep.render(a.c.structured()));
  return fail ? kExitNegative : unknown ? kExitUnknown : kExitPositive;
}

struct FixtureArgs {
  Common c;
  std::string name;
};

int run_fixture(const FixtureArgs& a) {
  emit(a.c, fixture_text(a.name));
  return kExitPositive;
}

struct OracleArgs {
  Common c;
  std::string formula, entails;
  int max_worlds = 3;
};

int run_oracle(const OracleArgs& a) {
  Formula f = parse_formula(a.formula);
  System sys = a.c.sys();
  Report rep;
  OracleVerdict v;
  if (a.entails.empty()) {
    v = brute_sat(f, sys.base, a.max_worlds);
  } else {
    v = brute_entails(f, parse_formula(a.entails), sys.base, a.max_worlds);
  }
  rep.add("verdict", v.kind == OracleKind::True ? "true" : v.kind == OracleKind::False ? "false" : "unknown");
  rep.add("note", v.note);
  std::string text = rep.render(a.c.structured());
  if (v.model) text += serialize_model(*v.model);
  emit(a.c, text);
  return v.kind == OracleKind::True ? kExitPositive : v.kind == OracleKind::False ? kExitNegative : kExitUnknown;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forgetting for epistemic logics with distributed and common knowledge"};
  app.require_subcommand(1);

  ForgetArgs fa;
  auto* f = app.add_subcommand("forget", "compute a uniform interpolant");
  add_common(f, fa.c);
  f->add_option("--atom", fa.atom, "atom to forget")->required();
  f->add_option("--formula", fa.formula, "input formula");
  f->add_option("--formula-file", fa.file, "file holding the input formula");
  f->add_option("--target-depth", fa.target_depth, "depth of extensions in the K45 family")->check(CLI::NonNegativeNumber);
  f->add_flag("--force-extensions", fa.force, "take the extension path wherever it applies");

  SatArgs sa;
  auto* s = app.add_subcommand("sat", "satisfiability through canonical formulas");
  add_common(s, sa.c);
  s->add_option("--formula", sa.formula, "formula");
  s->add_option("--formula-file", sa.file, "file holding the formula");
  s->add_flag("--witness", sa.witness, "print a witness model");

  CanonArgs ca;
  auto* cn = app.add_subcommand("canon", "canonical formula of a model, or decomposition of a formula");
  add_common(cn, ca.c);
  cn->add_option("--model", ca.model, "model file");
  cn->add_option("--world", ca.world, "world (default: actual)");
  cn->add_option("--atoms", ca.atoms, "comma-separated atoms (default: the model's)");
  cn->add_option("--formula", ca.formula, "formula to decompose");
  cn->add_option("--depth", ca.depth, "depth")->check(CLI::NonNegativeNumber);

  EvalArgs ea;
  auto* e = app.add_subcommand("eval", "model checking");
  add_common(e, ea.c, false);
  e->add_option("--model", ea.model, "model file")->required();
  e->add_option("--world", ea.world, "world (default: actual)");
  e->add_option("--formula", ea.formula, "formula")->required();

  BisimArgs ba;
  auto* bs = app.add_subcommand("bisim", "maximal collective p-bisimulation");
  add_common(bs, ba.c, false);
  bs->add_option("--model-a", ba.a, "first model")->required();
  bs->add_option("--model-b", ba.b, "second model")->required();
  bs->add_option("--atom", ba.atom, "atom to ignore")->required();

  VerifyArgs va;
  auto* vf = app.add_subcommand("verify", "check a candidate uniform interpolant");
  add_common(vf, va.c);
  vf->add_option("--atom", va.atom, "forgotten atom")->required();
  vf->add_option("--formula", va.formula, "input formula")->required();
  vf->add_option("--interpolant", va.interpolant, "candidate interpolant")->required();
  vf->add_option("--extra-model", va.extra, "additional model of the interpolant");
  vf->add_option("--max-worlds", va.max_worlds, "enumeration bound")->check(CLI::Range(1, kOracleMaxWorlds));

  FixtureArgs xa;
  auto* fx = app.add_subcommand("fixture", "print a fixture");
  add_common(fx, xa.c, false);
  fx->add_option("--name", xa.name, "fixture name")->required()->check(CLI::IsMember(fixture_names()));

  OracleArgs oa;
  auto* oc = app.add_subcommand("oracle", "");
  oc->group("");
  add_common(oc, oa.c);
  oc->add_option("--formula", oa.formula, "formula")->required();
  oc->add_option("--entails", oa.entails, "consequence to test");
  oc->add_option("--max-worlds", oa.max_worlds, "bound")->check(CLI::Range(1, kOracleMaxWorlds));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (*f) return run_forget(fa);
    if (*s) return run_sat(sa);
    if (*cn) return run_canon(ca);
    if (*e) return run_eval(ea);
    if (*bs) return run_bisim(ba);
    if (*vf) return run_verify(va);
    if (*fx) return run_fixture(xa);
    if (*oc) return run_oracle(oa);
  } catch (const ParseError& err) {
    std::cerr << "formula:" << err.line() << ":" << err.column() << ": " << err.what() << "\n";
    return kExitParse;
  } catch (const ModelError& err) {
    std::cerr << "model:" << err.line() << ": " << err.what() << "\n";
    return kExitParse;
  } catch (const ForgetError& err) {
    std::cerr << err.what() << "\n";
    switch (err.kind()) {
      case ForgetError::Kind::Unsat: return kExitNegative;
      case ForgetError::Kind::Unsupported: return kExitUsage;
      case ForgetError::Kind::Input: return kExitUsage;
    }
  } catch (const UsageError& err) {
    std::cerr << err.what() << "\n";
    return kExitUsage;
  } catch (const OracleGuardError& err) {
    std::cerr << err.what() << "\n";
    return kExitUsage;
  } catch (const EvalError& err) {
    std::cerr << err.what() << "\n";
    return kExitUsage;
  } catch (const CanonError& err) {
    std::cerr << err.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
