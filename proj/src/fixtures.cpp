#include "dkforget/fixtures.hpp"

#include <stdexcept>

namespace dkforget {

namespace {

void link(KripkeModel& m, int agent, const std::string& a, const std::string& b) {
  m.add_edge(agent, m.world(a), m.world(b));
  m.add_edge(agent, m.world(b), m.world(a));
}

// Valuation bits over {p, q}: p is bit 0, q is bit 1.
KripkeModel counter_model(bool rearranged) {
  KripkeModel m(3, {"p", "q"});
  const std::vector<std::pair<std::string, std::uint64_t>> worlds = {
      {"s2", 0}, {"t1", 0}, {"t2", 1}, {"t3", 2}, {"t4", 3}, {"v", 0}, {"w", 2}};
  for (const auto& [name, val] : worlds) m.add_world(name, val);
  const std::vector<std::string> clique = {"s2", "t1", "t2", "t3", "t4"};
  for (const auto& a : clique)
    for (const auto& b : clique) m.add_edge(1, m.world(a), m.world(b));
  if (rearranged) {
    link(m, 2, "t1", "t4");
    link(m, 2, "t2", "t3");
  } else {
    link(m, 2, "t1", "t3");
    link(m, 2, "t2", "t4");
  }
  link(m, 3, "t1", "w");
  link(m, 3, "t4", "v");
  for (int i = 1; i <= 3; ++i)
    for (int w = 0; w < m.size(); ++w) m.add_edge(i, w, w);
  m.actual = m.world("s2");
  return m;
}

}  // namespace

std::vector<std::string> fixture_names() { return {"fig3-left", "fig3-right", "delta2cou", "k45dpc-fail"}; }

KripkeModel counter_left() { return counter_model(false); }

KripkeModel counter_right() {
  KripkeModel full = counter_model(true);
  KripkeModel m(3, {"q"});
  for (int w = 0; w < full.size(); ++w) m.add_world(full.name(w), full.holds(w, 1) ? 1 : 0);
  for (int i = 1; i <= 3; ++i)
    for (int w = 0; w < full.size(); ++w)
      for (int u : full.succ(i, w)) m.add_edge(i, w, u);
  m.actual = full.actual;
  return m;
}

CanonId delta2cou() {
  KripkeModel m = counter_left();
  VocabId v = intern_vocab(Vocab{{"p", "q"}, 3, false});
  return canonical_of_model(m, *m.actual, v, 2);
}

K45DpcFailure k45dpc_fail() {
  K45DpcFailure f;
  VocabId v = intern_vocab(Vocab{{"p", "q"}, 2, true});
  const Minterm pq = 3, npq = 2, pnq = 1;
  const MintermSet tc = (MintermSet{1} << pq) | (MintermSet{1} << npq);
  f.eta = canon_leaf(v, pq, tc);
  std::vector<CanonSet> children(vocab(v).group_count());
  children[agent_bit(1) - 1] = {f.eta};
  f.gamma = canon_make(v, 1, pnq, tc, children);
  KripkeModel m(2, {"q"});
  int s = m.add_world("s'", 0);
  int t = m.add_world("t'", 1);
  m.add_edge(1, s, t);
  m.add_edge(1, t, t);
  m.actual = s;
  f.source = m;
  return f;
}

std::string fixture_text(const std::string& name) {
  if (name == "fig3-left") return serialize_model(counter_left());
  if (name == "fig3-right") return serialize_model(counter_right());
  if (name == "delta2cou") return render_formula(canonical_to_formula(delta2cou())) + "\n";
  if (name == "k45dpc-fail") {
    auto f = k45dpc_fail();
    return "# gamma\n# " + render_formula(canonical_to_formula(f.gamma)) + "\n" + serialize_model(f.source);
  }
  throw std::invalid_argument("unknown fixture: " + name);
}

}  // namespace dkforget
