#include "dkforget/bisim.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace dkforget {

namespace {

struct Frame {
  const KripkeModel& a;
  const KripkeModel& b;
  std::vector<std::pair<int, int>> shared;  // atom index in a, in b
  std::vector<AgentMask> groups;
  std::vector<std::vector<WorldSet>> ga;  // ga[g][w] = R_g(w) in a
  std::vector<std::vector<WorldSet>> gb;

  Frame(const KripkeModel& ma, const KripkeModel& mb, const std::string& p) : a(ma), b(mb) {
    if (a.agents() != b.agents()) throw std::invalid_argument("models have different agent counts");
    std::set<std::string> sa, sb;
    for (const auto& x : a.atoms())
      if (x != p) sa.insert(x);
    for (const auto& x : b.atoms())
      if (x != p) sb.insert(x);
    if (sa != sb) throw std::invalid_argument("models disagree on the vocabulary outside " + p);
    for (const auto& x : sa) shared.emplace_back(a.atom_index(x), b.atom_index(x));
    groups = nonempty_groups(a.agents());
    for (AgentMask g : groups) {
      std::vector<WorldSet> ta(a.size()), tb(b.size());
      for (int w = 0; w < a.size(); ++w) ta[w] = a.group_succ(w, g);
      for (int w = 0; w < b.size(); ++w) tb[w] = b.group_succ(w, g);
      ga.push_back(std::move(ta));
      gb.push_back(std::move(tb));
    }
  }

  bool atoms_agree(int x, int y) const {
    for (auto [ia, ib] : shared)
      if (a.holds(x, ia) != b.holds(y, ib)) return false;
    return true;
  }
};

// Z is a dense |a| x |b| membership table.
struct Table {
  int wb;
  std::vector<char> z;
  bool has(int x, int y) const { return z[static_cast<std::size_t>(x) * wb + y]; }
  void set(int x, int y, bool v) { z[static_cast<std::size_t>(x) * wb + y] = v; }
};

// Returns an empty string when (x, y) satisfies Forth and Back for all groups.
std::string zigzag_violation(const Frame& f, const Table& t, int x, int y) {
  for (std::size_t gi = 0; gi < f.groups.size(); ++gi) {
    for (int xs : f.ga[gi][x]) {
      bool found = false;
      for (int ys : f.gb[gi][y])
        if (t.has(xs, ys)) {
          found = true;
          break;
        }
      if (!found)
        return "Forth fails at (" + f.a.name(x) + "," + f.b.name(y) + ") for group " +
               mask_to_string(f.groups[gi]) + " via " + f.a.name(xs);
    }
    for (int ys : f.gb[gi][y]) {
      bool found = false;
      for (int xs : f.ga[gi][x])
        if (t.has(xs, ys)) {
          found = true;
          break;
        }
      if (!found)
        return "Back fails at (" + f.a.name(x) + "," + f.b.name(y) + ") for group " +
               mask_to_string(f.groups[gi]) + " via " + f.b.name(ys);
    }
  }
  return {};
}

BisimCheck check_pairs(const Frame& f, const BisimRelation& rho, Table& t) {
  for (auto [x, y] : rho.pairs) {
    if (x < 0 || x >= f.a.size() || y < 0 || y >= f.b.size())
      return {false, "pair references a missing world"};
    t.set(x, y, true);
  }
  for (auto [x, y] : rho.pairs) {
    if (!f.atoms_agree(x, y))
      return {false, "Atoms fails at (" + f.a.name(x) + "," + f.b.name(y) + ")"};
    auto why = zigzag_violation(f, t, x, y);
    if (!why.empty()) return {false, why};
  }
  return {};
}

}  // namespace

BisimCheck check_bisimulation(const BisimRelation& rho, const KripkeModel& a, const KripkeModel& b) {
  if (!a.actual || !b.actual) return {false, "both models must be pointed"};
  Frame f(a, b, rho.omitted);
  Table t{b.size(), std::vector<char>(static_cast<std::size_t>(a.size()) * b.size(), 0)};
  auto r = check_pairs(f, rho, t);
  if (!r.ok) return r;
  if (!t.has(*a.actual, *b.actual)) return {false, "actual worlds are not related"};
  return {};
}

bool verify_bisimulation(const BisimRelation& rho, const KripkeModel& a, const KripkeModel& b) {
  return check_bisimulation(rho, a, b).ok;
}

BisimCheck check_multipointed_bisimulation(const BisimRelation& rho, const KripkeModel& a,
                                           const KripkeModel& b) {
  if (a.scope != b.scope) return {false, "multi-pointed scopes differ"};
  Frame f(a, b, rho.omitted);
  Table t{b.size(), std::vector<char>(static_cast<std::size_t>(a.size()) * b.size(), 0)};
  auto r = check_pairs(f, rho, t);
  if (!r.ok) return r;
  for (AgentMask g : nonempty_subsets(a.scope)) {
    static const WorldSet empty;
    auto ia = a.family.find(g);
    auto ib = b.family.find(g);
    const WorldSet& ta = ia == a.family.end() ? empty : ia->second;
    const WorldSet& tb = ib == b.family.end() ? empty : ib->second;
    for (int x : ta)
      if (std::none_of(tb.begin(), tb.end(), [&](int y) { return t.has(x, y); }))
        return {false, "T" + mask_to_string(g) + " world " + a.name(x) + " is not covered"};
    for (int y : tb)
      if (std::none_of(ta.begin(), ta.end(), [&](int x) { return t.has(x, y); }))
        return {false, "T'" + mask_to_string(g) + " world " + b.name(y) + " is not covered"};
  }
  return {};
}

bool verify_multipointed_bisimulation(const BisimRelation& rho, const KripkeModel& a,
                                      const KripkeModel& b) {
  return check_multipointed_bisimulation(rho, a, b).ok;
}

BisimRelation maximal_collective_p_bisim(const KripkeModel& a, const KripkeModel& b,
                                         const std::string& p) {
  Frame f(a, b, p);
  Table t{b.size(), std::vector<char>(static_cast<std::size_t>(a.size()) * b.size(), 0)};
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < b.size(); ++y) t.set(x, y, f.atoms_agree(x, y));
  // Deletions only shrink Z, so sweeping to a fixpoint yields the greatest one.
  for (bool changed = true; changed;) {
    changed = false;
    for (int x = 0; x < a.size(); ++x)
      for (int y = 0; y < b.size(); ++y)
        if (t.has(x, y) && !zigzag_violation(f, t, x, y).empty()) {
          t.set(x, y, false);
          changed = true;
        }
  }
  BisimRelation rho{{}, p};
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < b.size(); ++y)
      if (t.has(x, y)) rho.pairs.emplace_back(x, y);
  return rho;
}

bool are_p_bisimilar(const KripkeModel& a, const KripkeModel& b, const std::string& p) {
  if (!a.actual || !b.actual) throw std::invalid_argument("both models must be pointed");
  auto rho = maximal_collective_p_bisim(a, b, p);
  return std::find(rho.pairs.begin(), rho.pairs.end(), std::make_pair(*a.actual, *b.actual)) !=
         rho.pairs.end();
}

}  // namespace dkforget
