#include "dkforget/sat.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "dkforget/oracle.hpp"

namespace dkforget {

Budget Budget::from_env() {
  Budget b;
  if (const char* s = std::getenv("DKFORGET_BUDGET_NODES")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) b.max_nodes = v;
  }
  if (const char* s = std::getenv("DKFORGET_BUDGET_WORLDS")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) b.max_worlds = static_cast<int>(v);
  }
  return b;
}

// ---------------------------------------------------------------- filters

namespace {

bool contains(const CanonSet& s, CanonId x) { return std::binary_search(s.begin(), s.end(), x); }

bool includes(const CanonSet& big, const CanonSet& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Empty when the node-local conditions hold.
std::string local_violation(CanonId id, Base base) {
  const CanonNode& n = canon_node(id);
  const Vocab& v = vocab(n.vocab);
  const int G = v.group_count();
  if (n.depth >= 1) {
    for (int g = 1; g <= G; ++g)
      for (int i = 1; i <= v.agents; ++i) {
        AgentMask h = static_cast<AgentMask>(g) | agent_bit(i);
        if (h != static_cast<AgentMask>(g) && !includes(n.children[g - 1], n.children[h - 1]))
          return "monotonicity: R" + mask_to_string(h) + " not within R" +
                 mask_to_string(static_cast<AgentMask>(g));
      }
    if (needs_serial(base))
      for (int i = 1; i <= v.agents; ++i)
        if (n.children[agent_bit(i) - 1].empty()) return "seriality: R{" + std::to_string(i) + "} empty";
    if (needs_reflexive(base)) {
      CanonId down = prune_down(id, 1);
      for (int g = 1; g <= G; ++g)
        if (!contains(n.children[g - 1], down))
          return "reflexivity: pruned formula missing from R" + mask_to_string(static_cast<AgentMask>(g));
    }
    if (needs_trans_eucl(base) && n.depth >= 2) {
      for (int g = 1; g <= G; ++g) {
        CanonSet down = prune_down_set(n.children[g - 1], 1);
        for (CanonId eta : n.children[g - 1])
          if (canon_children(eta, static_cast<AgentMask>(g)) != down)
            return "identical successors: R" + mask_to_string(static_cast<AgentMask>(g));
      }
      for (int b = 1; b <= G; ++b)
        for (int c = 1; c <= G; ++c) {
          AgentMask c1 = static_cast<AgentMask>(c & b);
          AgentMask c2 = static_cast<AgentMask>(c & ~b);
          if (c1 == 0 || c2 == 0) continue;
          auto d_sets = nonempty_subsets(c2);
          for (CanonId eta : n.children[b - 1])
            for (CanonId chi : canon_children(eta, static_cast<AgentMask>(c))) {
              bool found = false;
              for (CanonId eta0 : n.children[c1 - 1]) {
                if (prune_down(eta0, 1) != chi) continue;
                bool same = true;
                for (AgentMask d : d_sets)
                  if (canon_children(eta0, d) != canon_children(eta, d)) {
                    same = false;
                    break;
                  }
                if (same) {
                  found = true;
                  break;
                }
              }
              if (!found)
                return "sibling property: B=" + mask_to_string(static_cast<AgentMask>(b)) +
                       " C=" + mask_to_string(static_cast<AgentMask>(c));
            }
        }
    }
  }
  if (v.dpc) {
    if (n.depth >= 1) {
      MintermSet u = 0;
      for (const auto& s : n.children)
        for (CanonId c : s) u |= (MintermSet{1} << canon_minterm(c)) | canon_tc(c);
      if (u != n.tc) return "reach split: TC differs from the successors' reach";
    }
    if (needs_reflexive(base) && !((n.tc >> n.minterm) & 1)) return "reflexivity: own minterm missing from TC";
    if (needs_serial(base) && n.tc == 0) return "seriality: TC empty";
    if (base == Base::S5)
      for (const auto& s : n.children)
        for (CanonId c : s)
          if (canon_tc(c) != n.tc) return "shared common knowledge: successor TC differs";
  }
  return {};
}

}  // namespace

StructuralReport check_structural(CanonId id, Base base) {
  std::set<CanonId> done;
  StructuralReport rep;
  std::function<bool(CanonId, const std::string&)> go = [&](CanonId c, const std::string& path) {
    if (!done.insert(c).second) return true;
    auto why = local_violation(c, base);
    if (!why.empty()) {
      rep.ok = false;
      rep.condition = why;
      rep.path = path.empty() ? "root" : path;
      return false;
    }
    const CanonNode& n = canon_node(c);
    for (std::size_t g = 0; g < n.children.size(); ++g)
      for (CanonId ch : n.children[g])
        if (!go(ch, path + "/" + mask_to_string(static_cast<AgentMask>(g + 1)))) return false;
    return true;
  };
  go(id, "");
  return rep;
}

// ---------------------------------------------------------------- witnesses

namespace {

void close_trans_eucl(KripkeModel& m, int agent) {
  const int W = m.size();
  std::vector<std::vector<char>> r(W, std::vector<char>(W, 0));
  for (int w = 0; w < W; ++w)
    for (int u : m.succ(agent, w)) r[w][u] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (int w = 0; w < W; ++w)
      for (int u = 0; u < W; ++u) {
        if (!r[w][u]) continue;
        for (int x = 0; x < W; ++x) {
          if (r[u][x] && !r[w][x]) r[w][x] = 1, changed = true;  // transitive
          if (r[w][x] && !r[u][x]) r[u][x] = 1, changed = true;  // Euclidean
        }
      }
  }
  for (int w = 0; w < W; ++w)
    for (int u = 0; u < W; ++u)
      if (r[w][u]) m.add_edge(agent, w, u);
}

}  // namespace

KripkeModel tree_witness(CanonId id, Base base) {
  const Vocab& v = vocab(canon_vocab(id));
  KripkeModel m(v.agents, v.atoms);
  const int G = v.group_count();
  std::function<int(CanonId, const std::string&)> rec = [&](CanonId c, const std::string& name) {
    const CanonNode& n = canon_node(c);
    int w = m.add_world(name, n.minterm);
    if (n.depth >= 1) {
      for (int g = 1; g <= G; ++g) {
        int idx = 0;
        for (CanonId eta : n.children[g - 1]) {
          bool maximal = true;
          for (int h = g + 1; h <= G && maximal; ++h)
            if ((h & g) == g && contains(n.children[h - 1], eta)) maximal = false;
          if (!maximal) continue;
          int u = rec(eta, name + "." + std::to_string(g) + "." + std::to_string(idx++));
          for (int i : mask_members(static_cast<AgentMask>(g))) m.add_edge(i, w, u);
        }
      }
    } else if (v.dpc && n.tc != 0) {
      for (int mt = 0; mt < v.minterm_count(); ++mt) {
        if (!((n.tc >> mt) & 1)) continue;
        int cw = m.add_world(name + ".c" + std::to_string(mt), static_cast<std::uint64_t>(mt));
        for (int i = 1; i <= v.agents; ++i) {
          m.add_edge(i, w, cw);
          m.add_edge(i, cw, cw);
        }
      }
    } else if (needs_serial(base) && !v.dpc) {
      for (int i = 1; i <= v.agents; ++i) m.add_edge(i, w, w);
    }
    return w;
  };
  int root = rec(id, "s");
  if (needs_reflexive(base))
    for (int i = 1; i <= v.agents; ++i)
      for (int w = 0; w < m.size(); ++w) m.add_edge(i, w, w);
  if (needs_trans_eucl(base)) {
    for (int i = 1; i <= v.agents; ++i) close_trans_eucl(m, i);
    if (needs_serial(base))
      for (int i = 1; i <= v.agents; ++i)
        for (int w = 0; w < m.size(); ++w)
          if (m.succ(i, w).empty()) m.add_edge(i, w, w);
  }
  m.actual = root;
  return m;
}

namespace {

bool witnesses(const KripkeModel& m, int w, CanonId id, Base base) {
  if (!check_frame(m, base).verdict) return false;
  return canonical_of_model(m, w, canon_vocab(id), canon_depth(id)) == id;
}

// Set partitions of `items`, each as a block index per item.
void for_each_partition(std::size_t count, const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> block(count, 0);
  std::function<bool(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == count) return visit(block);
    for (int b = 0; b <= used; ++b) {
      block[i] = b;
      if (!rec(i + 1, std::max(used, b + 1))) return false;
    }
    return true;
  };
  rec(0, 0);
}

// S5 at depth 2. One world per depth-1 formula in the root's classes; an
// agent's class around a world outside the root's class is chosen by
// partition search; minterms still missing from a group get fresh worlds.
// Incomplete: labels are never repeated.
constexpr std::uint64_t kLabelSearchAttempts = 20000;

std::optional<KripkeModel> s5_label_search(CanonId id, const Budget& budget, std::uint64_t& nodes) {
  const CanonNode& root = canon_node(id);
  const Vocab& v = vocab(root.vocab);
  const int n = v.agents, G = v.group_count();
  std::vector<CanonId> labels{prune_up(id, 1)};
  for (const auto& set : root.children)
    for (CanonId c : set)
      if (std::find(labels.begin(), labels.end(), c) == labels.end()) labels.push_back(c);
  const int L = static_cast<int>(labels.size());
  // in_root[i][a]: world a shares agent i's class with the root.
  std::vector<std::vector<char>> in_root(n + 1, std::vector<char>(L, 0));
  for (int i = 1; i <= n; ++i)
    for (int a = 0; a < L; ++a) in_root[i][a] = contains(root.children[agent_bit(i) - 1], labels[a]);
  for (int i = 1; i <= n; ++i)
    if (!in_root[i][0]) return std::nullopt;
  std::vector<std::vector<int>> outside(n + 1);
  for (int i = 1; i <= n; ++i)
    for (int a = 0; a < L; ++a)
      if (!in_root[i][a]) outside[i].push_back(a);

  // blocks[i][a]: agent i's class id for world a; -1 is the root's class.
  std::vector<std::vector<int>> blocks(n + 1, std::vector<int>(L, -1));
  std::optional<KripkeModel> found;

  auto attempt = [&]() -> std::optional<KripkeModel> {
    // Fresh worlds: minterm plus the agent classes they join.
    std::set<std::pair<Minterm, std::vector<std::pair<int, int>>>> fresh;
    for (int a = 0; a < L; ++a) {
      const CanonNode& eta = canon_node(labels[a]);
      for (int g = 1; g <= G; ++g) {
        MintermSet want = 0, have = 0;
        for (CanonId c : eta.children[g - 1]) want |= MintermSet{1} << canon_minterm(c);
        auto members = mask_members(static_cast<AgentMask>(g));
        for (int b = 0; b < L; ++b) {
          bool all = true;
          for (int i : members) all = all && blocks[i][b] == blocks[i][a];
          if (all) have |= MintermSet{1} << canon_minterm(labels[b]);
        }
        if (have & ~want) return std::nullopt;
        if (have == want) continue;
        std::vector<std::pair<int, int>> joins;
        for (int i : members) {
          if (blocks[i][a] < 0) return std::nullopt;
          joins.emplace_back(i, blocks[i][a]);
        }
        for (int m = 0; m < v.minterm_count(); ++m)
          if (((want & ~have) >> m) & 1) fresh.insert({static_cast<Minterm>(m), joins});
      }
    }
    KripkeModel m(n, v.atoms);
    for (int a = 0; a < L; ++a) m.add_world("w" + std::to_string(a), canon_minterm(labels[a]));
    std::vector<std::vector<std::pair<int, int>>> fresh_joins;
    for (const auto& [mt, joins] : fresh) {
      m.add_world("x" + std::to_string(fresh_joins.size()), mt);
      fresh_joins.push_back(joins);
    }
    auto class_of = [&](int i, int w) -> long {
      if (w < L) return blocks[i][w];
      for (const auto& [j, b] : fresh_joins[w - L])
        if (j == i) return b;
      return -2 - static_cast<long>(w);  // singleton
    };
    for (int i = 1; i <= n; ++i)
      for (int u = 0; u < m.size(); ++u)
        for (int w = 0; w < m.size(); ++w)
          if (class_of(i, u) == class_of(i, w)) m.add_edge(i, u, w);
    m.actual = 0;
    if (canonical_of_model(m, 0, root.vocab, 2) != id) return std::nullopt;
    return m;
  };

  std::function<bool(int)> rec = [&](int i) -> bool {
    if (i > n) {
      if (++nodes > std::min(budget.max_nodes, kLabelSearchAttempts)) return false;
      found = attempt();
      return !found;
    }
    bool go = true;
    for_each_partition(outside[i].size(), [&](const std::vector<int>& part) {
      for (std::size_t k = 0; k < part.size(); ++k) blocks[i][outside[i][k]] = part[k];
      go = rec(i + 1);
      return go;
    });
    return go;
  };
  rec(1);
  return found;
}

}  // namespace

SatVerdict satisfiable(CanonId id, Base base, const Budget& budget) {
  SatVerdict out;
  auto rep = check_structural(id, base);
  if (!rep.ok) {
    out.kind = SatKind::Unsat;
    out.reason = rep.condition + " at " + rep.path;
    return out;
  }
  KripkeModel tree = tree_witness(id, base);
  if (witnesses(tree, *tree.actual, id, base)) {
    out.kind = SatKind::Sat;
    out.witness = std::move(tree);
    return out;
  }
  const Vocab& v = vocab(canon_vocab(id));
  if (base == Base::S5 && canon_depth(id) == 2 && !v.dpc) {
    std::uint64_t nodes = 0;
    if (auto m = s5_label_search(id, budget, nodes)) {
      out.kind = SatKind::Sat;
      out.witness = std::move(m);
      return out;
    }
  }
  if (v.atoms.size() <= kOracleMaxAtoms && v.agents <= kOracleMaxAgents) {
    int worlds = std::min(budget.max_worlds, kOracleMaxWorlds);
    std::uint64_t seen = 0;
    bool exhausted = enumerate_models(v.atoms, v.agents, base, worlds, [&](const KripkeModel& m) {
      if (++seen > budget.max_nodes) return false;
      if (canonical_of_model(m, 0, canon_vocab(id), canon_depth(id)) == id) {
        out.kind = SatKind::Sat;
        out.witness = m;
        return false;
      }
      return true;
    }, {true, 0});
    if (out.kind == SatKind::Sat) return out;
    out.reason = exhausted ? "no witness up to " + std::to_string(worlds) + " worlds"
                           : "model search budget exhausted";
  } else {
    out.reason = "vocabulary too large for model search";
  }
  out.kind = SatKind::Unknown;
  return out;
}

// ---------------------------------------------------------------- decomposition

namespace {

struct Branch {
  std::vector<std::pair<Formula, bool>> props;  // propositional literals
  std::vector<std::pair<AgentMask, Formula>> boxes;
  std::vector<std::pair<AgentMask, Formula>> diamonds;
};

constexpr std::size_t kMaxBranches = 4096;

// Disjunctive normal form over modal literals; nullopt when it gets too big.
std::optional<std::vector<Branch>> dnf(const Formula& f, bool pos) {
  using Out = std::optional<std::vector<Branch>>;
  auto product = [](const std::vector<Branch>& a, const std::vector<Branch>& b) -> Out {
    if (a.size() * b.size() > kMaxBranches) return std::nullopt;
    std::vector<Branch> out;
    for (const auto& x : a)
      for (const auto& y : b) {
        Branch z = x;
        z.props.insert(z.props.end(), y.props.begin(), y.props.end());
        z.boxes.insert(z.boxes.end(), y.boxes.begin(), y.boxes.end());
        z.diamonds.insert(z.diamonds.end(), y.diamonds.begin(), y.diamonds.end());
        out.push_back(std::move(z));
      }
    return out;
  };
  switch (f->op) {
    case Op::Atom:
    case Op::Top:
    case Op::Bot:
    case Op::C:
      return std::vector<Branch>{Branch{{{f, pos}}, {}, {}}};
    case Op::Not:
      return dnf(f->lhs, !pos);
    case Op::And:
    case Op::Or: {
      auto a = dnf(f->lhs, pos);
      if (!a) return std::nullopt;
      auto b = dnf(f->rhs, pos);
      if (!b) return std::nullopt;
      bool conj = (f->op == Op::And) == pos;
      if (conj) return product(*a, *b);
      if (a->size() + b->size() > kMaxBranches) return std::nullopt;
      a->insert(a->end(), b->begin(), b->end());
      return a;
    }
    case Op::K:
    case Op::D: {
      Branch br;
      if (pos)
        br.boxes.emplace_back(f->group, f->lhs);
      else
        br.diamonds.emplace_back(f->group, mk_not(f->lhs));
      return std::vector<Branch>{br};
    }
  }
  return std::nullopt;
}

class Decomposer {
 public:
  Decomposer(VocabId v, Base base, const Budget& budget) : vid_(v), v_(vocab(v)), base_(base), budget_(budget) {
    if (v_.agents > 4) throw CanonError("enumeration supports at most 4 agents");
    const int G = v_.group_count();
    // Families of groups closed under nonempty subsets.
    for (std::uint32_t fam = 0; fam < (1u << G); ++fam) {
      bool closed = true;
      for (int g = 1; g <= G && closed; ++g)
        if ((fam >> (g - 1)) & 1)
          for (int h = 1; h <= G && closed; ++h)
            if ((h & g) == h && !((fam >> (h - 1)) & 1)) closed = false;
      if (closed) down_closed_.push_back(fam);
    }
  }

  CanonList run(const Formula& f, int k) {
    CanonList out;
    const auto& r = solve(f, k);
    out.items = r;
    out.complete = !truncated_;
    out.nodes = nodes_;
    for (CanonId c : r)
      if (unknown_.count(c)) ++out.unknown;
    return out;
  }

 private:
  VocabId vid_;
  const Vocab& v_;
  Base base_;
  Budget budget_;
  std::uint64_t nodes_ = 0;
  bool truncated_ = false;
  std::vector<std::uint32_t> down_closed_;
  std::map<std::pair<const FormulaNode*, int>, std::vector<CanonId>> memo_;
  std::vector<Formula> keep_alive_;
  std::map<CanonId, SatKind> verdicts_;
  std::set<CanonId> unknown_;
  std::map<int, std::vector<CanonId>> all_memo_;

  bool tick() {
    if (++nodes_ > budget_.max_nodes) {
      truncated_ = true;
      return false;
    }
    return true;
  }

  // Sat or Unknown members are kept; Unknown ones are remembered.
  bool admissible(CanonId c) {
    auto it = verdicts_.find(c);
    if (it == verdicts_.end()) {
      Budget b = budget_;
      b.max_nodes = std::min<std::uint64_t>(budget_.max_nodes, 20000);
      it = verdicts_.emplace(c, satisfiable(c, base_, b).kind).first;
      if (it->second == SatKind::Unknown) unknown_.insert(c);
    }
    return it->second != SatKind::Unsat;
  }

  const std::vector<CanonId>& solve(const Formula& f, int k) {
    auto key = std::make_pair(f.get(), k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    keep_alive_.push_back(f);
    std::set<CanonId> acc;
    auto branches = dnf(f, true);
    if (!branches) branches = std::vector<Branch>{Branch{}};
    for (const auto& br : *branches) {
      if (truncated_) break;
      solve_branch(f, br, k, acc);
    }
    return memo_.emplace(key, std::vector<CanonId>(acc.begin(), acc.end())).first->second;
  }

  // All admissible formulas of depth k.
  const std::vector<CanonId>& everything(int k) {
    if (auto it = all_memo_.find(k); it != all_memo_.end()) return it->second;
    const auto& r = solve(mk_top(), k);
    return all_memo_.emplace(k, r).first->second;
  }

  std::vector<Minterm> roots(const Branch& br) {
    std::vector<Minterm> out;
    for (int m = 0; m < v_.minterm_count(); ++m) {
      bool ok = true;
      for (const auto& [lit, pos] : br.props)
        if (lit->op != Op::C && minterm_satisfies(v_, static_cast<Minterm>(m), lit) != pos) ok = false;
      if (ok) out.push_back(static_cast<Minterm>(m));
    }
    return out;
  }

  void finish(const Formula& f, CanonId c, std::set<CanonId>& acc) {
    if (!local_violation(c, base_).empty()) return;
    if (!entails(c, f)) return;
    if (!admissible(c)) return;
    if (acc.size() >= budget_.max_candidates) {
      truncated_ = true;
      return;
    }
    acc.insert(c);
  }

  void solve_branch(const Formula& f, const Branch& br, int k, std::set<CanonId>& acc) {
    auto rs = roots(br);
    if (rs.empty()) return;
    if (k == 0) {
      if (!br.boxes.empty() || !br.diamonds.empty()) {
        // Modal literals over a depth-0 formula are a vocabulary error.
        throw CanonError("formula is deeper than the requested depth");
      }
      for (Minterm m : rs) {
        if (!v_.dpc) {
          if (!tick()) return;
          finish(f, canon_leaf(vid_, m), acc);
          continue;
        }
        for (MintermSet tc = 0; tc < (MintermSet{1} << v_.minterm_count()); ++tc) {
          if (!tick()) return;
          finish(f, canon_leaf(vid_, m, tc), acc);
        }
      }
      return;
    }
    const int G = v_.group_count();
    // Pool per group: formulas entailing every box argument that applies.
    std::vector<std::optional<std::set<CanonId>>> pool(G);
    for (int g = 1; g <= G; ++g) {
      for (const auto& [h, psi] : br.boxes) {
        if ((h & static_cast<AgentMask>(g)) != h) continue;
        const auto& s = solve(psi, k - 1);
        if (truncated_) return;
        std::set<CanonId> next;
        if (!pool[g - 1]) {
          next.insert(s.begin(), s.end());
        } else {
          for (CanonId c : s)
            if (pool[g - 1]->count(c)) next.insert(c);
        }
        pool[g - 1] = std::move(next);
      }
      if (!pool[g - 1]) {
        const auto& all = everything(k - 1);
        if (truncated_) return;
        pool[g - 1] = std::set<CanonId>(all.begin(), all.end());
      }
    }
    std::set<CanonId> cand_set;
    for (const auto& p : pool) cand_set.insert(p->begin(), p->end());
    std::vector<CanonId> cand(cand_set.begin(), cand_set.end());
    // Diamond witnesses, resolved per candidate once. A diamond with a single
    // possible witness forces that witness into the group.
    std::vector<std::pair<AgentMask, std::vector<char>>> dias;
    std::vector<std::uint32_t> required(cand.size(), 0);
    for (const auto& [g, chi] : br.diamonds) {
      std::vector<char> ok(cand.size(), 0);
      std::size_t hits = 0, last = 0;
      for (std::size_t x = 0; x < cand.size(); ++x)
        if ((ok[x] = entails(cand[x], chi))) ++hits, last = x;
      if (hits == 0) return;
      if (hits == 1) required[last] |= 1u << (g - 1);
      dias.emplace_back(g, std::move(ok));
    }
    std::vector<std::vector<std::uint32_t>> options(cand.size());
    for (std::size_t x = 0; x < cand.size(); ++x) {
      std::uint32_t allowed = 0;
      for (int g = 1; g <= G; ++g)
        if (pool[g - 1]->count(cand[x])) allowed |= 1u << (g - 1);
      for (std::uint32_t fam : down_closed_)
        if ((fam & ~allowed) == 0 && (fam & required[x]) == required[x]) options[x].push_back(fam);
      if (options[x].empty()) return;
    }
    std::vector<std::uint32_t> choice(cand.size(), 0);
    std::function<void(std::size_t, const std::vector<CanonSet>&)> dfs;
    for (Minterm m : rs) {
      std::vector<CanonSet> ch(G);
      dfs = [&](std::size_t x, const std::vector<CanonSet>& cur) {
        if (truncated_) return;
        if (x == cand.size()) {
          for (const auto& [g, ok] : dias) {
            bool hit = false;
            for (std::size_t y = 0; y < cand.size() && !hit; ++y)
              if (ok[y] && ((choice[y] >> (g - 1)) & 1)) hit = true;
            if (!hit) return;
          }
          MintermSet tc = 0;
          if (v_.dpc)
            for (const auto& s : cur)
              for (CanonId c : s) tc |= (MintermSet{1} << canon_minterm(c)) | canon_tc(c);
          finish(f, canon_make(vid_, k, m, tc, cur), acc);
          return;
        }
        for (std::uint32_t fam : options[x]) {
          if (!tick()) return;
          if (!compatible(cand[x], fam, cur, k)) continue;
          choice[x] = fam;
          if (fam == 0) {
            dfs(x + 1, cur);
          } else {
            std::vector<CanonSet> nxt = cur;
            for (int g = 1; g <= G; ++g)
              if ((fam >> (g - 1)) & 1) nxt[g - 1].push_back(cand[x]);
            dfs(x + 1, nxt);
          }
          if (truncated_) return;
        }
        choice[x] = 0;
      };
      dfs(0, ch);
      if (truncated_) return;
    }
  }

  // Identical successors force every member of R_g to share its R_g set.
  bool compatible(CanonId x, std::uint32_t fam, const std::vector<CanonSet>& cur, int k) const {
    if (!needs_trans_eucl(base_) || k < 2) return true;
    for (int g = 1; g <= v_.group_count(); ++g) {
      if (!((fam >> (g - 1)) & 1) || cur[g - 1].empty()) continue;
      if (canon_children(x, static_cast<AgentMask>(g)) !=
          canon_children(cur[g - 1].front(), static_cast<AgentMask>(g)))
        return false;
    }
    return true;
  }
};

}  // namespace

CanonList decompose(const Formula& f, VocabId v, Base base, int k, const Budget& budget) {
  if (modal_depth(f) > k) throw CanonError("requested depth is below the formula's modal depth");
  if (mentions_common(f) && !vocab(v).dpc) throw CanonError("common knowledge needs a dpc vocabulary");
  for (const auto& a : atoms_of(f)) {
    const auto& at = vocab(v).atoms;
    if (std::find(at.begin(), at.end(), a) == at.end()) throw CanonError("atom " + a + " outside the vocabulary");
  }
  if (max_agent(f) > vocab(v).agents) throw CanonError("agent outside the vocabulary");
  Decomposer d(v, base, budget);
  return d.run(f, k);
}

CanonList extensions(CanonId id, int m, Base base, const Budget& budget) {
  if (m < canon_depth(id)) throw CanonError("target depth below the formula's depth");
  if (m == canon_depth(id)) return CanonList{{id}, true, 0, 0};
  // gamma^(up k) = delta iff gamma entails delta, for canonical gamma.
  return decompose(canonical_to_formula(id), canon_vocab(id), base, m, budget);
}

}  // namespace dkforget
