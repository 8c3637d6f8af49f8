#include "dkforget/canonical.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

namespace dkforget {

namespace {

struct NodeHash {
  std::size_t operator()(const CanonNode* n) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t x) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    mix(n->vocab);
    mix(static_cast<std::uint64_t>(n->depth));
    mix(n->minterm);
    mix(n->tc);
    for (const auto& s : n->children) {
      mix(s.size());
      for (CanonId c : s) mix(c);
    }
    return static_cast<std::size_t>(h);
  }
};

struct NodeEq {
  bool operator()(const CanonNode* a, const CanonNode* b) const {
    return a->vocab == b->vocab && a->depth == b->depth && a->minterm == b->minterm &&
           a->tc == b->tc && a->children == b->children;
  }
};

struct Store {
  std::deque<Vocab> vocabs;  // stable references across interning
  std::deque<CanonNode> nodes;
  std::unordered_map<const CanonNode*, CanonId, NodeHash, NodeEq> index;
  std::unordered_map<std::uint64_t, CanonId> down_memo;
  std::unordered_map<std::uint64_t, CanonId> up_memo;
  std::map<std::pair<CanonId, std::string>, CanonId> elim_memo;
  std::unordered_map<CanonId, Formula> formula_memo;
};

Store& store() {
  static Store s;
  return s;
}

CanonId intern(CanonNode node) {
  auto& st = store();
  auto it = st.index.find(&node);
  if (it != st.index.end()) return it->second;
  CanonId id = static_cast<CanonId>(st.nodes.size());
  st.nodes.push_back(std::move(node));
  st.index.emplace(&st.nodes.back(), id);
  return id;
}

}  // namespace

VocabId intern_vocab(const Vocab& v) {
  if (v.atoms.size() > kMaxCanonAtoms) throw CanonError("canonical formulas support at most 6 atoms");
  if (v.agents < 1 || v.agents > kMaxAgents) throw CanonError("agent count out of range");
  auto& vs = store().vocabs;
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (vs[i] == v) return static_cast<VocabId>(i);
  vs.push_back(v);
  return static_cast<VocabId>(vs.size() - 1);
}

const Vocab& vocab(VocabId v) { return store().vocabs.at(v); }

const CanonNode& canon_node(CanonId id) { return store().nodes[id]; }
std::size_t canon_store_size() { return store().nodes.size(); }

CanonId canon_leaf(VocabId v, Minterm m, MintermSet tc) {
  CanonNode n;
  n.vocab = v;
  n.depth = 0;
  n.minterm = m;
  n.tc = vocab(v).dpc ? tc : 0;
  return intern(std::move(n));
}

CanonId canon_make(VocabId v, int depth, Minterm m, MintermSet tc, std::vector<CanonSet> children) {
  if (depth == 0) return canon_leaf(v, m, tc);
  if (static_cast<int>(children.size()) != vocab(v).group_count())
    throw CanonError("children must cover every group");
  for (auto& s : children) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  CanonNode n;
  n.vocab = v;
  n.depth = depth;
  n.minterm = m;
  n.tc = vocab(v).dpc ? tc : 0;
  n.children = std::move(children);
  return intern(std::move(n));
}

// ---------------------------------------------------------------- models

std::vector<CanonId> canonical_of_model_all(const KripkeModel& m, VocabId vid, int k) {
  const Vocab& v = vocab(vid);
  if (v.agents != m.agents()) throw CanonError("vocabulary and model disagree on agents");
  std::vector<int> map;
  for (const auto& a : v.atoms) {
    int idx = m.atom_index(a);
    if (idx < 0) throw CanonError("atom " + a + " missing from model");
    map.push_back(idx);
  }
  const int W = m.size();
  std::vector<Minterm> mt(W, 0);
  for (int w = 0; w < W; ++w)
    for (std::size_t j = 0; j < map.size(); ++j)
      if (m.holds(w, map[j])) mt[w] |= Minterm{1} << j;
  std::vector<MintermSet> tc(W, 0);
  if (v.dpc)
    for (int w = 0; w < W; ++w)
      for (int u : reachable(m, w)) tc[w] |= MintermSet{1} << mt[u];
  std::vector<CanonId> level(W);
  for (int w = 0; w < W; ++w) level[w] = canon_leaf(vid, mt[w], tc[w]);
  if (k == 0) return level;
  std::vector<std::vector<WorldSet>> gs(v.group_count(), std::vector<WorldSet>(W));
  for (int g = 1; g <= v.group_count(); ++g)
    for (int w = 0; w < W; ++w) gs[g - 1][w] = m.group_succ(w, static_cast<AgentMask>(g));
  for (int d = 1; d <= k; ++d) {
    std::vector<CanonId> next(W);
    for (int w = 0; w < W; ++w) {
      std::vector<CanonSet> ch(v.group_count());
      for (int g = 0; g < v.group_count(); ++g)
        for (int u : gs[g][w]) ch[g].push_back(level[u]);
      next[w] = canon_make(vid, d, mt[w], tc[w], std::move(ch));
    }
    level.swap(next);
  }
  return level;
}

// Only worlds within k steps of w matter; level d is needed at distance <= k - d.
CanonId canonical_of_model(const KripkeModel& m, int w, VocabId vid, int k) {
  const Vocab& v = vocab(vid);
  if (v.agents != m.agents()) throw CanonError("vocabulary and model disagree on agents");
  std::vector<int> map;
  for (const auto& a : v.atoms) {
    int idx = m.atom_index(a);
    if (idx < 0) throw CanonError("atom " + a + " missing from model");
    map.push_back(idx);
  }
  std::vector<int> dist(m.size(), -1);
  std::vector<int> order{w};
  dist[w] = 0;
  for (std::size_t x = 0; x < order.size(); ++x) {
    int u = order[x];
    if (dist[u] == k) continue;
    for (int i = 1; i <= m.agents(); ++i)
      for (int t : m.succ(i, u))
        if (dist[t] < 0) {
          dist[t] = dist[u] + 1;
          order.push_back(t);
        }
  }
  auto minterm = [&](int u) {
    Minterm mt = 0;
    for (std::size_t j = 0; j < map.size(); ++j)
      if (m.holds(u, map[j])) mt |= Minterm{1} << j;
    return mt;
  };
  std::vector<Minterm> mt(m.size(), 0);
  std::vector<MintermSet> tc(m.size(), 0);
  std::vector<CanonId> level(m.size(), 0);
  for (int u : order) {
    mt[u] = minterm(u);
    if (v.dpc)
      for (int x : reachable(m, u)) tc[u] |= MintermSet{1} << minterm(x);
    level[u] = canon_leaf(vid, mt[u], tc[u]);
  }
  for (int d = 1; d <= k; ++d) {
    std::vector<CanonId> next(m.size(), 0);
    for (int u : order) {
      if (dist[u] > k - d) continue;
      std::vector<CanonSet> ch(v.group_count());
      for (int g = 1; g <= v.group_count(); ++g)
        for (int t : m.group_succ(u, static_cast<AgentMask>(g))) ch[g - 1].push_back(level[t]);
      next[u] = canon_make(vid, d, mt[u], tc[u], std::move(ch));
    }
    level.swap(next);
  }
  return level[w];
}

// ---------------------------------------------------------------- rendering

Formula minterm_formula(const Vocab& v, Minterm m) {
  Formula f;
  for (std::size_t j = 0; j < v.atoms.size(); ++j) {
    Formula lit = mk_atom(v.atoms[j]);
    if (!((m >> j) & 1)) lit = mk_not(lit);
    f = f ? mk_and(f, lit) : lit;
  }
  return f ? f : mk_top();
}

std::string minterm_to_string(const Vocab& v, Minterm m) {
  return render_formula(minterm_formula(v, m));
}

namespace {

// Inside a diamond, a lone positive atom would render as ~D ~p, whose ~p
// literal elimination turns into true. Padding keeps the substitution exact.
Formula diamond_arg(Formula f) {
  if (f->op == Op::Atom) return mk_and(f, mk_top());
  return f;
}

Formula disjunction(const std::vector<Formula>& fs) {
  Formula out;
  for (const auto& f : fs) out = out ? mk_or(out, f) : f;
  return out;
}

}  // namespace

Formula canonical_to_formula(CanonId id) {
  auto& memo = store().formula_memo;
  auto it = memo.find(id);
  if (it != memo.end()) return it->second;
  const CanonNode& n = canon_node(id);
  const Vocab& v = vocab(n.vocab);
  Formula f = minterm_formula(v, n.minterm);
  if (n.depth > 0) {
    for (int g = 1; g <= v.group_count(); ++g) {
      AgentMask B = static_cast<AgentMask>(g);
      const CanonSet& s = n.children[g - 1];
      Formula nabla;
      if (s.empty()) {
        nabla = mk_box(B, mk_bot());
      } else {
        std::vector<Formula> fs;
        for (CanonId c : s) fs.push_back(canonical_to_formula(c));
        nabla = mk_box(B, disjunction(fs));
        for (const auto& x : fs) nabla = mk_and(nabla, mk_dhat(B, diamond_arg(x)));
      }
      f = mk_and(f, nabla);
    }
  }
  if (v.dpc) {
    Formula nabla;
    if (n.tc == 0) {
      nabla = mk_c(mk_bot());
    } else {
      std::vector<Formula> fs;
      for (int m = 0; m < v.minterm_count(); ++m)
        if ((n.tc >> m) & 1) fs.push_back(minterm_formula(v, static_cast<Minterm>(m)));
      nabla = mk_c(disjunction(fs));
      for (const auto& x : fs) nabla = mk_and(nabla, mk_chat(diamond_arg(x)));
    }
    f = mk_and(f, nabla);
  }
  memo.emplace(id, f);
  return f;
}

// ---------------------------------------------------------------- pruning

CanonId prune_down(CanonId id, int l) {
  const CanonNode& n = canon_node(id);
  if (l < 0 || l > n.depth) throw CanonError("prune_down beyond depth");
  if (l == 0) return id;
  if (l == n.depth) return canon_leaf(n.vocab, n.minterm, n.tc);
  std::uint64_t key = (std::uint64_t{id} << 8) | static_cast<std::uint64_t>(l);
  auto& memo = store().down_memo;
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::vector<CanonSet> ch;
  for (const auto& s : n.children) ch.push_back(prune_down_set(s, l));
  CanonId r = canon_make(n.vocab, n.depth - l, n.minterm, n.tc, std::move(ch));
  memo.emplace(key, r);
  return r;
}

CanonId prune_up(CanonId id, int l) {
  const CanonNode& n = canon_node(id);
  if (l < 0) throw CanonError("negative prune level");
  if (n.depth <= l) return id;
  if (l == 0) return canon_leaf(n.vocab, n.minterm, n.tc);
  std::uint64_t key = (std::uint64_t{id} << 8) | static_cast<std::uint64_t>(l);
  auto& memo = store().up_memo;
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::vector<CanonSet> ch;
  for (const auto& s : n.children) ch.push_back(prune_up_set(s, l - 1));
  CanonId r = canon_make(n.vocab, l, n.minterm, n.tc, std::move(ch));
  memo.emplace(key, r);
  return r;
}

CanonSet prune_down_set(const CanonSet& s, int l) {
  CanonSet out;
  for (CanonId c : s) out.push_back(prune_down(c, l));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CanonSet prune_up_set(const CanonSet& s, int l) {
  CanonSet out;
  for (CanonId c : s) out.push_back(prune_up(c, l));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------- elimination

Minterm eliminate_minterm(Minterm m, int atom) {
  Minterm low = m & ((Minterm{1} << atom) - 1);
  Minterm high = m >> (atom + 1);
  return low | (high << atom);
}

VocabId eliminated_vocab(VocabId vid, const std::string& p) {
  Vocab v = vocab(vid);
  auto it = std::find(v.atoms.begin(), v.atoms.end(), p);
  if (it == v.atoms.end()) throw CanonError("atom " + p + " not in vocabulary");
  v.atoms.erase(it);
  return intern_vocab(v);
}

CanonId eliminate_in_canonical(CanonId id, const std::string& p) {
  auto key = std::make_pair(id, p);
  auto& memo = store().elim_memo;
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  const CanonNode n = canon_node(id);
  const Vocab& v = vocab(n.vocab);
  int j = static_cast<int>(std::find(v.atoms.begin(), v.atoms.end(), p) - v.atoms.begin());
  VocabId nv = eliminated_vocab(n.vocab, p);
  MintermSet tc = 0;
  for (int m = 0; m < v.minterm_count(); ++m)
    if ((n.tc >> m) & 1) tc |= MintermSet{1} << eliminate_minterm(static_cast<Minterm>(m), j);
  std::vector<CanonSet> ch;
  for (const auto& s : n.children) {
    CanonSet e;
    for (CanonId c : s) e.push_back(eliminate_in_canonical(c, p));
    ch.push_back(std::move(e));
  }
  CanonId r = canon_make(nv, n.depth, eliminate_minterm(n.minterm, j), tc, std::move(ch));
  memo.emplace(key, r);
  return r;
}

// ---------------------------------------------------------------- entailment

bool minterm_satisfies(const Vocab& v, Minterm m, const Formula& f) {
  switch (f->op) {
    case Op::Atom: {
      auto it = std::find(v.atoms.begin(), v.atoms.end(), f->name);
      if (it == v.atoms.end()) throw CanonError("atom " + f->name + " outside the vocabulary");
      return (m >> (it - v.atoms.begin())) & 1;
    }
    case Op::Top: return true;
    case Op::Bot: return false;
    case Op::Not: return !minterm_satisfies(v, m, f->lhs);
    case Op::And: return minterm_satisfies(v, m, f->lhs) && minterm_satisfies(v, m, f->rhs);
    case Op::Or: return minterm_satisfies(v, m, f->lhs) || minterm_satisfies(v, m, f->rhs);
    default: throw CanonError("modal operator where a propositional formula is required");
  }
}

bool entails(CanonId root, const Formula& f) {
  struct KeyHash {
    std::size_t operator()(const std::pair<CanonId, const FormulaNode*>& k) const {
      return std::hash<const void*>()(k.second) * 31 + k.first;
    }
  };
  std::unordered_map<std::pair<CanonId, const FormulaNode*>, bool, KeyHash> memo;
  std::function<bool(CanonId, const Formula&)> go = [&](CanonId id, const Formula& g) -> bool {
    auto key = std::make_pair(id, g.get());
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const CanonNode& n = canon_node(id);
    const Vocab& v = vocab(n.vocab);
    bool r = false;
    switch (g->op) {
      case Op::Atom:
      case Op::Top:
      case Op::Bot:
        r = minterm_satisfies(v, n.minterm, g);
        break;
      case Op::Not:
        r = !go(id, g->lhs);
        break;
      case Op::And:
        r = go(id, g->lhs) && go(id, g->rhs);
        break;
      case Op::Or:
        r = go(id, g->lhs) || go(id, g->rhs);
        break;
      case Op::K:
      case Op::D: {
        if (n.depth == 0) throw CanonError("formula is deeper than the canonical formula");
        if ((g->group >> v.agents) != 0) throw CanonError("agent outside the vocabulary");
        r = true;
        for (CanonId c : n.children[g->group - 1])
          if (!go(c, g->lhs)) {
            r = false;
            break;
          }
        break;
      }
      case Op::C: {
        if (!v.dpc) throw CanonError("common knowledge needs a dpc canonical formula");
        r = true;
        for (int m = 0; m < v.minterm_count() && r; ++m)
          if ((n.tc >> m) & 1) r = minterm_satisfies(v, static_cast<Minterm>(m), g->lhs);
        break;
      }
    }
    memo.emplace(key, r);
    return r;
  };
  return go(root, f);
}

std::vector<CanonId> wholly_occurring(CanonId id) {
  std::vector<CanonId> out{id};
  std::vector<char> seen;
  auto mark = [&](CanonId c) {
    if (c >= seen.size()) seen.resize(c + 1, 0);
    if (seen[c]) return false;
    seen[c] = 1;
    return true;
  };
  mark(id);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& s : canon_node(out[i]).children)
      for (CanonId c : s)
        if (mark(c)) out.push_back(c);
  return out;
}

std::string canon_debug_dump(CanonId id) {
  std::ostringstream out;
  std::function<void(CanonId, int)> go = [&](CanonId c, int indent) {
    const CanonNode& n = canon_node(c);
    const Vocab& v = vocab(n.vocab);
    out << std::string(indent, ' ') << "#" << c << " d=" << n.depth << " "
        << minterm_to_string(v, n.minterm);
    if (v.dpc) {
      out << " tc{";
      bool first = true;
      for (int m = 0; m < v.minterm_count(); ++m)
        if ((n.tc >> m) & 1) {
          out << (first ? "" : "; ") << minterm_to_string(v, static_cast<Minterm>(m));
          first = false;
        }
      out << "}";
    }
    out << "\n";
    for (int g = 1; g <= static_cast<int>(n.children.size()); ++g) {
      out << std::string(indent + 2, ' ') << "R" << mask_to_string(static_cast<AgentMask>(g))
          << (n.children[g - 1].empty() ? " (none)" : "") << "\n";
      for (CanonId ch : n.children[g - 1]) go(ch, indent + 4);
    }
  };
  go(id, 0);
  return out.str();
}

}  // namespace dkforget
