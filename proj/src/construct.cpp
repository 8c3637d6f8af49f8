#include "dkforget/construct.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace dkforget {

namespace {

std::string digits(AgentMask g) {
  std::string s;
  for (int i : mask_members(g)) s += std::to_string(i);
  return s;
}

bool contains(const CanonSet& s, CanonId x) { return std::binary_search(s.begin(), s.end(), x); }

// Reflexive transitive closure of t under R_B and its inverse.
WorldSet group_component(const KripkeModel& m, int t, AgentMask g) {
  std::vector<std::vector<int>> pred(m.size());
  std::vector<WorldSet> succ(m.size());
  for (int w = 0; w < m.size(); ++w) {
    succ[w] = m.group_succ(w, g);
    for (int v : succ[w]) pred[v].push_back(w);
  }
  std::vector<char> seen(m.size(), 0);
  std::deque<int> queue{t};
  seen[t] = 1;
  while (!queue.empty()) {
    int w = queue.front();
    queue.pop_front();
    for (const auto* adj : {&succ[w], &pred[w]})
      for (int v : *adj)
        if (!seen[v]) {
          seen[v] = 1;
          queue.push_back(v);
        }
  }
  WorldSet out;
  for (int w = 0; w < m.size(); ++w)
    if (seen[w]) out.push_back(w);
  return out;
}

void merge_into(KripkeModel& m, const WorldSet& u, int agent) {
  std::vector<int> refl;
  for (int y : u)
    if (m.has_edge(agent, y, y)) refl.push_back(y);
  for (int x : u)
    for (int y : refl) m.add_edge(agent, x, y);
}

WorldSet as_set(std::set<int> s) { return WorldSet(s.begin(), s.end()); }

// Shared state of one construction run over a fixed source model.
class Builder {
 public:
  Builder(const KripkeModel& src, VocabId v, const std::string& p, Base base)
      : src_(src), vid_(v), v_(vocab(v)), p_(p), base_(base), m_(v_.agents, v_.atoms) {
    auto it = std::find(v_.atoms.begin(), v_.atoms.end(), p);
    if (it == v_.atoms.end()) throw ConstructionError("atom " + p + " is not in the formula's vocabulary");
    p_index_ = static_cast<int>(it - v_.atoms.begin());
    vp_ = eliminated_vocab(v, p);
    if (src.agents() != v_.agents) throw ConstructionError("source model has a different number of agents");
    for (const auto& a : vocab(vp_).atoms)
      if (src.atom_index(a) < 0) throw ConstructionError("source model lacks atom " + a);
    for (const auto& a : v_.atoms) src_atom_.push_back(src.atom_index(a));
  }

  KripkeModel& model() { return m_; }
  std::vector<std::pair<int, int>>& rho() { return rho_; }
  std::vector<std::string>& trace() { return trace_; }

  // M', u' |= zeta^p, decided through the canonical formula of u'.
  bool sat_p(int u, CanonId zeta) { return table(canon_depth(zeta))[u] == eliminate_in_canonical(zeta, p_); }

  CanonId elim(CanonId c) { return eliminate_in_canonical(c, p_); }

  int add(const std::string& name, std::uint64_t val, int src_world, const std::string& why) {
    if (m_.size() >= kConstructMaxWorlds)
      throw ConstructionError("construction exceeds " + std::to_string(kConstructMaxWorlds) + " worlds");
    std::string nm = name;
    for (int n = 1; m_.world(nm) >= 0; ++n) nm = name + "~" + std::to_string(n);
    int w = m_.add_world(nm, val);
    rho_.emplace_back(w, src_world);
    trace_.push_back(nm + " <- " + src_.name(src_world) + (why.empty() ? "" : " " + why));
    return w;
  }

  // Basic construction for K and D; the caller closes reflexively for T.
  int basic(CanonId delta, int sp, const std::string& name) {
    const CanonNode& n = canon_node(delta);
    int s = add(name, n.minterm, sp, "#" + std::to_string(delta));
    if (n.depth == 0) {
      if (v_.dpc) {
        auto cl = cloud(sp, n.tc, name + "/tc");
        for (int i = 1; i <= v_.agents; ++i) {
          for (int t : src_.succ(i, sp))
            for (int ct : cl[t]) m_.add_edge(i, s, ct);
          for (const auto& [u, cus] : cl)
            if (src_.has_edge(i, u, sp))
              for (int cu : cus) m_.add_edge(i, cu, s);
          if (src_.has_edge(i, sp, sp)) m_.add_edge(i, s, s);
        }
      } else {
        std::set<int> roots;
        for (int i = 1; i <= v_.agents; ++i)
          for (int t : src_.succ(i, sp)) roots.insert(t);
        auto c = copy_from(as_set(roots), name + "/c");
        for (int i = 1; i <= v_.agents; ++i)
          for (int t : src_.succ(i, sp)) m_.add_edge(i, s, c.at(t));
      }
      return s;
    }
    for (int g = 1; g <= v_.group_count(); ++g) {
      int idx = 0;
      for (int t : src_.group_succ(sp, static_cast<AgentMask>(g)))
        for (CanonId eta : n.children[g - 1]) {
          if (!sat_p(t, eta)) continue;
          int u = basic(eta, t, name + "/" + digits(static_cast<AgentMask>(g)) + "." + std::to_string(idx++));
          for (int i : mask_members(static_cast<AgentMask>(g))) m_.add_edge(i, s, u);
        }
    }
    return s;
  }

  // Depth 0: a p-variant of sp whose edges are the preimage of the source
  // relation, so every frame condition carries over.
  int twin(CanonId delta, int sp, const std::string& name) {
    int s = add(name, canon_minterm(delta), sp, "#" + std::to_string(delta));
    std::set<int> roots;
    for (int i = 1; i <= v_.agents; ++i)
      for (int t : src_.succ(i, sp)) roots.insert(t);
    auto c = copy_from(as_set(roots), name + "/c");
    for (int i = 1; i <= v_.agents; ++i) {
      for (int t : src_.succ(i, sp)) m_.add_edge(i, s, c.at(t));
      for (const auto& [u, cu] : c)
        if (src_.has_edge(i, u, sp)) m_.add_edge(i, cu, s);
      if (src_.has_edge(i, sp, sp)) m_.add_edge(i, s, s);
    }
    return s;
  }

  // Copy of the source worlds forward-reachable from roots, roots included.
  std::map<int, int> copy_from(const WorldSet& roots, const std::string& prefix) {
    std::set<int> keep(roots.begin(), roots.end());
    for (int r : roots)
      for (int w : reachable(src_, r)) keep.insert(w);
    std::map<int, int> c;
    for (int w : keep) c[w] = add(prefix + "/" + src_.name(w), copy_val(w), w, "copy");
    for (int w : keep)
      for (int i = 1; i <= v_.agents; ++i)
        for (int x : src_.succ(i, w)) m_.add_edge(i, c.at(w), c.at(x));
    return c;
  }

  // One world per (source world reachable from `from`, matching tc minterm),
  // related as their sources are.
  std::map<int, std::vector<int>> cloud(int from, MintermSet tc, const std::string& prefix) {
    std::map<int, std::vector<int>> copies;
    const auto& base = table(0);
    for (int u : reachable(src_, from))
      for (int mt = 0; mt < v_.minterm_count(); ++mt) {
        if (!((tc >> mt) & 1)) continue;
        if (eliminate_minterm(static_cast<Minterm>(mt), p_index_) != canon_minterm(base[u])) continue;
        copies[u].push_back(add(prefix + "/" + src_.name(u) + "." + std::to_string(mt),
                                static_cast<std::uint64_t>(mt), u, "tc"));
      }
    for (const auto& [u, cus] : copies)
      for (int i = 1; i <= v_.agents; ++i)
        for (int x : src_.succ(i, u)) {
          auto it = copies.find(x);
          if (it == copies.end()) continue;
          for (int cu : cus)
            for (int cx : it->second) m_.add_edge(i, cu, cx);
        }
    return copies;
  }

  using Family = std::map<AgentMask, WorldSet>;

  // The transitive-Euclidean construction; returns the family T_B, B within X.
  Family te(CanonId gamma, CanonId xi, int k, int d, AgentMask X, int sp, const std::string& path, bool two) {
    const AgentMask all = all_agents(v_.agents);
    struct Made {
      int w, src;
      CanonId eta, zeta;
      AgentMask B;
      bool direct;  // a root successor rather than a mixed-group world
    };
    std::vector<Made> made;
    // Successors of the root, one per matching (eta, zeta) pair.
    for (AgentMask B : nonempty_subsets(X)) {
      int idx = 0;
      for (int t : src_.group_succ(sp, B))
        for (CanonId eta : canon_children(gamma, B))
          for (CanonId zeta : canon_children(xi, B)) {
            if (elim(prune_up(eta, k + d)) != elim(prune_up(zeta, k + d))) continue;
            if (!sat_p(t, zeta)) continue;
            int w = add(path + "/" + digits(B) + "." + std::to_string(idx++), canon_minterm(eta), t,
                        "successor eta #" + std::to_string(eta) + " zeta #" + std::to_string(zeta));
            made.push_back({w, t, eta, zeta, B, true});
          }
    }
    const std::size_t n1 = made.size();
    if (k == 0) {
      // Links between successors follow the source for agents outside both groups.
      for (const auto& a : made)
        for (const auto& b : made)
          for (int i : mask_members(static_cast<AgentMask>(all & ~(a.B | b.B))))
            if (src_.has_edge(i, a.src, b.src)) m_.add_edge(i, a.w, b.w);
    } else {
      // Worlds reached through groups that mix member and outside agents.
      for (std::size_t x = 0; x < n1; ++x) {
        const Made a = made[x];
        for (AgentMask C : nonempty_groups(v_.agents)) {
          AgentMask c1 = C & a.B, c2 = C & ~a.B;
          if (!c1 || !c2) continue;
          auto d_sets = nonempty_subsets(c2);
          auto shares = [&](CanonId eta) {
            if (!contains(canon_children(a.eta, C), prune_down(eta, 1))) return false;
            for (AgentMask D : d_sets)
              if (canon_children(eta, D) != canon_children(a.eta, D)) return false;
            return true;
          };
          int idx = 0;
          for (int u : src_.group_succ(a.src, C)) {
            if (two) {
              const Made* hit = nullptr;
              for (std::size_t y = 0; y < n1 && !hit; ++y)
                if (made[y].B == c1 && made[y].src == u && shares(made[y].eta) && sat_p(u, made[y].eta))
                  hit = &made[y];
              if (!hit)
                throw ConstructionError("mixed group: no successor world for " + src_.name(u) + " under " +
                                        m_.name(a.w));
              for (int i : mask_members(c2)) {
                m_.add_edge(i, a.w, hit->w);
                m_.add_edge(i, hit->w, hit->w);
              }
              continue;
            }
            bool found = false;
            for (CanonId eta : canon_children(gamma, c1)) {
              if (!shares(eta)) continue;
              for (CanonId zeta : canon_children(xi, c1)) {
                if (!sat_p(u, zeta)) continue;
                if (elim(prune_up(eta, k + d - 1)) != elim(prune_up(zeta, k + d - 1))) continue;
                int w = add(m_.name(a.w) + "/" + digits(C) + "." + std::to_string(idx++), canon_minterm(eta), u,
                            "mixed eta #" + std::to_string(eta) + " zeta #" + std::to_string(zeta));
                made.push_back({w, u, eta, zeta, c1, false});
                for (int i : mask_members(c2)) {
                  m_.add_edge(i, a.w, w);
                  m_.add_edge(i, w, w);
                }
                found = true;
                break;
              }
              if (found) break;
            }
            if (!found)
              throw ConstructionError("mixed group: no (eta, zeta) pair for " + src_.name(u) + " under " +
                                      m_.name(a.w));
          }
        }
      }
      // Close the new links under the frame conditions.
      for (const auto& t : made) {
        if (base_ == Base::S5)
          for (int j = 1; j <= v_.agents; ++j) m_.add_edge(j, t.w, t.w);
        for (int i : mask_members(static_cast<AgentMask>(all & ~t.B))) {
          WorldSet succ = m_.succ(i, t.w);
          for (int u1 : succ)
            for (int u2 : succ) m_.add_edge(i, u1, u2);
        }
      }
    }
    // Each group is complete among the worlds built for it.
    for (const auto& a : made)
      for (const auto& b : made)
        for (int i : mask_members(a.B & b.B)) m_.add_edge(i, a.w, b.w);
    // Snapshot of the relations among the worlds built so far.
    std::vector<std::vector<WorldSet>> snap(made.size(), std::vector<WorldSet>(v_.agents + 1));
    for (std::size_t x = 0; x < made.size(); ++x)
      for (int i = 1; i <= v_.agents; ++i) snap[x][i] = m_.succ(i, made[x].w);
    std::vector<std::vector<WorldSet>> rt4;
    if (k == 0) {
      rt4.assign(made.size(), std::vector<WorldSet>(v_.agents + 1));
      for (std::size_t x = 0; x < made.size(); ++x)
        for (int i : mask_members(static_cast<AgentMask>(all & ~made[x].B)))
          rt4[x][i] = reach_closure(m_, made[x].w, agent_bit(i), true);
    }
    // Families below each built world, for the agents outside its group.
    std::vector<std::optional<Family>> sub(made.size());
    for (std::size_t x = 0; x < made.size(); ++x) {
      const Made t = made[x];
      const AgentMask bc = all & ~t.B;
      bool any = false;
      for (int i : mask_members(bc))
        if (!src_.succ(i, t.src).empty()) any = true;
      if (v_.dpc && k == 0 && base_ == Base::S5) any = bc != 0;
      if (!any) continue;
      const std::string name = m_.name(t.w);
      if (k > 0) {
        int dd = two ? 0 : (t.direct ? d : d - 1);
        sub[x] = te(t.eta, t.zeta, k - 1, dd, bc, t.src, name, two);
      } else if (v_.dpc) {
        auto cl = cloud(t.src, canon_tc(t.eta), name + "/tc");
        Family f;
        for (AgentMask D : nonempty_subsets(bc)) {
          std::set<int> ws;
          for (int u : src_.group_succ(t.src, D)) {
            auto it = cl.find(u);
            if (it != cl.end()) ws.insert(it->second.begin(), it->second.end());
          }
          f[D] = as_set(ws);
        }
        sub[x] = f;
      } else {
        std::set<int> roots;
        for (int i : mask_members(bc))
          for (int u : src_.succ(i, t.src)) roots.insert(u);
        auto c = copy_from(as_set(roots), name + "/c");
        Family f;
        for (int i : mask_members(bc)) {
          const auto& succ = src_.succ(i, t.src);
          f[agent_bit(i)] = succ.empty() ? WorldSet{} : reach_closure(m_, c.at(succ.front()), agent_bit(i), true);
        }
        sub[x] = f;
      }
    }
    // Merge each built world with its family into one class per agent.
    std::map<int, std::size_t> index;
    for (std::size_t x = 0; x < made.size(); ++x) index[made[x].w] = x;
    for (std::size_t x = 0; x < made.size(); ++x) {
      for (int i : mask_members(static_cast<AgentMask>(all & ~made[x].B))) {
        std::set<int> members;
        if (k == 0) {
          members.insert(rt4[x][i].begin(), rt4[x][i].end());
        } else {
          members.insert(snap[x][i].begin(), snap[x][i].end());
          members.insert(made[x].w);
        }
        std::set<int> all_sets = members;
        for (int u : members) {
          auto it = index.find(u);
          if (it == index.end() || !sub[it->second]) continue;
          auto f = sub[it->second]->find(agent_bit(i));
          if (f != sub[it->second]->end()) all_sets.insert(f->second.begin(), f->second.end());
        }
        merge_into(m_, as_set(all_sets), i);
      }
    }
    Family out;
    for (AgentMask B : nonempty_subsets(X)) {
      std::set<int> ws;
      for (const auto& t : made)
        if ((t.B & B) == B) ws.insert(t.w);
      out[B] = as_set(ws);
    }
    return out;
  }

 private:
  const KripkeModel& src_;
  VocabId vid_;
  const Vocab& v_;
  std::string p_;
  Base base_;
  KripkeModel m_;
  int p_index_ = 0;
  VocabId vp_ = 0;
  std::vector<int> src_atom_;
  std::vector<std::pair<int, int>> rho_;
  std::vector<std::string> trace_;
  std::map<int, std::vector<CanonId>> tables_;

  const std::vector<CanonId>& table(int depth) {
    auto it = tables_.find(depth);
    if (it == tables_.end()) it = tables_.emplace(depth, canonical_of_model_all(src_, vp_, depth)).first;
    return it->second;
  }

  std::uint64_t copy_val(int u) const {
    std::uint64_t val = 0;
    for (std::size_t j = 0; j < src_atom_.size(); ++j)
      if (src_atom_[j] >= 0 && src_.holds(u, src_atom_[j])) val |= std::uint64_t{1} << j;
    return val;
  }
};

ConstructionResult finish(Builder& b, const std::string& p) {
  ConstructionResult r;
  r.model = b.model();
  r.rho = BisimRelation{b.rho(), p};
  r.trace = b.trace();
  return r;
}

void require_pointed_source(const KripkeModel& src, CanonId delta, Builder& b) {
  if (!src.actual) throw ConstructionError("source model has no actual world");
  if (!b.sat_p(*src.actual, delta))
    throw ConstructionError("precondition: the source does not satisfy the eliminated formula");
}

bool te_family(Base base) { return needs_trans_eucl(base); }

}  // namespace

ConstructionResult build_model_basic(CanonId delta, const KripkeModel& src, const std::string& p, Base base) {
  if (base != Base::K && base != Base::D) throw ConstructionError("the basic construction covers K and D");
  Builder b(src, canon_vocab(delta), p, base);
  require_pointed_source(src, delta, b);
  int s = b.basic(delta, *src.actual, "s");
  auto r = finish(b, p);
  r.model.actual = s;
  return r;
}

ConstructionResult build_model_reflexive(CanonId delta, const KripkeModel& src, const std::string& p) {
  Builder b(src, canon_vocab(delta), p, Base::T);
  require_pointed_source(src, delta, b);
  int s = b.basic(delta, *src.actual, "s");
  auto r = finish(b, p);
  for (int i = 1; i <= r.model.agents(); ++i)
    for (int w = 0; w < r.model.size(); ++w) r.model.add_edge(i, w, w);
  r.model.actual = s;
  return r;
}

ConstructionResult build_model_minterm(CanonId delta, const KripkeModel& src, const std::string& p, Base base) {
  if (canon_depth(delta) != 0) throw ConstructionError("expected a depth-0 formula");
  Builder b(src, canon_vocab(delta), p, base);
  require_pointed_source(src, delta, b);
  int s = b.twin(delta, *src.actual, "s");
  auto r = finish(b, p);
  r.model.actual = s;
  return r;
}

std::string equivalence_name(Equivalence e) {
  switch (e) {
    case Equivalence::Full: return "full";
    case Equivalence::Quasi: return "quasi";
    case Equivalence::Neither: return "neither";
  }
  return "neither";
}

Equivalence quasi_equivalence_check(const KripkeModel& m, const WorldSet& w, AgentMask scope) {
  if (w.empty()) return Equivalence::Full;
  const WorldSet first = m.group_succ(w.front(), scope);
  bool full = true;
  for (int t : w) {
    if (group_component(m, t, scope) != w) return Equivalence::Neither;
    const WorldSet succ = m.group_succ(t, scope);
    if (succ != first) return Equivalence::Neither;
    if (!std::binary_search(succ.begin(), succ.end(), t)) full = false;
  }
  return full ? Equivalence::Full : Equivalence::Quasi;
}

KripkeModel merge_equivalent(const KripkeModel& m, const std::vector<WorldSet>& sets, int agent) {
  std::set<int> all;
  for (const auto& s : sets) {
    if (quasi_equivalence_check(m, s, agent_bit(agent)) == Equivalence::Neither)
      throw ConstructionError("merge: a set is not quasi-equivalent for agent " + std::to_string(agent));
    all.insert(s.begin(), s.end());
  }
  KripkeModel out = m;
  merge_into(out, as_set(all), agent);
  return out;
}

ConstructionResult construct_transitive_euclidean(const TEParams& params, const KripkeModel& src,
                                                  const std::string& p, Base base) {
  if (!te_family(base)) throw ConstructionError("the construction covers K45, KD45 and S5");
  const CanonId gamma = params.gamma, xi = params.xi;
  if (canon_vocab(gamma) != canon_vocab(xi)) throw ConstructionError("gamma and xi use different vocabularies");
  const Vocab& v = vocab(canon_vocab(gamma));
  const int k = params.k, d = params.d;
  const int depth = canon_depth(gamma);
  if (canon_depth(xi) != depth) throw ConstructionError("precondition: gamma and xi differ in depth");
  const int h = depth - k - 1;
  if (params.two_agent) {
    if (v.agents != 2) throw ConstructionError("the two-agent variant needs exactly two agents");
    if (d != 0 || h != 0) throw ConstructionError("precondition: the two-agent variant needs d = h = 0");
  } else if (!(0 <= k && k <= d && d <= h)) {
    throw ConstructionError("precondition: need 0 <= k <= d <= h");
  }
  Builder b(src, canon_vocab(gamma), p, base);
  if (b.elim(prune_up(gamma, k + d + 1)) != b.elim(prune_up(xi, k + d + 1)))
    throw ConstructionError("precondition: gamma and xi disagree after elimination");
  require_pointed_source(src, xi, b);
  AgentMask X = params.scope ? params.scope : all_agents(v.agents);
  auto fam = b.te(gamma, xi, k, d, X, *src.actual, "s", params.two_agent);
  auto r = finish(b, p);
  r.model.scope = X;
  r.model.family = std::move(fam);
  return r;
}

ConstructionResult attach_root(CanonId delta, const ConstructionResult& cr, const KripkeModel& src, Base base) {
  const Vocab& v = vocab(canon_vocab(delta));
  if (cr.model.scope != all_agents(v.agents)) throw ConstructionError("attach_root needs the family over all agents");
  if (!src.actual) throw ConstructionError("source model has no actual world");
  ConstructionResult r = cr;
  std::string name = "s";
  for (int n = 1; r.model.world(name) >= 0; ++n) name = "s~" + std::to_string(n);
  int s = r.model.add_world(name, canon_minterm(delta));
  r.rho.pairs.emplace_back(s, *src.actual);
  r.trace.push_back(name + " <- " + src.name(*src.actual) + " root #" + std::to_string(delta));
  for (const auto& [B, ws] : cr.model.family)
    for (int t : ws)
      for (int i : mask_members(B)) r.model.add_edge(i, s, t);
  if (base == Base::S5)
    for (int i = 1; i <= v.agents; ++i) {
      r.model.add_edge(i, s, s);
      auto it = cr.model.family.find(agent_bit(i));
      if (it != cr.model.family.end())
        for (int t : it->second) r.model.add_edge(i, t, s);
    }
  r.model.family.clear();
  r.model.scope = 0;
  r.model.actual = s;
  return r;
}

namespace {

ConstructionResult dpc_attempt(CanonId delta, CanonId gamma, const KripkeModel& src, const std::string& p,
                               Base base) {
  if (!vocab(canon_vocab(delta)).dpc) throw ConstructionError("expected a dpc-canonical formula");
  if (canon_depth(delta) == 0) {
    Builder b(src, canon_vocab(delta), p, base);
    require_pointed_source(src, delta, b);
    int s = b.basic(delta, *src.actual, "s");
    auto r = finish(b, p);
    r.model.actual = s;
    return r;
  }
  const int k = canon_depth(delta) - 1;
  if (canon_depth(gamma) != 2 * k + 1 || prune_up(gamma, k + 1) != delta)
    throw ConstructionError("precondition: gamma must extend delta to depth 2k+1");
  TEParams params{gamma, gamma, k, k, 0, false};
  auto cr = construct_transitive_euclidean(params, src, p, base);
  return attach_root(delta, cr, src, base);
}

}  // namespace

ConstructionResult construct_s5_dpc(CanonId delta, CanonId gamma, const KripkeModel& src, const std::string& p) {
  return dpc_attempt(delta, gamma, src, p, Base::S5);
}

ConstructionResult construct_k45_dpc_attempt(CanonId delta, CanonId gamma, const KripkeModel& src,
                                             const std::string& p) {
  auto r = dpc_attempt(delta, gamma, src, p, Base::K45);
  const Vocab& v = vocab(canon_vocab(delta));
  std::set<std::uint64_t> seen;
  for (int w : reachable(r.model, *r.model.actual)) seen.insert(r.model.valuation(w));
  for (int mt = 0; mt < v.minterm_count(); ++mt)
    if (((canon_tc(delta) >> mt) & 1) && !seen.count(static_cast<std::uint64_t>(mt)))
      throw ConstructionError("The model construction fails: no world realizes " +
                              minterm_to_string(v, static_cast<Minterm>(mt)));
  return r;
}

PostcheckReport postcheck_pointed(const ConstructionResult& cr, CanonId target, const KripkeModel& src,
                                  Base base) {
  PostcheckReport rep;
  auto fr = check_frame(cr.model, base);
  rep.frame = fr.verdict;
  if (!rep.frame) rep.detail += "frame: " + fr.witness + "; ";
  auto bc = check_bisimulation(cr.rho, cr.model, src);
  rep.bisimulation = bc.ok;
  if (!bc.ok) rep.detail += "bisimulation: " + bc.reason + "; ";
  rep.satisfies = cr.model.actual &&
                  canonical_of_model(cr.model, *cr.model.actual, canon_vocab(target), canon_depth(target)) == target;
  if (!rep.satisfies) rep.detail += "actual world does not realize the target; ";
  return rep;
}

PostcheckReport postcheck_multipointed(const ConstructionResult& cr, const TEParams& params,
                                       const KripkeModel& src, Base base) {
  PostcheckReport rep;
  auto fr = check_frame(cr.model, base);
  rep.frame = fr.verdict;
  if (!rep.frame) rep.detail += "frame: " + fr.witness + "; ";
  KripkeModel target = src;
  target.scope = cr.model.scope;
  target.family.clear();
  for (AgentMask B : nonempty_subsets(cr.model.scope)) target.family[B] = src.group_succ(*src.actual, B);
  auto bc = check_multipointed_bisimulation(cr.rho, cr.model, target);
  rep.bisimulation = bc.ok;
  if (!bc.ok) rep.detail += "bisimulation: " + bc.reason + "; ";
  const VocabId v = canon_vocab(params.gamma);
  const auto table = canonical_of_model_all(cr.model, v, params.k);
  for (const auto& [B, ws] : cr.model.family) {
    auto e = quasi_equivalence_check(cr.model, ws, B);
    if (e != Equivalence::Full) {
      rep.equivalence = false;
      rep.detail += "T" + mask_to_string(B) + " is " + equivalence_name(e) + "; ";
    }
    std::set<CanonId> got;
    for (int t : ws) got.insert(table[t]);
    CanonSet want = prune_up_set(canon_children(params.gamma, B), params.k);
    if (CanonSet(got.begin(), got.end()) != want) {
      rep.completeness = false;
      rep.detail += "T" + mask_to_string(B) + " is not complete; ";
    }
  }
  return rep;
}

}  // namespace dkforget
