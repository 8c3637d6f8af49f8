#include "dkforget/oracle.hpp"

#include <map>
#include <mutex>
#include <random>

namespace dkforget {

namespace {

using Rel = std::uint32_t;  // bit u*N+v set iff (u,v) in the relation

bool edge(Rel r, int n, int u, int v) { return (r >> (u * n + v)) & 1; }

bool conforms(Rel r, int n, Base base) {
  for (int u = 0; u < n; ++u) {
    bool any = false;
    for (int v = 0; v < n; ++v) {
      if (!edge(r, n, u, v)) continue;
      any = true;
      if (needs_trans_eucl(base))
        for (int x = 0; x < n; ++x) {
          if (edge(r, n, v, x) && !edge(r, n, u, x)) return false;
          if (edge(r, n, u, x) && !edge(r, n, v, x)) return false;
        }
    }
    if (needs_serial(base) && !any) return false;
    if (needs_reflexive(base) && !edge(r, n, u, u)) return false;
  }
  return true;
}

// Row options for systems whose constraints are per world.
std::vector<std::uint32_t> row_options(Base base, int n, int u) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t row = 0; row < (1u << n); ++row) {
    if (needs_serial(base) && row == 0) continue;
    if (needs_reflexive(base) && !((row >> u) & 1)) continue;
    out.push_back(row);
  }
  return out;
}

class RelationSpace {
 public:
  RelationSpace(Base base, int n) : base_(base), n_(n) {
    if (needs_trans_eucl(base)) {
      for (std::uint64_t r = 0; r < (std::uint64_t{1} << (n * n)); ++r)
        if (conforms(static_cast<Rel>(r), n, base)) list_.push_back(static_cast<Rel>(r));
      count_ = list_.size();
    } else {
      count_ = 1;
      for (int u = 0; u < n; ++u) {
        rows_.push_back(row_options(base, n, u));
        count_ *= rows_.back().size();
      }
    }
  }

  std::size_t count() const { return count_; }

  Rel at(std::size_t idx) const {
    if (!rows_.empty()) {
      Rel r = 0;
      for (int u = 0; u < n_; ++u) {
        std::size_t k = rows_[u].size();
        r |= static_cast<Rel>(rows_[u][idx % k]) << (u * n_);
        idx /= k;
      }
      return r;
    }
    return list_[idx];
  }

 private:
  Base base_;
  int n_;
  std::size_t count_ = 0;
  std::vector<Rel> list_;
  std::vector<std::vector<std::uint32_t>> rows_;
};

const RelationSpace& space(Base base, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, RelationSpace> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(static_cast<int>(base), n);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, RelationSpace(base, n)).first;
  return it->second;
}

void guard(const std::vector<std::string>& atoms, int agents, int worlds) {
  if (atoms.size() > kOracleMaxAtoms) throw OracleGuardError("oracle supports at most 3 atoms");
  if (agents < 1 || agents > kOracleMaxAgents) throw OracleGuardError("oracle supports 1..3 agents");
  if (worlds < 1 || worlds > kOracleMaxWorlds) throw OracleGuardError("oracle supports 1..5 worlds");
}

bool rooted(const std::vector<Rel>& rels, int n) {
  std::uint32_t seen = 1, frontier = 1;
  while (frontier) {
    std::uint32_t next = 0;
    for (int u = 0; u < n; ++u)
      if ((frontier >> u) & 1)
        for (Rel r : rels) next |= (r >> (u * n)) & ((1u << n) - 1);
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == (1u << n) - 1;
}

KripkeModel build(const std::vector<std::string>& atoms, int agents, int n,
                  const std::vector<Rel>& rels, const std::vector<std::uint64_t>& vals) {
  KripkeModel m(agents, atoms);
  for (int u = 0; u < n; ++u) m.add_world("w" + std::to_string(u), vals[u]);
  for (int i = 0; i < agents; ++i)
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (edge(rels[i], n, u, v)) m.add_edge(i + 1, u, v);
  m.actual = 0;
  return m;
}

}  // namespace

std::size_t relation_count(Base base, int worlds) { return space(base, worlds).count(); }

bool enumerate_models_of_size(const std::vector<std::string>& atoms, int agents, Base base,
                              int n, const std::function<bool(const KripkeModel&)>& visit,
                              const EnumOptions& opts) {
  guard(atoms, agents, n);
  const RelationSpace& sp = space(base, n);
  const std::uint64_t nv = std::uint64_t{1} << atoms.size();
  std::uint64_t emitted = 0;
  std::vector<std::size_t> idx(agents, 0);
  std::vector<Rel> rels(agents);
  while (true) {
    for (int i = 0; i < agents; ++i) rels[i] = sp.at(idx[i]);
    if (!opts.rooted_only || rooted(rels, n)) {
      // Valuations: w0 free, the rest nondecreasing.
      std::vector<std::uint64_t> vals(n, 0);
      while (true) {
        if (opts.limit && emitted >= opts.limit) return false;
        ++emitted;
        if (!visit(build(atoms, agents, n, rels, vals))) return false;
        int pos = n - 1;
        while (pos >= 0) {
          if (vals[pos] + 1 < nv) {
            ++vals[pos];
            for (int q = pos + 1; q < n; ++q) vals[q] = pos == 0 ? 0 : vals[pos];
            break;
          }
          --pos;
        }
        if (pos < 0) break;
      }
    }
    int a = agents - 1;
    while (a >= 0 && ++idx[a] == sp.count()) idx[a--] = 0;
    if (a < 0) return true;
  }
}

bool enumerate_models(const std::vector<std::string>& atoms, int agents, Base base, int max_worlds,
                      const std::function<bool(const KripkeModel&)>& visit,
                      const EnumOptions& opts) {
  guard(atoms, agents, max_worlds);
  std::uint64_t seen = 0;
  for (int n = 1; n <= max_worlds; ++n) {
    EnumOptions o = opts;
    if (opts.limit) {
      if (seen >= opts.limit) return false;
      o.limit = opts.limit - seen;
    }
    bool stopped = false;
    bool done = enumerate_models_of_size(atoms, agents, base, n, [&](const KripkeModel& m) {
      ++seen;
      if (!visit(m)) {
        stopped = true;
        return false;
      }
      return true;
    }, o);
    if (stopped || !done) return false;
  }
  return true;
}

void sample_models(const std::vector<std::string>& atoms, int agents, Base base, int n,
                   std::size_t count, std::uint64_t seed,
                   const std::function<bool(const KripkeModel&)>& visit, bool rooted_only) {
  guard(atoms, agents, n);
  const RelationSpace& sp = space(base, n);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, sp.count() - 1);
  std::uniform_int_distribution<std::uint64_t> val(0, (std::uint64_t{1} << atoms.size()) - 1);
  std::vector<Rel> rels(agents);
  std::vector<std::uint64_t> vals(n);
  for (std::size_t k = 0; k < count;) {
    for (int i = 0; i < agents; ++i) rels[i] = sp.at(pick(rng));
    if (rooted_only && !rooted(rels, n)) continue;
    for (auto& v : vals) v = val(rng);
    ++k;
    if (!visit(build(atoms, agents, n, rels, vals))) return;
  }
}

// ---------------------------------------------------------------- random formulas

namespace {

Formula random_prop(const std::vector<std::string>& atoms, int size, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 9);
  if (size <= 1 || atoms.empty()) {
    if (atoms.empty() || pick(rng) == 0) return pick(rng) % 2 ? mk_top() : mk_bot();
    return mk_atom(atoms[std::uniform_int_distribution<std::size_t>(0, atoms.size() - 1)(rng)]);
  }
  int r = pick(rng);
  if (r < 3) return mk_not(random_prop(atoms, size - 1, rng));
  Formula a = random_prop(atoms, size / 2, rng), b = random_prop(atoms, size - size / 2, rng);
  return r < 7 ? mk_and(a, b) : mk_or(a, b);
}

Formula random_at(const std::vector<std::string>& atoms, int agents, int depth, int size, std::mt19937_64& rng,
                  bool common) {
  std::uniform_int_distribution<int> pick(0, 11);
  if (size <= 1) return random_prop(atoms, 1, rng);
  int r = pick(rng);
  if (r < 2) return mk_not(random_at(atoms, agents, depth, size - 1, rng, common));
  if (r < 6) {
    Formula a = random_at(atoms, agents, depth, size / 2, rng, common);
    Formula b = random_at(atoms, agents, depth, size - size / 2, rng, common);
    return r < 4 ? mk_and(a, b) : mk_or(a, b);
  }
  if (r == 11 && common) return mk_c(random_prop(atoms, size - 1, rng));
  if (depth == 0) return random_prop(atoms, size, rng);
  AgentMask g = static_cast<AgentMask>(
      std::uniform_int_distribution<std::uint32_t>(1, (1u << agents) - 1)(rng));
  return mk_box(g, random_at(atoms, agents, depth - 1, size - 1, rng, common));
}

}  // namespace

Formula random_formula(const std::vector<std::string>& atoms, int agents, int depth, std::mt19937_64& rng,
                       bool common) {
  int size = std::uniform_int_distribution<int>(1, 4 + 3 * depth)(rng);
  return random_at(atoms, agents, depth, size, rng, common);
}

// ---------------------------------------------------------------- naive semantics

namespace {

bool naive_in_group(const KripkeModel& m, AgentMask g, int u, int v) {
  for (int i = 1; i <= m.agents(); ++i)
    if (((g >> (i - 1)) & 1) && !m.has_edge(i, u, v)) return false;
  return true;
}

void naive_reach(const KripkeModel& m, int u, std::vector<char>& seen) {
  for (int v = 0; v < m.size(); ++v) {
    bool step = false;
    for (int i = 1; i <= m.agents() && !step; ++i) step = m.has_edge(i, u, v);
    if (step && !seen[v]) {
      seen[v] = 1;
      naive_reach(m, v, seen);
    }
  }
}

}  // namespace

bool naive_eval(const KripkeModel& m, int w, const Formula& f) {
  switch (f->op) {
    case Op::Atom: {
      int a = m.atom_index(f->name);
      if (a < 0) throw EvalError("atom " + f->name + " not in model vocabulary");
      return m.holds(w, a);
    }
    case Op::Top: return true;
    case Op::Bot: return false;
    case Op::Not: return !naive_eval(m, w, f->lhs);
    case Op::And: return naive_eval(m, w, f->lhs) && naive_eval(m, w, f->rhs);
    case Op::Or: return naive_eval(m, w, f->lhs) || naive_eval(m, w, f->rhs);
    case Op::K:
    case Op::D: {
      AgentMask g = f->op == Op::K ? agent_bit(f->agent) : f->group;
      if ((g >> m.agents()) != 0) throw EvalError("agent outside the model");
      for (int v = 0; v < m.size(); ++v)
        if (naive_in_group(m, g, w, v) && !naive_eval(m, v, f->lhs)) return false;
      return true;
    }
    case Op::C: {
      std::vector<char> seen(m.size(), 0);
      naive_reach(m, w, seen);
      for (int v = 0; v < m.size(); ++v)
        if (seen[v] && !naive_eval(m, v, f->lhs)) return false;
      return true;
    }
  }
  return false;
}

namespace {

std::vector<std::string> atom_list(const Formula& f) {
  auto s = atoms_of(f);
  return {s.begin(), s.end()};
}

}  // namespace

OracleVerdict brute_sat(const Formula& f, Base base, int max_worlds,
                        const std::vector<std::string>& atoms, int agents) {
  OracleVerdict out;
  out.note = "no model up to " + std::to_string(max_worlds) + " worlds";
  enumerate_models(atoms, agents, base, max_worlds, [&](const KripkeModel& m) {
    if (naive_eval(m, 0, f)) {
      out.kind = OracleKind::True;
      out.model = m;
      out.note.clear();
      return false;
    }
    return true;
  }, {true, 0});
  return out;
}

OracleVerdict brute_sat(const Formula& f, Base base, int max_worlds) {
  return brute_sat(f, base, max_worlds, atom_list(f), std::max(1, max_agent(f)));
}

OracleVerdict brute_entails(const Formula& f, const Formula& g, Base base, int max_worlds,
                            const std::vector<std::string>& atoms, int agents) {
  OracleVerdict out;
  out.note = "no counter-model up to " + std::to_string(max_worlds) + " worlds";
  enumerate_models(atoms, agents, base, max_worlds, [&](const KripkeModel& m) {
    if (naive_eval(m, 0, f) && !naive_eval(m, 0, g)) {
      out.kind = OracleKind::False;
      out.model = m;
      out.note.clear();
      return false;
    }
    return true;
  }, {true, 0});
  return out;
}

OracleVerdict brute_entails(const Formula& f, const Formula& g, Base base, int max_worlds) {
  auto a = atoms_of(f);
  for (const auto& x : atoms_of(g)) a.insert(x);
  return brute_entails(f, g, base, max_worlds, {a.begin(), a.end()},
                       std::max({1, max_agent(f), max_agent(g)}));
}

}  // namespace dkforget
