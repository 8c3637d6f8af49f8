#include "dkforget/model.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace dkforget {

KripkeModel::KripkeModel(int n, std::vector<std::string> atoms)
    : n_(n), atoms_(std::move(atoms)), succ_(static_cast<std::size_t>(n)) {
  if (n < 1 || n > kMaxAgents) throw std::invalid_argument("agent count out of range");
  if (atoms_.size() > 64) throw std::invalid_argument("too many atoms");
}

int KripkeModel::atom_index(const std::string& a) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i] == a) return static_cast<int>(i);
  return -1;
}

int KripkeModel::add_world(const std::string& name, std::uint64_t valuation) {
  if (index_.count(name)) throw std::invalid_argument("duplicate world " + name);
  int id = size();
  names_.push_back(name);
  index_.emplace(name, id);
  val_.push_back(valuation);
  for (auto& r : succ_) r.emplace_back();
  return id;
}

void KripkeModel::add_edge(int agent, int from, int to) {
  auto& s = succ_[agent - 1][from];
  auto it = std::lower_bound(s.begin(), s.end(), to);
  if (it == s.end() || *it != to) s.insert(it, to);
}

bool KripkeModel::has_edge(int agent, int from, int to) const {
  const auto& s = succ_[agent - 1][from];
  return std::binary_search(s.begin(), s.end(), to);
}

void KripkeModel::remove_edge(int agent, int from, int to) {
  auto& s = succ_[agent - 1][from];
  auto it = std::lower_bound(s.begin(), s.end(), to);
  if (it != s.end() && *it == to) s.erase(it);
}

int KripkeModel::world(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

WorldSet KripkeModel::group_succ(int w, AgentMask group) const {
  auto members = mask_members(group);
  WorldSet out = succ(members[0], w);
  for (std::size_t k = 1; k < members.size() && !out.empty(); ++k) {
    WorldSet tmp;
    const auto& other = succ(members[k], w);
    std::set_intersection(out.begin(), out.end(), other.begin(), other.end(),
                          std::back_inserter(tmp));
    out.swap(tmp);
  }
  return out;
}

std::size_t KripkeModel::edge_count() const {
  std::size_t c = 0;
  for (const auto& r : succ_)
    for (const auto& s : r) c += s.size();
  return c;
}

ModelError::ModelError(const std::string& msg, int line)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

// ---------------------------------------------------------------- text format

KripkeModel parse_model(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  std::optional<int> n;
  std::optional<std::vector<std::string>> atoms;
  KripkeModel m;
  bool built = false;
  auto ensure_built = [&](int ln) {
    if (built) return;
    if (!n) throw ModelError("missing 'agents' declaration", ln);
    if (!atoms) atoms = std::vector<std::string>{};
    m = KripkeModel(*n, *atoms);
    built = true;
  };
  auto world_of = [&](const std::string& id, int ln) {
    int w = m.world(id);
    if (w < 0) throw ModelError("undeclared world " + id, ln);
    return w;
  };
  auto parse_int = [&](const std::string& tok, int ln) {
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw ModelError("bad number " + tok, ln);
      return v;
    } catch (const std::logic_error&) {
      throw ModelError("bad number " + tok, ln);
    }
  };
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::string kw;
    if (!(ls >> kw)) continue;
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (kw == "agents") {
      if (built || n) throw ModelError("'agents' must come first and once", lineno);
      if (toks.size() != 1) throw ModelError("usage: agents <n>", lineno);
      int v = parse_int(toks[0], lineno);
      if (v < 1 || v > kMaxAgents) throw ModelError("agent count out of range", lineno);
      n = v;
    } else if (kw == "atoms") {
      if (built || atoms) throw ModelError("'atoms' must precede worlds and appear once", lineno);
      for (const auto& a : toks) {
        bool ok = !a.empty() && a[0] >= 'a' && a[0] <= 'z' && a != "true" && a != "false";
        for (char c : a) ok = ok && ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_');
        if (!ok) throw ModelError("bad atom name " + a, lineno);
      }
      atoms = toks;
    } else if (kw == "world") {
      ensure_built(lineno);
      if (toks.empty()) throw ModelError("usage: world <id> <atom>=<0|1> ...", lineno);
      if (m.world(toks[0]) >= 0) throw ModelError("duplicate world " + toks[0], lineno);
      std::uint64_t v = 0;
      std::vector<bool> seen(m.atoms().size(), false);
      for (std::size_t k = 1; k < toks.size(); ++k) {
        auto eq = toks[k].find('=');
        if (eq == std::string::npos) throw ModelError("expected atom=value", lineno);
        int a = m.atom_index(toks[k].substr(0, eq));
        if (a < 0) throw ModelError("undeclared atom " + toks[k].substr(0, eq), lineno);
        std::string val = toks[k].substr(eq + 1);
        if (val != "0" && val != "1") throw ModelError("atom value must be 0 or 1", lineno);
        if (seen[a]) throw ModelError("atom assigned twice", lineno);
        seen[a] = true;
        if (val == "1") v |= std::uint64_t{1} << a;
      }
      for (std::size_t a = 0; a < seen.size(); ++a)
        if (!seen[a]) throw ModelError("missing valuation for " + m.atoms()[a], lineno);
      m.add_world(toks[0], v);
    } else if (kw == "edge") {
      ensure_built(lineno);
      if (toks.size() != 3) throw ModelError("usage: edge <agent> <from> <to>", lineno);
      int a = parse_int(toks[0], lineno);
      if (a < 1 || a > m.agents()) throw ModelError("undeclared agent " + toks[0], lineno);
      m.add_edge(a, world_of(toks[1], lineno), world_of(toks[2], lineno));
    } else if (kw == "actual") {
      ensure_built(lineno);
      if (toks.size() != 1) throw ModelError("usage: actual <id>", lineno);
      if (m.actual) throw ModelError("more than one actual world", lineno);
      m.actual = world_of(toks[0], lineno);
    } else if (kw == "point") {
      ensure_built(lineno);
      if (toks.empty() || toks[0].size() < 3 || toks[0].front() != '{' || toks[0].back() != '}')
        throw ModelError("usage: point {i,j,...} <id> ...", lineno);
      AgentMask g = 0;
      std::string inner = toks[0].substr(1, toks[0].size() - 2);
      std::istringstream gs(inner);
      for (std::string part; std::getline(gs, part, ',');) {
        int a = parse_int(part, lineno);
        if (a < 1 || a > m.agents()) throw ModelError("undeclared agent " + part, lineno);
        g |= agent_bit(a);
      }
      if (m.family.count(g)) throw ModelError("group listed twice", lineno);
      WorldSet ws;
      for (std::size_t k = 1; k < toks.size(); ++k) ws.push_back(world_of(toks[k], lineno));
      std::sort(ws.begin(), ws.end());
      ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
      m.family[g] = ws;
      m.scope |= g;
    } else {
      throw ModelError("unknown keyword " + kw, lineno);
    }
  }
  ensure_built(lineno);
  for (AgentMask g : nonempty_subsets(m.scope)) m.family.try_emplace(g);
  return m;
}

std::string serialize_model(const KripkeModel& m) {
  std::ostringstream out;
  out << "agents " << m.agents() << "\n";
  out << "atoms";
  for (const auto& a : m.atoms()) out << ' ' << a;
  out << "\n";
  for (int w = 0; w < m.size(); ++w) {
    out << "world " << m.name(w);
    for (std::size_t a = 0; a < m.atoms().size(); ++a)
      out << ' ' << m.atoms()[a] << '=' << (m.holds(w, static_cast<int>(a)) ? 1 : 0);
    out << "\n";
  }
  for (int i = 1; i <= m.agents(); ++i)
    for (int w = 0; w < m.size(); ++w)
      for (int v : m.succ(i, w)) out << "edge " << i << ' ' << m.name(w) << ' ' << m.name(v) << "\n";
  if (m.actual) out << "actual " << m.name(*m.actual) << "\n";
  for (const auto& [g, ws] : m.family) {
    out << "point " << mask_to_string(g);
    for (int w : ws) out << ' ' << m.name(w);
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------- reachability

WorldSet reachable(const KripkeModel& m, int s) {
  std::vector<char> seen(m.size(), 0);
  std::deque<int> queue;
  auto push_succ = [&](int w) {
    for (int i = 1; i <= m.agents(); ++i)
      for (int v : m.succ(i, w))
        if (!seen[v]) {
          seen[v] = 1;
          queue.push_back(v);
        }
  };
  push_succ(s);
  while (!queue.empty()) {
    int w = queue.front();
    queue.pop_front();
    push_succ(w);
  }
  WorldSet out;
  for (int w = 0; w < m.size(); ++w)
    if (seen[w]) out.push_back(w);
  return out;
}

WorldSet reach_closure(const KripkeModel& m, int s, AgentMask agents, bool symmetric) {
  std::vector<std::vector<int>> pred;
  if (symmetric) {
    pred.assign(m.size(), {});
    for (int i : mask_members(agents))
      for (int w = 0; w < m.size(); ++w)
        for (int v : m.succ(i, w)) pred[v].push_back(w);
  }
  std::vector<char> seen(m.size(), 0);
  std::deque<int> queue{s};
  seen[s] = 1;
  while (!queue.empty()) {
    int w = queue.front();
    queue.pop_front();
    auto visit = [&](int v) {
      if (!seen[v]) {
        seen[v] = 1;
        queue.push_back(v);
      }
    };
    for (int i : mask_members(agents))
      for (int v : m.succ(i, w)) visit(v);
    if (symmetric)
      for (int v : pred[w]) visit(v);
  }
  WorldSet out;
  for (int w = 0; w < m.size(); ++w)
    if (seen[w]) out.push_back(w);
  return out;
}

KripkeModel generated_submodel(const KripkeModel& m, const WorldSet& roots) {
  std::vector<char> keep(m.size(), 0);
  for (int r : roots) {
    keep[r] = 1;
    for (int w : reachable(m, r)) keep[w] = 1;
  }
  KripkeModel out(m.agents(), m.atoms());
  std::vector<int> remap(m.size(), -1);
  for (int w = 0; w < m.size(); ++w)
    if (keep[w]) remap[w] = out.add_world(m.name(w), m.valuation(w));
  for (int i = 1; i <= m.agents(); ++i)
    for (int w = 0; w < m.size(); ++w)
      if (keep[w])
        for (int v : m.succ(i, w)) out.add_edge(i, remap[w], remap[v]);
  if (m.actual && keep[*m.actual]) out.actual = remap[*m.actual];
  return out;
}

// ---------------------------------------------------------------- systems

std::string base_name(Base b) {
  switch (b) {
    case Base::K: return "K";
    case Base::D: return "D";
    case Base::T: return "T";
    case Base::K45: return "K45";
    case Base::KD45: return "KD45";
    case Base::S5: return "S5";
  }
  return "?";
}

std::optional<Base> parse_base(std::string_view s) {
  for (Base b : {Base::K, Base::D, Base::T, Base::K45, Base::KD45, Base::S5})
    if (base_name(b) == s) return b;
  return std::nullopt;
}

bool needs_serial(Base b) { return b == Base::D || b == Base::T || b == Base::KD45 || b == Base::S5; }
bool needs_reflexive(Base b) { return b == Base::T || b == Base::S5; }
bool needs_trans_eucl(Base b) { return b == Base::K45 || b == Base::KD45 || b == Base::S5; }

FrameReport check_frame(const KripkeModel& m, Base sys) {
  FrameReport r;
  std::string ser_w, ref_w, tra_w, euc_w;
  for (int i = 1; i <= m.agents(); ++i) {
    for (int w = 0; w < m.size(); ++w) {
      const auto& s = m.succ(i, w);
      if (s.empty() && r.serial) {
        r.serial = false;
        ser_w = "R" + std::to_string(i) + "(" + m.name(w) + ") is empty";
      }
      if (!m.has_edge(i, w, w) && r.reflexive) {
        r.reflexive = false;
        ref_w = "(" + m.name(w) + "," + m.name(w) + ") not in R" + std::to_string(i);
      }
      for (int u : s) {
        for (int v : m.succ(i, u))
          if (r.transitive && !m.has_edge(i, w, v)) {
            r.transitive = false;
            tra_w = "R" + std::to_string(i) + " not transitive at " + m.name(w) + "," + m.name(u) +
                    "," + m.name(v);
          }
        for (int v : s)
          if (r.euclidean && !m.has_edge(i, u, v)) {
            r.euclidean = false;
            euc_w = "R" + std::to_string(i) + " not Euclidean at " + m.name(w) + "," + m.name(u) +
                    "," + m.name(v);
          }
      }
    }
  }
  auto need = [&](bool ok, const std::string& why) {
    if (!ok && r.verdict) {
      r.verdict = false;
      r.witness = why;
    }
  };
  if (needs_serial(sys)) need(r.serial, ser_w);
  if (needs_reflexive(sys)) need(r.reflexive, ref_w);
  if (needs_trans_eucl(sys)) {
    need(r.transitive, tra_w);
    need(r.euclidean, euc_w);
  }
  return r;
}

// ---------------------------------------------------------------- evaluation

std::vector<char> eval_all(const KripkeModel& m, const Formula& f) {
  const int W = m.size();
  std::unordered_map<const FormulaNode*, std::vector<char>> memo;
  std::map<AgentMask, std::vector<WorldSet>> group_cache;
  std::optional<std::vector<WorldSet>> reach_cache;
  auto group_table = [&](AgentMask g) -> const std::vector<WorldSet>& {
    auto it = group_cache.find(g);
    if (it != group_cache.end()) return it->second;
    std::vector<WorldSet> t(W);
    for (int w = 0; w < W; ++w) t[w] = m.group_succ(w, g);
    return group_cache.emplace(g, std::move(t)).first->second;
  };
  std::function<const std::vector<char>&(const Formula&)> go =
      [&](const Formula& g) -> const std::vector<char>& {
    auto it = memo.find(g.get());
    if (it != memo.end()) return it->second;
    std::vector<char> r(W, 0);
    switch (g->op) {
      case Op::Atom: {
        int a = m.atom_index(g->name);
        if (a < 0) throw EvalError("atom " + g->name + " not in model vocabulary");
        for (int w = 0; w < W; ++w) r[w] = m.holds(w, a);
        break;
      }
      case Op::Top:
        std::fill(r.begin(), r.end(), 1);
        break;
      case Op::Bot:
        break;
      case Op::Not: {
        const auto& a = go(g->lhs);
        for (int w = 0; w < W; ++w) r[w] = !a[w];
        break;
      }
      case Op::And: {
        const auto& a = go(g->lhs);
        const auto& b = go(g->rhs);
        for (int w = 0; w < W; ++w) r[w] = a[w] && b[w];
        break;
      }
      case Op::Or: {
        const auto& a = go(g->lhs);
        const auto& b = go(g->rhs);
        for (int w = 0; w < W; ++w) r[w] = a[w] || b[w];
        break;
      }
      case Op::K:
      case Op::D: {
        if (g->group == 0 || (g->group >> m.agents()) != 0)
          throw EvalError("agent outside 1.." + std::to_string(m.agents()));
        const auto& a = go(g->lhs);
        const auto& t = group_table(g->group);
        for (int w = 0; w < W; ++w) {
          bool ok = true;
          for (int v : t[w])
            if (!a[v]) {
              ok = false;
              break;
            }
          r[w] = ok;
        }
        break;
      }
      case Op::C: {
        const auto& a = go(g->lhs);
        if (!reach_cache) {
          reach_cache.emplace(W);
          for (int w = 0; w < W; ++w) (*reach_cache)[w] = reachable(m, w);
        }
        for (int w = 0; w < W; ++w) {
          bool ok = true;
          for (int v : (*reach_cache)[w])
            if (!a[v]) {
              ok = false;
              break;
            }
          r[w] = ok;
        }
        break;
      }
    }
    return memo.emplace(g.get(), std::move(r)).first->second;
  };
  return go(f);
}

bool evaluate(const KripkeModel& m, int w, const Formula& f) { return eval_all(m, f)[w]; }

}  // namespace dkforget
