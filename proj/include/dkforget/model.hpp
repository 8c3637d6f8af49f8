#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dkforget/agents.hpp"
#include "dkforget/formula.hpp"

namespace dkforget {

using WorldSet = std::vector<int>;  // sorted, duplicate free

// Finite Kripke model over agents 1..n. World valuations are bitmasks over
// `atoms`. An optional actual world makes it pointed; a nonempty `family`
// makes it multi-pointed with scope `scope`.
class KripkeModel {
 public:
  KripkeModel() = default;
  KripkeModel(int n, std::vector<std::string> atoms);

  int agents() const { return n_; }
  const std::vector<std::string>& atoms() const { return atoms_; }
  int atom_index(const std::string& a) const;  // -1 if absent
  int size() const { return static_cast<int>(names_.size()); }

  int add_world(const std::string& name, std::uint64_t valuation);
  void add_edge(int agent, int from, int to);
  bool has_edge(int agent, int from, int to) const;
  void remove_edge(int agent, int from, int to);

  const std::string& name(int w) const { return names_[w]; }
  int world(const std::string& name) const;  // -1 if absent
  std::uint64_t valuation(int w) const { return val_[w]; }
  void set_valuation(int w, std::uint64_t v) { val_[w] = v; }
  bool holds(int w, int atom) const { return (val_[w] >> atom) & 1; }

  const WorldSet& succ(int agent, int w) const { return succ_[agent - 1][w]; }
  WorldSet group_succ(int w, AgentMask group) const;
  std::size_t edge_count() const;

  std::optional<int> actual;
  AgentMask scope = 0;
  std::map<AgentMask, WorldSet> family;

 private:
  int n_ = 1;
  std::vector<std::string> atoms_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::uint64_t> val_;
  std::vector<std::vector<WorldSet>> succ_;
};

class ModelError : public std::runtime_error {
 public:
  ModelError(const std::string& msg, int line);
  int line() const { return line_; }

 private:
  int line_;
};

KripkeModel parse_model(std::string_view text);
std::string serialize_model(const KripkeModel& m);

// Transitive closure image of s under the union of all relations.
WorldSet reachable(const KripkeModel& m, int s);
// Reflexive transitive closure image of s under the given agents' relations
// and, when `symmetric`, their inverses.
WorldSet reach_closure(const KripkeModel& m, int s, AgentMask agents, bool symmetric);
// Submodel generated by the actual world (or by `roots`).
KripkeModel generated_submodel(const KripkeModel& m, const WorldSet& roots);

enum class Base { K, D, T, K45, KD45, S5 };
enum class Lang { D, DPC };

struct System {
  Base base = Base::K;
  Lang lang = Lang::D;
};

std::string base_name(Base b);
std::optional<Base> parse_base(std::string_view s);
bool needs_serial(Base b);
bool needs_reflexive(Base b);
bool needs_trans_eucl(Base b);

struct FrameReport {
  bool serial = true;
  bool reflexive = true;
  bool transitive = true;
  bool euclidean = true;
  bool verdict = true;
  std::string witness;  // first violation relevant to the verdict
};

FrameReport check_frame(const KripkeModel& m, Base sys);

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Truth set of f over all worlds, one entry per world.
std::vector<char> eval_all(const KripkeModel& m, const Formula& f);
bool evaluate(const KripkeModel& m, int w, const Formula& f);

}  // namespace dkforget
