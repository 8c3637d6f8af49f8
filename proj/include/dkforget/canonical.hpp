#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dkforget/agents.hpp"
#include "dkforget/formula.hpp"
#include "dkforget/model.hpp"

namespace dkforget {

// Handle of an interned canonical formula. Equal handles mean equal formulas.
using CanonId = std::uint32_t;
using CanonSet = std::vector<CanonId>;  // sorted, duplicate free
using Minterm = std::uint32_t;          // bit j set iff atoms[j] is true
using MintermSet = std::uint64_t;       // bit m set iff minterm m is present

inline constexpr int kMaxCanonAtoms = 6;

// Vocabulary shared by a family of canonical formulas.
struct Vocab {
  std::vector<std::string> atoms;
  int agents = 1;
  bool dpc = false;

  int minterm_count() const { return 1 << atoms.size(); }
  int group_count() const { return (1 << agents) - 1; }
  bool operator==(const Vocab&) const = default;
};

using VocabId = std::uint16_t;

VocabId intern_vocab(const Vocab& v);
const Vocab& vocab(VocabId v);

// Interned tree: root minterm, per-group successor sets, and for dpc
// formulas the set of reachable minterms. Depth-0 nodes have no groups.
struct CanonNode {
  VocabId vocab = 0;
  int depth = 0;
  Minterm minterm = 0;
  MintermSet tc = 0;
  std::vector<CanonSet> children;  // children[g - 1] holds R_g
};

const CanonNode& canon_node(CanonId id);
std::size_t canon_store_size();

CanonId canon_leaf(VocabId v, Minterm m, MintermSet tc = 0);
// `children` is indexed by group mask - 1 and must have group_count entries
// of depth `depth - 1` formulas; sets are normalized here.
CanonId canon_make(VocabId v, int depth, Minterm m, MintermSet tc, std::vector<CanonSet> children);

inline int canon_depth(CanonId id) { return canon_node(id).depth; }
inline Minterm canon_minterm(CanonId id) { return canon_node(id).minterm; }
inline MintermSet canon_tc(CanonId id) { return canon_node(id).tc; }
inline const CanonSet& canon_children(CanonId id, AgentMask g) { return canon_node(id).children[g - 1]; }
inline VocabId canon_vocab(CanonId id) { return canon_node(id).vocab; }

CanonId canonical_of_model(const KripkeModel& m, int w, VocabId v, int k);
// Per-world canonical formulas of depth k.
std::vector<CanonId> canonical_of_model_all(const KripkeModel& m, VocabId v, int k);

Formula canonical_to_formula(CanonId id);
Formula minterm_formula(const Vocab& v, Minterm m);
std::string minterm_to_string(const Vocab& v, Minterm m);

CanonId prune_down(CanonId id, int l);
CanonId prune_up(CanonId id, int l);
CanonSet prune_down_set(const CanonSet& s, int l);
CanonSet prune_up_set(const CanonSet& s, int l);

// Literal elimination on the tree shape; the result lives over atoms \ {p}.
CanonId eliminate_in_canonical(CanonId id, const std::string& p);
VocabId eliminated_vocab(VocabId v, const std::string& p);
Minterm eliminate_minterm(Minterm m, int atom);

class CanonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dichotomy evaluator: decides delta |= f assuming delta is satisfiable.
bool entails(CanonId id, const Formula& f);
bool minterm_satisfies(const Vocab& v, Minterm m, const Formula& f);

// Wholly-occurring subformulas, root first, each once.
std::vector<CanonId> wholly_occurring(CanonId id);

std::string canon_debug_dump(CanonId id);

}  // namespace dkforget
