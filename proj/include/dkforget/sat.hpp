#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dkforget/canonical.hpp"
#include "dkforget/model.hpp"

namespace dkforget {

struct Budget {
  std::uint64_t max_nodes = 1000000;    // enumeration steps
  int max_worlds = 4;                   // oracle model size
  std::uint64_t max_candidates = 100000;  // emitted extensions

  // Defaults overridden by DKFORGET_BUDGET_NODES / DKFORGET_BUDGET_WORLDS.
  static Budget from_env();
};

struct StructuralReport {
  bool ok = true;
  std::string condition;  // name of the violated condition
  std::string path;       // group path from the root to the violating node
};

// Necessary conditions for satisfiability, checked at every wholly-occurring
// node. Conditions are chosen by the system's frame properties.
StructuralReport check_structural(CanonId id, Base base);

enum class SatKind { Sat, Unsat, Unknown };

struct SatVerdict {
  SatKind kind = SatKind::Unknown;
  std::optional<KripkeModel> witness;
  std::string reason;
};

SatVerdict satisfiable(CanonId id, Base base, const Budget& budget);

// Tree-shaped candidate model for id, closed under the system's frame
// conditions. The root is the actual world. Not checked.
KripkeModel tree_witness(CanonId id, Base base);

struct CanonList {
  std::vector<CanonId> items;
  bool complete = true;
  std::uint64_t nodes = 0;
  std::size_t unknown = 0;  // members whose satisfiability stayed Unknown
};

// Canonical formulas of depth k over `v` that entail f and are not refuted
// by the satisfiability check. Unknown members are kept and counted.
CanonList decompose(const Formula& f, VocabId v, Base base, int k, const Budget& budget);

// Satisfiable (or Unknown) gamma of depth m with prune_up(gamma, depth(id)) == id.
CanonList extensions(CanonId id, int m, Base base, const Budget& budget);

}  // namespace dkforget
