#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dkforget/bisim.hpp"
#include "dkforget/canonical.hpp"
#include "dkforget/model.hpp"

namespace dkforget {

// Model built for a canonical formula from a model of its p-eliminated
// form. `rho` pairs built worlds with worlds of the source model.
struct ConstructionResult {
  KripkeModel model;
  BisimRelation rho;
  std::vector<std::string> trace;  // one line per constructed world
};

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Abort threshold on output size.
inline constexpr int kConstructMaxWorlds = 200000;

// K and D (either language). The source must satisfy delta^p at its actual world.
ConstructionResult build_model_basic(CanonId delta, const KripkeModel& src, const std::string& p, Base base);
// T (either language): the basic construction plus every reflexive edge.
ConstructionResult build_model_reflexive(CanonId delta, const KripkeModel& src, const std::string& p);
// Depth 0, any system: a copy of the source with the actual world's twin.
ConstructionResult build_model_minterm(CanonId delta, const KripkeModel& src, const std::string& p, Base base);

enum class Equivalence { Neither, Quasi, Full };
std::string equivalence_name(Equivalence e);

// Quasi-equivalence of w with respect to the group relation of `scope`.
Equivalence quasi_equivalence_check(const KripkeModel& m, const WorldSet& w, AgentMask scope);

// Merges quasi-equivalent sets with agent i's relation: for t, u in the union
// with (u,u) in R_i, adds (t,u). Throws if a set is not quasi-equivalent.
KripkeModel merge_equivalent(const KripkeModel& m, const std::vector<WorldSet>& sets, int agent);

struct TEParams {
  CanonId gamma = 0;
  CanonId xi = 0;
  int k = 0;
  int d = 0;
  AgentMask scope = 0;    // X; zero means all agents
  bool two_agent = false;  // the variant for two agents with d = h = 0
};

// Multi-pointed model with family T_B (B within scope) for the K45 family,
// including S5 over the dpc language. The source's family is taken as
// R'_B at its actual world. The output family lives in model.family.
ConstructionResult construct_transitive_euclidean(const TEParams& params, const KripkeModel& src,
                                                  const std::string& p, Base base);

// Adds a fresh actual world realizing delta on top of a multi-pointed result.
ConstructionResult attach_root(CanonId delta, const ConstructionResult& cr, const KripkeModel& src, Base base);

// S5 over the dpc language; depth-0 formulas get the cloud construction.
ConstructionResult construct_s5_dpc(CanonId delta, CanonId gamma, const KripkeModel& src, const std::string& p);

// The same construction attempted for K45 over the dpc language. Throws
// ConstructionError naming the first common-knowledge minterm no reachable
// world realizes.
ConstructionResult construct_k45_dpc_attempt(CanonId delta, CanonId gamma, const KripkeModel& src,
                                             const std::string& p);

struct PostcheckReport {
  bool frame = true;
  bool bisimulation = true;
  bool satisfies = true;    // pointed results: actual world realizes the target
  bool equivalence = true;  // multi-pointed results: each T_B is B-equivalent
  bool completeness = true;
  std::string detail;
  bool ok() const { return frame && bisimulation && satisfies && equivalence && completeness; }
};

// Checks a pointed result against the target formula and the source.
PostcheckReport postcheck_pointed(const ConstructionResult& cr, CanonId target, const KripkeModel& src,
                                  Base base);
// Checks a multi-pointed result: frame, B-equivalence, multi-pointed
// bisimulation against R'_B(s'), and R_B(gamma)^(up k)-completeness.
PostcheckReport postcheck_multipointed(const ConstructionResult& cr, const TEParams& params,
                                       const KripkeModel& src, Base base);

}  // namespace dkforget
