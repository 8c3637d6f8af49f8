#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dkforget/model.hpp"

namespace dkforget {

// World pairs (world of the first model, world of the second model) that
// ignore the atom `omitted` when comparing valuations.
struct BisimRelation {
  std::vector<std::pair<int, int>> pairs;
  std::string omitted;
};

// Result of a failed verification, empty when it passed.
struct BisimCheck {
  bool ok = true;
  std::string reason;
};

BisimCheck check_bisimulation(const BisimRelation& rho, const KripkeModel& a, const KripkeModel& b);
bool verify_bisimulation(const BisimRelation& rho, const KripkeModel& a, const KripkeModel& b);

BisimCheck check_multipointed_bisimulation(const BisimRelation& rho, const KripkeModel& a,
                                           const KripkeModel& b);
bool verify_multipointed_bisimulation(const BisimRelation& rho, const KripkeModel& a,
                                      const KripkeModel& b);

// Greatest collective p-bisimulation; p may be absent from both models.
BisimRelation maximal_collective_p_bisim(const KripkeModel& a, const KripkeModel& b,
                                         const std::string& p);
bool are_p_bisimilar(const KripkeModel& a, const KripkeModel& b, const std::string& p);

}  // namespace dkforget
