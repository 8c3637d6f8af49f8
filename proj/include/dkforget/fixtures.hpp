#pragma once

#include <string>
#include <vector>

#include "dkforget/canonical.hpp"
#include "dkforget/model.hpp"

namespace dkforget {

// Two-world source on which the K45 dpc construction fails.
struct K45DpcFailure {
  CanonId eta = 0;
  CanonId gamma = 0;
  KripkeModel source;
};

std::vector<std::string> fixture_names();

// Three-agent S5 model over {p, q} pointed at s2.
KripkeModel counter_left();
// Its q-reduct with agent 2's partition rearranged, pointed at s2.
KripkeModel counter_right();
// Depth-2 canonical formula of counter_left at s2 over {p, q}.
CanonId delta2cou();
K45DpcFailure k45dpc_fail();

// Text form of a fixture: models serialize, formulas render.
std::string fixture_text(const std::string& name);

}  // namespace dkforget
