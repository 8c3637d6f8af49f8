#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace dkforget {

inline constexpr int kMaxAgents = 8;

// Nonempty set of agents 1..n, stored as a bitmask (bit i-1 is agent i).
using AgentMask = std::uint32_t;

inline AgentMask agent_bit(int i) { return AgentMask{1} << (i - 1); }
inline AgentMask all_agents(int n) { return (AgentMask{1} << n) - 1; }
inline int mask_size(AgentMask m) { return std::popcount(m); }
inline bool is_subset(AgentMask a, AgentMask b) { return (a & ~b) == 0; }

inline std::vector<int> mask_members(AgentMask m) {
  std::vector<int> out;
  for (int i = 1; m != 0; ++i, m >>= 1)
    if (m & 1) out.push_back(i);
  return out;
}

// All nonempty subsets of all_agents(n) in increasing mask order.
inline std::vector<AgentMask> nonempty_groups(int n) {
  std::vector<AgentMask> out;
  for (AgentMask m = 1; m <= all_agents(n); ++m) out.push_back(m);
  return out;
}

// Nonempty subsets of m.
inline std::vector<AgentMask> nonempty_subsets(AgentMask m) {
  std::vector<AgentMask> out;
  for (AgentMask s = m; s != 0; s = (s - 1) & m) out.push_back(s);
  return out;
}

// "{1,2}" style text.
inline std::string mask_to_string(AgentMask m) {
  std::string s = "{";
  bool first = true;
  for (int i : mask_members(m)) {
    if (!first) s += ',';
    s += std::to_string(i);
    first = false;
  }
  return s + "}";
}

}  // namespace dkforget
