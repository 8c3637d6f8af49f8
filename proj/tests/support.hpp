// Helpers shared by the test binaries.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "dkforget/canonical.hpp"
#include "dkforget/model.hpp"
#include "dkforget/oracle.hpp"

namespace dkforget::test_support {

inline VocabId vocab_of(std::vector<std::string> atoms, int agents, bool dpc = false) {
  return intern_vocab(Vocab{std::move(atoms), agents, dpc});
}

// Random pointed models of a system, drawn across sizes.
inline std::vector<KripkeModel> random_models(const std::vector<std::string>& atoms, int agents, Base base, int max_worlds,
                                       std::size_t count, std::uint64_t seed) {
  std::vector<KripkeModel> out;
  std::size_t per = count / max_worlds + 1;
  for (int n = 1; n <= max_worlds && out.size() < count; ++n)
    sample_models(atoms, agents, base, n, per, seed + n, [&](const KripkeModel& m) {
      out.push_back(m);
      return out.size() < count;
    });
  return out;
}

// A copy with one world duplicated (same successors, same predecessors) and p flipped at random.
inline KripkeModel duplicate_and_flip(const KripkeModel& m, const std::string& p, std::mt19937_64& rng) {
  const int dup = std::uniform_int_distribution<int>(0, m.size() - 1)(rng);
  KripkeModel out(m.agents(), m.atoms());
  const int pi = m.atom_index(p);
  std::bernoulli_distribution coin(0.5);
  for (int w = 0; w <= m.size(); ++w) {
    int src = w < m.size() ? w : dup;
    std::uint64_t val = m.valuation(src);
    if (pi >= 0 && coin(rng)) val ^= std::uint64_t{1} << pi;
    out.add_world(w < m.size() ? m.name(w) : "d" + std::to_string(m.size()), val);
  }
  auto image = [&](int v) {
    std::vector<int> r{v};
    if (v == dup) r.push_back(m.size());
    return r;
  };
  for (int i = 1; i <= m.agents(); ++i)
    for (int u = 0; u < m.size(); ++u)
      for (int v : m.succ(i, u))
        for (int a : image(u))
          for (int b : image(v)) out.add_edge(i, a, b);
  out.actual = m.actual;
  return out;
}

}  // namespace dkforget::test_support
