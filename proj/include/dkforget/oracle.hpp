#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dkforget/formula.hpp"
#include "dkforget/model.hpp"

namespace dkforget {

// Combinatorial guard for brute-force enumeration.
inline constexpr int kOracleMaxAtoms = 3;
inline constexpr int kOracleMaxAgents = 3;
inline constexpr int kOracleMaxWorlds = 5;

class OracleGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OracleKind { True, False, Unknown };

struct OracleVerdict {
  OracleKind kind = OracleKind::Unknown;
  std::optional<KripkeModel> model;  // witness for True, counter-model for False
  std::string note;
};

struct EnumOptions {
  bool rooted_only = false;  // skip models with worlds unreachable from the actual one
  std::uint64_t limit = 0;   // stop after this many models when nonzero
};

// Visits every system-conforming pointed model with 1..max_worlds worlds.
// The actual world is w0; the remaining valuations are nondecreasing, which
// keeps one representative per valuation ordering. Returns false when the
// visitor stopped early or the limit was hit.
bool enumerate_models(const std::vector<std::string>& atoms, int agents, Base base, int max_worlds,
                      const std::function<bool(const KripkeModel&)>& visit,
                      const EnumOptions& opts = {});

// Exactly `worlds` worlds; otherwise as above.
bool enumerate_models_of_size(const std::vector<std::string>& atoms, int agents, Base base,
                              int worlds, const std::function<bool(const KripkeModel&)>& visit,
                              const EnumOptions& opts = {});

// Number of per-agent relations on `worlds` worlds that conform to `base`.
std::size_t relation_count(Base base, int worlds);

// Deterministic pseudo-random system-conforming pointed models.
void sample_models(const std::vector<std::string>& atoms, int agents, Base base, int worlds,
                   std::size_t count, std::uint64_t seed,
                   const std::function<bool(const KripkeModel&)>& visit, bool rooted_only = false);

// Random formula of modal depth at most `depth`; C appears only when
// `common` is set and then only over propositional arguments.
Formula random_formula(const std::vector<std::string>& atoms, int agents, int depth, std::mt19937_64& rng,
                       bool common = false);

// Second-opinion satisfaction relation: plain recursion, no sharing.
bool naive_eval(const KripkeModel& m, int w, const Formula& f);

OracleVerdict brute_sat(const Formula& f, Base base, int max_worlds,
                        const std::vector<std::string>& atoms, int agents);
OracleVerdict brute_sat(const Formula& f, Base base, int max_worlds);
// False with a counter-model if one exists within the bound; Unknown otherwise.
OracleVerdict brute_entails(const Formula& f, const Formula& g, Base base, int max_worlds,
                            const std::vector<std::string>& atoms, int agents);
OracleVerdict brute_entails(const Formula& f, const Formula& g, Base base, int max_worlds);

}  // namespace dkforget
