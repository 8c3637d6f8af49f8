#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dkforget/canonical.hpp"
#include "dkforget/formula.hpp"
#include "dkforget/model.hpp"
#include "dkforget/sat.hpp"

namespace dkforget {

enum class ForgetPath {
  NoOp,                   // p does not occur
  KDTDirect,              // K, D, T: delta^p
  TwoAgentDirect,         // K45 family with two agents: delta^p
  Depth1Direct,           // K45 family at depth <= 1: delta^p
  ExtensionEnumeration,   // K45 family: disjunction over extensions at depth 2k+1
  DpcDirect,              // K, D, T over dpc, and depth-0 S5 over dpc
  DpcExtension,           // S5 over dpc: extensions at depth 2k+1
};
std::string path_name(ForgetPath p);

class ForgetError : public std::runtime_error {
 public:
  enum class Kind { Unsat, Unsupported, Input };
  ForgetError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct ForgetOptions {
  bool force_extensions = false;     // take the extension path even where delta^p suffices
  std::optional<int> target_depth;   // overrides 2k+1 on the extension path
};

struct ForgetResult {
  Formula interpolant;
  ForgetPath path = ForgetPath::NoOp;
  bool complete = true;
  std::vector<CanonId> disjuncts;  // eliminated canonical formulas, deduplicated
  std::vector<CanonId> sources;    // the formulas whose eliminations were taken
  std::uint64_t nodes = 0;
  std::size_t unknown = 0;
};

ForgetResult forget_canonical(CanonId delta, const std::string& p, Base base, const Budget& budget,
                              const ForgetOptions& opts = {});

// Vocabulary: the formula's atoms plus p, agents max(agents, agents used).
ForgetResult forget(const Formula& phi, const std::string& p, System sys, int agents, const Budget& budget,
                    const ForgetOptions& opts = {});

VocabId formula_vocab(const std::vector<Formula>& fs, const std::string& extra_atom, int agents, bool dpc);

enum class Check { Pass, Fail, Unknown };
std::string check_name(Check c);

struct CheckReport {
  Check verdict = Check::Unknown;
  std::string detail;
};

struct VerifyOptions {
  int max_worlds = 4;
  std::uint64_t exhaustive_cap = 200000;  // models per size enumerated exhaustively
  std::size_t samples = 2000;             // models drawn per size beyond the cap
  std::size_t random_chi = 200;           // random consequences tried in check (2)
  int search_worlds = 3;                  // fallback search for a p-bisimilar model of phi
  std::uint64_t seed = 1;
  std::vector<KripkeModel> extra_models;  // additional pointed models of psi for check (3)
  std::vector<CanonId> gammas;            // extensions to build from, when known
};

struct VerifyReport {
  CheckReport entailment;   // phi |= psi
  CheckReport consequence;  // phi |= chi iff psi |= chi over sampled p-free chi
  CheckReport back;         // every model of psi has a p-bisimilar model of phi
  bool all_pass() const {
    return entailment.verdict == Check::Pass && consequence.verdict == Check::Pass && back.verdict == Check::Pass;
  }
};

VerifyReport verify_uniform_interpolant(const Formula& phi, const Formula& psi, const std::string& p, System sys,
                                        int agents, const Budget& budget, const VerifyOptions& opts = {});

// Builds a model of delta p-bisimilar to src by the construction matching
// the system; nullopt when the construction or its post-check fails.
std::optional<KripkeModel> back_witness(CanonId delta, const KripkeModel& src, const std::string& p, Base base,
                                        const std::vector<CanonId>& gammas, std::string* why = nullptr);

}  // namespace dkforget
