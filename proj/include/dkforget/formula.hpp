#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dkforget/agents.hpp"

namespace dkforget {

enum class Op { Atom, Top, Bot, Not, And, Or, K, D, C };

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

// Immutable AST node. K keeps its agent in `agent`; D keeps its group in
// `group`. Unary operators use `lhs` only.
struct FormulaNode {
  Op op;
  std::string name;
  int agent = 0;
  AgentMask group = 0;
  Formula lhs;
  Formula rhs;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

Formula mk_atom(const std::string& name);
Formula mk_top();
Formula mk_bot();
Formula mk_not(Formula f);
Formula mk_and(Formula a, Formula b);
Formula mk_or(Formula a, Formula b);
Formula mk_k(int agent, Formula f);
Formula mk_d(AgentMask group, Formula f);
Formula mk_c(Formula f);

// Diamond forms, expressed as ~D_B ~f and ~C ~f.
Formula mk_dhat(AgentMask group, Formula f);
Formula mk_chat(Formula f);

// Group operator: K i for singletons, D B otherwise.
Formula mk_box(AgentMask group, Formula f);

Formula parse_formula(std::string_view text);
std::string render_formula(const Formula& f);

int modal_depth(const Formula& f);
std::set<std::string> atoms_of(const Formula& f);
// Largest agent id mentioned, 0 if none.
int max_agent(const Formula& f);
bool structurally_equal(const Formula& a, const Formula& b);

// Replaces ~p by true, then the remaining p by true. No simplification.
Formula eliminate_literal(const Formula& f, const std::string& p);

// True iff every C argument is modality-free.
bool is_dpc_formula(const Formula& f);
bool mentions_common(const Formula& f);

}  // namespace dkforget
