#include "dkforget/formula.hpp"

#include <cctype>
#include <functional>
#include <unordered_map>
#include <utility>

namespace dkforget {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

Formula make(Op op, Formula lhs = nullptr, Formula rhs = nullptr) {
  auto n = std::make_shared<FormulaNode>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

}  // namespace

Formula mk_atom(const std::string& name) {
  auto n = std::make_shared<FormulaNode>();
  n->op = Op::Atom;
  n->name = name;
  return n;
}

Formula mk_top() {
  static const Formula top = make(Op::Top);
  return top;
}

Formula mk_bot() {
  static const Formula bot = make(Op::Bot);
  return bot;
}

Formula mk_not(Formula f) { return make(Op::Not, std::move(f)); }
Formula mk_and(Formula a, Formula b) { return make(Op::And, std::move(a), std::move(b)); }
Formula mk_or(Formula a, Formula b) { return make(Op::Or, std::move(a), std::move(b)); }

Formula mk_k(int agent, Formula f) {
  auto n = std::make_shared<FormulaNode>();
  n->op = Op::K;
  n->agent = agent;
  n->group = agent_bit(agent);
  n->lhs = std::move(f);
  return n;
}

Formula mk_d(AgentMask group, Formula f) {
  auto n = std::make_shared<FormulaNode>();
  n->op = Op::D;
  n->group = group;
  n->lhs = std::move(f);
  return n;
}

Formula mk_c(Formula f) { return make(Op::C, std::move(f)); }

Formula mk_box(AgentMask group, Formula f) {
  if (mask_size(group) == 1) return mk_k(std::countr_zero(group) + 1, std::move(f));
  return mk_d(group, std::move(f));
}

Formula mk_dhat(AgentMask group, Formula f) { return mk_not(mk_box(group, mk_not(std::move(f)))); }
Formula mk_chat(Formula f) { return mk_not(mk_c(mk_not(std::move(f)))); }

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = parse_disj();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    advance();
  }

  int parse_nat() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected agent number");
    long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1000000) fail("agent number too large");
      advance();
    }
    if (v < 1) fail("agent ids start at 1");
    if (v > kMaxAgents) fail("agent id exceeds " + std::to_string(kMaxAgents));
    return static_cast<int>(v);
  }

  Formula parse_disj() {
    Formula f = parse_conj();
    while (peek('|')) {
      advance();
      f = mk_or(f, parse_conj());
    }
    return f;
  }

  Formula parse_conj() {
    Formula f = parse_unary();
    while (peek('&')) {
      advance();
      f = mk_and(f, parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '~') {
      advance();
      return mk_not(parse_unary());
    }
    if (c == '(') {
      advance();
      Formula f = parse_disj();
      expect(')');
      return f;
    }
    if (c == 'K') {
      advance();
      int a = parse_nat();
      return mk_k(a, parse_unary());
    }
    if (c == 'D') {
      advance();
      expect('{');
      AgentMask g = agent_bit(parse_nat());
      while (peek(',')) {
        advance();
        g |= agent_bit(parse_nat());
      }
      expect('}');
      return mk_d(g, parse_unary());
    }
    if (c == 'C') {
      advance();
      return mk_c(parse_unary());
    }
    if (c >= 'a' && c <= 'z') {
      std::string name;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if ((d >= 'a' && d <= 'z') || (d >= '0' && d <= '9') || d == '_') {
          name += d;
          advance();
        } else {
          break;
        }
      }
      if (name == "true") return mk_top();
      if (name == "false") return mk_bot();
      return mk_atom(name);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

void render_into(const Formula& f, std::string& out);

void render_unary_operand(const Formula& f, std::string& out) {
  if (f->op == Op::And || f->op == Op::Or) {
    out += '(';
    render_into(f, out);
    out += ')';
  } else {
    render_into(f, out);
  }
}

void render_into(const Formula& f, std::string& out) {
  switch (f->op) {
    case Op::Atom:
      out += f->name;
      return;
    case Op::Top:
      out += "true";
      return;
    case Op::Bot:
      out += "false";
      return;
    case Op::Not:
      out += '~';
      render_unary_operand(f->lhs, out);
      return;
    case Op::K:
      out += "K " + std::to_string(f->agent) + ' ';
      render_unary_operand(f->lhs, out);
      return;
    case Op::D:
      out += "D " + mask_to_string(f->group) + ' ';
      render_unary_operand(f->lhs, out);
      return;
    case Op::C:
      out += "C ";
      render_unary_operand(f->lhs, out);
      return;
    case Op::And: {
      bool lp = f->lhs->op == Op::Or;
      if (lp) out += '(';
      render_into(f->lhs, out);
      if (lp) out += ')';
      out += " & ";
      bool rp = f->rhs->op == Op::Or || f->rhs->op == Op::And;
      if (rp) out += '(';
      render_into(f->rhs, out);
      if (rp) out += ')';
      return;
    }
    case Op::Or: {
      render_into(f->lhs, out);
      out += " | ";
      bool rp = f->rhs->op == Op::Or;
      if (rp) out += '(';
      render_into(f->rhs, out);
      if (rp) out += ')';
      return;
    }
  }
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse_all(); }

std::string render_formula(const Formula& f) {
  std::string out;
  render_into(f, out);
  return out;
}

// Formulas built from canonical trees share subterms heavily, so the
// traversals below memoize on node identity.

int modal_depth(const Formula& f) {
  std::unordered_map<const FormulaNode*, int> memo;
  std::function<int(const Formula&)> go = [&](const Formula& g) -> int {
    auto it = memo.find(g.get());
    if (it != memo.end()) return it->second;
    int d = 0;
    switch (g->op) {
      case Op::Atom:
      case Op::Top:
      case Op::Bot:
        break;
      case Op::Not:
      case Op::C:
        d = g->op == Op::C ? 0 : go(g->lhs);
        break;
      case Op::And:
      case Op::Or:
        d = std::max(go(g->lhs), go(g->rhs));
        break;
      case Op::K:
      case Op::D:
        d = 1 + go(g->lhs);
        break;
    }
    memo.emplace(g.get(), d);
    return d;
  };
  return go(f);
}

std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  std::unordered_map<const FormulaNode*, bool> seen;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (!seen.emplace(g.get(), true).second) return;
    if (g->op == Op::Atom) out.insert(g->name);
    if (g->lhs) go(g->lhs);
    if (g->rhs) go(g->rhs);
  };
  go(f);
  return out;
}

int max_agent(const Formula& f) {
  int best = 0;
  std::unordered_map<const FormulaNode*, bool> seen;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (!seen.emplace(g.get(), true).second) return;
    if (g->op == Op::K || g->op == Op::D) best = std::max(best, 32 - std::countl_zero(g->group));
    if (g->lhs) go(g->lhs);
    if (g->rhs) go(g->rhs);
  };
  go(f);
  return best;
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return true;
  if (a->op != b->op) return false;
  switch (a->op) {
    case Op::Atom:
      return a->name == b->name;
    case Op::Top:
    case Op::Bot:
      return true;
    case Op::Not:
    case Op::C:
      return structurally_equal(a->lhs, b->lhs);
    case Op::K:
      return a->agent == b->agent && structurally_equal(a->lhs, b->lhs);
    case Op::D:
      return a->group == b->group && structurally_equal(a->lhs, b->lhs);
    case Op::And:
    case Op::Or:
      return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
  }
  return false;
}

Formula eliminate_literal(const Formula& f, const std::string& p) {
  std::unordered_map<const FormulaNode*, Formula> memo;
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    auto it = memo.find(g.get());
    if (it != memo.end()) return it->second;
    Formula r;
    switch (g->op) {
      case Op::Atom:
        r = g->name == p ? mk_top() : g;
        break;
      case Op::Top:
      case Op::Bot:
        r = g;
        break;
      case Op::Not:
        if (g->lhs->op == Op::Atom && g->lhs->name == p)
          r = mk_top();
        else
          r = mk_not(go(g->lhs));
        break;
      case Op::And:
        r = mk_and(go(g->lhs), go(g->rhs));
        break;
      case Op::Or:
        r = mk_or(go(g->lhs), go(g->rhs));
        break;
      case Op::K:
        r = mk_k(g->agent, go(g->lhs));
        break;
      case Op::D:
        r = mk_d(g->group, go(g->lhs));
        break;
      case Op::C:
        r = mk_c(go(g->lhs));
        break;
    }
    memo.emplace(g.get(), r);
    return r;
  };
  return go(f);
}

bool mentions_common(const Formula& f) {
  std::unordered_map<const FormulaNode*, bool> memo;
  std::function<bool(const Formula&)> go = [&](const Formula& g) -> bool {
    auto it = memo.find(g.get());
    if (it != memo.end()) return it->second;
    bool r = g->op == Op::C || (g->lhs && go(g->lhs)) || (g->rhs && go(g->rhs));
    memo.emplace(g.get(), r);
    return r;
  };
  return go(f);
}

bool is_dpc_formula(const Formula& f) {
  std::unordered_map<const FormulaNode*, bool> memo;
  std::function<bool(const Formula&)> go = [&](const Formula& g) -> bool {
    auto it = memo.find(g.get());
    if (it != memo.end()) return it->second;
    bool r = true;
    if (g->op == Op::C) r = modal_depth(g->lhs) == 0 && !mentions_common(g->lhs);
    if (r && g->lhs) r = go(g->lhs);
    if (r && g->rhs) r = go(g->rhs);
    memo.emplace(g.get(), r);
    return r;
  };
  return go(f);
}

}  // namespace dkforget
