// formula.hpp -- trace-quantified temporal formulas: AST, parser, printer,
// desugaring to a minimal core, negation normal form, fragment classification
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hlv/errors.hpp"

namespace hlv {

enum class Op {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Equiv,
  Next,
  Until,
  WeakUntil,
  Release,
  Eventually,
  Always,
};

struct Node;

// Immutable handle to a formula body. Copies share structure; a Body is
// never modified after construction, so sharing across threads is safe.
class Body {
 public:
  Body() = default;
  explicit Body(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  const Node& operator*() const { return *node_; }
  const Node* operator->() const { return node_.get(); }
  const Node* get() const { return node_.get(); }
  explicit operator bool() const { return node_ != nullptr; }

 private:
  std::shared_ptr<const Node> node_;
};

// An atom names a proposition on one trace. `var` is the trace variable as
// written; `component` is the 1-based tuple position once the atom has been
// bound for an automaton (0 while unbound).
struct Node {
  Op op = Op::True;
  std::string ap;
  std::string var;
  int component = 0;
  Body lhs;
  Body rhs;
};

inline Body make_node(Node n) {
  return Body(std::make_shared<const Node>(std::move(n)));
}

inline Body tt() { return make_node({Op::True}); }
inline Body ff() { return make_node({Op::False}); }

inline Body atom(std::string ap, std::string var) {
  Node n{Op::Atom};
  n.ap = std::move(ap);
  n.var = std::move(var);
  return make_node(std::move(n));
}

// Atom already bound to a tuple component (used when building automata).
inline Body atom(std::string ap, int component) {
  Node n{Op::Atom};
  n.ap = std::move(ap);
  n.component = component;
  return make_node(std::move(n));
}

inline Body unary(Op op, Body x) {
  Node n{op};
  n.lhs = std::move(x);
  return make_node(std::move(n));
}

inline Body binary(Op op, Body l, Body r) {
  Node n{op};
  n.lhs = std::move(l);
  n.rhs = std::move(r);
  return make_node(std::move(n));
}

inline Body lnot(Body x) { return unary(Op::Not, std::move(x)); }
inline Body land(Body l, Body r) { return binary(Op::And, std::move(l), std::move(r)); }
inline Body lor(Body l, Body r) { return binary(Op::Or, std::move(l), std::move(r)); }
inline Body implies(Body l, Body r) { return binary(Op::Implies, std::move(l), std::move(r)); }
inline Body equiv(Body l, Body r) { return binary(Op::Equiv, std::move(l), std::move(r)); }
inline Body next(Body x) { return unary(Op::Next, std::move(x)); }
inline Body until(Body l, Body r) { return binary(Op::Until, std::move(l), std::move(r)); }
inline Body wuntil(Body l, Body r) { return binary(Op::WeakUntil, std::move(l), std::move(r)); }
inline Body release(Body l, Body r) { return binary(Op::Release, std::move(l), std::move(r)); }
inline Body eventually(Body x) { return unary(Op::Eventually, std::move(x)); }
inline Body always(Body x) { return unary(Op::Always, std::move(x)); }

inline bool is_unary(Op op) {
  return op == Op::Not || op == Op::Next || op == Op::Eventually || op == Op::Always;
}

inline bool is_binary(Op op) {
  switch (op) {
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Equiv:
    case Op::Until:
    case Op::WeakUntil:
    case Op::Release:
      return true;
    default:
      return false;
  }
}

inline bool body_equal(const Body& a, const Body& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  if (a->op == Op::Atom)
    return a->ap == b->ap && a->var == b->var && a->component == b->component;
  if (is_unary(a->op)) return body_equal(a->lhs, b->lhs);
  if (is_binary(a->op))
    return body_equal(a->lhs, b->lhs) && body_equal(a->rhs, b->rhs);
  return true;
}

inline bool operator==(const Body& a, const Body& b) { return body_equal(a, b); }
inline bool operator!=(const Body& a, const Body& b) { return !body_equal(a, b); }

inline std::size_t body_hash(const Body& b) {
  if (!b) return 0;
  auto mix = [](std::size_t h, std::size_t v) {
    return h * 1000003u ^ (v + 0x9e3779b9u + (h << 6) + (h >> 2));
  };
  std::size_t h = static_cast<std::size_t>(b->op) + 1;
  if (b->op == Op::Atom) {
    h = mix(h, std::hash<std::string>{}(b->ap));
    h = mix(h, std::hash<std::string>{}(b->var));
    h = mix(h, static_cast<std::size_t>(b->component));
  }
  if (b->lhs) h = mix(h, body_hash(b->lhs));
  if (b->rhs) h = mix(h, body_hash(b->rhs));
  return h;
}

enum class Quantifier { Forall, Exists };

struct QuantifierStep {
  Quantifier q;
  std::string var;
};

// A formula in prenex form: a quantifier prefix over trace variables and a
// quantifier-free body.
struct QuantifiedFormula {
  std::vector<QuantifierStep> prefix;
  Body body;
};

inline bool operator==(const QuantifiedFormula& a, const QuantifiedFormula& b) {
  if (a.prefix.size() != b.prefix.size()) return false;
  for (std::size_t i = 0; i < a.prefix.size(); ++i)
    if (a.prefix[i].q != b.prefix[i].q || a.prefix[i].var != b.prefix[i].var)
      return false;
  return a.body == b.body;
}

// Flips every quantifier and negates the body.
inline QuantifiedFormula negate_formula(const QuantifiedFormula& f) {
  QuantifiedFormula g;
  g.prefix.reserve(f.prefix.size());
  for (const auto& s : f.prefix)
    g.prefix.push_back(
        {s.q == Quantifier::Forall ? Quantifier::Exists : Quantifier::Forall, s.var});
  g.body = lnot(f.body);
  return g;
}

// ---------------------------------------------------------------------------
// Printing. Binding strength, tightest first:
//   ! X F G   >   U W R (right)   >   &   >   |   >   -> (right)   >   <->
// ---------------------------------------------------------------------------

namespace detail {

inline int precedence(Op op) {
  switch (op) {
    case Op::Equiv: return 0;
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Until:
    case Op::WeakUntil:
    case Op::Release: return 4;
    default: return 5;  // unary and leaves
  }
}

inline bool right_assoc(Op op) {
  return op == Op::Implies || op == Op::Until || op == Op::WeakUntil ||
         op == Op::Release;
}

inline const char* op_token(Op op) {
  switch (op) {
    case Op::And: return "&";
    case Op::Or: return "|";
    case Op::Implies: return "->";
    case Op::Equiv: return "<->";
    case Op::Until: return "U";
    case Op::WeakUntil: return "W";
    case Op::Release: return "R";
    default: return "?";
  }
}

inline void print_body(std::string& out, const Body& b, int min_prec) {
  int prec = precedence(b->op);
  bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (b->op) {
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Atom:
      out += b->ap;
      if (!b->var.empty()) {
        out += '[';
        out += b->var;
        out += ']';
      } else {
        out += '@';
        out += std::to_string(b->component);
      }
      break;
    case Op::Not:
      out += '!';
      print_body(out, b->lhs, 5);
      break;
    case Op::Next:
    case Op::Eventually:
    case Op::Always:
      out += (b->op == Op::Next ? 'X' : b->op == Op::Eventually ? 'F' : 'G');
      out += ' ';
      print_body(out, b->lhs, 5);
      break;
    default: {
      bool ra = right_assoc(b->op);
      print_body(out, b->lhs, ra ? prec + 1 : prec);
      out += ' ';
      out += op_token(b->op);
      out += ' ';
      print_body(out, b->rhs, ra ? prec : prec + 1);
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace detail

inline std::string pretty_print(const Body& b) {
  std::string out;
  detail::print_body(out, b, 0);
  return out;
}

inline std::string pretty_print(const QuantifiedFormula& f) {
  std::string out;
  for (const auto& s : f.prefix) {
    out += s.q == Quantifier::Forall ? "forall " : "exists ";
    out += s.var;
    out += ". ";
  }
  detail::print_body(out, f.body, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

struct Lexer {
  enum class Tok {
    End, LParen, RParen, LBrack, RBrack, Dot, Bang, Amp, Pipe, Arrow, DArrow,
    Ident,
  };

  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  Tok tok = Tok::End;
  std::string ident;     // valid when tok == Ident
  std::size_t tok_pos = 0;

  void advance() {
    skip_space();
    tok_pos = pos_;
    if (pos_ >= text_.size()) {
      tok = Tok::End;
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '(': ++pos_; tok = Tok::LParen; return;
      case ')': ++pos_; tok = Tok::RParen; return;
      case '[': ++pos_; tok = Tok::LBrack; return;
      case ']': ++pos_; tok = Tok::RBrack; return;
      case '.': ++pos_; tok = Tok::Dot; return;
      case '!': ++pos_; tok = Tok::Bang; return;
      case '&': ++pos_; tok = Tok::Amp; return;
      case '|': ++pos_; tok = Tok::Pipe; return;
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          pos_ += 2;
          tok = Tok::Arrow;
          return;
        }
        throw SyntaxError("expected '->'", pos_);
      case '<':
        if (pos_ + 2 < text_.size() + 1 && text_.compare(pos_, 3, "<->") == 0) {
          pos_ += 3;
          tok = Tok::DArrow;
          return;
        }
        throw SyntaxError("expected '<->'", pos_);
      default:
        break;
    }
    if (is_ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      ident = text_.substr(start, pos_ - start);
      tok = Tok::Ident;
      return;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
  }

 private:
  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9') || c == '\'';
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lx_(text) {}

  QuantifiedFormula parse_formula() {
    QuantifiedFormula f;
    while (lx_.tok == Lexer::Tok::Ident &&
           (lx_.ident == "forall" || lx_.ident == "exists")) {
      Quantifier q = lx_.ident == "forall" ? Quantifier::Forall : Quantifier::Exists;
      lx_.advance();
      std::string var = expect_ident("trace variable");
      expect(Lexer::Tok::Dot, "'.'");
      for (const auto& s : f.prefix)
        if (s.var == var) throw DuplicateQuantifierError(var);
      f.prefix.push_back({q, var});
    }
    f.body = parse_body_expr();
    expect(Lexer::Tok::End, "end of input");
    std::set<std::string> bound;
    for (const auto& s : f.prefix) bound.insert(s.var);
    check_bound(f.body, bound);
    return f;
  }

  Body parse_bare_body() {
    Body b = parse_body_expr();
    expect(Lexer::Tok::End, "end of input");
    return b;
  }

 private:
  Lexer lx_;

  [[noreturn]] void fail(const std::string& what) {
    throw SyntaxError("expected " + what, lx_.tok_pos);
  }

  void expect(Lexer::Tok t, const std::string& what) {
    if (lx_.tok != t) fail(what);
    lx_.advance();
  }

  std::string expect_ident(const std::string& what) {
    if (lx_.tok != Lexer::Tok::Ident) fail(what);
    std::string s = lx_.ident;
    lx_.advance();
    return s;
  }

  static void check_bound(const Body& b, const std::set<std::string>& bound) {
    if (b->op == Op::Atom) {
      if (!bound.count(b->var)) throw UnboundVariableError(b->var);
      return;
    }
    if (b->lhs) check_bound(b->lhs, bound);
    if (b->rhs) check_bound(b->rhs, bound);
  }

  // equiv := impl ('<->' impl)*
  Body parse_body_expr() {
    Body l = parse_impl();
    while (lx_.tok == Lexer::Tok::DArrow) {
      lx_.advance();
      l = equiv(l, parse_impl());
    }
    return l;
  }

  // impl := or ('->' impl)?
  Body parse_impl() {
    Body l = parse_or();
    if (lx_.tok == Lexer::Tok::Arrow) {
      lx_.advance();
      return implies(l, parse_impl());
    }
    return l;
  }

  Body parse_or() {
    Body l = parse_and();
    while (lx_.tok == Lexer::Tok::Pipe) {
      lx_.advance();
      l = lor(l, parse_and());
    }
    return l;
  }

  Body parse_and() {
    Body l = parse_until();
    while (lx_.tok == Lexer::Tok::Amp) {
      lx_.advance();
      l = land(l, parse_until());
    }
    return l;
  }

  // until := unary (('U'|'W'|'R') until)?
  Body parse_until() {
    Body l = parse_unary();
    if (lx_.tok == Lexer::Tok::Ident &&
        (lx_.ident == "U" || lx_.ident == "W" || lx_.ident == "R")) {
      Op op = lx_.ident == "U" ? Op::Until
              : lx_.ident == "W" ? Op::WeakUntil
                                 : Op::Release;
      lx_.advance();
      return binary(op, l, parse_until());
    }
    return l;
  }

  Body parse_unary() {
    if (lx_.tok == Lexer::Tok::Bang) {
      lx_.advance();
      return lnot(parse_unary());
    }
    if (lx_.tok == Lexer::Tok::Ident && lx_.ident.size() == 1) {
      char c = lx_.ident[0];
      if (c == 'X' || c == 'F' || c == 'G') {
        lx_.advance();
        Body x = parse_unary();
        return unary(c == 'X' ? Op::Next : c == 'F' ? Op::Eventually : Op::Always,
                     std::move(x));
      }
    }
    return parse_primary();
  }

  Body parse_primary() {
    if (lx_.tok == Lexer::Tok::LParen) {
      lx_.advance();
      Body b = parse_body_expr();
      expect(Lexer::Tok::RParen, "')'");
      return b;
    }
    if (lx_.tok != Lexer::Tok::Ident) fail("a formula");
    if (lx_.ident == "forall" || lx_.ident == "exists")
      throw SyntaxError("quantifiers are only allowed in the prefix", lx_.tok_pos);
    if (lx_.ident == "true") {
      lx_.advance();
      return tt();
    }
    if (lx_.ident == "false") {
      lx_.advance();
      return ff();
    }
    if (lx_.ident == "U" || lx_.ident == "W" || lx_.ident == "R")
      fail("a formula");
    std::string ap = lx_.ident;
    lx_.advance();
    expect(Lexer::Tok::LBrack, "'[' after proposition name");
    std::string var = expect_ident("trace variable");
    expect(Lexer::Tok::RBrack, "']'");
    return atom(std::move(ap), std::move(var));
  }
};

}  // namespace detail

// Parses a sentence: quantifier prefix plus body. Rejects duplicate
// quantifiers and atoms whose trace variable is not bound by the prefix.
inline QuantifiedFormula parse_formula(const std::string& text) {
  return detail::Parser(text).parse_formula();
}

// Parses a bare body with no binding checks; trace variables stay free.
inline Body parse_body(const std::string& text) {
  return detail::Parser(text).parse_bare_body();
}

// ---------------------------------------------------------------------------
// Desugaring: rewrites to the core {true, atom, !, &, X, U}
// ---------------------------------------------------------------------------

inline Body desugar(const Body& b) {
  switch (b->op) {
    case Op::True:
    case Op::Atom:
      return b;
    case Op::False:
      return lnot(tt());
    case Op::Not:
      return lnot(desugar(b->lhs));
    case Op::And:
      return land(desugar(b->lhs), desugar(b->rhs));
    case Op::Or:
      // a | b  ==  !(!a & !b)
      return lnot(land(lnot(desugar(b->lhs)), lnot(desugar(b->rhs))));
    case Op::Implies:
      // a -> b  ==  !(a & !b)
      return lnot(land(desugar(b->lhs), lnot(desugar(b->rhs))));
    case Op::Equiv: {
      Body l = desugar(b->lhs), r = desugar(b->rhs);
      return land(lnot(land(l, lnot(r))), lnot(land(r, lnot(l))));
    }
    case Op::Next:
      return next(desugar(b->lhs));
    case Op::Until:
      return until(desugar(b->lhs), desugar(b->rhs));
    case Op::Eventually:
      return until(tt(), desugar(b->lhs));
    case Op::Always:
      // G a  ==  !F !a
      return lnot(until(tt(), lnot(desugar(b->lhs))));
    case Op::WeakUntil: {
      // a W b  ==  (a U b) | G a
      Body l = desugar(b->lhs), r = desugar(b->rhs);
      Body ga = lnot(until(tt(), lnot(l)));
      return lnot(land(lnot(until(l, r)), lnot(ga)));
    }
    case Op::Release: {
      // a R b  ==  !(!a U !b)
      Body l = desugar(b->lhs), r = desugar(b->rhs);
      return lnot(until(lnot(l), lnot(r)));
    }
  }
  throw Error("unreachable formula variant");
}

// ---------------------------------------------------------------------------
// Negation normal form: negations pushed down to atoms, implications and
// equivalences expanded, U/R dual, W kept positive and dualized into U.
// ---------------------------------------------------------------------------

namespace detail {
inline Body nnf_pos(const Body& b);
inline Body nnf_neg(const Body& b);

inline Body nnf_pos(const Body& b) {
  switch (b->op) {
    case Op::True:
    case Op::False:
    case Op::Atom:
      return b;
    case Op::Not:
      return nnf_neg(b->lhs);
    case Op::And:
      return land(nnf_pos(b->lhs), nnf_pos(b->rhs));
    case Op::Or:
      return lor(nnf_pos(b->lhs), nnf_pos(b->rhs));
    case Op::Implies:
      return lor(nnf_neg(b->lhs), nnf_pos(b->rhs));
    case Op::Equiv:
      return lor(land(nnf_pos(b->lhs), nnf_pos(b->rhs)),
                 land(nnf_neg(b->lhs), nnf_neg(b->rhs)));
    case Op::Next:
      return next(nnf_pos(b->lhs));
    case Op::Eventually:
      return eventually(nnf_pos(b->lhs));
    case Op::Always:
      return always(nnf_pos(b->lhs));
    case Op::Until:
      return until(nnf_pos(b->lhs), nnf_pos(b->rhs));
    case Op::WeakUntil:
      return wuntil(nnf_pos(b->lhs), nnf_pos(b->rhs));
    case Op::Release:
      return release(nnf_pos(b->lhs), nnf_pos(b->rhs));
  }
  throw Error("unreachable formula variant");
}

inline Body nnf_neg(const Body& b) {
  switch (b->op) {
    case Op::True:
      return ff();
    case Op::False:
      return tt();
    case Op::Atom:
      return lnot(b);
    case Op::Not:
      return nnf_pos(b->lhs);
    case Op::And:
      return lor(nnf_neg(b->lhs), nnf_neg(b->rhs));
    case Op::Or:
      return land(nnf_neg(b->lhs), nnf_neg(b->rhs));
    case Op::Implies:
      return land(nnf_pos(b->lhs), nnf_neg(b->rhs));
    case Op::Equiv:
      return lor(land(nnf_pos(b->lhs), nnf_neg(b->rhs)),
                 land(nnf_neg(b->lhs), nnf_pos(b->rhs)));
    case Op::Next:
      return next(nnf_neg(b->lhs));
    case Op::Eventually:
      return always(nnf_neg(b->lhs));
    case Op::Always:
      return eventually(nnf_neg(b->lhs));
    case Op::Until:
      return release(nnf_neg(b->lhs), nnf_neg(b->rhs));
    case Op::Release:
      return until(nnf_neg(b->lhs), nnf_neg(b->rhs));
    case Op::WeakUntil: {
      // !(a W b)  ==  !b U (!a & !b)
      Body na = nnf_neg(b->lhs), nb = nnf_neg(b->rhs);
      return until(nb, land(na, nb));
    }
  }
  throw Error("unreachable formula variant");
}
}  // namespace detail

inline Body to_nnf(const Body& b) { return detail::nnf_pos(b); }

// ---------------------------------------------------------------------------
// Fragment classification
// ---------------------------------------------------------------------------

struct FragmentInfo {
  std::string pattern;       // one 'A' or 'E' per prefix entry, outermost first
  int alternations = 0;      // adjacent quantifier changes in the prefix
  bool quantifier_free = false;
  bool alternation_free = false;
  bool forall_only = false;  // nonempty prefix, universal throughout
  bool exists_only = false;
  bool exists_forall = false;  // matches E+A+
  bool forall_exists = false;  // matches A+E+
  bool safety_body = false;    // NNF of the body is free of U and F
};

namespace detail {
inline bool nnf_is_safety(const Body& b) {
  if (b->op == Op::Until || b->op == Op::Eventually) return false;
  if (b->lhs && !nnf_is_safety(b->lhs)) return false;
  if (b->rhs && !nnf_is_safety(b->rhs)) return false;
  return true;
}
}  // namespace detail

inline FragmentInfo classify(const QuantifiedFormula& f) {
  FragmentInfo info;
  for (const auto& s : f.prefix)
    info.pattern += s.q == Quantifier::Forall ? 'A' : 'E';
  for (std::size_t i = 1; i < info.pattern.size(); ++i)
    if (info.pattern[i] != info.pattern[i - 1]) ++info.alternations;
  info.quantifier_free = info.pattern.empty();
  info.alternation_free = info.alternations == 0;
  info.forall_only =
      !info.pattern.empty() && info.pattern.find('E') == std::string::npos;
  info.exists_only =
      !info.pattern.empty() && info.pattern.find('A') == std::string::npos;
  info.exists_forall = info.alternations == 1 && info.pattern[0] == 'E';
  info.forall_exists = info.alternations == 1 && info.pattern[0] == 'A';
  info.safety_body = detail::nnf_is_safety(to_nnf(f.body));
  return info;
}

// ---------------------------------------------------------------------------
// Traversal helpers
// ---------------------------------------------------------------------------

// Rebuilds a body, replacing every atom by the result of `fn`.
inline Body map_atoms(const Body& b, const std::function<Body(const Node&)>& fn) {
  if (b->op == Op::Atom) return fn(*b);
  if (is_unary(b->op)) return unary(b->op, map_atoms(b->lhs, fn));
  if (is_binary(b->op))
    return binary(b->op, map_atoms(b->lhs, fn), map_atoms(b->rhs, fn));
  return b;
}

// Binds each atom's trace variable to a tuple component (1-based).
// Variables missing from the map raise UnboundVariableError.
inline Body bind_atoms(const Body& b, const std::map<std::string, int>& components) {
  return map_atoms(b, [&](const Node& n) {
    auto it = components.find(n.var);
    if (it == components.end()) throw UnboundVariableError(n.var);
    return atom(n.ap, it->second);
  });
}

// Renames trace variables; variables absent from the map are kept.
inline Body rename_vars(const Body& b, const std::map<std::string, std::string>& m) {
  return map_atoms(b, [&](const Node& n) {
    auto it = m.find(n.var);
    return atom(n.ap, it == m.end() ? n.var : it->second);
  });
}

inline void collect_vars(const Body& b, std::set<std::string>& out) {
  if (b->op == Op::Atom) {
    out.insert(b->var);
    return;
  }
  if (b->lhs) collect_vars(b->lhs, out);
  if (b->rhs) collect_vars(b->rhs, out);
}

inline std::set<std::string> free_vars(const Body& b) {
  std::set<std::string> out;
  collect_vars(b, out);
  return out;
}

inline void collect_aps(const Body& b, std::set<std::string>& out) {
  if (b->op == Op::Atom) {
    out.insert(b->ap);
    return;
  }
  if (b->lhs) collect_aps(b->lhs, out);
  if (b->rhs) collect_aps(b->rhs, out);
}

inline std::set<std::string> atom_props(const Body& b) {
  std::set<std::string> out;
  collect_aps(b, out);
  return out;
}

}  // namespace hlv
