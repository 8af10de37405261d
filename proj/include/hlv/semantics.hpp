// semantics.hpp -- exact evaluation of temporal bodies over ultimately
// periodic traces. This direct evaluator is the semantic reference the
// automata-based procedures are tested against.
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "hlv/errors.hpp"
#include "hlv/formula.hpp"
#include "hlv/kripke.hpp"

namespace hlv {

namespace detail {

// Joint evaluation works on the synchronized word of all assigned traces:
// stem length S = max of the stems, loop length L = lcm of the loops. Every
// subformula gets a truth table over positions [0, S+L) with the successor
// of the last position wrapping back to S. Least fixpoints (U) start from
// false, greatest fixpoints (R and the derived G/W) from true; two backward
// sweeps reach the fixpoint because the earliest witness or failure lies
// within one loop period of any position.
class LassoEvaluator {
 public:
  LassoEvaluator(std::vector<const UltimatelyPeriodicTrace*> traces,
                 std::function<std::size_t(const Node&)> resolve)
      : traces_(std::move(traces)), resolve_(std::move(resolve)) {
    std::size_t stem = 0, loop = 1;
    for (const auto* t : traces_) {
      stem = std::max(stem, t->stem.size());
      loop = std::lcm(loop, t->loop.size());
      if (loop > (1u << 22))
        throw ResourceLimitError("joint loop period too large");
    }
    stem_ = stem;
    size_ = stem + loop;
  }

  bool eval(const Body& body) { return table(body)[0] != 0; }

 private:
  std::size_t next(std::size_t p) const { return p + 1 < size_ ? p + 1 : stem_; }

  const std::vector<char>& table(const Body& b) {
    auto it = memo_.find(b.get());
    if (it != memo_.end()) return it->second;
    std::vector<char> v(size_, 0);
    switch (b->op) {
      case Op::True:
        v.assign(size_, 1);
        break;
      case Op::False:
        break;
      case Op::Atom: {
        const UltimatelyPeriodicTrace& t = *traces_.at(resolve_(*b));
        for (std::size_t p = 0; p < size_; ++p)
          v[p] = t.at(p).count(b->ap) ? 1 : 0;
        break;
      }
      case Op::Not: {
        const auto& a = table(b->lhs);
        for (std::size_t p = 0; p < size_; ++p) v[p] = !a[p];
        break;
      }
      case Op::And:
      case Op::Or:
      case Op::Implies:
      case Op::Equiv: {
        const auto& a = table(b->lhs);
        const auto& c = table(b->rhs);
        for (std::size_t p = 0; p < size_; ++p) {
          switch (b->op) {
            case Op::And: v[p] = a[p] && c[p]; break;
            case Op::Or: v[p] = a[p] || c[p]; break;
            case Op::Implies: v[p] = !a[p] || c[p]; break;
            default: v[p] = a[p] == c[p]; break;
          }
        }
        break;
      }
      case Op::Next: {
        const auto& a = table(b->lhs);
        for (std::size_t p = 0; p < size_; ++p) v[p] = a[next(p)];
        break;
      }
      case Op::Until:
      case Op::Eventually: {
        const auto& good = table(b->op == Op::Until ? b->rhs : b->lhs);
        const std::vector<char>* hold = nullptr;
        if (b->op == Op::Until) hold = &table(b->lhs);
        v.assign(size_, 0);
        for (int sweep = 0; sweep < 2; ++sweep)
          for (std::size_t p = size_; p-- > 0;)
            v[p] = good[p] || ((hold == nullptr || (*hold)[p]) && v[next(p)]);
        break;
      }
      case Op::Release:
      case Op::Always: {
        const auto& keep = table(b->op == Op::Release ? b->rhs : b->lhs);
        const std::vector<char>* fire = nullptr;
        if (b->op == Op::Release) fire = &table(b->lhs);
        v.assign(size_, 1);
        for (int sweep = 0; sweep < 2; ++sweep)
          for (std::size_t p = size_; p-- > 0;)
            v[p] = keep[p] && ((fire != nullptr && (*fire)[p]) || v[next(p)]);
        break;
      }
      case Op::WeakUntil: {
        // Greatest fixpoint of  w = b | (a & X w).
        const auto& hold = table(b->lhs);
        const auto& good = table(b->rhs);
        v.assign(size_, 1);
        for (int sweep = 0; sweep < 2; ++sweep)
          for (std::size_t p = size_; p-- > 0;)
            v[p] = good[p] || (hold[p] && v[next(p)]);
        break;
      }
    }
    return memo_.emplace(b.get(), std::move(v)).first->second;
  }

  std::vector<const UltimatelyPeriodicTrace*> traces_;
  std::function<std::size_t(const Node&)> resolve_;
  std::size_t stem_ = 0;
  std::size_t size_ = 1;
  std::map<const Node*, std::vector<char>> memo_;
};

}  // namespace detail

// Evaluates a body whose atoms are bound to tuple components (1-based).
inline bool eval_body_on_components(
    const Body& body, const std::vector<UltimatelyPeriodicTrace>& components) {
  std::vector<const UltimatelyPeriodicTrace*> ptrs;
  for (const auto& t : components) ptrs.push_back(&t);
  detail::LassoEvaluator ev(std::move(ptrs), [&](const Node& n) -> std::size_t {
    if (n.component < 1 || n.component > static_cast<int>(components.size()))
      throw Error("atom '" + n.ap + "' bound to missing component");
    return static_cast<std::size_t>(n.component - 1);
  });
  return ev.eval(body);
}

// Evaluates a body whose atoms use trace variables, under an assignment.
inline bool eval_body_under(
    const Body& body,
    const std::map<std::string, UltimatelyPeriodicTrace>& assignment) {
  std::vector<const UltimatelyPeriodicTrace*> ptrs;
  std::map<std::string, std::size_t> index;
  for (const auto& [var, t] : assignment) {
    index[var] = ptrs.size();
    ptrs.push_back(&t);
  }
  detail::LassoEvaluator ev(std::move(ptrs), [&, index](const Node& n) -> std::size_t {
    auto it = index.find(n.var);
    if (it == index.end()) throw UnboundVariableError(n.var);
    return it->second;
  });
  return ev.eval(body);
}

// Evaluates the quantifier suffix f.prefix[from..] with the variables before
// `from` already assigned. Quantifiers range over the finite trace set T.
inline bool evaluate_suffix(const std::set<UltimatelyPeriodicTrace>& T,
                            const QuantifiedFormula& f, std::size_t from,
                            std::map<std::string, UltimatelyPeriodicTrace>& bound) {
  if (from == f.prefix.size()) return eval_body_under(f.body, bound);
  const auto& step = f.prefix[from];
  bool is_all = step.q == Quantifier::Forall;
  for (const auto& t : T) {
    bound[step.var] = t;
    bool sub = evaluate_suffix(T, f, from + 1, bound);
    if (is_all && !sub) {
      bound.erase(step.var);
      return false;
    }
    if (!is_all && sub) {
      bound.erase(step.var);
      return true;
    }
  }
  bound.erase(step.var);
  return is_all;
}

// Direct implementation of the satisfaction relation over a finite, nonempty
// set of ultimately periodic traces.
inline bool evaluate_semantics(const std::set<UltimatelyPeriodicTrace>& T,
                               const QuantifiedFormula& f) {
  if (T.empty()) throw Error("trace set must be nonempty");
  std::map<std::string, UltimatelyPeriodicTrace> bound;
  return evaluate_suffix(T, f, 0, bound);
}

}  // namespace hlv
