// monitor.hpp -- finite-trace semantics and the sequential runtime monitor
// for forall-only safety formulas: bad-prefix detection per trace tuple,
// with completed traces stored in a prefix tree.
#pragma once

#include <algorithm>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hlv/config.hpp"
#include "hlv/errors.hpp"
#include "hlv/formula.hpp"
#include "hlv/kripke.hpp"

namespace hlv {

struct FiniteTrace {
  std::string id;
  std::vector<PropSet> events;
};

inline bool operator<(const FiniteTrace& a, const FiniteTrace& b) {
  if (a.id != b.id) return a.id < b.id;
  return a.events < b.events;
}

// ---------------------------------------------------------------------------
// Finite-trace semantics. Temporal operators cut off at the end of the
// shortest assigned trace: X needs the next position to exist on every
// assigned trace, and U needs its witness within the shared length.
// ---------------------------------------------------------------------------

namespace detail {

struct FiniteEvaluator {
  std::vector<const std::vector<PropSet>*> traces;
  std::map<std::string, std::size_t> index;
  std::size_t minlen = std::numeric_limits<std::size_t>::max();

  void assign(const std::string& var, const std::vector<PropSet>& events) {
    index[var] = traces.size();
    traces.push_back(&events);
    minlen = std::min(minlen, events.size());
  }

  // A body with no assigned traces is position-independent, so a horizon of
  // one position gives it a terminating evaluation.
  std::size_t horizon() const {
    return traces.empty() ? 1 : minlen;
  }

  bool eval(const Body& b, std::size_t i) const {
    switch (b->op) {
      case Op::True:
        return true;
      case Op::Atom: {
        auto it = index.find(b->var);
        if (it == index.end()) throw UnboundVariableError(b->var);
        return traces[it->second]->at(i).count(b->ap) > 0;
      }
      case Op::Not:
        return !eval(b->lhs, i);
      case Op::And:
        return eval(b->lhs, i) && eval(b->rhs, i);
      case Op::Next:
        return i + 1 < horizon() && eval(b->lhs, i + 1);
      case Op::Until:
        for (std::size_t k = i; k < horizon(); ++k) {
          if (eval(b->rhs, k)) return true;
          if (!eval(b->lhs, k)) return false;
        }
        return false;
      default:
        throw Error("finite evaluation expects a desugared body");
    }
  }
};

}  // namespace detail

// Evaluates a body over finite traces under a full variable assignment.
inline bool eval_finite_under(
    const Body& body, const std::map<std::string, FiniteTrace>& assignment) {
  detail::FiniteEvaluator ev;
  for (const auto& [var, t] : assignment) {
    if (t.events.empty()) throw EmptyTraceError();
    ev.assign(var, t.events);
  }
  return ev.eval(desugar(body), 0);
}

// The satisfaction relation over a finite, nonempty set of finite traces.
inline bool eval_finite(const std::set<FiniteTrace>& T,
                        const QuantifiedFormula& f) {
  if (T.empty()) throw Error("trace set must be nonempty");
  for (const auto& t : T)
    if (t.events.empty()) throw EmptyTraceError();

  Body core = desugar(f.body);
  std::map<std::string, const FiniteTrace*> bound;
  auto go = [&](auto&& self, std::size_t from) -> bool {
    if (from == f.prefix.size()) {
      detail::FiniteEvaluator ev;
      for (const auto& [var, t] : bound) ev.assign(var, t->events);
      return ev.eval(core, 0);
    }
    const auto& step = f.prefix[from];
    bool is_all = step.q == Quantifier::Forall;
    for (const auto& t : T) {
      bound[step.var] = &t;
      bool sub = self(self, from + 1);
      if (is_all != sub) {
        bound.erase(step.var);
        return sub;
      }
    }
    bound.erase(step.var);
    return is_all;
  };
  return go(go, 0);
}

// ---------------------------------------------------------------------------
// Bad-prefix automaton. The negated body is a co-safety formula in NNF;
// expanding it per letter into now-constraints and deferred obligations
// gives a finite-word NFA whose accepted words are the informative bad
// prefixes, and the subset construction makes that deterministic. The
// violating sink is absorbing.
// ---------------------------------------------------------------------------

struct BadPrefixDFA {
  std::vector<std::pair<std::string, int>> atoms;
  std::size_t state_count = 0;
  std::size_t initial = 0;
  std::vector<std::vector<std::size_t>> next;  // [state][letter mask]
  std::set<std::size_t> violating;

  std::size_t mask_of(const std::vector<PropSet>& letter) const {
    std::size_t m = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const auto& [ap, comp] = atoms[i];
      if (letter.at(comp - 1).count(ap)) m |= std::size_t{1} << i;
    }
    return m;
  }

  std::size_t step(std::size_t state, const std::vector<PropSet>& letter) const {
    return next[state][mask_of(letter)];
  }
};

namespace detail {

// Reorders the operands of commutative connectives into a canonical order so
// that syntactically shuffled but identical bodies print alike. Used for
// symmetry detection only, so being conservative is fine.
inline Body commutative_normal(const Body& b) {
  if (is_unary(b->op)) return unary(b->op, commutative_normal(b->lhs));
  if (is_binary(b->op)) {
    Body l = commutative_normal(b->lhs);
    Body r = commutative_normal(b->rhs);
    bool commutes = b->op == Op::And || b->op == Op::Or || b->op == Op::Equiv;
    if (commutes && pretty_print(r) < pretty_print(l)) std::swap(l, r);
    return binary(b->op, std::move(l), std::move(r));
  }
  return b;
}

inline void collect_bound_atoms(const Body& b, int arity,
                                std::set<std::pair<std::string, int>>& out) {
  if (b->op == Op::Atom) {
    if (b->component < 1 || b->component > arity)
      throw Error("atom '" + pretty_print(b) + "' is not bound to a component");
    out.emplace(b->ap, b->component);
    return;
  }
  if (b->lhs) collect_bound_atoms(b->lhs, arity, out);
  if (b->rhs) collect_bound_atoms(b->rhs, arity, out);
}

// Obligation sets are sets of interned formula ids; expansion produces the
// nondeterministic successors of one obligation under one letter.
struct CosafetyExpander {
  std::vector<Body> formulas;
  std::map<std::string, std::size_t> ids;

  std::size_t intern(const Body& b) {
    auto key = pretty_print(b);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    formulas.push_back(b);
    ids.emplace(std::move(key), formulas.size() - 1);
    return formulas.size() - 1;
  }

  using ObSet = std::set<std::size_t>;

  static std::vector<ObSet> cross(const std::vector<ObSet>& a,
                                  const std::vector<ObSet>& b) {
    std::vector<ObSet> out;
    for (const auto& x : a)
      for (const auto& y : b) {
        ObSet u = x;
        u.insert(y.begin(), y.end());
        out.push_back(std::move(u));
      }
    return out;
  }

  // Takes its formula by value: interning inside the recursion may grow the
  // formula table, which would invalidate a reference into it.
  std::vector<ObSet> expand(Body b, std::size_t mask,
                            const std::map<std::string, std::size_t>& bit) {
    switch (b->op) {
      case Op::True:
        return {{}};
      case Op::False:
        return {};
      case Op::Atom:
        return (mask >> bit.at(pretty_print(b))) & 1 ? std::vector<ObSet>{{}}
                                                     : std::vector<ObSet>{};
      case Op::Not:
        return (mask >> bit.at(pretty_print(b->lhs))) & 1
                   ? std::vector<ObSet>{}
                   : std::vector<ObSet>{{}};
      case Op::And:
        return cross(expand(b->lhs, mask, bit), expand(b->rhs, mask, bit));
      case Op::Or: {
        auto out = expand(b->lhs, mask, bit);
        auto rhs = expand(b->rhs, mask, bit);
        out.insert(out.end(), rhs.begin(), rhs.end());
        return out;
      }
      case Op::Next:
        return {{intern(b->lhs)}};
      case Op::Until: {
        auto out = expand(b->rhs, mask, bit);
        auto wait = cross(expand(b->lhs, mask, bit), {{intern(b)}});
        out.insert(out.end(), wait.begin(), wait.end());
        return out;
      }
      case Op::Eventually: {
        auto out = expand(b->lhs, mask, bit);
        out.push_back({intern(b)});
        return out;
      }
      default:
        throw Error("negated safety body left a non-co-safety operator");
    }
  }
};

}  // namespace detail

inline BadPrefixDFA build_bad_prefix_dfa(const Body& body, int arity,
                                         const Limits& limits = {}) {
  if (!detail::nnf_is_safety(to_nnf(body)))
    throw FragmentError("bad-prefix automata need a syntactic safety body");

  Body neg = to_nnf(lnot(body));
  BadPrefixDFA dfa;
  {
    std::set<std::pair<std::string, int>> atom_set;
    detail::collect_bound_atoms(neg, arity, atom_set);
    dfa.atoms.assign(atom_set.begin(), atom_set.end());
  }
  if (dfa.atoms.size() > 12)
    throw ResourceLimitError("bad-prefix alphabet has too many atoms");
  std::size_t letters = std::size_t{1} << dfa.atoms.size();

  std::map<std::string, std::size_t> bit;
  for (std::size_t i = 0; i < dfa.atoms.size(); ++i)
    bit[pretty_print(atom(dfa.atoms[i].first, dfa.atoms[i].second))] = i;

  detail::CosafetyExpander ex;
  using ObSet = detail::CosafetyExpander::ObSet;
  using DfaKey = std::set<ObSet>;

  // State 0 is the violating sink. A state is violating when one of its
  // obligation sets needs nothing further from the word, which covers both
  // the empty set and deferred `true` obligations. The dead state (no live
  // obligation set at all) is the empty key and is likewise absorbing.
  auto discharged = [&](const ObSet& obligations) {
    for (std::size_t fi : obligations)
      if (ex.formulas[fi]->op != Op::True) return false;
    return true;
  };
  std::map<DfaKey, std::size_t> index;
  std::vector<DfaKey> todo;
  dfa.state_count = 1;
  dfa.violating.insert(0);
  dfa.next.push_back(std::vector<std::size_t>(letters, 0));
  auto intern_state = [&](const DfaKey& key) -> std::size_t {
    for (const ObSet& obligations : key)
      if (discharged(obligations)) return 0;
    auto [it, fresh] = index.try_emplace(key, dfa.state_count);
    if (fresh) {
      if (++dfa.state_count > limits.max_automaton_states)
        throw ResourceLimitError("bad-prefix automaton exceeds state cap");
      dfa.next.push_back(std::vector<std::size_t>(letters, 0));
      todo.push_back(key);
    }
    return it->second;
  };

  DfaKey start{{ex.intern(neg)}};
  dfa.initial = intern_state(start);

  for (std::size_t head = 0; head < todo.size(); ++head) {
    DfaKey key = todo[head];
    std::size_t from = index.at(key);
    for (std::size_t m = 0; m < letters; ++m) {
      DfaKey succ;
      for (const ObSet& obligations : key) {
        std::vector<ObSet> branches{{}};
        for (std::size_t fi : obligations) {
          branches = detail::CosafetyExpander::cross(
              branches, ex.expand(ex.formulas[fi], m, bit));
          if (branches.empty()) break;
        }
        for (auto& br : branches) succ.insert(std::move(br));
      }
      dfa.next[from][m] = intern_state(succ);
    }
  }
  return dfa;
}

// ---------------------------------------------------------------------------
// The sequential monitor. Completed traces live in a prefix tree; the tuple
// map S tracks one DFA state per n-tuple of seen traces. A tuple advances
// only while every component has an event at the current position, which
// realizes the finite-semantics cut-off incrementally; tuples that reach
// the violating sink are reported once.
// ---------------------------------------------------------------------------

struct Violation {
  std::vector<std::string> tuple;
  std::size_t position = 0;
};

class Monitor {
 public:
  explicit Monitor(const QuantifiedFormula& f, bool symmetry_reduction = false,
                   const Limits& limits = {})
      : formula_(f) {
    auto info = classify(f);
    if (!info.forall_only)
      throw FragmentError("monitoring needs a forall-only prefix");
    if (!info.safety_body)
      throw FragmentError("monitoring needs a syntactic safety body");
    n_ = f.prefix.size();
    std::map<std::string, int> components;
    for (std::size_t j = 0; j < n_; ++j)
      components[f.prefix[j].var] = static_cast<int>(j) + 1;
    dfa_ = build_bad_prefix_dfa(bind_atoms(f.body, components),
                                static_cast<int>(n_), limits);
    symmetric_ = symmetry_reduction && body_symmetric();
    nodes_.push_back({npos, {}});
  }

  void begin_trace(const std::string& id) {
    if (open_) throw Error("a trace is already open");
    for (const auto& t : traces_)
      if (t.id == id) throw DuplicateSessionError(id);
    traces_.push_back({id, 0, 0});
    open_ = true;

    // Every n-tuple over the known traces that mentions the new one starts
    // at the initial state; the new trace has no events yet, so there is
    // nothing to replay.
    std::size_t fresh = traces_.size() - 1;
    std::vector<std::size_t> tuple(n_, 0);
    for (;;) {
      bool mentions = false;
      for (std::size_t c : tuple) mentions |= c == fresh;
      if (mentions && (!symmetric_ || std::is_sorted(tuple.begin(), tuple.end())))
        tuples_.emplace(tuple, dfa_.initial);
      std::size_t j = 0;
      while (j < n_ && ++tuple[j] == traces_.size()) tuple[j++] = 0;
      if (j == n_) break;
    }
  }

  std::vector<Violation> event(const PropSet& letter) {
    if (!open_) throw NoOpenTraceError();
    auto& open = traces_.back();
    std::size_t pos = open.len;
    open.tip = child(open.tip, letter);
    ++open.len;

    // Events of every trace long enough to take part at this position.
    std::vector<std::optional<PropSet>> at(traces_.size());
    for (std::size_t i = 0; i < traces_.size(); ++i)
      if (traces_[i].len > pos) at[i] = event_at(traces_[i], pos);

    std::vector<Violation> fresh;
    std::size_t self = traces_.size() - 1;
    for (auto& [tuple, state] : tuples_) {
      if (dfa_.violating.count(state)) continue;
      bool mine = false, ready = true;
      std::vector<PropSet> word(n_);
      for (std::size_t c = 0; c < n_; ++c) {
        mine |= tuple[c] == self;
        if (!at[tuple[c]]) {
          ready = false;
          break;
        }
        word[c] = *at[tuple[c]];
      }
      if (!mine || !ready) continue;
      state = dfa_.step(state, word);
      if (dfa_.violating.count(state)) {
        Violation v;
        for (std::size_t c : tuple) v.tuple.push_back(traces_[c].id);
        v.position = pos;
        fresh.push_back(v);
        log_.push_back(v);
      }
    }
    return fresh;
  }

  void end_trace() {
    if (!open_) throw NoOpenTraceError();
    if (traces_.back().len == 0) throw EmptyTraceError();
    open_ = false;
  }

  const std::vector<Violation>& violations() const { return log_; }
  std::size_t tuple_count() const { return tuples_.size(); }
  std::size_t node_count() const { return nodes_.size(); }
  bool symmetric() const { return symmetric_; }

  std::vector<PropSet> replay(const std::string& id) const {
    for (const auto& t : traces_)
      if (t.id == id) {
        std::vector<PropSet> events;
        for (std::size_t n = t.tip; n != 0; n = nodes_[n].parent)
          events.push_back(nodes_[n].letter);
        std::reverse(events.begin(), events.end());
        return events;
      }
    throw Error("unknown trace id '" + id + "'");
  }

 private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  struct Node {
    std::size_t parent;
    PropSet letter;
    std::map<PropSet, std::size_t> children;
  };
  struct TraceRecord {
    std::string id;
    std::size_t tip;
    std::size_t len;
  };

  // Adjacent transpositions generate the full symmetric group, so invariance
  // under each of them means the body cannot tell tuple orderings apart.
  bool body_symmetric() const {
    auto base = pretty_print(detail::commutative_normal(formula_.body));
    for (std::size_t j = 0; j + 1 < n_; ++j) {
      std::map<std::string, std::string> swap{
          {formula_.prefix[j].var, formula_.prefix[j + 1].var},
          {formula_.prefix[j + 1].var, formula_.prefix[j].var}};
      Body swapped = rename_vars(formula_.body, swap);
      if (pretty_print(detail::commutative_normal(swapped)) != base)
        return false;
    }
    return true;
  }

  std::size_t child(std::size_t node, const PropSet& letter) {
    auto [it, fresh] = nodes_[node].children.try_emplace(letter, nodes_.size());
    if (fresh) nodes_.push_back({node, letter, {}});
    return it->second;
  }

  PropSet event_at(const TraceRecord& t, std::size_t pos) const {
    std::size_t n = t.tip;
    for (std::size_t back = t.len - 1; back > pos; --back) n = nodes_[n].parent;
    return nodes_[n].letter;
  }

  QuantifiedFormula formula_;
  std::size_t n_ = 0;
  BadPrefixDFA dfa_;
  bool symmetric_ = false;
  bool open_ = false;
  std::vector<Node> nodes_;
  std::vector<TraceRecord> traces_;
  std::map<std::vector<std::size_t>, std::size_t> tuples_;
  std::vector<Violation> log_;
};

// Line protocol for monitor sessions: each line lists the true propositions
// of one event (an empty line is the empty event), `---` ends the current
// trace, and end of input ends the stream. Traces are numbered t1, t2, ...
// in order of appearance. Returns the number of violations written.
inline std::size_t run_monitor_stream(Monitor& m, std::istream& in,
                                      std::ostream& out) {
  std::size_t sessions = 0, reported = 0;
  bool open = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line == "---") {
      m.end_trace();
      open = false;
      continue;
    }
    if (!open) {
      m.begin_trace("t" + std::to_string(++sessions));
      open = true;
    }
    PropSet letter;
    std::istringstream words(line);
    std::string w;
    while (words >> w) letter.insert(w);
    for (const auto& v : m.event(letter)) {
      out << "VIOLATION tuple=(";
      for (std::size_t i = 0; i < v.tuple.size(); ++i)
        out << (i ? "," : "") << v.tuple[i];
      out << ") position=" << v.position << "\n";
      ++reported;
    }
  }
  if (open) m.end_trace();
  return reported;
}

}  // namespace hlv
