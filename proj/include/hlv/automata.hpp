// automata.hpp -- nondeterministic Büchi automata over tuple alphabets
// (2^AP)^n: LTL translation, complementation, component constraining,
// existential projection, intersection, emptiness and membership.
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hlv/config.hpp"
#include "hlv/errors.hpp"
#include "hlv/formula.hpp"
#include "hlv/kripke.hpp"

namespace hlv {

// One letter of the alphabet (2^AP)^n: a proposition set per component.
using Letter = std::vector<PropSet>;

// Guards are propositional bodies whose atoms are bound to components
// (a@i). A transition fires on every letter satisfying its guard, so
// propositions a guard never mentions stay unconstrained.
struct AutomatonTransition {
  std::size_t from;
  Body guard;
  std::size_t to;
};

struct BuchiAutomaton {
  int arity = 1;
  std::vector<std::string> ap;
  std::size_t state_count = 0;
  std::set<std::size_t> initial;
  std::set<std::size_t> accepting;
  std::vector<AutomatonTransition> transitions;
};

// An ultimately periodic word: stem . loop^omega, every letter `arity` wide.
struct LassoWord {
  std::vector<Letter> stem;
  std::vector<Letter> loop;

  const Letter& at(std::size_t i) const {
    if (i < stem.size()) return stem[i];
    return loop[(i - stem.size()) % loop.size()];
  }
};

inline std::string format_letter(const Letter& l) {
  std::string out = "(";
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i) out += ',';
    out += format_props(l[i]);
  }
  return out + ")";
}

inline std::string format_lasso_word(const LassoWord& w) {
  std::string out;
  for (const auto& l : w.stem) out += format_letter(l);
  out += '(';
  for (const auto& l : w.loop) out += format_letter(l);
  return out + ")^w";
}

// Splits a word into its component traces (canonicalized).
inline std::vector<UltimatelyPeriodicTrace> lasso_word_to_traces(
    const LassoWord& w) {
  if (w.loop.empty()) throw Error("lasso word needs a nonempty loop");
  std::size_t width = w.loop[0].size();
  std::vector<UltimatelyPeriodicTrace> out;
  for (std::size_t c = 0; c < width; ++c) {
    UltimatelyPeriodicTrace t;
    for (const auto& l : w.stem) t.stem.push_back(l[c]);
    for (const auto& l : w.loop) t.loop.push_back(l[c]);
    out.push_back(t.canonical());
  }
  return out;
}

// Zips component traces into one word, aligning stems and loop periods.
inline LassoWord word_from_traces(
    const std::vector<UltimatelyPeriodicTrace>& traces) {
  std::size_t stem = 0, loop = 1;
  for (const auto& t : traces) {
    if (t.loop.empty()) throw Error("component trace needs a nonempty loop");
    stem = std::max(stem, t.stem.size());
    loop = std::lcm(loop, t.loop.size());
  }
  LassoWord w;
  for (std::size_t p = 0; p < stem + loop; ++p) {
    Letter l;
    for (const auto& t : traces) l.push_back(t.at(p));
    (p < stem ? w.stem : w.loop).push_back(std::move(l));
  }
  return w;
}

// ---------------------------------------------------------------------------
// Guard manipulation
// ---------------------------------------------------------------------------

namespace detail {

inline bool g_true(const Body& b) { return b->op == Op::True; }
inline bool g_false(const Body& b) { return b->op == Op::False; }

inline Body g_not(const Body& a) {
  if (g_true(a)) return ff();
  if (g_false(a)) return tt();
  if (a->op == Op::Not) return a->lhs;
  return lnot(a);
}

inline Body g_and(const Body& a, const Body& b) {
  if (g_false(a) || g_false(b)) return ff();
  if (g_true(a)) return b;
  if (g_true(b)) return a;
  return land(a, b);
}

inline Body g_or(const Body& a, const Body& b) {
  if (g_true(a) || g_true(b)) return tt();
  if (g_false(a)) return b;
  if (g_false(b)) return a;
  return lor(a, b);
}

inline void guard_atoms(const Body& b,
                        std::set<std::pair<std::string, int>>& out) {
  if (b->op == Op::Atom) {
    out.insert({b->ap, b->component});
    return;
  }
  if (b->lhs) guard_atoms(b->lhs, out);
  if (b->rhs) guard_atoms(b->rhs, out);
}

inline bool guard_eval(const Body& b, const Letter& letter) {
  switch (b->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom:
      return letter.at(static_cast<std::size_t>(b->component) - 1)
                 .count(b->ap) != 0;
    case Op::Not: return !guard_eval(b->lhs, letter);
    case Op::And: return guard_eval(b->lhs, letter) && guard_eval(b->rhs, letter);
    case Op::Or: return guard_eval(b->lhs, letter) || guard_eval(b->rhs, letter);
    case Op::Implies:
      return !guard_eval(b->lhs, letter) || guard_eval(b->rhs, letter);
    case Op::Equiv:
      return guard_eval(b->lhs, letter) == guard_eval(b->rhs, letter);
    default: throw Error("guard contains a temporal operator");
  }
}

inline Body guard_substitute(const Body& b, const std::string& ap, int comp,
                             bool value) {
  switch (b->op) {
    case Op::Atom:
      if (b->ap == ap && b->component == comp) return value ? tt() : ff();
      return b;
    case Op::Not: return g_not(guard_substitute(b->lhs, ap, comp, value));
    case Op::And:
      return g_and(guard_substitute(b->lhs, ap, comp, value),
                   guard_substitute(b->rhs, ap, comp, value));
    case Op::Or:
      return g_or(guard_substitute(b->lhs, ap, comp, value),
                  guard_substitute(b->rhs, ap, comp, value));
    case Op::Implies:
    case Op::Equiv:
      return binary(b->op, guard_substitute(b->lhs, ap, comp, value),
                    guard_substitute(b->rhs, ap, comp, value));
    default: return b;
  }
}

inline Letter letter_from_mask(
    const std::vector<std::pair<std::string, int>>& atoms, std::size_t mask,
    int arity) {
  Letter l(static_cast<std::size_t>(arity));
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (mask & (std::size_t{1} << i))
      l[static_cast<std::size_t>(atoms[i].second) - 1].insert(atoms[i].first);
  return l;
}

// First satisfying letter of a guard (propositions it never mentions stay
// absent), or nothing when the guard is contradictory.
inline std::optional<Letter> guard_witness(const Body& g, int arity) {
  std::set<std::pair<std::string, int>> atom_set;
  guard_atoms(g, atom_set);
  if (atom_set.size() > 24) throw ResourceLimitError("guard has too many atoms");
  std::vector<std::pair<std::string, int>> atoms(atom_set.begin(),
                                                 atom_set.end());
  for (std::size_t mask = 0; mask < (std::size_t{1} << atoms.size()); ++mask) {
    Letter l = letter_from_mask(atoms, mask, arity);
    if (guard_eval(g, l)) return l;
  }
  return std::nullopt;
}

inline bool guard_satisfiable(const Body& g, int arity) {
  return guard_witness(g, arity).has_value();
}

// Exact-match guard: the letter's component equals `props` on the given
// proposition universe.
inline Body exact_label_guard(const PropSet& props,
                              const std::vector<std::string>& universe,
                              int component) {
  Body g = tt();
  for (const auto& p : universe) {
    Body lit = atom(p, component);
    g = g_and(g, props.count(p) ? lit : g_not(lit));
  }
  return g;
}

inline std::vector<std::vector<std::size_t>> outgoing(const BuchiAutomaton& a) {
  std::vector<std::vector<std::size_t>> out(a.state_count);
  for (std::size_t i = 0; i < a.transitions.size(); ++i)
    out[a.transitions[i].from].push_back(i);
  return out;
}

}  // namespace detail

inline BuchiAutomaton universal_automaton(int arity,
                                          std::vector<std::string> ap) {
  BuchiAutomaton a;
  a.arity = arity;
  a.ap = std::move(ap);
  a.state_count = 1;
  a.initial = {0};
  a.accepting = {0};
  a.transitions.push_back({0, tt(), 0});
  return a;
}

inline BuchiAutomaton empty_automaton(int arity, std::vector<std::string> ap) {
  BuchiAutomaton a;
  a.arity = arity;
  a.ap = std::move(ap);
  a.state_count = 1;
  a.initial = {0};
  a.transitions.push_back({0, tt(), 0});
  return a;
}

inline std::string dump_automaton(const BuchiAutomaton& a) {
  std::string out = "arity " + std::to_string(a.arity) + "\n";
  for (std::size_t s = 0; s < a.state_count; ++s) {
    out += "state " + std::to_string(s);
    if (a.initial.count(s)) out += " initial";
    if (a.accepting.count(s)) out += " accepting";
    out += '\n';
  }
  for (const auto& t : a.transitions)
    out += "  " + std::to_string(t.from) + " --" + pretty_print(t.guard) +
           "--> " + std::to_string(t.to) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Trimming: keep states that lie on some accepting run, i.e. states both
// reachable from an initial state and able to reach an accepting cycle.
// An automaton with empty language trims to the canonical empty automaton.
// ---------------------------------------------------------------------------

namespace detail {

// Strongly connected components, Kosaraju style. Returns a component id per
// state; ids are meaningless beyond equality.
inline std::vector<std::size_t> scc_ids(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<std::size_t>> fwd(n), rev(n);
  for (const auto& [u, v] : edges) {
    fwd[u].push_back(v);
    rev[v].push_back(u);
  }
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> order;
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    seen[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < fwd[v].size()) {
        std::size_t w = fwd[v][next++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<std::size_t> comp(n, n);
  std::size_t count = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] != n) continue;
    std::vector<std::size_t> stack{*it};
    comp[*it] = count;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : rev[v])
        if (comp[w] == n) {
          comp[w] = count;
          stack.push_back(w);
        }
    }
    ++count;
  }
  return comp;
}

}  // namespace detail

inline BuchiAutomaton trim(const BuchiAutomaton& a) {
  std::vector<AutomatonTransition> sat;
  for (const auto& t : a.transitions)
    if (detail::guard_satisfiable(t.guard, a.arity)) sat.push_back(t);

  std::vector<char> fwd(a.state_count, 0);
  std::vector<std::size_t> work(a.initial.begin(), a.initial.end());
  for (std::size_t s : a.initial) fwd[s] = 1;
  std::vector<std::vector<std::size_t>> succ(a.state_count);
  std::vector<std::vector<std::size_t>> pred(a.state_count);
  for (const auto& t : sat) {
    succ[t.from].push_back(t.to);
    pred[t.to].push_back(t.from);
  }
  while (!work.empty()) {
    std::size_t s = work.back();
    work.pop_back();
    for (std::size_t n : succ[s])
      if (!fwd[n]) {
        fwd[n] = 1;
        work.push_back(n);
      }
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& t : sat)
    if (fwd[t.from] && fwd[t.to]) edges.push_back({t.from, t.to});
  auto comp = detail::scc_ids(a.state_count, edges);
  std::map<std::size_t, std::size_t> comp_size;
  for (std::size_t s = 0; s < a.state_count; ++s)
    if (fwd[s]) ++comp_size[comp[s]];
  std::set<std::size_t> looping;
  for (const auto& [u, v] : edges)
    if (u == v || (comp[u] == comp[v] && comp_size[comp[u]] > 1))
      looping.insert(u), looping.insert(v);

  std::vector<char> back(a.state_count, 0);
  for (std::size_t s : a.accepting)
    if (fwd[s] && looping.count(s)) {
      back[s] = 1;
      work.push_back(s);
    }
  while (!work.empty()) {
    std::size_t s = work.back();
    work.pop_back();
    for (std::size_t p : pred[s])
      if (fwd[p] && !back[p]) {
        back[p] = 1;
        work.push_back(p);
      }
  }

  std::vector<std::size_t> renumber(a.state_count, a.state_count);
  BuchiAutomaton out;
  out.arity = a.arity;
  out.ap = a.ap;
  for (std::size_t s = 0; s < a.state_count; ++s)
    if (fwd[s] && back[s]) renumber[s] = out.state_count++;
  if (out.state_count == 0) return empty_automaton(a.arity, a.ap);
  for (std::size_t s : a.initial)
    if (renumber[s] != a.state_count) out.initial.insert(renumber[s]);
  for (std::size_t s : a.accepting)
    if (renumber[s] != a.state_count) out.accepting.insert(renumber[s]);
  for (const auto& t : sat)
    if (renumber[t.from] != a.state_count && renumber[t.to] != a.state_count)
      out.transitions.push_back({renumber[t.from], t.guard, renumber[t.to]});
  return out;
}

// Trims, then merges states that are bisimilar when guards are compared by
// their printed form. The constructions here stamp out guards mechanically,
// so equal behavior usually means textually equal guards and the quotient
// collapses a lot; comparing text instead of meaning only ever merges less.
// Keeping automata small matters most right before a complementation.
inline BuchiAutomaton reduce(const BuchiAutomaton& input) {
  BuchiAutomaton a = trim(input);
  if (a.state_count <= 1) return a;

  std::vector<std::string> guard_key(a.transitions.size());
  for (std::size_t i = 0; i < a.transitions.size(); ++i)
    guard_key[i] = pretty_print(a.transitions[i].guard);
  auto out = detail::outgoing(a);

  std::vector<std::size_t> block(a.state_count);
  for (std::size_t s = 0; s < a.state_count; ++s)
    block[s] = a.accepting.count(s) ? 1 : 0;
  std::size_t blocks = 0;
  for (;;) {
    std::map<std::pair<std::size_t, std::set<std::pair<std::string, std::size_t>>>,
             std::size_t>
        ids;
    std::vector<std::size_t> next(a.state_count);
    for (std::size_t s = 0; s < a.state_count; ++s) {
      std::set<std::pair<std::string, std::size_t>> moves;
      for (std::size_t i : out[s])
        moves.insert({guard_key[i], block[a.transitions[i].to]});
      next[s] =
          ids.emplace(std::make_pair(block[s], std::move(moves)), ids.size())
              .first->second;
    }
    block = std::move(next);
    if (ids.size() == blocks) break;
    blocks = ids.size();
  }

  BuchiAutomaton q;
  q.arity = a.arity;
  q.ap = a.ap;
  q.state_count = blocks;
  for (std::size_t s : a.initial) q.initial.insert(block[s]);
  for (std::size_t s : a.accepting) q.accepting.insert(block[s]);
  std::set<std::tuple<std::size_t, std::string, std::size_t>> seen;
  for (std::size_t i = 0; i < a.transitions.size(); ++i) {
    const auto& t = a.transitions[i];
    if (seen.insert({block[t.from], guard_key[i], block[t.to]}).second)
      q.transitions.push_back({block[t.from], t.guard, block[t.to]});
  }
  return q;
}

// ---------------------------------------------------------------------------
// Emptiness and membership. find_lasso is the raw cycle search shared by
// both; emptiness() additionally materializes letters and re-verifies the
// witness through membership before handing it out.
// ---------------------------------------------------------------------------

namespace detail {

struct LassoPath {
  std::vector<std::size_t> stem;  // transition indices
  std::vector<std::size_t> cycle;
};

inline std::optional<LassoPath> find_lasso(const BuchiAutomaton& a) {
  std::vector<std::size_t> sat;
  for (std::size_t i = 0; i < a.transitions.size(); ++i)
    if (guard_satisfiable(a.transitions[i].guard, a.arity)) sat.push_back(i);

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> succ(
      a.state_count);  // (target, transition index)
  for (std::size_t i : sat)
    succ[a.transitions[i].from].push_back({a.transitions[i].to, i});

  std::vector<char> reach(a.state_count, 0);
  std::vector<std::size_t> work(a.initial.begin(), a.initial.end());
  for (std::size_t s : a.initial) reach[s] = 1;
  while (!work.empty()) {
    std::size_t s = work.back();
    work.pop_back();
    for (auto [n, i] : succ[s])
      if (!reach[n]) {
        reach[n] = 1;
        work.push_back(n);
      }
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i : sat)
    if (reach[a.transitions[i].from] && reach[a.transitions[i].to])
      edges.push_back({a.transitions[i].from, a.transitions[i].to});
  auto comp = scc_ids(a.state_count, edges);
  std::map<std::size_t, std::size_t> comp_size;
  for (std::size_t s = 0; s < a.state_count; ++s)
    if (reach[s]) ++comp_size[comp[s]];

  std::size_t target = a.state_count;
  for (std::size_t s : a.accepting) {
    if (!reach[s]) continue;
    bool on_cycle = comp_size[comp[s]] > 1;
    for (auto [n, i] : succ[s])
      if (n == s) on_cycle = true;
    if (on_cycle) {
      target = s;
      break;
    }
  }
  if (target == a.state_count) return std::nullopt;

  // Shortest transition path from the initial states to the target, then the
  // shortest cycle through the target.
  auto bfs = [&](const std::vector<std::size_t>& from, std::size_t to,
                 bool force_step) -> std::vector<std::size_t> {
    std::vector<std::size_t> pred_tr(a.state_count, a.transitions.size());
    std::vector<char> seen(a.state_count, 0);
    std::vector<std::size_t> queue;
    if (!force_step) {
      for (std::size_t s : from) seen[s] = 1, queue.push_back(s);
      if (seen[to]) return {};
    } else {
      for (std::size_t s : from)
        for (auto [n, i] : succ[s])
          if (!seen[n]) {
            seen[n] = 1;
            pred_tr[n] = i;
            queue.push_back(n);
          }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::size_t s = queue[head];
      if (s == to) break;
      for (auto [n, i] : succ[s])
        if (!seen[n]) {
          seen[n] = 1;
          pred_tr[n] = i;
          queue.push_back(n);
        }
    }
    std::vector<std::size_t> path;
    std::size_t cur = to;
    while (pred_tr[cur] != a.transitions.size()) {
      path.push_back(pred_tr[cur]);
      cur = a.transitions[pred_tr[cur]].from;
      if (std::find(from.begin(), from.end(), cur) != from.end() &&
          (path.size() > 0))
        break;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  LassoPath out;
  out.stem =
      bfs(std::vector<std::size_t>(a.initial.begin(), a.initial.end()), target,
          false);
  out.cycle = bfs({target}, target, true);
  return out;
}

inline BuchiAutomaton word_automaton(const LassoWord& w, int arity,
                                     const std::vector<std::string>& ap) {
  BuchiAutomaton a;
  a.arity = arity;
  a.ap = ap;
  std::size_t total = w.stem.size() + w.loop.size();
  a.state_count = total;
  a.initial = {0};
  for (std::size_t p = 0; p < total; ++p) {
    a.accepting.insert(p);
    Body g = tt();
    for (int c = 1; c <= arity; ++c)
      g = g_and(g, exact_label_guard(w.at(p)[static_cast<std::size_t>(c) - 1],
                                     ap, c));
    std::size_t next = p + 1 < total ? p + 1 : w.stem.size();
    a.transitions.push_back({p, g, next});
  }
  return a;
}

}  // namespace detail

inline BuchiAutomaton intersect(const BuchiAutomaton& a,
                                const BuchiAutomaton& b,
                                const Limits& limits = {});

inline bool membership(const BuchiAutomaton& a, const LassoWord& w) {
  if (w.loop.empty()) throw Error("lasso word needs a nonempty loop");
  std::set<std::string> universe(a.ap.begin(), a.ap.end());
  auto check_letter = [&](const Letter& l) {
    if (static_cast<int>(l.size()) != a.arity)
      throw Error("lasso word width does not match automaton arity");
    for (const auto& props : l)
      for (const auto& p : props)
        if (!universe.count(p)) return false;
    return true;
  };
  for (const auto& l : w.stem)
    if (!check_letter(l)) return false;
  for (const auto& l : w.loop)
    if (!check_letter(l)) return false;

  auto word = detail::word_automaton(w, a.arity, a.ap);
  return detail::find_lasso(intersect(a, word)).has_value();
}

inline std::optional<LassoWord> emptiness(const BuchiAutomaton& a) {
  auto path = detail::find_lasso(a);
  if (!path) return std::nullopt;
  auto materialize = [&](const std::vector<std::size_t>& trs) {
    std::vector<Letter> letters;
    for (std::size_t i : trs) {
      auto l = detail::guard_witness(a.transitions[i].guard, a.arity);
      if (!l) throw Error("internal: lasso over a contradictory guard");
      letters.push_back(*l);
    }
    return letters;
  };
  LassoWord w{materialize(path->stem), materialize(path->cycle)};
  if (!membership(a, w))
    throw Error("internal: emptiness witness failed verification");
  return w;
}

// ---------------------------------------------------------------------------
// LTL translation. The body is desugared to the core {true, atom, !, &, X, U}
// and translated tableau-style: a state is a consistent truth assignment to
// the closure, transitions enforce the X and U expansion laws, and one
// generalized acceptance set per U-subformula forbids postponing its promise
// forever. Degeneralization uses the usual round-robin counter.
// ---------------------------------------------------------------------------

namespace detail {

struct Closure {
  std::vector<Body> subs;            // post-order, no duplicates
  std::vector<std::size_t> atoms;    // indices into subs
  std::vector<std::size_t> xs;
  std::vector<std::size_t> us;
  std::map<std::size_t, std::size_t> bit_of;  // sub index -> bit position
};

inline std::size_t closure_add(Closure& c, const Body& b) {
  if (b->lhs && b->op != Op::Atom) closure_add(c, b->lhs);
  if (b->rhs && b->op != Op::Atom) closure_add(c, b->rhs);
  for (std::size_t i = 0; i < c.subs.size(); ++i)
    if (c.subs[i] == b) return i;
  c.subs.push_back(b);
  return c.subs.size() - 1;
}

inline Closure build_closure(const Body& core) {
  Closure c;
  closure_add(c, core);
  for (std::size_t i = 0; i < c.subs.size(); ++i) {
    switch (c.subs[i]->op) {
      case Op::Atom: c.atoms.push_back(i); break;
      case Op::Next: c.xs.push_back(i); break;
      case Op::Until: c.us.push_back(i); break;
      default: break;
    }
  }
  std::size_t bit = 0;
  for (std::size_t i : c.atoms) c.bit_of[i] = bit++;
  for (std::size_t i : c.xs) c.bit_of[i] = bit++;
  for (std::size_t i : c.us) c.bit_of[i] = bit++;
  return c;
}

inline std::size_t closure_index(const Closure& c, const Body& b) {
  for (std::size_t i = 0; i < c.subs.size(); ++i)
    if (c.subs[i] == b) return i;
  throw Error("internal: subformula missing from closure");
}

}  // namespace detail

// `universe` widens the proposition set beyond what the body mentions, so
// the result composes with automata over a larger alphabet.
inline BuchiAutomaton ltl_to_nba(const Body& body, int arity,
                                 const std::vector<std::string>& universe = {},
                                 const Limits& limits = {}) {
  Body core = desugar(body);
  auto c = detail::build_closure(core);
  for (std::size_t i : c.atoms) {
    int comp = c.subs[i]->component;
    if (comp < 1 || comp > arity)
      throw Error("atom '" + c.subs[i]->ap + "' not bound to a component <= " +
                  std::to_string(arity));
  }
  std::size_t bits = c.bit_of.size();
  if (bits >= 26 || (std::size_t{1} << bits) > limits.max_automaton_states)
    throw ResourceLimitError("closure too large for tableau translation");

  // Truth values of every closure member under one bit assignment.
  auto valuation = [&](std::size_t mask) {
    std::vector<char> val(c.subs.size(), 0);
    for (std::size_t i = 0; i < c.subs.size(); ++i) {
      const Body& b = c.subs[i];
      switch (b->op) {
        case Op::True: val[i] = 1; break;
        case Op::False: val[i] = 0; break;
        case Op::Atom:
        case Op::Next:
        case Op::Until:
          val[i] = (mask >> c.bit_of.at(i)) & 1;
          break;
        case Op::Not: val[i] = !val[detail::closure_index(c, b->lhs)]; break;
        case Op::And:
          val[i] = val[detail::closure_index(c, b->lhs)] &&
                   val[detail::closure_index(c, b->rhs)];
          break;
        default: throw Error("internal: non-core operator in tableau");
      }
    }
    return val;
  };

  struct TableauState {
    std::size_t mask;
    std::vector<char> val;
  };
  std::vector<TableauState> states;
  for (std::size_t mask = 0; mask < (std::size_t{1} << bits); ++mask) {
    auto val = valuation(mask);
    bool ok = true;
    for (std::size_t u : c.us) {
      char vu = val[u];
      char va = val[detail::closure_index(c, c.subs[u]->lhs)];
      char vb = val[detail::closure_index(c, c.subs[u]->rhs)];
      if (vb && !vu) ok = false;
      if (vu && !vb && !va) ok = false;
    }
    if (ok) states.push_back({mask, std::move(val)});
  }

  // A state q moves to q' exactly when q' agrees with q's X-bits and
  // continues q's unfulfilled U-promises.
  std::size_t root = detail::closure_index(c, core);
  auto allows = [&](const TableauState& q, const TableauState& qn) {
    for (std::size_t x : c.xs)
      if (q.val[x] != qn.val[detail::closure_index(c, c.subs[x]->lhs)])
        return false;
    for (std::size_t u : c.us) {
      char vb = q.val[detail::closure_index(c, c.subs[u]->rhs)];
      char va = q.val[detail::closure_index(c, c.subs[u]->lhs)];
      if (!vb && va && q.val[u] != qn.val[u]) return false;
    }
    return true;
  };

  std::size_t k = std::max<std::size_t>(1, c.us.size());
  if (states.size() * k > limits.max_automaton_states)
    throw ResourceLimitError("tableau automaton exceeds state cap");

  // Acceptance set i: states where until #i is fulfilled or not promised.
  auto in_accept = [&](const TableauState& q, std::size_t i) {
    if (c.us.empty()) return true;
    std::size_t u = c.us[i];
    return !q.val[u] || q.val[detail::closure_index(c, c.subs[u]->rhs)] != 0;
  };

  BuchiAutomaton out;
  out.arity = arity;
  std::set<std::string> props(universe.begin(), universe.end());
  for (std::size_t i : c.atoms) props.insert(c.subs[i]->ap);
  out.ap.assign(props.begin(), props.end());
  out.state_count = states.size() * k;
  auto id = [&](std::size_t q, std::size_t counter) { return q * k + counter; };

  for (std::size_t q = 0; q < states.size(); ++q) {
    if (states[q].val[root]) out.initial.insert(id(q, 0));
    if (in_accept(states[q], 0)) out.accepting.insert(id(q, 0));
  }

  for (std::size_t q = 0; q < states.size(); ++q) {
    Body guard = tt();
    for (std::size_t i : c.atoms) {
      Body lit = atom(c.subs[i]->ap, c.subs[i]->component);
      guard = detail::g_and(guard, states[q].val[i] ? lit : detail::g_not(lit));
    }
    for (std::size_t counter = 0; counter < k; ++counter) {
      std::size_t next_counter =
          in_accept(states[q], counter) ? (counter + 1) % k : counter;
      for (std::size_t qn = 0; qn < states.size(); ++qn)
        if (allows(states[q], states[qn]))
          out.transitions.push_back({id(q, counter), guard, id(qn, next_counter)});
    }
  }
  return trim(out);
}

// ---------------------------------------------------------------------------
// Intersection: the usual two-phase product, with the phase dropped when one
// side accepts everywhere.
// ---------------------------------------------------------------------------

inline BuchiAutomaton intersect(const BuchiAutomaton& a,
                                const BuchiAutomaton& b, const Limits& limits) {
  if (a.arity != b.arity) throw Error("intersection needs equal arity");
  if (std::set<std::string>(a.ap.begin(), a.ap.end()) !=
      std::set<std::string>(b.ap.begin(), b.ap.end()))
    throw Error("intersection needs equal proposition sets");
  bool a_total = a.accepting.size() == a.state_count;
  bool b_total = b.accepting.size() == b.state_count;
  std::size_t phases = (a_total || b_total) ? 1 : 2;

  auto a_out = detail::outgoing(a);
  auto b_out = detail::outgoing(b);

  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> index;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> todo;
  BuchiAutomaton out;
  out.arity = a.arity;
  out.ap = a.ap;
  auto intern = [&](std::size_t sa, std::size_t sb, std::size_t ph) {
    auto [it, fresh] = index.try_emplace({sa, sb, ph}, index.size());
    if (fresh) {
      if (index.size() > limits.max_product_states)
        throw ResourceLimitError("intersection exceeds state cap");
      todo.push_back({sa, sb, ph});
    }
    return it->second;
  };

  for (std::size_t sa : a.initial)
    for (std::size_t sb : b.initial) out.initial.insert(intern(sa, sb, 0));

  for (std::size_t head = 0; head < todo.size(); ++head) {
    auto [sa, sb, ph] = todo[head];
    std::size_t from = index.at({sa, sb, ph});
    bool accept_here = phases == 1 ? (a_total ? b.accepting.count(sb)
                                              : a.accepting.count(sa))
                                   : (ph == 1 && b.accepting.count(sb));
    std::size_t next_ph = ph;
    if (phases == 2) {
      if (ph == 0 && a.accepting.count(sa)) next_ph = 1;
      if (ph == 1 && b.accepting.count(sb)) next_ph = 0;
    }
    if (accept_here) out.accepting.insert(from);
    for (std::size_t ia : a_out[sa])
      for (std::size_t ib : b_out[sb]) {
        Body g = detail::g_and(a.transitions[ia].guard, b.transitions[ib].guard);
        if (detail::g_false(g)) continue;
        out.transitions.push_back(
            {from, g,
             intern(a.transitions[ia].to, b.transitions[ib].to, next_ph)});
      }
  }
  out.state_count = index.size();
  return out;
}

// ---------------------------------------------------------------------------
// Constraining a component to the traces of a Kripke structure: product
// states pair automaton states with K-states, and each step adds the exact
// label of the current K-state to the guard. Propositions of the automaton
// outside k.ap stay unconstrained.
// ---------------------------------------------------------------------------

inline BuchiAutomaton constrain_component(const BuchiAutomaton& a,
                                          const KripkeStructure& k,
                                          int component,
                                          const Limits& limits = {}) {
  if (component < 1 || component > a.arity)
    throw Error("component index out of range");
  std::set<std::string> universe(a.ap.begin(), a.ap.end());
  for (const auto& p : k.ap())
    if (!universe.count(p))
      throw Error("structure proposition '" + p + "' missing from automaton");

  std::map<std::string, std::size_t> k_index;
  for (std::size_t i = 0; i < k.states().size(); ++i)
    k_index[k.states()[i]] = i;
  std::vector<Body> label_guard;
  for (const auto& s : k.states())
    label_guard.push_back(
        detail::exact_label_guard(k.label(s), k.ap(), component));

  auto a_out = detail::outgoing(a);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::vector<std::pair<std::size_t, std::size_t>> todo;
  BuchiAutomaton out;
  out.arity = a.arity;
  out.ap = a.ap;
  auto intern = [&](std::size_t sa, std::size_t sk) {
    auto [it, fresh] = index.try_emplace({sa, sk}, index.size());
    if (fresh) {
      if (index.size() > limits.max_product_states)
        throw ResourceLimitError("component constraint exceeds state cap");
      todo.push_back({sa, sk});
    }
    return it->second;
  };

  std::size_t k0 = k_index.at(k.initial());
  for (std::size_t sa : a.initial) out.initial.insert(intern(sa, k0));

  for (std::size_t head = 0; head < todo.size(); ++head) {
    auto [sa, sk] = todo[head];
    std::size_t from = index.at({sa, sk});
    if (a.accepting.count(sa)) out.accepting.insert(from);
    for (std::size_t ia : a_out[sa]) {
      Body g = detail::g_and(a.transitions[ia].guard, label_guard[sk]);
      if (detail::g_false(g) || !detail::guard_satisfiable(g, a.arity))
        continue;
      for (const auto& succ : k.succ(k.states()[sk]))
        out.transitions.push_back(
            {from, g, intern(a.transitions[ia].to, k_index.at(succ))});
    }
  }
  out.state_count = index.size();
  return trim(out);
}

// The automaton of all words whose every component is a trace of k.
inline BuchiAutomaton trace_automaton(const KripkeStructure& k, int arity,
                                      const Limits& limits = {}) {
  BuchiAutomaton a = universal_automaton(arity, k.ap());
  for (int c = 1; c <= arity; ++c) a = constrain_component(a, k, c, limits);
  return a;
}

// ---------------------------------------------------------------------------
// Existential projection: drop one component. Guards lose their component
// atoms by Shannon expansion (the two cofactors joined by or), and higher
// component indices shift down. Per-letter choice of the dropped component
// is exactly existential quantification over a word in that slot.
// ---------------------------------------------------------------------------

inline BuchiAutomaton project(const BuchiAutomaton& a, int component) {
  if (a.arity < 1) throw Error("projection needs arity at least 1");
  if (component < 1 || component > a.arity)
    throw Error("component index out of range");
  BuchiAutomaton out;
  out.arity = a.arity - 1;
  out.ap = a.ap;
  out.state_count = a.state_count;
  out.initial = a.initial;
  out.accepting = a.accepting;
  for (const auto& t : a.transitions) {
    Body g = t.guard;
    std::set<std::pair<std::string, int>> atoms;
    detail::guard_atoms(g, atoms);
    for (const auto& [p, idx] : atoms)
      if (idx == component)
        g = detail::g_or(detail::guard_substitute(g, p, component, true),
                         detail::guard_substitute(g, p, component, false));
    g = map_atoms(g, [&](const Node& n) {
      return atom(n.ap, n.component > component ? n.component - 1 : n.component);
    });
    out.transitions.push_back({t.from, g, t.to});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Complementation, rank-based. States pair a level ranking (per tracked
// input state a rank in 0..2(n-|F|), accepting states even) with the set of
// even-ranked states that still owe a visit to an odd rank; a breakpoint
// with an empty owing set is accepting. A successor rank may be anything up
// to its ceiling, the smallest predecessor rank, but most of those choices
// are redundant: a state with a higher rank and no fresh owing entry accepts
// everything a lower-ranked or owing sibling does (replay its rank choices;
// its owing set stays contained until it resets, which only happens at a
// breakpoint of its own). So per successor only the ceiling is kept, plus
// the odd value just below it when the ceiling is even and the state would
// owe. Dropping the subsumed siblings keeps the language and turns the
// successor fan from exponential into at most two per tracked state.
// ---------------------------------------------------------------------------

inline BuchiAutomaton complement(const BuchiAutomaton& input,
                                 const Limits& limits = {}) {
  BuchiAutomaton a = reduce(input);
  if (!detail::find_lasso(a)) return universal_automaton(input.arity, input.ap);

  std::set<std::pair<std::string, int>> atom_set;
  for (const auto& t : a.transitions) detail::guard_atoms(t.guard, atom_set);
  if (atom_set.size() > 16)
    throw ResourceLimitError("complement alphabet has too many atoms");
  std::vector<std::pair<std::string, int>> atoms(atom_set.begin(),
                                                 atom_set.end());
  std::size_t letters = std::size_t{1} << atoms.size();

  // Successor sets per (state, letter).
  auto a_out = detail::outgoing(a);
  std::vector<std::vector<std::vector<std::size_t>>> delta(
      a.state_count, std::vector<std::vector<std::size_t>>(letters));
  for (std::size_t s = 0; s < a.state_count; ++s)
    for (std::size_t m = 0; m < letters; ++m) {
      Letter l = detail::letter_from_mask(atoms, m, a.arity);
      for (std::size_t i : a_out[s])
        if (detail::guard_eval(a.transitions[i].guard, l))
          delta[s][m].push_back(a.transitions[i].to);
    }
  std::vector<Body> letter_guard(letters);
  for (std::size_t m = 0; m < letters; ++m) {
    Body g = tt();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      Body lit = atom(atoms[i].first, atoms[i].second);
      g = detail::g_and(g, (m >> i) & 1 ? lit : detail::g_not(lit));
    }
    letter_guard[m] = g;
  }

  int max_rank =
      2 * static_cast<int>(a.state_count - a.accepting.size());
  using RankState = std::pair<std::vector<int>, std::set<std::size_t>>;
  std::map<RankState, std::size_t> index;
  std::vector<RankState> todo;
  BuchiAutomaton out;
  out.arity = a.arity;
  out.ap = a.ap;
  auto intern = [&](RankState rs) {
    auto [it, fresh] = index.try_emplace(rs, index.size());
    if (fresh) {
      // Each state carries a rank per input state, so cap the product of the
      // two counts as well; a run that large would thrash long before the
      // flat state cap triggers.
      if (index.size() > limits.max_automaton_states ||
          index.size() * a.state_count > 40'000'000)
        throw ResourceLimitError("complement exceeds state cap");
      todo.push_back(std::move(rs));
    }
    return it->second;
  };

  std::vector<int> f0(a.state_count, -1);
  for (std::size_t s : a.initial) f0[s] = max_rank;
  out.initial.insert(intern({f0, {}}));

  for (std::size_t head = 0; head < todo.size(); ++head) {
    auto [f, owing] = todo[head];
    std::size_t from = index.at({f, owing});
    if (owing.empty()) out.accepting.insert(from);

    for (std::size_t m = 0; m < letters; ++m) {
      // Rank ceiling per successor: minimum over its tracked predecessors.
      std::vector<int> ceil(a.state_count, -1);
      std::vector<char> owed(a.state_count, 0);
      for (std::size_t s = 0; s < a.state_count; ++s) {
        if (f[s] < 0) continue;
        for (std::size_t n : delta[s][m]) {
          ceil[n] = ceil[n] < 0 ? f[s] : std::min(ceil[n], f[s]);
          if (owing.count(s)) owed[n] = 1;
        }
      }
      std::vector<std::size_t> dom;
      for (std::size_t s = 0; s < a.state_count; ++s)
        if (ceil[s] >= 0) dom.push_back(s);

      // Undominated choices per successor. After a breakpoint every state
      // owes, so the owed test switches off only while owing is nonempty.
      std::vector<std::vector<int>> choice(dom.size());
      for (std::size_t di = 0; di < dom.size(); ++di) {
        std::size_t s = dom[di];
        int c = ceil[s];
        if (a.accepting.count(s)) {
          choice[di].push_back(c - (c & 1));
        } else {
          choice[di].push_back(c);
          bool owes = owing.empty() || owed[s];
          if (owes && c % 2 == 0 && c > 0) choice[di].push_back(c - 1);
        }
      }

      std::vector<std::size_t> pick(dom.size(), 0);
      for (;;) {
        std::vector<int> g(a.state_count, -1);
        for (std::size_t di = 0; di < dom.size(); ++di)
          g[dom[di]] = choice[di][pick[di]];
        std::set<std::size_t> next_owing;
        if (owing.empty()) {
          for (std::size_t s : dom)
            if (g[s] % 2 == 0) next_owing.insert(s);
        } else {
          for (std::size_t s : dom)
            if (owed[s] && g[s] % 2 == 0) next_owing.insert(s);
        }
        out.transitions.push_back(
            {from, letter_guard[m], intern({std::move(g), std::move(next_owing)})});

        std::size_t di = 0;
        while (di < dom.size() && ++pick[di] == choice[di].size()) pick[di++] = 0;
        if (di == dom.size()) break;
        if (out.transitions.size() > limits.max_product_states)
          throw ResourceLimitError("complement exceeds transition cap");
      }
    }
  }
  out.state_count = index.size();
  return trim(out);
}

}  // namespace hlv
