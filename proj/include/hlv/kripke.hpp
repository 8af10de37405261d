// kripke.hpp -- Kripke structures, ultimately periodic traces, the textual
// model format, self-composition, and bounded lasso enumeration
#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "hlv/config.hpp"
#include "hlv/errors.hpp"

namespace hlv {

using PropSet = std::set<std::string>;

inline std::string format_props(const PropSet& ps) {
  std::string out = "{";
  bool first = true;
  for (const auto& p : ps) {
    if (!first) out += ',';
    out += p;
    first = false;
  }
  out += '}';
  return out;
}

// An infinite trace of the shape stem . loop^omega. The loop is never empty.
// canonical() reduces to the unique minimal representation: the loop is
// primitive (not a power of a shorter word) and the stem cannot be shortened
// by rotating the loop, so two canonical traces denote the same infinite
// word exactly when they compare equal.
struct UltimatelyPeriodicTrace {
  std::vector<PropSet> stem;
  std::vector<PropSet> loop;

  const PropSet& at(std::size_t i) const {
    if (i < stem.size()) return stem[i];
    return loop[(i - stem.size()) % loop.size()];
  }

  UltimatelyPeriodicTrace canonical() const {
    UltimatelyPeriodicTrace t = *this;
    for (std::size_t d = 1; d < t.loop.size(); ++d) {
      if (t.loop.size() % d != 0) continue;
      bool repeats = true;
      for (std::size_t i = d; i < t.loop.size() && repeats; ++i)
        repeats = t.loop[i] == t.loop[i % d];
      if (repeats) {
        t.loop.resize(d);
        break;
      }
    }
    while (!t.stem.empty() && t.stem.back() == t.loop.back()) {
      t.stem.pop_back();
      t.loop.insert(t.loop.begin(), t.loop.back());
      t.loop.pop_back();
    }
    return t;
  }

  auto operator<=>(const UltimatelyPeriodicTrace&) const = default;
};

inline UltimatelyPeriodicTrace make_trace(std::vector<PropSet> stem,
                                          std::vector<PropSet> loop) {
  if (loop.empty()) throw Error("trace loop must be nonempty");
  return UltimatelyPeriodicTrace{std::move(stem), std::move(loop)}.canonical();
}

inline std::string format_trace(const UltimatelyPeriodicTrace& t) {
  std::string out;
  for (const auto& l : t.stem) out += format_props(l);
  out += '(';
  for (const auto& l : t.loop) out += format_props(l);
  out += ")^w";
  return out;
}

// ---------------------------------------------------------------------------
// KripkeStructure. The transition relation is total by construction: the
// constructor rejects dead ends, undeclared states and unknown propositions,
// so every instance generates at least one infinite trace.
// ---------------------------------------------------------------------------

class KripkeStructure {
 public:
  KripkeStructure(std::vector<std::string> states, std::string initial,
                  std::vector<std::string> ap,
                  std::map<std::string, PropSet> labels,
                  std::map<std::string, std::vector<std::string>> successors)
      : states_(std::move(states)),
        initial_(std::move(initial)),
        ap_(std::move(ap)),
        labels_(std::move(labels)),
        successors_(std::move(successors)) {
    std::set<std::string> declared;
    for (const auto& s : states_)
      if (!declared.insert(s).second) throw Error("state '" + s + "' declared twice");
    std::set<std::string> ap_declared;
    for (const auto& a : ap_)
      if (!ap_declared.insert(a).second)
        throw Error("proposition '" + a + "' declared twice");
    if (!declared.count(initial_)) throw DanglingStateError(initial_);
    for (const auto& [s, label] : labels_) {
      if (!declared.count(s)) throw DanglingStateError(s);
      for (const auto& a : label)
        if (!ap_declared.count(a)) throw UnknownApError(a);
    }
    for (const auto& [s, succ] : successors_) {
      if (!declared.count(s)) throw DanglingStateError(s);
      for (const auto& t : succ)
        if (!declared.count(t)) throw DanglingStateError(t);
    }
    for (const auto& s : states_) {
      auto it = successors_.find(s);
      if (it == successors_.end() || it->second.empty()) throw DeadEndError(s);
      labels_.try_emplace(s);
    }
  }

  const std::vector<std::string>& states() const { return states_; }
  const std::string& initial() const { return initial_; }
  const std::vector<std::string>& ap() const { return ap_; }
  const PropSet& label(const std::string& s) const { return labels_.at(s); }
  const std::vector<std::string>& succ(const std::string& s) const {
    return successors_.at(s);
  }

 private:
  std::vector<std::string> states_;
  std::string initial_;
  std::vector<std::string> ap_;
  std::map<std::string, PropSet> labels_;
  std::map<std::string, std::vector<std::string>> successors_;
};

// ---------------------------------------------------------------------------
// Model format:
//   states: s0 s1
//   init: s0
//   ap: a b
//   label: s0 a
//   trans: s0 -> s0 s1
// '#' starts a comment. Every state needs exactly one trans line.
// ---------------------------------------------------------------------------

inline KripkeStructure parse_kripke(const std::string& text) {
  std::vector<std::string> states, ap;
  std::string initial;
  std::map<std::string, PropSet> labels;
  std::map<std::string, std::vector<std::string>> successors;
  bool saw_states = false, saw_init = false, saw_ap = false;

  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string::npos) line_end = text.size();
    std::string line = text.substr(line_start, line_end - line_start);
    std::size_t here = line_start;
    line_start = line_end + 1;

    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) words.push_back(line.substr(start, i - start));
    }
    if (words.empty()) {
      if (line_end == text.size()) break;
      continue;
    }

    const std::string& key = words[0];
    if (key == "states:") {
      if (saw_states) throw SyntaxError("repeated states line", here);
      saw_states = true;
      states.assign(words.begin() + 1, words.end());
      if (states.empty()) throw SyntaxError("states line is empty", here);
    } else if (key == "init:") {
      if (saw_init) throw SyntaxError("repeated init line", here);
      if (words.size() != 2) throw SyntaxError("init takes exactly one state", here);
      saw_init = true;
      initial = words[1];
    } else if (key == "ap:") {
      if (saw_ap) throw SyntaxError("repeated ap line", here);
      saw_ap = true;
      ap.assign(words.begin() + 1, words.end());
    } else if (key == "label:") {
      if (words.size() < 2) throw SyntaxError("label needs a state", here);
      if (labels.count(words[1]))
        throw SyntaxError("repeated label line for '" + words[1] + "'", here);
      labels[words[1]] = PropSet(words.begin() + 2, words.end());
    } else if (key == "trans:") {
      if (words.size() < 4 || words[2] != "->")
        throw SyntaxError("expected 'trans: s -> s1 ...'", here);
      if (successors.count(words[1]))
        throw SyntaxError("repeated trans line for '" + words[1] + "'", here);
      successors[words[1]] = std::vector<std::string>(words.begin() + 3, words.end());
    } else {
      throw SyntaxError("unknown directive '" + key + "'", here);
    }
    if (line_end == text.size()) break;
  }

  if (!saw_states) throw SyntaxError("missing states line", 0);
  if (!saw_init) throw SyntaxError("missing init line", 0);
  return KripkeStructure(std::move(states), std::move(initial), std::move(ap),
                         std::move(labels), std::move(successors));
}

inline std::string print_kripke(const KripkeStructure& k) {
  std::string out = "states:";
  for (const auto& s : k.states()) out += " " + s;
  out += "\ninit: " + k.initial() + "\nap:";
  for (const auto& a : k.ap()) out += " " + a;
  out += '\n';
  for (const auto& s : k.states()) {
    if (k.label(s).empty()) continue;
    out += "label: " + s;
    for (const auto& a : k.label(s)) out += " " + a;
    out += '\n';
  }
  for (const auto& s : k.states()) {
    out += "trans: " + s + " ->";
    for (const auto& t : k.succ(s)) out += " " + t;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Self-composition: the n-fold synchronous product. State (u1,...,un) is
// labeled {a@i | a in L(ui)}, so traces of the product are exactly the
// position-wise tuples of n independent traces of k.
// ---------------------------------------------------------------------------

inline std::string indexed_prop(const std::string& ap, int i) {
  return ap + "@" + std::to_string(i);
}

inline KripkeStructure self_compose(const KripkeStructure& k, int n,
                                    const Limits& limits = {}) {
  if (n < 1) throw Error("self-composition needs n >= 1");
  auto tuple_name = [](const std::vector<std::string>& tup) {
    std::string s = "(";
    for (std::size_t i = 0; i < tup.size(); ++i) {
      if (i) s += ',';
      s += tup[i];
    }
    return s + ")";
  };

  std::vector<std::string> ap;
  for (int i = 1; i <= n; ++i)
    for (const auto& a : k.ap()) ap.push_back(indexed_prop(a, i));

  std::vector<std::vector<std::string>> tuples;
  std::map<std::vector<std::string>, std::size_t> index;
  std::vector<std::string> init(static_cast<std::size_t>(n), k.initial());
  tuples.push_back(init);
  index[init] = 0;

  std::vector<std::string> states{tuple_name(init)};
  std::map<std::string, PropSet> labels;
  std::map<std::string, std::vector<std::string>> successors;

  for (std::size_t head = 0; head < tuples.size(); ++head) {
    std::vector<std::string> tup = tuples[head];
    std::string name = states[head];
    PropSet label;
    for (int i = 0; i < n; ++i)
      for (const auto& a : k.label(tup[i])) label.insert(indexed_prop(a, i + 1));
    labels[name] = std::move(label);

    // Odometer over the successor lists, last component fastest.
    std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
    std::vector<std::string>& out = successors[name];
    for (;;) {
      std::vector<std::string> nxt(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) nxt[i] = k.succ(tup[i])[pick[i]];
      auto [it, fresh] = index.try_emplace(nxt, tuples.size());
      if (fresh) {
        if (tuples.size() >= limits.max_product_states)
          throw ResourceLimitError("self-composition exceeds state cap");
        tuples.push_back(nxt);
        states.push_back(tuple_name(nxt));
      }
      out.push_back(states[it->second]);
      int i = n - 1;
      while (i >= 0 && ++pick[i] == k.succ(tup[i]).size()) pick[i--] = 0;
      if (i < 0) break;
    }
  }

  return KripkeStructure(std::move(states), tuple_name(init), std::move(ap),
                         std::move(labels), std::move(successors));
}

// ---------------------------------------------------------------------------
// Bounded lasso enumeration: every trace of the shape
//   L(q0) .. L(q_{j-1}) (L(q_j) .. L(q_m))^omega
// realized by a path with stem length <= stem_bound (possibly zero) and loop
// length in [1, loop_bound]. Results are canonical, so the set is
// deduplicated as infinite words.
// ---------------------------------------------------------------------------

inline std::set<UltimatelyPeriodicTrace> enumerate_lassos(
    const KripkeStructure& k, std::size_t stem_bound, std::size_t loop_bound,
    const Limits& limits = {}) {
  if (loop_bound < 1) throw Error("loop bound must be at least 1");
  std::set<UltimatelyPeriodicTrace> out;
  std::vector<std::string> path{k.initial()};
  std::size_t visited = 0;

  auto emit = [&](std::size_t split) {
    std::vector<PropSet> stem, loop;
    for (std::size_t i = 0; i < split; ++i) stem.push_back(k.label(path[i]));
    for (std::size_t i = split; i < path.size(); ++i) loop.push_back(k.label(path[i]));
    out.insert(make_trace(std::move(stem), std::move(loop)));
    if (out.size() > limits.max_traces)
      throw ResourceLimitError("lasso enumeration exceeds trace cap");
  };

  auto dfs = [&](auto&& self) -> void {
    if (++visited > limits.max_paths)
      throw ResourceLimitError("lasso enumeration exceeds path cap");
    std::size_t len = path.size();
    std::size_t lo = len > loop_bound ? len - loop_bound : 0;
    for (std::size_t split = lo; split + 1 <= len && split <= stem_bound; ++split) {
      const auto& back_succ = k.succ(path.back());
      if (std::find(back_succ.begin(), back_succ.end(), path[split]) !=
          back_succ.end())
        emit(split);
    }
    if (len == stem_bound + loop_bound) return;
    for (const auto& nxt : k.succ(path.back())) {
      path.push_back(nxt);
      self(self);
      path.pop_back();
    }
  };
  dfs(dfs);
  return out;
}

// ---------------------------------------------------------------------------
// Trace membership: does k generate this trace from its initial state?
// Letters must equal state labels exactly, so propositions outside k's
// alphabet rule a trace out.
// ---------------------------------------------------------------------------

inline bool kripke_accepts_trace(const KripkeStructure& k,
                                 const UltimatelyPeriodicTrace& t) {
  std::size_t positions = t.stem.size() + t.loop.size();
  auto next_pos = [&](std::size_t p) {
    return p + 1 < positions ? p + 1 : t.stem.size();
  };
  std::size_t nstates = k.states().size();
  auto id = [&](std::size_t pos, std::size_t s) { return pos * nstates + s; };
  std::map<std::string, std::size_t> state_index;
  for (std::size_t i = 0; i < nstates; ++i) state_index[k.states()[i]] = i;

  std::vector<char> reach(positions * nstates, 0);
  std::vector<std::size_t> work;
  std::size_t s0 = state_index.at(k.initial());
  if (k.label(k.initial()) == t.at(0)) {
    reach[id(0, s0)] = 1;
    work.push_back(id(0, s0));
  }
  while (!work.empty()) {
    std::size_t cur = work.back();
    work.pop_back();
    std::size_t pos = cur / nstates, s = cur % nstates;
    std::size_t np = next_pos(pos);
    for (const auto& nxt : k.succ(k.states()[s])) {
      std::size_t ns = state_index.at(nxt);
      if (k.label(nxt) != t.at(np)) continue;
      if (!reach[id(np, ns)]) {
        reach[id(np, ns)] = 1;
        work.push_back(id(np, ns));
      }
    }
  }

  // An infinite run exists iff the reachable subgraph keeps a cycle after
  // repeatedly peeling nodes without successors.
  std::vector<char> alive = reach;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t pos = 0; pos < positions; ++pos) {
      for (std::size_t s = 0; s < nstates; ++s) {
        if (!alive[id(pos, s)]) continue;
        bool has_succ = false;
        std::size_t np = next_pos(pos);
        for (const auto& nxt : k.succ(k.states()[s])) {
          std::size_t ns = state_index.at(nxt);
          if (k.label(nxt) == t.at(np) && alive[id(np, ns)]) {
            has_succ = true;
            break;
          }
        }
        if (!has_succ) {
          alive[id(pos, s)] = 0;
          changed = true;
        }
      }
    }
  }
  return std::any_of(alive.begin(), alive.end(), [](char c) { return c != 0; });
}

// Extracts the i-th component (1-based) of a trace over indexed propositions
// a@i, mapping it back to the plain alphabet.
inline UltimatelyPeriodicTrace project_trace_component(
    const UltimatelyPeriodicTrace& t, int i, const std::vector<std::string>& base_ap) {
  auto proj = [&](const PropSet& letter) {
    PropSet out;
    for (const auto& a : base_ap)
      if (letter.count(indexed_prop(a, i))) out.insert(a);
    return out;
  };
  UltimatelyPeriodicTrace r;
  for (const auto& l : t.stem) r.stem.push_back(proj(l));
  for (const auto& l : t.loop) r.loop.push_back(proj(l));
  return r.canonical();
}

}  // namespace hlv
