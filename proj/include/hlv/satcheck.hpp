// satcheck.hpp -- satisfiability over sets of traces: exact procedures for
// the exists-only, forall-only and exists-forall prefix classes via
// reduction to LTL satisfiability, plus bounded smallest-model search for
// everything else.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hlv/automata.hpp"
#include "hlv/config.hpp"
#include "hlv/errors.hpp"
#include "hlv/formula.hpp"
#include "hlv/kripke.hpp"
#include "hlv/semantics.hpp"

namespace hlv {

enum class SatStatus { Sat, Unsat, Unknown };

inline const char* sat_status_name(SatStatus s) {
  switch (s) {
    case SatStatus::Sat: return "sat";
    case SatStatus::Unsat: return "unsat";
    default: return "unknown";
  }
}

struct SatResult {
  SatStatus status = SatStatus::Unknown;
  std::optional<std::set<UltimatelyPeriodicTrace>> model;
  std::string note;
};

// LTL satisfiability over one trace: the body's atoms must already be bound
// to component 1. A sat verdict carries the witness lasso as a trace.
inline SatResult ltl_sat(const Body& body, const Limits& limits = {}) {
  auto nba = ltl_to_nba(body, 1, {}, limits);
  auto w = emptiness(nba);
  SatResult r;
  r.note = "ltl reduction";
  if (w) {
    r.status = SatStatus::Sat;
    r.model = std::set<UltimatelyPeriodicTrace>{lasso_word_to_traces(*w)[0]};
  } else {
    r.status = SatStatus::Unsat;
  }
  return r;
}

namespace detail {

// Propositions tagged per variable, so one trace can carry the valuations
// of several quantified traces at once.
inline std::string tagged_prop(const std::string& ap, std::size_t i) {
  return ap + "#" + std::to_string(i);
}

inline void validate_model(const std::set<UltimatelyPeriodicTrace>& model,
                           const QuantifiedFormula& f) {
  if (!evaluate_semantics(model, f))
    throw Error("internal: candidate model fails the semantics check");
}

// Splits a witness over tagged propositions back into one trace per
// variable index 1..count.
inline std::set<UltimatelyPeriodicTrace> untag_model(
    const UltimatelyPeriodicTrace& joint, std::size_t count,
    const std::set<std::string>& aps) {
  std::set<UltimatelyPeriodicTrace> model;
  for (std::size_t i = 1; i <= count; ++i) {
    UltimatelyPeriodicTrace t;
    auto strip = [&](const PropSet& letter) {
      PropSet out;
      for (const auto& ap : aps)
        if (letter.count(tagged_prop(ap, i))) out.insert(ap);
      return out;
    };
    for (const auto& l : joint.stem) t.stem.push_back(strip(l));
    for (const auto& l : joint.loop) t.loop.push_back(strip(l));
    model.insert(t.canonical());
  }
  return model;
}

}  // namespace detail

// Exists-only prefixes: each variable's propositions become fresh tagged
// propositions on a single trace, and the sentence is satisfiable exactly
// when that LTL body is.
inline SatResult sat_exists(const QuantifiedFormula& f,
                            const Limits& limits = {}) {
  if (!classify(f).exists_only)
    throw FragmentError("sat_exists needs a nonempty exists-only prefix");

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < f.prefix.size(); ++i)
    index[f.prefix[i].var] = i + 1;
  Body tagged = map_atoms(f.body, [&](const Node& n) {
    auto it = index.find(n.var);
    if (it == index.end()) throw UnboundVariableError(n.var);
    return atom(detail::tagged_prop(n.ap, it->second), 1);
  });

  SatResult r = ltl_sat(tagged, limits);
  r.note = "exists fragment, " + r.note;
  if (r.status == SatStatus::Sat) {
    r.model = detail::untag_model(*r.model->begin(), f.prefix.size(),
                                  atom_props(f.body));
    detail::validate_model(*r.model, f);
  } else {
    r.model.reset();
  }
  return r;
}

// Forall-only prefixes: a model exists exactly when a singleton model
// exists, so all variables collapse onto one trace.
inline SatResult sat_forall(const QuantifiedFormula& f,
                            const Limits& limits = {}) {
  if (!classify(f).forall_only)
    throw FragmentError("sat_forall needs a nonempty forall-only prefix");

  Body collapsed =
      map_atoms(f.body, [](const Node& n) { return atom(n.ap, 1); });
  SatResult r = ltl_sat(collapsed, limits);
  r.note = "forall fragment, " + r.note;
  if (r.status == SatStatus::Sat)
    detail::validate_model(*r.model, f);
  else
    r.model.reset();
  return r;
}

// Exists-forall prefixes: universals only ever need to range over the
// existential witnesses, so instantiating them with every mapping into the
// existential variables gives an equisatisfiable exists-only sentence.
inline SatResult sat_exists_forall(const QuantifiedFormula& f,
                                   const Limits& limits = {}) {
  if (!classify(f).exists_forall)
    throw FragmentError("sat_exists_forall needs an exists-forall prefix");

  std::vector<std::string> evars, uvars;
  for (const auto& s : f.prefix)
    (s.q == Quantifier::Exists ? evars : uvars).push_back(s.var);

  std::size_t conjuncts = 1;
  for (std::size_t j = 0; j < uvars.size(); ++j) {
    conjuncts *= evars.size();
    if (conjuncts > limits.max_conjuncts)
      throw ResourceLimitError("exists-forall expansion has too many conjuncts");
  }

  Body conj = tt();
  std::vector<std::size_t> pick(uvars.size(), 0);
  for (bool first = true;; first = false) {
    std::map<std::string, std::string> sigma;
    for (std::size_t j = 0; j < uvars.size(); ++j)
      sigma[uvars[j]] = evars[pick[j]];
    Body inst = rename_vars(f.body, sigma);
    conj = first ? inst : land(conj, inst);

    std::size_t j = 0;
    while (j < pick.size() && ++pick[j] == evars.size()) pick[j++] = 0;
    if (j == pick.size()) break;
  }

  QuantifiedFormula g;
  for (const auto& v : evars) g.prefix.push_back({Quantifier::Exists, v});
  g.body = conj;
  SatResult r = sat_exists(g, limits);
  r.note = "exists-forall expansion (" + std::to_string(conjuncts) +
           " conjuncts), ltl reduction";
  if (r.status == SatStatus::Sat) detail::validate_model(*r.model, f);
  return r;
}

namespace detail {

// Every canonical lasso trace over the given propositions within the stem
// and loop bounds, in their natural order.
inline std::vector<UltimatelyPeriodicTrace> lasso_universe(
    const std::set<std::string>& aps, std::size_t max_stem,
    std::size_t max_loop, const Limits& limits) {
  std::vector<std::string> props(aps.begin(), aps.end());
  std::vector<PropSet> letters;
  for (std::size_t m = 0; m < (std::size_t{1} << props.size()); ++m) {
    PropSet l;
    for (std::size_t i = 0; i < props.size(); ++i)
      if ((m >> i) & 1) l.insert(props[i]);
    letters.push_back(std::move(l));
  }

  std::set<UltimatelyPeriodicTrace> out;
  std::size_t considered = 0;
  for (std::size_t s = 0; s <= max_stem; ++s)
    for (std::size_t l = 1; l <= max_loop; ++l) {
      std::vector<std::size_t> idx(s + l, 0);
      for (;;) {
        if (++considered > limits.max_candidates)
          throw ResourceLimitError("lasso universe exceeds candidate cap");
        std::vector<PropSet> stem, loop;
        for (std::size_t i = 0; i < s; ++i) stem.push_back(letters[idx[i]]);
        for (std::size_t i = s; i < s + l; ++i) loop.push_back(letters[idx[i]]);
        out.insert(make_trace(stem, loop));
        std::size_t j = 0;
        while (j < idx.size() && ++idx[j] == letters.size()) idx[j++] = 0;
        if (j == idx.size()) break;
      }
    }
  return {out.begin(), out.end()};
}

}  // namespace detail

// Bounded smallest-model search: tries every candidate set of at most
// max_traces lassos within the stem and loop bounds, smallest first (set
// size, then summed trace length, then trace order), and returns the first
// one the semantics accepts. Exhausting the bounds proves nothing, so the
// fallback status is unknown.
inline SatResult sat_bounded(const QuantifiedFormula& f,
                             std::size_t max_traces, std::size_t max_stem,
                             std::size_t max_loop, const Limits& limits = {}) {
  if (max_traces < 1 || max_loop < 1)
    throw Error("bounded search needs at least one trace and loop position");

  auto universe =
      detail::lasso_universe(atom_props(f.body), max_stem, max_loop, limits);
  auto length = [](const UltimatelyPeriodicTrace& t) {
    return t.stem.size() + t.loop.size();
  };

  std::size_t considered = 0;
  for (std::size_t size = 1; size <= std::min(max_traces, universe.size());
       ++size) {
    // All index combinations of this cardinality, sorted by total length
    // with the traces' own order breaking ties.
    using Key = std::pair<std::size_t, std::vector<std::size_t>>;
    std::vector<Key> candidates;
    std::vector<std::size_t> combo(size);
    for (std::size_t i = 0; i < size; ++i) combo[i] = i;
    for (;;) {
      if (++considered > limits.max_candidates)
        throw ResourceLimitError("bounded search exceeds candidate cap");
      std::size_t total = 0;
      for (std::size_t i : combo) total += length(universe[i]);
      candidates.push_back({total, combo});

      std::size_t j = size;
      while (j > 0 && combo[j - 1] == universe.size() - (size - j) - 1) --j;
      if (j == 0) break;
      ++combo[j - 1];
      for (std::size_t i = j; i < size; ++i) combo[i] = combo[i - 1] + 1;
    }
    std::sort(candidates.begin(), candidates.end());

    for (const auto& [total, idx] : candidates) {
      std::set<UltimatelyPeriodicTrace> T;
      for (std::size_t i : idx) T.insert(universe[i]);
      if (evaluate_semantics(T, f)) {
        SatResult r;
        r.status = SatStatus::Sat;
        r.model = std::move(T);
        r.note = "bounded search, " + std::to_string(size) + " trace(s)";
        return r;
      }
    }
  }

  SatResult r;
  r.status = SatStatus::Unknown;
  r.note = "no model within " + std::to_string(max_traces) + " traces, stem " +
           std::to_string(max_stem) + ", loop " + std::to_string(max_loop);
  return r;
}

}  // namespace hlv
