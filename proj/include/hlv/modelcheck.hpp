// modelcheck.hpp -- model checking of quantified formulas against Kripke
// structures: the quantifier-elimination pipeline, the self-composition
// strategy for alternation-free prefixes, the language-inclusion strategy
// for forall-exists prefixes, and the bounded enumeration oracle.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hlv/automata.hpp"
#include "hlv/config.hpp"
#include "hlv/errors.hpp"
#include "hlv/formula.hpp"
#include "hlv/kripke.hpp"
#include "hlv/semantics.hpp"

namespace hlv {

using TraceAssignment = std::map<std::string, UltimatelyPeriodicTrace>;

struct Verdict {
  bool holds = false;
  // Present when the formula leads with exists and holds (a witness), or
  // leads with forall and fails (a counterexample). Covers the leading
  // quantifier block only.
  std::optional<TraceAssignment> witness;
  std::string strategy;
};

namespace detail {

// Binds the atoms of f.body so the innermost quantifier's variable is
// component 1 and the outermost is component n.
inline Body bind_innermost_first(const QuantifiedFormula& f) {
  std::map<std::string, int> components;
  int n = static_cast<int>(f.prefix.size());
  for (int j = 0; j < n; ++j) components[f.prefix[j].var] = n - j;
  return bind_atoms(f.body, components);
}

inline void validate_witness(const KripkeStructure& k,
                             const TraceAssignment& assignment) {
  for (const auto& [var, t] : assignment)
    if (!kripke_accepts_trace(k, t))
      throw Error("internal: witness for '" + var +
                  "' is not a trace of the structure");
}

}  // namespace detail

// The quantifier-elimination pipeline. Works on an exists-leading formula g:
// eliminates quantifiers innermost-first (complementing at each universal),
// stops before the leading exists-block, constrains the block's components to
// the structure and decides emptiness. The result is nonempty exactly when g
// holds on k, and any lasso witness decomposes into an assignment for the
// block. For a forall-leading input, run this on its negation.
namespace detail {

struct PipelineResult {
  bool nonempty;
  std::optional<TraceAssignment> assignment;
};

inline PipelineResult eliminate_quantifiers(const KripkeStructure& k,
                                            const QuantifiedFormula& g,
                                            const Limits& limits) {
  std::size_t n = g.prefix.size();
  std::size_t block = 0;
  while (block < n && g.prefix[block].q == Quantifier::Exists) ++block;

  // The automaton tracks either the remaining matrix or its negation;
  // `negated` says which. Projection always computes an exists-step, so a
  // universal quantifier is eliminated on the negated side and an
  // existential one on the positive side, complementing to switch sides.
  // Starting on the side the innermost quantifier wants saves the first
  // (and often only) complementation.
  Body matrix = n == 0 ? g.body : bind_innermost_first(g);
  bool negated = n > block && g.prefix[n - 1].q == Quantifier::Forall;
  BuchiAutomaton a = ltl_to_nba(negated ? lnot(matrix) : matrix,
                                static_cast<int>(n), k.ap(), limits);
  for (std::size_t i = n; i > block; --i) {
    bool universal = g.prefix[i - 1].q == Quantifier::Forall;
    if (universal != negated) {
      a = complement(a, limits);
      negated = universal;
    }
    a = reduce(project(constrain_component(a, k, 1, limits), 1));
  }
  if (negated) a = complement(a, limits);
  for (std::size_t c = 1; c <= block; ++c)
    a = constrain_component(a, k, static_cast<int>(c), limits);

  auto w = emptiness(a);
  if (!w) return {false, std::nullopt};
  if (block == 0) return {true, std::nullopt};

  auto traces = lasso_word_to_traces(*w);
  TraceAssignment assignment;
  for (std::size_t j = 0; j < block; ++j)
    assignment[g.prefix[j].var] = traces[block - 1 - j];
  validate_witness(k, assignment);
  return {true, std::move(assignment)};
}

}  // namespace detail

inline Verdict check_basic(const KripkeStructure& k, const QuantifiedFormula& f,
                           const Limits& limits = {}) {
  bool exists_leading =
      f.prefix.empty() || f.prefix[0].q == Quantifier::Exists;
  auto r = detail::eliminate_quantifiers(
      k, exists_leading ? f : negate_formula(f), limits);
  Verdict v;
  v.holds = exists_leading ? r.nonempty : !r.nonempty;
  v.witness = std::move(r.assignment);
  v.strategy = "basic";
  return v;
}

// ---------------------------------------------------------------------------
// Self-composition strategy: for an alternation-free prefix over n variables,
// fold the n-fold product into one structure over indexed propositions and
// model-check the body as plain LTL on it.
// ---------------------------------------------------------------------------

inline Verdict check_selfcomp(const KripkeStructure& k,
                              const QuantifiedFormula& f,
                              const Limits& limits = {}) {
  auto info = classify(f);
  if (f.prefix.empty())
    throw FragmentError("self-composition needs at least one quantifier");
  if (!info.alternation_free)
    throw FragmentError("self-composition needs an alternation-free prefix");

  int n = static_cast<int>(f.prefix.size());
  auto product = self_compose(k, n, limits);

  // Variable j becomes component j+1, then the pair (a, j+1) collapses into
  // the product proposition a@(j+1) so the body reads as one-trace LTL.
  std::map<std::string, int> components;
  for (int j = 0; j < n; ++j) components[f.prefix[j].var] = j + 1;
  Body folded = map_atoms(bind_atoms(f.body, components), [](const Node& a) {
    return atom(indexed_prop(a.ap, a.component), 1);
  });

  bool universal = f.prefix[0].q == Quantifier::Forall;
  auto nba = ltl_to_nba(universal ? lnot(folded) : folded, 1, product.ap(),
                        limits);
  auto w = emptiness(constrain_component(nba, product, 1, limits));

  Verdict v;
  v.strategy = "selfcomp";
  v.holds = universal ? !w.has_value() : w.has_value();
  if (w) {
    auto joint = lasso_word_to_traces(*w)[0];
    TraceAssignment assignment;
    for (int j = 0; j < n; ++j)
      assignment[f.prefix[j].var] =
          project_trace_component(joint, j + 1, k.ap());
    detail::validate_witness(k, assignment);
    v.witness = std::move(assignment);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Language-inclusion strategy for forall-exists prefixes: B accepts the
// traces that have a partner satisfying the body, and the formula holds
// exactly when every trace of k is in B.
// ---------------------------------------------------------------------------

inline Verdict check_inclusion(const KripkeStructure& k,
                               const QuantifiedFormula& f,
                               const Limits& limits = {}) {
  if (f.prefix.size() != 2 || f.prefix[0].q != Quantifier::Forall ||
      f.prefix[1].q != Quantifier::Exists)
    throw FragmentError("inclusion strategy needs a forall-exists prefix");

  Body bound = bind_atoms(
      f.body, {{f.prefix[0].var, 1}, {f.prefix[1].var, 2}});
  auto pairs = intersect(trace_automaton(k, 2, limits),
                         ltl_to_nba(bound, 2, k.ap(), limits), limits);
  auto partnered = project(pairs, 2);
  auto uncovered = intersect(trace_automaton(k, 1, limits),
                             complement(partnered, limits), limits);
  auto w = emptiness(uncovered);

  Verdict v;
  v.strategy = "inclusion";
  v.holds = !w.has_value();
  if (w) {
    TraceAssignment assignment{
        {f.prefix[0].var, lasso_word_to_traces(*w)[0]}};
    detail::validate_witness(k, assignment);
    v.witness = std::move(assignment);
  }
  return v;
}

// Bounded enumeration oracle: evaluates the formula over every lasso trace
// of k within the bounds. Sound only relative to the bounds.
inline bool oracle_check(const KripkeStructure& k, const QuantifiedFormula& f,
                         std::size_t stem_bound, std::size_t loop_bound,
                         const Limits& limits = {}) {
  return evaluate_semantics(enumerate_lassos(k, stem_bound, loop_bound, limits),
                            f);
}

}  // namespace hlv
