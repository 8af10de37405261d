// speclib.hpp -- generators for the named information-flow specifications
// (observational determinism, noninference, generalized noninterference,
// Hamming-distance codes) and the distributed-dependence encoding.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hlv/errors.hpp"
#include "hlv/formula.hpp"

namespace hlv {

namespace detail {

inline void require_distinct(std::initializer_list<std::string> aps) {
  std::set<std::string> seen;
  for (const auto& a : aps)
    if (!seen.insert(a).second)
      throw Error("proposition '" + a + "' plays two roles");
}

}  // namespace detail

// Observational determinism: two traces that agree on the low input never
// become distinguishable through the output.
inline QuantifiedFormula gen_obsdet(const std::string& l, const std::string& o) {
  detail::require_distinct({l, o});
  Body body = implies(equiv(atom(l, "p"), atom(l, "p'")),
                      always(equiv(atom(o, "p"), atom(o, "p'"))));
  return {{{Quantifier::Forall, "p"}, {Quantifier::Forall, "p'"}}, body};
}

// Noninference: observable behavior is unchanged when the high input is
// replaced by the dummy value false.
inline QuantifiedFormula gen_noninference(const std::string& h,
                                          const std::string& l,
                                          const std::string& o) {
  detail::require_distinct({h, l, o});
  Body body = always(land(land(lnot(atom(h, "p'")),
                               equiv(atom(l, "p"), atom(l, "p'"))),
                          equiv(atom(o, "p"), atom(o, "p'"))));
  return {{{Quantifier::Forall, "p"}, {Quantifier::Exists, "p'"}}, body};
}

// Generalized noninterference: some trace combines the high input of the
// first trace with the low input and output of the second.
inline QuantifiedFormula gen_gni(const std::string& h, const std::string& l,
                                 const std::string& o) {
  detail::require_distinct({h, l, o});
  Body body = always(land(land(equiv(atom(h, "p"), atom(h, "p''")),
                               equiv(atom(l, "p'"), atom(l, "p''"))),
                          equiv(atom(o, "p'"), atom(o, "p''"))));
  return {{{Quantifier::Forall, "p"},
           {Quantifier::Forall, "p'"},
           {Quantifier::Exists, "p''"}},
          body};
}

// Minimal Hamming distance of an encoder: whenever two runs eventually see
// different inputs, their outputs differ in at least d positions. The
// distance-below-d subformula unfolds one weak-until layer per bit of
// allowed distance, with "below zero" never holding.
inline QuantifiedFormula gen_hamming(int d, const std::string& i,
                                     const std::string& o) {
  if (d < 1) throw Error("hamming distance bound must be at least 1");
  detail::require_distinct({i, o});
  Body below = ff();
  for (int k = 0; k < d; ++k) {
    below = wuntil(equiv(atom(o, "p"), atom(o, "p'")),
                   land(equiv(atom(o, "p"), lnot(atom(o, "p'"))), next(below)));
  }
  Body body = implies(eventually(equiv(atom(i, "p"), lnot(atom(i, "p'")))),
                      lnot(below));
  return {{{Quantifier::Forall, "p"}, {Quantifier::Forall, "p'"}}, body};
}

// Dependence of the propositions in C on the propositions in A between two
// traces: the C values must stay equal until (and including) the first
// position where the A values differ.
inline Body gen_dependence(const std::set<std::string>& A,
                           const std::set<std::string>& C,
                           const std::string& p, const std::string& p2) {
  if (A.empty() || C.empty())
    throw Error("dependence needs nonempty proposition sets");
  Body differ;
  for (const auto& a : A) {
    Body term = lnot(equiv(atom(a, p), atom(a, p2)));
    differ = differ ? lor(differ, std::move(term)) : std::move(term);
  }
  Body agree;
  for (const auto& c : C) {
    Body term = equiv(atom(c, p), atom(c, p2));
    agree = agree ? land(agree, std::move(term)) : std::move(term);
  }
  return release(std::move(differ), std::move(agree));
}

// ---------------------------------------------------------------------------
// Architectures: a set of processes with disjoint output alphabets, one of
// which is the environment and reads nothing.
// ---------------------------------------------------------------------------

struct Architecture {
  std::vector<std::string> processes;  // declaration order
  std::string env;
  std::map<std::string, std::set<std::string>> inputs;
  std::map<std::string, std::set<std::string>> outputs;

  const std::set<std::string>& inputs_of(const std::string& proc) const {
    static const std::set<std::string> none;
    auto it = inputs.find(proc);
    return it == inputs.end() ? none : it->second;
  }
  const std::set<std::string>& outputs_of(const std::string& proc) const {
    static const std::set<std::string> none;
    auto it = outputs.find(proc);
    return it == outputs.end() ? none : it->second;
  }

  std::set<std::string> all_props() const {
    std::set<std::string> props;
    for (const auto& proc : processes) {
      const auto& in = inputs_of(proc);
      const auto& out = outputs_of(proc);
      props.insert(in.begin(), in.end());
      props.insert(out.begin(), out.end());
    }
    return props;
  }
};

inline void validate_architecture(const Architecture& arch) {
  if (arch.processes.empty())
    throw InvalidArchitectureError("architecture declares no processes");
  std::set<std::string> names(arch.processes.begin(), arch.processes.end());
  if (names.size() != arch.processes.size())
    throw InvalidArchitectureError("process declared twice");
  if (!names.count(arch.env))
    throw InvalidArchitectureError("environment process '" + arch.env +
                                   "' is not declared");
  if (!arch.inputs_of(arch.env).empty())
    throw InvalidArchitectureError("environment process cannot read inputs");
  std::set<std::string> written;
  for (const auto& proc : arch.processes)
    for (const auto& o : arch.outputs_of(proc))
      if (!written.insert(o).second)
        throw InvalidArchitectureError("proposition '" + o +
                                       "' is written by two processes");
}

// ---------------------------------------------------------------------------
// Architecture file format, one directive per line:
//   process: name inputs{a b} outputs{c}
//   env: name
// '#' starts a comment.
// ---------------------------------------------------------------------------

inline Architecture parse_architecture(const std::string& text) {
  Architecture arch;
  bool saw_env = false;

  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string::npos) line_end = text.size();
    std::string line = text.substr(line_start, line_end - line_start);
    std::size_t here = line_start;
    line_start = line_end + 1;

    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto skip_ws = [&](std::size_t& at) {
      while (at < line.size() && std::isspace(static_cast<unsigned char>(line[at])))
        ++at;
    };
    std::size_t at = 0;
    skip_ws(at);
    if (at == line.size()) {
      if (line_end == text.size()) break;
      continue;
    }

    auto word = [&](std::size_t& from) {
      std::size_t start = from;
      while (from < line.size() &&
             !std::isspace(static_cast<unsigned char>(line[from])) &&
             line[from] != '{')
        ++from;
      return line.substr(start, from - start);
    };

    std::string key = word(at);
    if (key == "process:") {
      skip_ws(at);
      std::string name = word(at);
      if (name.empty()) throw SyntaxError("process needs a name", here);
      auto group = [&](const std::string& tag) {
        skip_ws(at);
        std::string head = word(at);
        if (head != tag || at == line.size() || line[at] != '{')
          throw SyntaxError("expected " + tag + "{...}", here + at);
        std::size_t close = line.find('}', at);
        if (close == std::string::npos)
          throw SyntaxError("unclosed " + tag + "{...}", here + at);
        std::set<std::string> props;
        std::size_t inner = at + 1;
        while (inner < close) {
          skip_ws(inner);
          if (inner >= close) break;
          std::size_t start = inner;
          while (inner < close &&
                 !std::isspace(static_cast<unsigned char>(line[inner])))
            ++inner;
          props.insert(line.substr(start, inner - start));
        }
        at = close + 1;
        return props;
      };
      auto in = group("inputs");
      auto out = group("outputs");
      skip_ws(at);
      if (at != line.size())
        throw SyntaxError("trailing text after process declaration", here + at);
      if (arch.inputs.count(name))
        throw SyntaxError("process '" + name + "' declared twice", here);
      arch.processes.push_back(name);
      arch.inputs[name] = std::move(in);
      arch.outputs[name] = std::move(out);
    } else if (key == "env:") {
      if (saw_env) throw SyntaxError("repeated env line", here);
      skip_ws(at);
      arch.env = word(at);
      skip_ws(at);
      if (arch.env.empty() || at != line.size())
        throw SyntaxError("env takes exactly one process name", here);
      saw_env = true;
    } else {
      throw SyntaxError("unknown directive '" + key + "'", here);
    }
    if (line_end == text.size()) break;
  }

  if (!saw_env) throw SyntaxError("missing env line", 0);
  validate_architecture(arch);
  return arch;
}

// The distributed-realizability encoding: the specification must hold on
// every trace, and every non-environment process may base its outputs only
// on what it has read so far, expressed as pairwise dependence terms.
inline QuantifiedFormula gen_distributed(const Architecture& arch,
                                         const Body& spec_body) {
  validate_architecture(arch);

  auto vars = free_vars(spec_body);
  if (vars.size() > 1)
    throw Error("specification body must use a single trace variable");
  auto props = arch.all_props();
  for (const auto& ap : atom_props(spec_body))
    if (!props.count(ap)) throw UnknownApError(ap);

  Body body = vars.empty()
                  ? spec_body
                  : rename_vars(spec_body, {{*vars.begin(), "p"}});
  for (const auto& proc : arch.processes) {
    if (proc == arch.env) continue;
    body = land(std::move(body),
                gen_dependence(arch.inputs_of(proc), arch.outputs_of(proc),
                               "p", "p'"));
  }
  return {{{Quantifier::Forall, "p"}, {Quantifier::Forall, "p'"}}, body};
}

}  // namespace hlv
