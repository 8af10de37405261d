// config.hpp -- size caps for the search and construction procedures
#pragma once

#include <cstddef>

namespace hlv {

// Every potentially explosive construction takes a Limits and raises
// ResourceLimitError instead of running away. Defaults are sized for
// interactive use on small structures.
struct Limits {
  std::size_t max_product_states = 1'000'000;    // self-composition
  std::size_t max_automaton_states = 1'000'000;  // automaton constructions
  std::size_t max_paths = 20'000'000;            // lasso path enumeration
  std::size_t max_traces = 100'000;              // distinct enumerated traces
  std::size_t max_candidates = 5'000'000;        // bounded-search candidates
  std::size_t max_conjuncts = 100'000;           // quantifier expansion terms
};

}  // namespace hlv
