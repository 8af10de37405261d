#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hlv/formula.hpp"
#include "hlv/kripke.hpp"
#include "hlv/modelcheck.hpp"
#include "hlv/semantics.hpp"
#include "support/gen.hpp"

using namespace hlv;

namespace {

const char* kAloop =
    "states: s0\n"
    "init: s0\n"
    "ap: a\n"
    "label: s0 a\n"
    "trans: s0 -> s0\n";

const char* kBranching =
    "states: s0 s1 s2\n"
    "init: s0\n"
    "ap: a\n"
    "label: s1 a\n"
    "trans: s0 -> s1 s2\n"
    "trans: s1 -> s1\n"
    "trans: s2 -> s2\n";

const char* kAlternating =
    "states: s0 s1\n"
    "init: s0\n"
    "ap: a\n"
    "label: s1 a\n"
    "trans: s0 -> s1\n"
    "trans: s1 -> s0\n";

// The secret h is only ever raised together with the same public output o
// that the h-free branch produces, so h never influences o.
const char* kNoninterfering =
    "states: s0 s1 s2\n"
    "init: s0\n"
    "ap: h o\n"
    "label: s1 h o\n"
    "label: s2 o\n"
    "trans: s0 -> s1 s2\n"
    "trans: s1 -> s1\n"
    "trans: s2 -> s2\n";

// Two propositions and a cycle through the branch point, so stems and loops
// of many shapes occur without the trace count exploding.
const char* kCycling =
    "states: s0 s1 s2\n"
    "init: s0\n"
    "ap: a b\n"
    "label: s1 a\n"
    "label: s2 a b\n"
    "trans: s0 -> s1 s2\n"
    "trans: s1 -> s2\n"
    "trans: s2 -> s0\n";

PropSet P(std::initializer_list<const char*> props) {
  PropSet out;
  for (const char* p : props) out.insert(p);
  return out;
}

bool oracle_stable(const KripkeStructure& k, const QuantifiedFormula& f,
                   std::size_t bound, bool* out) {
  bool lo = oracle_check(k, f, bound, bound);
  bool hi = oracle_check(k, f, bound + 1, bound + 1);
  if (lo != hi) return false;
  *out = lo;
  return true;
}

}  // namespace

TEST_CASE("finite-set semantics follows the quantifier clauses") {
  auto always_a = make_trace({}, {P({"a"})});
  auto never_a = make_trace({}, {P({})});
  auto late_a = make_trace({P({})}, {P({"a"})});

  CHECK(evaluate_semantics({always_a}, parse_formula("forall p. G a[p]")));
  CHECK_FALSE(evaluate_semantics({never_a}, parse_formula("exists p. F a[p]")));

  // The two traces agree at position 0 and split at position 1.
  std::set<UltimatelyPeriodicTrace> split{late_a, never_a};
  CHECK_FALSE(
      evaluate_semantics(split, parse_formula("forall p. forall q. G (a[p] <-> a[q])")));
  CHECK(evaluate_semantics(split, parse_formula("exists p. exists q. F (a[p] & !a[q])")));
  CHECK(evaluate_semantics(split, parse_formula("forall p. exists q. G (a[p] <-> a[q])")));
  CHECK_FALSE(
      evaluate_semantics(split, parse_formula("forall p. exists q. G (a[p] <-> !a[q])")));

  CHECK_THROWS_AS(evaluate_semantics({}, parse_formula("forall p. G a[p]")),
                  Error);

  SECTION("forall and exists are dual on random bodies") {
    std::mt19937 rng(20240821);
    auto T = testgen::all_lassos({"a"}, 2, 2);
    for (int i = 0; i < 40; ++i) {
      Body psi = testgen::random_body(rng, 3, {"a"}, {"p"});
      QuantifiedFormula all{{{Quantifier::Forall, "p"}}, psi};
      QuantifiedFormula none{{{Quantifier::Exists, "p"}}, lnot(psi)};
      CHECK(evaluate_semantics(T, all) != evaluate_semantics(T, none));
    }
    for (int i = 0; i < 40; ++i) {
      Body psi = testgen::random_body(rng, 3, {"a"}, {"p", "q"});
      QuantifiedFormula ae{
          {{Quantifier::Forall, "p"}, {Quantifier::Exists, "q"}}, psi};
      QuantifiedFormula ea{
          {{Quantifier::Exists, "p"}, {Quantifier::Forall, "q"}}, lnot(psi)};
      CHECK(evaluate_semantics(T, ae) != evaluate_semantics(T, ea));
    }
  }
}

TEST_CASE("quantifier elimination decides the pipeline examples") {
  auto aloop = parse_kripke(kAloop);
  auto k2 = parse_kripke(kBranching);

  SECTION("universal safety on the constant structure") {
    auto v = check_basic(aloop, parse_formula("forall p. G a[p]"));
    CHECK(v.holds);
    CHECK(v.strategy == "basic");
    CHECK_FALSE(v.witness.has_value());
  }

  SECTION("trace equivalence fails on the branching structure") {
    auto f = parse_formula("forall p. forall q. G (a[p] <-> a[q])");
    auto v = check_basic(k2, f);
    REQUIRE_FALSE(v.holds);
    REQUIRE(v.witness.has_value());
    const auto& w = *v.witness;
    REQUIRE(w.count("p") == 1);
    REQUIRE(w.count("q") == 1);
    CHECK(kripke_accepts_trace(k2, w.at("p")));
    CHECK(kripke_accepts_trace(k2, w.at("q")));
    CHECK_FALSE(eval_body_under(f.body, w));
    // The minimal counterexample pair: one branch shows a from position 1
    // on, the other never does.
    std::set<UltimatelyPeriodicTrace> got{w.at("p"), w.at("q")};
    std::set<UltimatelyPeriodicTrace> expected{
        make_trace({P({})}, {P({"a"})}), make_trace({}, {P({})})};
    CHECK(got == expected);
  }

  SECTION("existential reachability yields a witness") {
    auto f = parse_formula("exists p. F a[p]");
    auto v = check_basic(k2, f);
    REQUIRE(v.holds);
    REQUIRE(v.witness.has_value());
    const auto& w = *v.witness;
    REQUIRE(w.count("p") == 1);
    CHECK(kripke_accepts_trace(k2, w.at("p")));
    CHECK(eval_body_under(f.body, w));
    CHECK(w.at("p") == make_trace({P({})}, {P({"a"})}));
  }

  SECTION("quantifier-free sentences reduce to constants") {
    CHECK(check_basic(k2, parse_formula("true")).holds);
    CHECK_FALSE(check_basic(k2, parse_formula("false")).holds);
  }

  SECTION("alternating patterns are handled by the general pipeline") {
    CHECK(check_basic(k2, parse_formula(
              "forall p. exists q. G (a[p] <-> a[q])")).holds);
    CHECK_FALSE(check_basic(aloop, parse_formula(
                    "forall p. exists q. G (a[p] <-> !a[q])")).holds);
    // Exists-forall: the never-a branch is below every trace pointwise.
    CHECK(check_basic(k2, parse_formula(
              "exists p. forall q. G (a[p] -> a[q])")).holds);
    CHECK_FALSE(check_basic(aloop, parse_formula(
                    "exists p. forall q. G !a[q]")).holds);
  }
}

TEST_CASE("self-composition matches the pipeline on alternation-free input") {
  auto aloop = parse_kripke(kAloop);
  auto k2 = parse_kripke(kBranching);

  SECTION("the branching counterexample is reproduced") {
    auto f = parse_formula("forall p. forall q. G (a[p] <-> a[q])");
    auto v = check_selfcomp(k2, f);
    CHECK(v.strategy == "selfcomp");
    REQUIRE_FALSE(v.holds);
    REQUIRE(v.witness.has_value());
    CHECK(kripke_accepts_trace(k2, v.witness->at("p")));
    CHECK(kripke_accepts_trace(k2, v.witness->at("q")));
    CHECK_FALSE(eval_body_under(f.body, *v.witness));
    CHECK(v.holds == check_basic(k2, f).holds);
  }

  SECTION("one quantifier is plain model checking") {
    auto v = check_selfcomp(k2, parse_formula("forall p. F a[p]"));
    REQUIRE_FALSE(v.holds);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->at("p") == make_trace({}, {P({})}));
    CHECK(check_selfcomp(aloop, parse_formula("forall p. G a[p]")).holds);
  }

  SECTION("existential pairs produce a joint witness") {
    auto f = parse_formula("exists p. exists q. F (a[p] & !a[q])");
    auto v = check_selfcomp(k2, f);
    REQUIRE(v.holds);
    REQUIRE(v.witness.has_value());
    CHECK(eval_body_under(f.body, *v.witness));
    CHECK(kripke_accepts_trace(k2, v.witness->at("p")));
    CHECK(kripke_accepts_trace(k2, v.witness->at("q")));
  }

  SECTION("alternation is rejected") {
    CHECK_THROWS_AS(
        check_selfcomp(k2, parse_formula("forall p. exists q. G (a[p] <-> a[q])")),
        FragmentError);
    CHECK_THROWS_AS(check_selfcomp(k2, parse_formula("true")), FragmentError);
  }
}

TEST_CASE("language inclusion decides forall-exists formulas") {
  auto aloop = parse_kripke(kAloop);
  auto k2 = parse_kripke(kBranching);
  auto noninf = parse_kripke(kNoninterfering);

  SECTION("noninterference holds when the secret never shows") {
    auto f = parse_formula("forall p. exists q. (G !h[q]) & G (o[p] <-> o[q])");
    auto v = check_inclusion(noninf, f);
    CHECK(v.strategy == "inclusion");
    CHECK(v.holds);
    CHECK_FALSE(v.witness.has_value());
    CHECK(oracle_check(noninf, f, 4, 4));
  }

  SECTION("the identity partner always exists") {
    CHECK(check_inclusion(k2, parse_formula(
              "forall p. exists q. G (a[p] <-> a[q])")).holds);
  }

  SECTION("no complementary partner in the constant structure") {
    auto f = parse_formula("forall p. exists q. G (a[p] <-> !a[q])");
    auto v = check_inclusion(aloop, f);
    REQUIRE_FALSE(v.holds);
    REQUIRE(v.witness.has_value());
    REQUIRE(v.witness->count("p") == 1);
    CHECK(v.witness->at("p") == make_trace({}, {P({"a"})}));
    // No trace within generous bounds partners the counterexample.
    for (const auto& t : enumerate_lassos(aloop, 6, 6))
      CHECK_FALSE(eval_body_under(f.body, {{"p", v.witness->at("p")}, {"q", t}}));
  }

  SECTION("other patterns are rejected") {
    CHECK_THROWS_AS(check_inclusion(k2, parse_formula("forall p. forall q. G a[p]")),
                    FragmentError);
    CHECK_THROWS_AS(check_inclusion(k2, parse_formula("exists p. forall q. G a[p]")),
                    FragmentError);
    CHECK_THROWS_AS(check_inclusion(k2, parse_formula("forall p. G a[p]")),
                    FragmentError);
  }
}

TEST_CASE("strategies and the bounded oracle agree across a corpus") {
  std::vector<KripkeStructure> structures{
      parse_kripke(kAloop), parse_kripke(kBranching), parse_kripke(kAlternating)};
  std::vector<std::string> formulas{
      "forall p. G a[p]",
      "forall p. F a[p]",
      "forall p. X a[p]",
      "forall p. (!a[p]) U a[p]",
      "exists p. F a[p]",
      "exists p. G !a[p]",
      "exists p. X (a[p] & X !a[p])",
      "forall p. forall q. G (a[p] <-> a[q])",
      "forall p. forall q. F (a[p] <-> a[q])",
      "exists p. exists q. F (a[p] & !a[q])",
      "exists p. exists q. (G a[p]) | G !a[q]",
      "forall p. exists q. G (a[p] <-> a[q])",
      "forall p. exists q. G (a[p] <-> !a[q])",
      "forall p. exists q. F (a[p] & a[q])",
      "forall p. exists q. (X a[q]) -> G a[p]",
      "exists p. forall q. G (a[p] -> a[q])",
      "exists p. forall q. F (a[p] | a[q])",
  };

  for (const auto& k : structures) {
    for (const auto& text : formulas) {
      INFO("formula: " << text);
      auto f = parse_formula(text);
      auto info = classify(f);
      auto basic = check_basic(k, f);

      bool expected = false;
      REQUIRE(oracle_stable(k, f, 8, &expected));
      CHECK(basic.holds == expected);

      if (info.alternation_free && !f.prefix.empty())
        CHECK(check_selfcomp(k, f).holds == basic.holds);
      if (info.forall_exists && f.prefix.size() == 2)
        CHECK(check_inclusion(k, f).holds == basic.holds);
    }
  }

  SECTION("two propositions and branching cycles") {
    auto k = parse_kripke(kCycling);
    std::vector<std::string> mixed{
        "forall p. G (b[p] -> a[p])",
        "forall p. F b[p]",
        "exists p. G F b[p]",
        "forall p. forall q. G (a[p] <-> a[q])",
        "forall p. forall q. G (b[p] <-> b[q])",
        "forall p. exists q. G (b[p] <-> b[q])",
        "forall p. exists q. F (b[p] & b[q])",
        "exists p. exists q. F (b[p] & !b[q])",
    };
    for (const auto& text : mixed) {
      INFO("formula: " << text);
      auto f = parse_formula(text);
      auto info = classify(f);
      auto basic = check_basic(k, f);

      bool expected = false;
      REQUIRE(oracle_stable(k, f, 6, &expected));
      CHECK(basic.holds == expected);

      if (info.alternation_free && !f.prefix.empty())
        CHECK(check_selfcomp(k, f).holds == basic.holds);
      if (info.forall_exists && f.prefix.size() == 2)
        CHECK(check_inclusion(k, f).holds == basic.holds);
    }
  }
}

TEST_CASE("every reported witness certifies its verdict") {
  std::vector<KripkeStructure> structures{
      parse_kripke(kBranching), parse_kripke(kAlternating), parse_kripke(kCycling)};
  std::mt19937 rng(20240822);

  for (const auto& k : structures) {
    std::vector<std::string> aps(k.ap().begin(), k.ap().end());
    for (int i = 0; i < 30; ++i) {
      Body psi = testgen::random_body(rng, 2, aps, {"p", "q"});
      bool both_forall = i % 2 == 0;
      Quantifier q = both_forall ? Quantifier::Forall : Quantifier::Exists;
      QuantifiedFormula f{{{q, "p"}, {q, "q"}}, psi};

      for (bool selfcomp : {false, true}) {
        auto v = selfcomp ? check_selfcomp(k, f) : check_basic(k, f);
        if (!v.witness.has_value()) continue;
        REQUIRE(v.witness->count("p") == 1);
        REQUIRE(v.witness->count("q") == 1);
        CHECK(kripke_accepts_trace(k, v.witness->at("p")));
        CHECK(kripke_accepts_trace(k, v.witness->at("q")));
        // For a homogeneous prefix the assignment decides the body outright:
        // counterexamples falsify it, witnesses satisfy it.
        CHECK(eval_body_under(f.body, *v.witness) == !both_forall);
      }
    }
  }
}
