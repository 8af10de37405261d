// Generators for the named information-flow specifications and the
// distributed-dependence encoding.
#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "hlv/errors.hpp"
#include "hlv/formula.hpp"
#include "hlv/kripke.hpp"
#include "hlv/modelcheck.hpp"
#include "hlv/semantics.hpp"
#include "hlv/speclib.hpp"

namespace {

int count_op(const hlv::Body& b, hlv::Op op) {
  int n = b->op == op ? 1 : 0;
  if (b->lhs) n += count_op(b->lhs, op);
  if (b->rhs) n += count_op(b->rhs, op);
  return n;
}

// A generator output must be a closed formula that survives a print/parse
// round trip unchanged.
void check_sentence(const hlv::QuantifiedFormula& f) {
  std::set<std::string> bound;
  for (const auto& s : f.prefix) bound.insert(s.var);
  for (const auto& v : hlv::free_vars(f.body)) CHECK(bound.count(v));
  CHECK(hlv::parse_formula(hlv::pretty_print(f)) == f);
}

const char* kPipelineArch = R"(# linear pipeline: env feeds p1, p1 feeds p2, p2 feeds p3
process: env inputs{} outputs{a}
process: p1 inputs{a} outputs{b}
process: p2 inputs{b} outputs{c}
process: p3 inputs{c} outputs{d}
env: env
)";

}  // namespace

TEST_CASE("the security patterns print exactly their textbook forms") {
  SECTION("observational determinism") {
    auto f = hlv::gen_obsdet("l", "o");
    CHECK(hlv::pretty_print(f) ==
          "forall p. forall p'. (l[p] <-> l[p']) -> G (o[p] <-> o[p'])");
    CHECK(hlv::classify(f).pattern == "AA");
    CHECK(hlv::classify(f).safety_body);
    check_sentence(f);
  }

  SECTION("noninference") {
    auto f = hlv::gen_noninference("h", "l", "o");
    CHECK(hlv::pretty_print(f) ==
          "forall p. exists p'. "
          "G (!h[p'] & (l[p] <-> l[p']) & (o[p] <-> o[p']))");
    CHECK(hlv::classify(f).pattern == "AE");
    CHECK(hlv::classify(f).forall_exists);
    check_sentence(f);
  }

  SECTION("generalized noninterference") {
    auto f = hlv::gen_gni("h", "l", "o");
    CHECK(hlv::pretty_print(f) ==
          "forall p. forall p'. exists p''. "
          "G ((h[p] <-> h[p'']) & (l[p'] <-> l[p'']) & (o[p'] <-> o[p'']))");
    CHECK(hlv::classify(f).pattern == "AAE");
    CHECK(hlv::classify(f).alternations == 1);
    check_sentence(f);
  }

  SECTION("hamming distance") {
    auto f = hlv::gen_hamming(1, "i", "o");
    CHECK(hlv::pretty_print(f) ==
          "forall p. forall p'. F (i[p] <-> !i[p']) -> "
          "!((o[p] <-> o[p']) W ((o[p] <-> !o[p']) & X false))");
    check_sentence(f);

    for (int d = 1; d <= 4; ++d) {
      auto g = hlv::gen_hamming(d, "i", "o");
      CHECK(count_op(g.body, hlv::Op::WeakUntil) == d);
      CHECK(count_op(g.body, hlv::Op::Eventually) == 1);
      check_sentence(g);
    }
  }

  SECTION("dependence") {
    hlv::Body d = hlv::gen_dependence({"a"}, {"c"}, "p", "p'");
    CHECK(hlv::pretty_print(d) == "!(a[p] <-> a[p']) R (c[p] <-> c[p'])");

    hlv::Body wide = hlv::gen_dependence({"a", "b"}, {"c", "d"}, "p", "p'");
    CHECK(hlv::pretty_print(wide) ==
          "(!(a[p] <-> a[p']) | !(b[p] <-> b[p'])) R "
          "((c[p] <-> c[p']) & (d[p] <-> d[p']))");
  }

  SECTION("misuse is rejected") {
    CHECK_THROWS_AS(hlv::gen_obsdet("o", "o"), hlv::Error);
    CHECK_THROWS_AS(hlv::gen_noninference("h", "h", "o"), hlv::Error);
    CHECK_THROWS_AS(hlv::gen_hamming(0, "i", "o"), hlv::Error);
    CHECK_THROWS_AS(hlv::gen_dependence({}, {"c"}, "p", "p'"), hlv::Error);
    CHECK_THROWS_AS(hlv::gen_dependence({"a"}, {}, "p", "p'"), hlv::Error);
  }
}

TEST_CASE("generated specifications verify as expected on small structures") {
  SECTION("one trace is observationally deterministic") {
    auto k = hlv::parse_kripke(
        "states: s0\ninit: s0\nap: l o\nlabel: s0 l\ntrans: s0 -> s0\n");
    CHECK(hlv::check_selfcomp(k, hlv::gen_obsdet("l", "o")).holds);
  }

  SECTION("noninference holds when the high input never fires") {
    auto k = hlv::parse_kripke(
        "states: s0 s1 s2\ninit: s0\nap: h l o\nlabel: s1 h\n"
        "trans: s0 -> s1 s2\ntrans: s1 -> s1\ntrans: s2 -> s2\n");
    auto f = hlv::gen_noninference("h", "l", "o");
    CHECK(hlv::check_inclusion(k, f).holds);
    CHECK(hlv::check_basic(k, f).holds);
    CHECK(hlv::oracle_check(k, f, 4, 4));
  }

  SECTION("noninference fails when the output copies the high input") {
    auto k = hlv::parse_kripke(
        "states: s0 s1 s2\ninit: s0\nap: h l o\nlabel: s1 h o\n"
        "trans: s0 -> s1 s2\ntrans: s1 -> s1\ntrans: s2 -> s2\n");
    auto f = hlv::gen_noninference("h", "l", "o");
    CHECK_FALSE(hlv::check_inclusion(k, f).holds);
    CHECK_FALSE(hlv::check_basic(k, f).holds);
    CHECK_FALSE(hlv::oracle_check(k, f, 4, 4));
  }

  SECTION("noninterference follows the same split") {
    auto free = hlv::parse_kripke(
        "states: s0 s1 s2\ninit: s0\nap: h l o\nlabel: s1 h\n"
        "trans: s0 -> s1 s2\ntrans: s1 -> s1\ntrans: s2 -> s2\n");
    auto leaky = hlv::parse_kripke(
        "states: s0 s1 s2\ninit: s0\nap: h l o\nlabel: s1 h o\n"
        "trans: s0 -> s1 s2\ntrans: s1 -> s1\ntrans: s2 -> s2\n");
    auto f = hlv::gen_gni("h", "l", "o");
    CHECK(hlv::check_basic(free, f).holds);
    CHECK(hlv::oracle_check(free, f, 4, 4));
    CHECK_FALSE(hlv::check_basic(leaky, f).holds);
    CHECK_FALSE(hlv::oracle_check(leaky, f, 4, 4));
  }

  SECTION("an identity encoder has hamming distance exactly one") {
    auto k = hlv::parse_kripke(
        "states: s0 s1\ninit: s0\nap: i o\nlabel: s1 i o\n"
        "trans: s0 -> s0 s1\ntrans: s1 -> s0 s1\n");
    auto d1 = hlv::check_selfcomp(k, hlv::gen_hamming(1, "i", "o"));
    CHECK(d1.holds);
    auto d2 = hlv::check_selfcomp(k, hlv::gen_hamming(2, "i", "o"));
    CHECK_FALSE(d2.holds);
    REQUIRE(d2.witness.has_value());
  }

  SECTION("dependence relates agreement on causes and effects") {
    auto D = hlv::gen_dependence({"a"}, {"c"}, "p", "p'");
    auto L = [](std::initializer_list<const char*> aps) {
      return hlv::PropSet(aps.begin(), aps.end());
    };
    auto holds = [&](const hlv::UltimatelyPeriodicTrace& t1,
                     const hlv::UltimatelyPeriodicTrace& t2) {
      return hlv::eval_body_under(D, {{"p", t1}, {"p'", t2}});
    };
    auto both = hlv::make_trace({}, {L({"a", "c"})});
    auto silent = hlv::make_trace({}, {L({})});

    CHECK(holds(both, both));
    CHECK_FALSE(holds(both, hlv::make_trace({}, {L({"a"})})));
    CHECK(holds(hlv::make_trace({L({"a", "c"})}, {L({"c"})}),
                hlv::make_trace({L({"c"})}, {L({"c"})})));
    CHECK(holds(hlv::make_trace({L({"a"})}, {L({})}), silent));
    CHECK_FALSE(holds(hlv::make_trace({L({"a", "c"})}, {L({})}), silent));
  }
}

TEST_CASE("architectures parse, validate, and generate dependence conjunctions") {
  SECTION("the pipeline architecture round-trips") {
    auto arch = hlv::parse_architecture(kPipelineArch);
    CHECK(arch.processes ==
          std::vector<std::string>{"env", "p1", "p2", "p3"});
    CHECK(arch.env == "env");
    CHECK(arch.inputs_of("env").empty());
    CHECK(arch.outputs_of("env") == std::set<std::string>{"a"});
    CHECK(arch.inputs_of("p2") == std::set<std::string>{"b"});
    CHECK(arch.all_props() == std::set<std::string>{"a", "b", "c", "d"});
  }

  SECTION("the pipeline encoding conjoins one dependence term per process") {
    auto arch = hlv::parse_architecture(kPipelineArch);
    auto f = hlv::gen_distributed(arch, hlv::always(hlv::atom("d", "x")));

    hlv::Body expected = hlv::always(hlv::atom("d", "p"));
    expected = hlv::land(expected,
                         hlv::gen_dependence({"a"}, {"b"}, "p", "p'"));
    expected = hlv::land(expected,
                         hlv::gen_dependence({"b"}, {"c"}, "p", "p'"));
    expected = hlv::land(expected,
                         hlv::gen_dependence({"c"}, {"d"}, "p", "p'"));
    CHECK(f.body == expected);
    CHECK(hlv::classify(f).pattern == "AA");
    CHECK(count_op(f.body, hlv::Op::Release) == 3);
    check_sentence(f);
  }

  SECTION("a single process observing everything depends on the full set") {
    hlv::Architecture arch;
    arch.processes = {"env", "m"};
    arch.env = "env";
    arch.outputs["env"] = {"a", "b"};
    arch.inputs["m"] = {"a", "b"};
    arch.outputs["m"] = {"c"};
    auto f = hlv::gen_distributed(arch, hlv::eventually(hlv::atom("c", "t")));
    CHECK(hlv::classify(f).pattern == "AA");
    CHECK(hlv::pretty_print(f.body) ==
          "F c[p] & (!(a[p] <-> a[p']) | !(b[p] <-> b[p'])) R "
          "(c[p] <-> c[p'])");
    check_sentence(f);
  }

  SECTION("structural violations are rejected") {
    CHECK_THROWS_AS(hlv::parse_architecture("process: x inputs{} outputs{a}\n"
                                            "process: y inputs{} outputs{a}\n"
                                            "env: x\n"),
                    hlv::InvalidArchitectureError);
    CHECK_THROWS_AS(hlv::parse_architecture("process: x inputs{a} outputs{b}\n"
                                            "env: x\n"),
                    hlv::InvalidArchitectureError);
    CHECK_THROWS_AS(hlv::parse_architecture("process: x inputs{} outputs{a}\n"
                                            "env: ghost\n"),
                    hlv::InvalidArchitectureError);
  }

  SECTION("malformed text is a syntax error") {
    CHECK_THROWS_AS(hlv::parse_architecture("process: x inputs{} outputs{a}\n"),
                    hlv::SyntaxError);
    CHECK_THROWS_AS(hlv::parse_architecture("process: x inputs{ outputs{a}\n"
                                            "env: x\n"),
                    hlv::SyntaxError);
    CHECK_THROWS_AS(hlv::parse_architecture("process: x inputs{} outputs{a}\n"
                                            "process: x inputs{} outputs{b}\n"
                                            "env: x\n"),
                    hlv::SyntaxError);
    CHECK_THROWS_AS(hlv::parse_architecture("widget: x\nenv: x\n"),
                    hlv::SyntaxError);
  }

  SECTION("specification bodies are checked against the architecture") {
    auto arch = hlv::parse_architecture(kPipelineArch);
    CHECK_THROWS_AS(hlv::gen_distributed(arch, hlv::atom("zap", "x")),
                    hlv::UnknownApError);
    CHECK_THROWS_AS(
        hlv::gen_distributed(arch, hlv::land(hlv::atom("a", "x"),
                                             hlv::atom("a", "y"))),
        hlv::Error);
  }
}
