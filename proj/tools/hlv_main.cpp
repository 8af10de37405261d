// hlv_main.cpp -- command-line front end for the toolkit.
//
// Exit codes are a stable contract across subcommands:
//   0  property holds / formula satisfiable / stream clean
//   1  property violated / formula unsatisfiable / violations seen
//   2  unknown or a resource cap was hit
//   3  usage, syntax, or fragment errors
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "hlv/errors.hpp"
#include "hlv/formula.hpp"
#include "hlv/kripke.hpp"
#include "hlv/modelcheck.hpp"
#include "hlv/monitor.hpp"
#include "hlv/satcheck.hpp"
#include "hlv/speclib.hpp"

namespace {

constexpr int kHolds = 0;
constexpr int kViolated = 1;
constexpr int kUnknown = 2;
constexpr int kError = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hlv::Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Options {
  std::string model, formula, stream, arch, spec;
  std::string strategy = "basic";
  std::string method = "fragment";
  std::string format = "text";
  std::string high = "h", low = "l", out = "o", in = "i";
  int distance = 1;
  bool symmetric = false;
  std::size_t max_traces = 2, max_stem = 3, max_loop = 3;
  std::size_t max_states = hlv::Limits{}.max_automaton_states;

  bool lines() const { return format == "lines"; }
  hlv::Limits limits() const {
    hlv::Limits l;
    l.max_automaton_states = max_states;
    return l;
  }
};

void print_assignment(const hlv::TraceAssignment& traces, bool lines) {
  for (const auto& [var, trace] : traces) {
    if (lines)
      std::cout << "trace var=" << var << " value=" << hlv::format_trace(trace)
                << "\n";
    else
      std::cout << "  " << var << " = " << hlv::format_trace(trace) << "\n";
  }
}

int run_parse(const Options& opt) {
  auto f = hlv::parse_formula(slurp(opt.formula));
  auto info = hlv::classify(f);
  std::cout << hlv::pretty_print(f) << "\n"
            << "pattern=" << info.pattern << " alternation=" << info.alternations
            << " safety=" << (info.safety_body ? "yes" : "no") << "\n";
  return kHolds;
}

int run_check(const Options& opt) {
  auto k = hlv::parse_kripke(slurp(opt.model));
  auto f = hlv::parse_formula(slurp(opt.formula));
  hlv::Verdict v = opt.strategy == "selfcomp"
                       ? hlv::check_selfcomp(k, f, opt.limits())
                   : opt.strategy == "inclusion"
                       ? hlv::check_inclusion(k, f, opt.limits())
                       : hlv::check_basic(k, f, opt.limits());
  if (opt.lines()) {
    std::cout << "result=" << (v.holds ? "holds" : "violated")
              << " strategy=" << v.strategy << "\n";
    if (v.witness) print_assignment(*v.witness, true);
  } else {
    std::cout << (v.holds ? "holds" : "violated") << " (" << v.strategy << ")\n";
    if (v.witness) {
      std::cout << (v.holds ? "witness:" : "counterexample:") << "\n";
      print_assignment(*v.witness, false);
    }
  }
  return v.holds ? kHolds : kViolated;
}

int run_sat(const Options& opt) {
  auto f = hlv::parse_formula(slurp(opt.formula));
  hlv::SatResult r;
  if (opt.method == "bounded") {
    r = hlv::sat_bounded(f, opt.max_traces, opt.max_stem, opt.max_loop,
                         opt.limits());
  } else {
    auto info = hlv::classify(f);
    if (info.quantifier_free)
      r = hlv::ltl_sat(hlv::bind_atoms(f.body, {}), opt.limits());
    else if (info.exists_only)
      r = hlv::sat_exists(f, opt.limits());
    else if (info.forall_only)
      r = hlv::sat_forall(f, opt.limits());
    else if (info.exists_forall)
      r = hlv::sat_exists_forall(f, opt.limits());
    else
      throw hlv::FragmentError(
          "satisfiability needs a quantifier-free, exists-only, forall-only, "
          "or exists-forall prefix; try --method bounded");
  }
  if (opt.lines()) {
    std::cout << "result=" << hlv::sat_status_name(r.status) << "\n";
    if (r.model)
      for (const auto& t : *r.model)
        std::cout << "trace value=" << hlv::format_trace(t) << "\n";
  } else {
    std::cout << hlv::sat_status_name(r.status);
    if (!r.note.empty()) std::cout << " (" << r.note << ")";
    std::cout << "\n";
    if (r.model)
      for (const auto& t : *r.model)
        std::cout << "  " << hlv::format_trace(t) << "\n";
  }
  switch (r.status) {
    case hlv::SatStatus::Sat: return kHolds;
    case hlv::SatStatus::Unsat: return kViolated;
    case hlv::SatStatus::Unknown: return kUnknown;
  }
  return kError;
}

int run_monitor(const Options& opt) {
  auto f = hlv::parse_formula(slurp(opt.formula));
  hlv::Monitor m(f, opt.symmetric, opt.limits());

  // Verdicts must reach downstream consumers as they happen.
  std::cout << std::unitbuf;
  std::size_t violations;
  if (opt.stream.empty() || opt.stream == "-") {
    violations = hlv::run_monitor_stream(m, std::cin, std::cout);
  } else {
    std::ifstream in(opt.stream);
    if (!in) throw hlv::Error("cannot open '" + opt.stream + "'");
    violations = hlv::run_monitor_stream(m, in, std::cout);
  }
  if (opt.lines()) {
    if (violations)
      std::cout << "result=violations count=" << violations << "\n";
    else
      std::cout << "result=clean\n";
  }
  return violations ? kViolated : kHolds;
}

int run_gen(const std::string& name, const Options& opt) {
  if (name == "obsdet") {
    std::cout << hlv::pretty_print(hlv::gen_obsdet(opt.low, opt.out)) << "\n";
  } else if (name == "noninference") {
    std::cout << hlv::pretty_print(
                     hlv::gen_noninference(opt.high, opt.low, opt.out))
              << "\n";
  } else if (name == "gni") {
    std::cout << hlv::pretty_print(hlv::gen_gni(opt.high, opt.low, opt.out))
              << "\n";
  } else if (name == "hamming") {
    std::cout << hlv::pretty_print(hlv::gen_hamming(opt.distance, opt.in, opt.out))
              << "\n";
  } else if (name == "distributed") {
    auto arch = hlv::parse_architecture(slurp(opt.arch));
    auto body = hlv::parse_body(slurp(opt.spec));
    std::cout << hlv::pretty_print(hlv::gen_distributed(arch, body)) << "\n";
  } else {
    throw hlv::Error("unknown generator '" + name +
                     "'; expected obsdet, noninference, gni, hamming, or "
                     "distributed");
  }
  return kHolds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HyperLTL verification toolkit"};
  app.require_subcommand(1);
  Options opt;
  std::string gen_name;

  auto* parse_cmd = app.add_subcommand("parse", "report a formula's fragment");
  parse_cmd->add_option("--formula", opt.formula, "formula file")->required();

  auto* check_cmd = app.add_subcommand("check", "model check a structure");
  check_cmd->add_option("--model", opt.model, "structure file")->required();
  check_cmd->add_option("--formula", opt.formula, "formula file")->required();
  check_cmd->add_option("--strategy", opt.strategy, "basic|selfcomp|inclusion")
      ->check(CLI::IsMember({"basic", "selfcomp", "inclusion"}));

  auto* sat_cmd = app.add_subcommand("sat", "decide satisfiability");
  sat_cmd->add_option("--formula", opt.formula, "formula file")->required();
  sat_cmd->add_option("--method", opt.method, "fragment|bounded")
      ->check(CLI::IsMember({"fragment", "bounded"}));
  sat_cmd->add_option("--max-traces", opt.max_traces, "bounded: model size cap")
      ->check(CLI::PositiveNumber);
  sat_cmd->add_option("--max-stem", opt.max_stem, "bounded: stem length cap")
      ->check(CLI::PositiveNumber);
  sat_cmd->add_option("--max-loop", opt.max_loop, "bounded: loop length cap")
      ->check(CLI::PositiveNumber);

  auto* monitor_cmd = app.add_subcommand("monitor", "watch a trace stream");
  monitor_cmd->add_option("--formula", opt.formula, "formula file")->required();
  monitor_cmd->add_option("stream", opt.stream, "event stream file ('-' = stdin)");
  monitor_cmd->add_flag("--symmetric", opt.symmetric,
                        "report each trace combination once when the body "
                        "allows it");

  auto* gen_cmd = app.add_subcommand("gen", "emit a named specification");
  gen_cmd->add_option("name", gen_name,
                      "obsdet|noninference|gni|hamming|distributed")
      ->required();
  gen_cmd->add_option("--high", opt.high, "high-security input proposition");
  gen_cmd->add_option("--low", opt.low, "low-security input proposition");
  gen_cmd->add_option("--out", opt.out, "output proposition");
  gen_cmd->add_option("--in", opt.in, "encoder input proposition");
  gen_cmd->add_option("--distance", opt.distance, "minimal hamming distance");
  gen_cmd->add_option("--arch", opt.arch, "architecture file");
  gen_cmd->add_option("--spec", opt.spec, "specification body file");

  for (auto* cmd : {parse_cmd, check_cmd, sat_cmd, monitor_cmd, gen_cmd}) {
    cmd->add_option("--format", opt.format, "text|lines")
        ->check(CLI::IsMember({"text", "lines"}));
    cmd->add_option("--max-states", opt.max_states, "automaton state cap")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kHolds : kError;
  }

  try {
    if (parse_cmd->parsed()) return run_parse(opt);
    if (check_cmd->parsed()) return run_check(opt);
    if (sat_cmd->parsed()) return run_sat(opt);
    if (monitor_cmd->parsed()) return run_monitor(opt);
    return run_gen(gen_name, opt);
  } catch (const hlv::ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kUnknown;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
