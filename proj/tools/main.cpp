#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hypermon/central.hpp"
#include "hypermon/decentral.hpp"
#include "hypermon/semantics.hpp"
#include "hypermon/verify.hpp"

using namespace hypermon;

namespace {

struct Opts {
  std::string formula_path;
  std::string trace_path;
  std::string sigma_text;
  std::string scheduler = "lex";
  std::string suite;
  std::vector<std::string> actions;
  std::vector<std::string> locations;
  long max_states = 0;  // 0: env var or library default
  long samples = 0;     // 0: per-suite default
  uint64_t seed = 0;
  bool json = false;
  bool positions = false;
  int depth = 6;
  int fixpoints = 2;
  int alphabet = 2;
  int nlocs = 3;
  int max_prefix = 2;
  int max_loop = 3;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Trace load_trace(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
  return trace_from_json(j);
}

ContextPtr make_context(const Opts& o, const Trace* t) {
  if (t) return t->ctx;
  if (o.actions.empty() || o.locations.empty())
    throw UsageError("provide --trace or both --actions and --locations");
  return std::make_shared<const Context>(
      Context::make(o.actions, o.locations));
}

long resolve_max_states(const Opts& o) {
  if (o.max_states > 0) return o.max_states;
  if (const char* env = std::getenv("HYPERMON_MAX_STATES")) {
    try {
      size_t used = 0;
      long v = std::stol(env, &used);
      if (used != std::string(env).size() || v <= 0) throw std::exception();
      return v;
    } catch (const std::exception&) {
      throw UsageError("HYPERMON_MAX_STATES must be a positive integer");
    }
  }
  return kDefaultMaxStates;
}

Scheduler make_scheduler(const std::string& s) {
  if (s == "lex") return Scheduler::lex();
  if (s.rfind("seed:", 0) == 0) {
    try {
      size_t used = 0;
      uint64_t n = std::stoull(s.substr(5), &used);
      if (used != s.size() - 5) throw std::exception();
      return Scheduler::seeded(n);
    } catch (const std::exception&) {
      throw UsageError("scheduler seed must be an integer, as in seed:7");
    }
  }
  throw UsageError("--scheduler must be lex or seed:N");
}

void print_json(const json& j, const Opts& o) {
  std::cout << (o.json ? j.dump() : j.dump(2)) << "\n";
}

int cmd_parse(const Opts& o) {
  ContextPtr ctx;
  if (!o.trace_path.empty()) {
    Trace t = load_trace(o.trace_path);
    ctx = t.ctx;
  } else if (!o.actions.empty() && !o.locations.empty()) {
    ctx = make_context(o, nullptr);
  }
  FormulaPtr f = parse_formula(read_file(o.formula_path), ctx.get());
  auto problems = check_well_formed(f);
  if (o.json) {
    print_json(json{{"formula", print_formula(f)}, {"problems", problems}}, o);
  } else {
    std::cout << print_formula(f) << "\n";
    for (const auto& p : problems) std::cout << "problem: " << p << "\n";
  }
  return problems.empty() ? 0 : 1;
}

int cmd_classify(const Opts& o) {
  FormulaPtr f = parse_formula(read_file(o.formula_path));
  auto frs = classify(f);
  if (o.json) {
    std::vector<std::string> names;
    for (Fragment fr : frs) names.push_back(fragment_name(fr));
    print_json(json{{"fragments", names}}, o);
  } else {
    for (Fragment fr : frs) std::cout << fragment_name(fr) << "\n";
  }
  return 0;
}

int cmd_eval(const Opts& o) {
  Trace t = load_trace(o.trace_path);
  FormulaPtr f = parse_formula(read_file(o.formula_path), t.ctx.get());
  Sigma sigma = o.sigma_text.empty() ? Sigma{}
                                     : parse_sigma(o.sigma_text, *t.ctx);
  PositionSet ps = eval_positions(f, t, sigma);
  bool sat = ps.has(0);
  if (o.json) {
    json j{{"sat", sat}};
    if (o.positions) j["positions"] = ps.members();
    print_json(j, o);
  } else {
    std::cout << (sat ? "sat" : "unsat") << "\n";
    if (o.positions) {
      std::cout << "positions:";
      for (int i : ps.members()) std::cout << " " << i;
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_synth_central(const Opts& o) {
  ContextPtr ctx;
  std::optional<Trace> t;
  if (!o.trace_path.empty()) t = load_trace(o.trace_path);
  ctx = make_context(o, t ? &*t : nullptr);
  FormulaPtr f = parse_formula(read_file(o.formula_path), ctx.get());
  Sigma sigma =
      o.sigma_text.empty() ? Sigma{} : parse_sigma(o.sigma_text, *ctx);
  MonPtr m = synth_central(f, sigma, *ctx);
  if (o.json)
    print_json(json{{"monitor", print_mon(m, *ctx)}}, o);
  else
    std::cout << print_mon(m, *ctx) << "\n";
  return 0;
}

int cmd_synth_dec(const Opts& o) {
  ContextPtr ctx;
  std::optional<Trace> t;
  if (!o.trace_path.empty()) t = load_trace(o.trace_path);
  ctx = make_context(o, t ? &*t : nullptr);
  FormulaPtr f = parse_formula(read_file(o.formula_path), ctx.get());
  Sigma sigma =
      o.sigma_text.empty() ? Sigma{} : parse_sigma(o.sigma_text, *ctx);
  DMonPtr M = synth_dec(f, sigma, *ctx);
  if (o.json)
    print_json(json{{"monitor", print_dmon(M, *ctx)}}, o);
  else
    std::cout << print_dmon(M, *ctx) << "\n";
  return 0;
}

int cmd_run_central(const Opts& o) {
  Trace t = load_trace(o.trace_path);
  FormulaPtr f = parse_formula(read_file(o.formula_path), t.ctx.get());
  Sigma sigma = o.sigma_text.empty() ? Sigma{}
                                     : parse_sigma(o.sigma_text, *t.ctx);
  MonPtr m = synth_central(f, sigma, *t.ctx);
  RunOutcome r = run_central(m, t, resolve_max_states(o));
  print_json(run_outcome_to_json(r), o);
  return 0;
}

int cmd_run_dec(const Opts& o) {
  Trace t = load_trace(o.trace_path);
  FormulaPtr f = parse_formula(read_file(o.formula_path), t.ctx.get());
  Sigma sigma = o.sigma_text.empty() ? Sigma{}
                                     : parse_sigma(o.sigma_text, *t.ctx);
  DMonPtr M = synth_dec(f, sigma, *t.ctx);
  Scheduler sched = make_scheduler(o.scheduler);
  DecRunOutcome r = run_dec(M, t, sched, resolve_max_states(o));
  print_json(dec_run_outcome_to_json(r, *t.ctx), o);
  return 0;
}

int cmd_diff(const Opts& o) {
  Trace t = load_trace(o.trace_path);
  FormulaPtr f = parse_formula(read_file(o.formula_path), t.ctx.get());
  DiffRecord r = differential(f, t, *t.ctx);
  bool ok = r.monitors_agree && r.oracle_agrees;
  if (o.json) {
    print_json(r.to_json(), o);
  } else {
    std::cout << (ok ? "verdicts match" : "verdicts differ") << "\n"
              << r.to_json().dump(2) << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_verify(const Opts& o, bool nlocs_given) {
  GenConfig g;
  g.max_formula_depth = o.depth;
  g.max_fixpoints = o.fixpoints;
  g.alphabet_size = o.alphabet;
  g.location_count = o.nlocs;
  g.max_prefix = o.max_prefix;
  g.max_loop = o.max_loop;
  g.seed = o.seed;
  if (o.suite == "bisim" && !nlocs_given) g.location_count = 2;
  if (o.samples > 0) {
    g.sample_count = o.samples;
  } else {
    if (o.suite == "soundness" || o.suite == "completeness")
      g.sample_count = 500;
    else if (o.suite == "diff")
      g.sample_count = 200;
    else if (o.suite == "oracle")
      g.sample_count = 300;
    else if (o.suite == "bisim")
      g.sample_count = 30;
    else
      g.sample_count = 50;
  }
  SuiteReport rep = run_suite(o.suite, g);
  if (o.json) {
    print_json(rep.to_json(), o);
  } else {
    std::cout << "suite " << rep.name << ": " << rep.samples << " samples, "
              << rep.failures << " failures, " << rep.elapsed_ms << " ms\n";
    for (const auto& ce : rep.counterexamples)
      std::cout << "counterexample: " << ce << "\n";
    std::cout << "report: " << rep.to_json().dump() << "\n";
  }
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monitor synthesis and verification for hyperproperties "
               "over lasso-represented hypertraces"};
  app.require_subcommand(1);
  Opts o;

  auto add_formula = [&](CLI::App* c) {
    c->add_option("-f,--formula", o.formula_path, "formula file")->required();
  };
  auto add_trace = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("-t,--trace", o.trace_path, "trace JSON file");
    if (required) opt->required();
  };
  auto add_ctx = [&](CLI::App* c) {
    c->add_option("--actions", o.actions, "action names (with no trace)")
        ->delimiter(',');
    c->add_option("--locations", o.locations, "location names (with no trace)")
        ->delimiter(',');
  };
  auto add_sigma = [&](CLI::App* c) {
    c->add_option("--sigma", o.sigma_text,
                  "trace variable bindings, e.g. p=l1,q=l2");
  };
  auto add_json = [&](CLI::App* c) {
    c->add_flag("--json", o.json, "machine-readable output");
  };
  auto add_max_states = [&](CLI::App* c) {
    c->add_option("--max-states", o.max_states,
                  "state budget (default from HYPERMON_MAX_STATES or " +
                      std::to_string(kDefaultMaxStates) + ")");
  };

  CLI::App* parse = app.add_subcommand("parse", "parse and normalize a formula");
  add_formula(parse);
  add_trace(parse, false);
  add_ctx(parse);
  add_json(parse);

  CLI::App* classify_cmd =
      app.add_subcommand("classify", "print the fragments a formula lies in");
  add_formula(classify_cmd);
  add_json(classify_cmd);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a formula on a trace");
  add_formula(eval);
  add_trace(eval, true);
  add_sigma(eval);
  eval->add_flag("--positions", o.positions,
                 "also print the satisfying position set");
  add_json(eval);

  CLI::App* sc = app.add_subcommand("synth-central",
                                    "print the centralized monitor");
  add_formula(sc);
  add_trace(sc, false);
  add_ctx(sc);
  add_sigma(sc);
  add_json(sc);

  CLI::App* sd = app.add_subcommand("synth-dec",
                                    "print the decentralized monitor");
  add_formula(sd);
  add_trace(sd, false);
  add_ctx(sd);
  add_sigma(sd);
  add_json(sd);

  CLI::App* rc = app.add_subcommand(
      "run-central", "run the centralized monitor over a trace");
  add_formula(rc);
  add_trace(rc, true);
  add_sigma(rc);
  add_max_states(rc);
  add_json(rc);

  CLI::App* rd = app.add_subcommand(
      "run-dec", "run the decentralized monitor over a trace");
  add_formula(rd);
  add_trace(rd, true);
  add_sigma(rd);
  rd->add_option("--scheduler", o.scheduler, "lex or seed:N");
  add_max_states(rd);
  add_json(rd);

  CLI::App* diff = app.add_subcommand(
      "diff", "compare centralized and decentralized runs against the "
              "semantics");
  add_formula(diff);
  add_trace(diff, true);
  add_json(diff);

  CLI::App* verify = app.add_subcommand("verify", "run a randomized suite");
  verify
      ->add_option("--suite", o.suite,
                   "soundness, completeness, diff, principled, bisim, "
                   "confluence or oracle")
      ->required();
  verify->add_option("--samples", o.samples, "sample count (per-suite default)");
  verify->add_option("--seed", o.seed, "generator seed (default 0)");
  verify->add_option("--depth", o.depth, "max formula depth (default 6)");
  verify->add_option("--fixpoints", o.fixpoints,
                     "max fixpoint binders (default 2)");
  verify->add_option("--alphabet-size", o.alphabet,
                     "number of actions (default 2)");
  auto* nlocs_opt = verify->add_option(
      "--location-count", o.nlocs,
      "number of locations (default 3; bisim defaults to 2)");
  verify->add_option("--max-prefix", o.max_prefix,
                     "max trace prefix length (default 2)");
  verify->add_option("--max-loop", o.max_loop,
                     "max trace loop length (default 3)");
  add_json(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11 has its own exit codes; fold every real parse error into the
    // documented usage code and keep --help at zero.
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(parse)) return cmd_parse(o);
    if (app.got_subcommand(classify_cmd)) return cmd_classify(o);
    if (app.got_subcommand(eval)) return cmd_eval(o);
    if (app.got_subcommand(sc)) return cmd_synth_central(o);
    if (app.got_subcommand(sd)) return cmd_synth_dec(o);
    if (app.got_subcommand(rc)) return cmd_run_central(o);
    if (app.got_subcommand(rd)) return cmd_run_dec(o);
    if (app.got_subcommand(diff)) return cmd_diff(o);
    if (app.got_subcommand(verify))
      return cmd_verify(o, nlocs_opt->count() > 0);
  } catch (const BudgetError& e) {
    if (o.json)
      std::cerr << json{{"error", e.what()},
                        {"kind", "budget"},
                        {"explored", e.explored}}
                       .dump()
                << "\n";
    else
      std::cerr << "error: " << e.what() << " (explored "
                << e.explored << " states)\n";
    return 3;
  } catch (const UsageError& e) {
    if (o.json)
      std::cerr << json{{"error", e.what()}, {"kind", "usage"}}.dump() << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    if (o.json)
      std::cerr << json{{"error", e.what()}, {"kind", "internal"}}.dump()
                << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
