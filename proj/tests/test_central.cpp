#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <set>

#include "hypermon/central.hpp"
#include "hypermon/semantics.hpp"

using namespace hypermon;

namespace {

Context ctx12() { return Context::make({"a", "b"}, {"1", "2"}); }

MonPtr pm(const std::string& text, const Context& ctx) {
  return parse_mon(text, ctx);
}

const char* kPhiEh = "exists p. max x. ([a@p]<a@p> x /\\ [b@p]<a@p> x)";

Trace trace12(std::vector<ActionMap> loop) {
  Trace t;
  t.ctx = std::make_shared<const Context>(ctx12());
  t.loop = std::move(loop);
  return t;
}

}  // namespace

TEST_CASE("monitor terms print and parse back") {
  Context ctx = ctx12();
  for (const char* text :
       {"yes", "no", "end", "a@1. yes", "a@1. b@2. no",
        "a@1. yes + b@1. no", "yes (x) no", "yes (+) no",
        "rec x. a@1. x", "(rec x. a@1. x) (+) (rec y. b@2. y)",
        "a@1. (yes + no) (x) b@2. end"}) {
    MonPtr m = pm(text, ctx);
    MonPtr back = pm(print_mon(m, ctx), ctx);
    CHECK(mon_equal(m, back));
  }
  CHECK_THROWS_AS(pm("a@nowhere. yes", ctx), ParseError);
  CHECK_THROWS_AS(pm("z@1. yes", ctx), ParseError);
  CHECK_THROWS_AS(pm("rec . yes", ctx), ParseError);
}

TEST_CASE("verdict evaluation follows the parallel absorption rules") {
  Context ctx = ctx12();
  auto verdicts = [&](const std::string& text) {
    return mon_verdicts(pm(text, ctx)).names();
  };
  using names = std::vector<std::string>;
  CHECK(verdicts("yes (x) yes") == names{"yes"});
  CHECK(verdicts("no (x) yes") == names{"no"});       // no absorbs in (x)
  CHECK(verdicts("yes (x) end") == names{"end"});     // yes is neutral in (x)
  CHECK(verdicts("end (x) end") == names{"end"});
  CHECK(verdicts("yes (+) end") == names{"yes"});     // yes absorbs in (+)
  CHECK(verdicts("no (+) end") == names{"end"});      // no is neutral in (+)
  CHECK(verdicts("no (+) no") == names{"no"});
  CHECK(verdicts("yes + no") == names{"yes", "no"});  // choice keeps both
  CHECK(verdicts("a@1. yes") == names{});
  CHECK(verdicts("rec x. a@1. x") == names{});
  // recursion must be unfolded to find verdicts behind binders
  CHECK(verdicts("rec x. (yes + a@1. x)") == names{"yes"});
  // each unfolding is evaluated with its own fixpoint, not a global one
  CHECK(verdicts("rec x. (yes + (x (x) end))") == names{"yes", "end"});
}

TEST_CASE("action steps match, mismatch to end, and distribute") {
  Context ctx = ctx12();
  ActionMap A{0, 1};  // 1 -> a, 2 -> b
  auto step = [&](const std::string& text) {
    std::set<std::string> out;
    for (const auto& s : cmon_step(pm(text, ctx), A))
      out.insert(print_mon(s, ctx));
    return out;
  };
  using set = std::set<std::string>;
  CHECK(step("a@1. yes") == set{"yes"});
  CHECK(step("b@1. yes") == set{"end"});  // wrong action observed at 1
  CHECK(step("yes") == set{"yes"});       // verdicts are stable
  CHECK(step("a@1. yes + b@1. no") == set{"yes", "end"});
  CHECK(step("a@1. yes (x) b@2. no") == set{"yes (x) no"});
  CHECK(step("rec x. a@1. x") == set{"rec x. a@1. x"});

  auto pruned = [&](const std::string& text) {
    std::set<std::string> out;
    for (const auto& s : cmon_step_pruned(pm(text, ctx), A))
      out.insert(print_mon(s, ctx));
    return out;
  };
  CHECK(pruned("a@1. yes + b@1. no") == set{"yes"});  // end branch dominated
  CHECK(pruned("b@1. yes") == set{"end"});            // sole end is kept
}

TEST_CASE("pruning preserves reachable verdicts") {
  // Exhaustive breadth-first search with the unpruned relation must agree
  // with run_central (which prunes) on yes/no reachability.
  Context base = ctx12();
  auto explore = [&](const MonPtr& m0, const Trace& t) {
    std::pair<bool, bool> reach{false, false};
    std::set<std::pair<std::string, int>> seen;
    std::deque<std::pair<MonPtr, int>> work{{normalize_mon(m0), 0}};
    seen.insert({print_mon(work.front().first, *t.ctx), 0});
    while (!work.empty()) {
      auto [m, pos] = work.front();
      work.pop_front();
      VerdictSet v = mon_verdicts(m);
      reach.first = reach.first || v.has(Verdict::Yes);
      reach.second = reach.second || v.has(Verdict::No);
      if (m->kind == MK::Verdict) continue;
      for (const auto& s : cmon_step(m, t.at(pos))) {
        auto n = normalize_mon(s);
        if (seen.insert({print_mon(n, *t.ctx), t.succ(pos)}).second)
          work.push_back({n, t.succ(pos)});
      }
    }
    return reach;
  };
  for (const char* text :
       {kPhiEh, "forall p. [a@p](<b@p> tt \\/ <a@p> tt)",
        "exists p. forall q. (p = q \\/ [a@q] ff)"}) {
    FormulaPtr f = parse_formula(text);
    MonPtr m = synth_central(f, {}, base);
    for (auto& t : {trace12({{0, 0}, {0, 1}}), trace12({{1, 1}}),
                    trace12({{0, 1}, {1, 0}})}) {
      RunOutcome o = run_central(m, t);
      auto [ey, en] = explore(m, t);
      CHECK(o.reachable_yes == ey);
      CHECK(o.reachable_no == en);
    }
  }
}

TEST_CASE("synthesis unfolds quantifiers and guards modalities") {
  Context ctx = ctx12();
  FormulaPtr f = parse_formula(kPhiEh);
  MonPtr m = synth_central(f, {}, ctx);
  MonPtr expected = pm(
      "(rec x. ((a@1. (a@1. x + b@1. no) + b@1. yes)"
      " (x) (b@1. (a@1. x + b@1. no) + a@1. yes)))"
      " (+) "
      "(rec x. ((a@2. (a@2. x + b@2. no) + b@2. yes)"
      " (x) (b@2. (a@2. x + b@2. no) + a@2. yes)))",
      ctx);
  CHECK(alpha_equal_mon(m, expected));
}

TEST_CASE("synthesis resolves equalities against the bindings") {
  Context ctx = ctx12();
  Sigma same{{"p", 0}, {"q", 0}};
  Sigma diff{{"p", 0}, {"q", 1}};
  FormulaPtr eq = parse_formula("p = q");
  CHECK(print_mon(synth_central(eq, same, ctx), ctx) == "yes");
  CHECK(print_mon(synth_central(eq, diff, ctx), ctx) == "no");
  FormulaPtr neq = parse_formula("p != q");
  CHECK(print_mon(synth_central(neq, diff, ctx), ctx) == "yes");
}

TEST_CASE("synthesis rejects what the theory does not cover") {
  Context ctx = ctx12();
  CHECK_THROWS_WITH_AS(
      synth_central(parse_formula("exists p. min x. [a@p] x"), {}, ctx),
      doctest::Contains("least fixed point"), UsageError);
  // free trace variable without a binding
  CHECK_THROWS_AS(synth_central(parse_formula("[a@p] ff"), {}, ctx),
                  UsageError);
  // unguarded recursion
  CHECK_THROWS_AS(synth_central(parse_formula("max x. x"), {}, ctx),
                  UsageError);
}

TEST_CASE("run outcomes reproduce the reference verdict behaviour") {
  Context ctx = ctx12();
  FormulaPtr f = parse_formula(kPhiEh);
  MonPtr m = synth_central(f, {}, ctx);

  Trace t = trace12({{0, 0}, {0, 1}});   // 1: a^w, 2: (ab)^w
  Trace tp = trace12({{1, 0}, {1, 1}});  // 1: b^w, 2: (ab)^w

  RunOutcome on_t = run_central(m, t);
  CHECK(!on_t.reachable_no);

  RunOutcome on_tp = run_central(m, tp);
  CHECK(on_tp.reachable_no);
  REQUIRE(on_tp.steps_to_first_no.has_value());
  CHECK(*on_tp.steps_to_first_no == 2);

  RunOutcome trivial = run_central(pm("yes", ctx), t);
  CHECK(trivial.reachable_yes);
  CHECK(*trivial.steps_to_first_yes == 0);

  CHECK_THROWS_AS(run_central(m, tp, 2), BudgetError);
}

TEST_CASE("run outcome json is schema stable") {
  Context ctx = ctx12();
  RunOutcome o = run_central(pm("a@1. no", ctx), trace12({{0, 0}}));
  json j = run_outcome_to_json(o);
  CHECK(j["reachable_no"] == true);
  CHECK(j["steps_to_first_no"] == 1);
  CHECK(j["steps_to_first_yes"].is_null());
  CHECK(j.contains("explored_states"));
  CHECK(j.contains("ambiguous_verdicts"));
}

TEST_CASE("normalization preserves verdict evaluation") {
  Context ctx = ctx12();
  for (const char* text :
       {"yes (x) yes", "no (+) a@1. yes", "end + end", "yes + a@1. no",
        "rec x. (yes + a@1. x)", "(yes (x) no) (+) end"}) {
    MonPtr m = pm(text, ctx);
    CHECK(mon_verdicts(normalize_mon(m)) == mon_verdicts(m));
  }
  // normalization collapses settled parallel products
  CHECK(print_mon(normalize_mon(pm("yes (x) yes", ctx)), ctx) == "yes");
  CHECK(print_mon(normalize_mon(pm("no (x) a@1. yes", ctx)), ctx) == "no");
}
