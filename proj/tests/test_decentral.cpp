#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "hypermon/decentral.hpp"
#include "hypermon/semantics.hpp"

using namespace hypermon;

namespace {

Context ctx12() { return Context::make({"a", "b"}, {"1", "2"}); }

MonPtr pm(const std::string& text, const Context& ctx) {
  return parse_mon(text, ctx);
}

std::set<std::string> step_action(const std::string& text, const char* act,
                                  const Context& ctx) {
  std::set<std::string> out;
  for (const auto& s : lmon_step_action(pm(text, ctx), ctx.action_id(act)))
    out.insert(print_mon(s, ctx));
  return out;
}

}  // namespace

TEST_CASE("local action steps match exactly and have no fallback") {
  Context ctx = ctx12();
  using set = std::set<std::string>;
  CHECK(step_action("a. yes", "a", ctx) == set{"yes"});
  CHECK(step_action("a. yes", "b", ctx) == set{});  // mismatch: no step
  CHECK(step_action("yes", "a", ctx) == set{"yes"});
  CHECK(step_action("yes", "b", ctx) == set{"yes"});
  CHECK(step_action("a. yes + b. no", "b", ctx) == set{"no"});
  CHECK(step_action("rec x. a. x", "a", ctx) == set{"rec x. a. x"});
  // both sides of a product must act together
  CHECK(step_action("a. yes (x) a. no", "a", ctx) == set{"yes (x) no"});
  CHECK(step_action("a. yes (x) b. no", "a", ctx) == set{});
  // communication prefixes do not take trace actions
  CHECK(step_action("!{2}:a. yes", "a", ctx) == set{});
  CHECK(step_action("?{2}:a. yes", "a", ctx) == set{});
  // but a choice can still act through a non-communicating branch
  CHECK(step_action("a. yes + ?{2}:b. no", "a", ctx) == set{"yes"});
}

TEST_CASE("local receives need group membership and the right constant") {
  Context ctx = ctx12();
  int l1 = ctx.location_id("1"), l2 = ctx.location_id("2");
  Action a = ctx.action_id("a"), b = ctx.action_id("b");
  auto recv = [&](const std::string& text, LocationId from, Action c) {
    std::set<std::string> out;
    for (const auto& s : lmon_step_receive(pm(text, ctx), from, c))
      out.insert(print_mon(s, ctx));
    return out;
  };
  using set = std::set<std::string>;
  CHECK(recv("?{1}:a. yes", l1, a) == set{"yes"});
  CHECK(recv("?{1}:a. yes", l2, a) == set{});  // sender outside the group
  CHECK(recv("?{1}:a. yes", l1, b) == set{});  // wrong constant
  CHECK(recv("?{}:a. yes", l1, a) == set{});   // empty group hears nobody
  CHECK(recv("?{1}:a. no + ?{1}:b. yes", l1, b) == set{"yes"});
  // a product side that cannot receive stays put
  CHECK(recv("?{1}:a. yes (x) b. no", l1, a) == set{"yes (x) b. no"});
  CHECK(recv("?{1}:a. yes (x) ?{1}:a. no", l1, a) == set{"yes (x) no"});
  CHECK(recv("yes", l1, a) == set{});  // verdicts never communicate

  CHECK(lmon_enabled_receives(pm("?{1}:a. yes + ?{2}:b. no", ctx)) ==
        std::set<std::pair<LocationId, Action>>{{l1, a}, {l2, b}});
  CHECK(lmon_can_communicate(pm("a. ?{1}:b. yes", ctx)) == false);
  CHECK(lmon_can_communicate(pm("a. yes + ?{1}:b. yes", ctx)) == true);
}

TEST_CASE("local sends expose group, constant and residue") {
  Context ctx = ctx12();
  auto sends = [&](const std::string& text) {
    std::set<std::string> out;
    for (const auto& s : lmon_step_sends(pm(text, ctx))) {
      std::string g;
      for (LocationId l : s.group) g += ctx.location_name(l);
      out.insert(g + "/" + ctx.action_name(s.c) + "/" +
                 print_mon(s.result, ctx));
    }
    return out;
  };
  using set = std::set<std::string>;
  CHECK(sends("!{2}:a. yes") == set{"2/a/yes"});
  CHECK(sends("!{}:b. no") == set{"/b/no"});  // empty destination group is fine
  CHECK(sends("!{2}:a. yes + b. no") == set{"2/a/yes"});
  CHECK(sends("a. !{2}:a. yes") == set{});  // send still guarded by an action
  // a sibling in the same located component does not hear the send
  CHECK(sends("!{1}:a. yes (x) ?{1}:a. no") == set{"1/a/yes (x) ?{1}:a. no"});
  CHECK(sends("!{1}:a. yes (x) b. no") == set{"1/a/yes (x) b. no"});
}

TEST_CASE("monitor-wide multicasts deliver to receptive group members") {
  Context ctx4 = Context::make({"a", "b"}, {"l1", "l2", "l3", "l4"});
  DMonPtr M = parse_dmon(
      "[!{l2,l3}:a. yes]@l1 /\\ [?{l1}:a. yes]@l2 /\\ [?{l1}:a. no]@l3 "
      "/\\ [b. end]@l4",
      ctx4);
  auto ms = dmon_sends(M);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].label.sender == ctx4.location_id("l1"));
  CHECK(ms[0].label.c == ctx4.action_id("a"));
  CHECK(ms[0].label.group == std::vector<LocationId>{ctx4.location_id("l2"),
                                                     ctx4.location_id("l3")});
  CHECK(print_dmon(ms[0].result, ctx4) ==
        "[yes]@l1 /\\ [yes]@l2 /\\ [no]@l3 /\\ [b. end]@l4");

  // delivery outside the group leaves receptive components untouched
  DMonPtr kept = dmon_receive(M, ctx4.location_id("l4"), {}, 0);
  CHECK(dmon_equal(kept, M));

  DMonPtr amb = parse_dmon("[?{l1}:a. yes + ?{l1}:a. no]@l2", ctx4);
  CHECK_THROWS_WITH_AS(
      dmon_receive(amb, ctx4.location_id("l1"),
                   {ctx4.location_id("l2")}, ctx4.action_id("a")),
      doctest::Contains("ambiguous receive"), std::runtime_error);
}

TEST_CASE("synchronous action steps require stability") {
  Context ctx4 = Context::make({"a", "b"}, {"l1", "l2", "l3", "l4"});
  ActionMap allA(4, ctx4.action_id("a"));
  DMonPtr M = parse_dmon(
      "[a. !{l2,l3}:a. yes]@l1 /\\ [a. ?{l1}:a. yes]@l2 "
      "/\\ [a. ?{l1}:a. yes]@l3 /\\ [b. end]@l4",
      ctx4);

  auto succ = dmon_action_step(M, allA);
  REQUIRE(succ.size() == 1);  // l4 cannot act or communicate, so it halts
  CHECK(print_dmon(succ[0], ctx4) ==
        "[!{l2,l3}:a. yes]@l1 /\\ [?{l1}:a. yes]@l2 /\\ [?{l1}:a. yes]@l3 "
        "/\\ [end]@l4");

  // pending communication blocks the next action step
  CHECK_THROWS_WITH_AS(dmon_action_step(succ[0], allA),
                       doctest::Contains("not in a stable state"), UsageError);
  CHECK(dmon_action_step_if_stable(succ[0], allA).empty());

  Scheduler lex = Scheduler::lex();
  Saturation sat = saturate(succ[0], lex);
  REQUIRE(sat.sends.size() == 1);
  CHECK(sat.sends[0].sender == ctx4.location_id("l1"));
  CHECK(sat.sends[0].group == std::vector<LocationId>{ctx4.location_id("l2"),
                                                      ctx4.location_id("l3")});
  CHECK(sat.sends[0].c == ctx4.action_id("a"));
  CHECK(sat.chain.size() == 2);
  CHECK(print_dmon(sat.stable, ctx4) ==
        "[yes]@l1 /\\ [yes]@l2 /\\ [yes]@l3 /\\ [end]@l4");
  CHECK(dmon_verdicts(sat.stable).names() == std::vector<std::string>{"end"});
  CHECK(dmon_is_final(sat.stable));
}

TEST_CASE("a waiting receiver with no possible sender is reported") {
  Context ctx = ctx12();
  DMonPtr M = parse_dmon("[?{1}:a. yes]@2", ctx);
  Scheduler lex = Scheduler::lex();
  CHECK_THROWS_WITH_AS(saturate(M, lex), doctest::Contains("saturation stuck"),
                       std::runtime_error);
}

TEST_CASE("composition verdicts mirror conjunction and disjunction") {
  Context ctx = ctx12();
  auto v = [&](const std::string& text) {
    return dmon_verdicts(parse_dmon(text, ctx)).names();
  };
  using names = std::vector<std::string>;
  CHECK(v("[yes]@1") == names{"yes"});
  CHECK(v("[yes]@1 /\\ [yes]@2") == names{"yes"});
  CHECK(v("[yes]@1 /\\ [end]@2") == names{"end"});
  CHECK(v("[no]@1 /\\ [a. yes]@2") == names{"no"});
  CHECK(v("[no]@1 \\/ [end]@2") == names{"end"});
  CHECK(v("[yes]@1 \\/ [a. yes]@2") == names{"yes"});
  CHECK(v("[end]@1 \\/ [end]@2") == names{"end"});
  CHECK(v("[a. yes]@1 \\/ [no]@2") == names{});
}

TEST_CASE("located terms print and parse back") {
  Context ctx = ctx12();
  for (const char* text :
       {"[yes]@1", "[a. !{}:a. no + b. !{}:b. yes]@2",
        "[!{1,2}:b. end]@1 /\\ [?{1}:b. yes]@2",
        "[yes]@1 /\\ [no]@2 \\/ [end]@1",
        "([yes]@1 \\/ [no]@2) /\\ [end]@1"}) {
    DMonPtr M = parse_dmon(text, ctx);
    CHECK(dmon_equal(M, parse_dmon(print_dmon(M, ctx), ctx)));
  }
  // conjunction binds tighter than disjunction
  DMonPtr mixed = parse_dmon("[yes]@1 /\\ [no]@2 \\/ [end]@1", ctx);
  CHECK(mixed->kind == DK::DOr);
  CHECK(mixed->a->kind == DK::DAnd);
  CHECK_THROWS_AS(parse_dmon("[yes]@nowhere", ctx), ParseError);
}

TEST_CASE("decentralized synthesis fans located cases out over sigma") {
  Context ctx = ctx12();
  FormulaPtr f = parse_formula("exists p. exists q. ([a@p] ff /\\ [b@q] ff)");
  DMonPtr got = synth_dec(f, {}, ctx);

  auto L = [&](const std::string& mt, const char* loc) {
    return dmon::located(pm(mt, ctx), ctx.location_id(loc));
  };
  std::string ownA1 = "a. !{2}:a. no + b. !{2}:b. yes";
  std::string ownA2 = "a. !{1}:a. no + b. !{1}:b. yes";
  std::string ownB1 = "b. !{2}:b. no + a. !{2}:a. yes";
  std::string ownB2 = "b. !{1}:b. no + a. !{1}:a. yes";
  std::string ownA0 = "a. !{}:a. no + b. !{}:b. yes";
  std::string ownB0 = "b. !{}:b. no + a. !{}:a. yes";
  std::string nonA1 = "a. (?{1}:a. no + ?{1}:b. yes) + b. (?{1}:a. no + ?{1}:b. yes)";
  std::string nonA2 = "a. (?{2}:a. no + ?{2}:b. yes) + b. (?{2}:a. no + ?{2}:b. yes)";
  std::string nonB1 = "a. (?{1}:b. no + ?{1}:a. yes) + b. (?{1}:b. no + ?{1}:a. yes)";
  std::string nonB2 = "a. (?{2}:b. no + ?{2}:a. yes) + b. (?{2}:b. no + ?{2}:a. yes)";

  DMonPtr case11 = L("(" + ownA0 + ") (x) (" + ownB0 + ")", "1");
  DMonPtr case12 = dmon::dor(L("(" + ownA1 + ") (x) (" + nonB2 + ")", "1"),
                             L("(" + nonA1 + ") (x) (" + ownB2 + ")", "2"));
  DMonPtr case21 = dmon::dor(L("(" + nonA2 + ") (x) (" + ownB1 + ")", "1"),
                             L("(" + ownA2 + ") (x) (" + nonB1 + ")", "2"));
  DMonPtr case22 = L("(" + ownA0 + ") (x) (" + ownB0 + ")", "2");
  DMonPtr expected =
      dmon::dor(dmon::dor(case11, case12), dmon::dor(case21, case22));
  CHECK(dmon_equal(got, expected));
}

TEST_CASE("decentralized synthesis rejects unsupported shapes") {
  Context ctx = ctx12();
  CHECK_THROWS_WITH_AS(
      synth_dec(parse_formula("exists p. min x. [a@p] x"), {}, ctx),
      doctest::Contains("least fixed point"), UsageError);
  CHECK_THROWS_WITH_AS(
      synth_dec(parse_formula("max x. exists p. [a@p] x"), {}, ctx),
      doctest::Contains("not in PHyper-maxHML"), UsageError);
  CHECK_THROWS_WITH_AS(
      synth_dec(parse_formula("forall p. [a@p] exists q. tt"), {}, ctx),
      doctest::Contains("not in PHyper-maxHML"), UsageError);
  CHECK_THROWS_AS(synth_dec(parse_formula("[a@p] ff"), {}, ctx), UsageError);
}

TEST_CASE("closed quantifier-free bodies become verdicts at a base location") {
  Context ctx = ctx12();
  CHECK(print_dmon(synth_dec(parse_formula("tt"), {}, ctx), ctx) == "[yes]@1");
  CHECK(print_dmon(synth_dec(parse_formula("ff \\/ tt"), {}, ctx), ctx) ==
        "[yes]@1");
}

TEST_CASE("runs saturate after every action and log the multicasts") {
  Context ctx = ctx12();
  FormulaPtr f = parse_formula("exists p. exists q. ([a@p] ff /\\ [b@q] ff)");
  DMonPtr M = synth_dec(f, {}, ctx);

  Trace good;  // 1: b^w, 2: a^w  -- the only satisfying pattern
  good.ctx = std::make_shared<const Context>(ctx);
  good.loop = {{1, 0}};
  Trace bad;  // both start with a
  bad.ctx = good.ctx;
  bad.loop = {{0, 0}};

  Scheduler lex = Scheduler::lex();
  DecRunOutcome og = run_dec(M, good, lex);
  CHECK(og.base.reachable_yes);
  CHECK(*og.base.steps_to_first_yes == 1);
  CHECK(!og.log.empty());
  CHECK(og.log[0].step == 1);  // first sends fire right after the first action

  Scheduler lex2 = Scheduler::lex();
  DecRunOutcome ob = run_dec(M, bad, lex2);
  CHECK(ob.base.reachable_no);
  CHECK(!ob.base.reachable_yes);

  // the centralized monitor and the evaluator agree on both traces
  MonPtr C = synth_central(f, {}, ctx);
  CHECK(run_central(C, good).reachable_yes);
  CHECK(run_central(C, bad).reachable_no);
  CHECK(eval_positions(f, good).has(0));
  CHECK(!eval_positions(f, bad).has(0));

  json j = dec_run_outcome_to_json(og, ctx);
  CHECK(j.contains("multicast_log"));
  CHECK(j["reachable_yes"] == true);
}

TEST_CASE("normalization only rewrites inside located components") {
  Context ctx = ctx12();
  DMonPtr M = parse_dmon("[yes (x) yes]@1 /\\ [no + no]@2", ctx);
  CHECK(print_dmon(normalize_dmon(M), ctx) == "[yes]@1 /\\ [no]@2");
  CHECK(dmon_is_final(normalize_dmon(M)));
  CHECK(!dmon_is_final(parse_dmon("[a. yes]@1", ctx)));
}
