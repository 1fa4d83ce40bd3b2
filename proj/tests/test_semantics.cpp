#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hypermon/semantics.hpp"

using namespace hypermon;

namespace {

ContextPtr ctx2(std::vector<std::string> locs) {
  return std::make_shared<const Context>(Context::make({"a", "b"}, locs));
}

Trace one_loc(std::vector<int> prefix, std::vector<int> loop) {
  Trace t;
  t.ctx = ctx2({"l1"});
  for (int a : prefix) t.prefix.push_back({a});
  for (int a : loop) t.loop.push_back({a});
  return t;
}

std::vector<int> members(const PositionSet& s) { return s.members(); }

}  // namespace

TEST_CASE("verdict constants denote everything or nothing") {
  Trace t = one_loc({0}, {1, 0});
  CHECK(members(eval_positions(parse_formula("tt"), t)) ==
        std::vector<int>{0, 1, 2});
  CHECK(members(eval_positions(parse_formula("ff"), t)).empty());
}

TEST_CASE("boolean connectives intersect and unite") {
  Trace t = one_loc({}, {0, 1});  // (ab) repeating at l1
  Sigma s{{"p", 0}};
  auto at_a = parse_formula("<a@p> tt");
  auto at_b = parse_formula("<b@p> tt");
  CHECK(members(eval_positions(at_a, t, s)) == std::vector<int>{0});
  CHECK(members(eval_positions(at_b, t, s)) == std::vector<int>{1});
  CHECK(members(eval_positions(fml::or_(at_a, at_b), t, s)) ==
        std::vector<int>{0, 1});
  CHECK(members(eval_positions(fml::and_(at_a, at_b), t, s)).empty());
}

TEST_CASE("box holds vacuously on mismatched heads") {
  Trace t = one_loc({}, {0, 1});
  Sigma s{{"p", 0}};
  // [a@p] ff: fails where the head is a, holds where it is b
  CHECK(members(eval_positions(parse_formula("[a@p] ff"), t, s)) ==
        std::vector<int>{1});
  // [a@p] tt always holds
  CHECK(members(eval_positions(parse_formula("[a@p] tt"), t, s)) ==
        std::vector<int>{0, 1});
}

TEST_CASE("equality tests ignore positions") {
  Trace t;
  t.ctx = ctx2({"l1", "l2"});
  t.loop = {{0, 1}};
  CHECK(members(eval_positions(parse_formula("p = q"), t,
                               Sigma{{"p", 0}, {"q", 0}})) ==
        std::vector<int>{0});
  CHECK(members(eval_positions(parse_formula("p = q"), t,
                               Sigma{{"p", 0}, {"q", 1}}))
            .empty());
  CHECK(members(eval_positions(parse_formula("p != q"), t,
                               Sigma{{"p", 0}, {"q", 1}})) ==
        std::vector<int>{0});
}

TEST_CASE("quantifiers range over locations") {
  Trace t;
  t.ctx = ctx2({"l1", "l2"});
  t.loop = {{0, 1}, {0, 0}};  // l1: aa..., l2: ba...
  // some location starts with b: true at position 0 only
  CHECK(members(eval_positions(parse_formula("exists p. <b@p> tt"), t)) ==
        std::vector<int>{0});
  // every location shows a: true at position 1 only
  CHECK(members(eval_positions(parse_formula("forall p. <a@p> tt"), t)) ==
        std::vector<int>{1});
}

TEST_CASE("greatest fixpoint captures invariance") {
  Sigma s{{"p", 0}};
  auto always_a = parse_formula("max x. <a@p> x");
  CHECK(members(eval_positions(always_a, one_loc({}, {0}), s)) ==
        std::vector<int>{0});
  CHECK(members(eval_positions(always_a, one_loc({}, {0, 1}), s)).empty());
  // b then a forever: holds from position 1 on
  CHECK(members(eval_positions(always_a, one_loc({1}, {0}), s)) ==
        std::vector<int>{1});
}

TEST_CASE("least fixpoint captures reachability") {
  Sigma s{{"p", 0}};
  auto eventually_b = parse_formula("min x. (<b@p> tt \\/ <a@p> x)");
  CHECK(members(eval_positions(eventually_b, one_loc({}, {0, 1}), s)) ==
        std::vector<int>{0, 1});
  CHECK(members(eval_positions(eventually_b, one_loc({}, {0}), s)).empty());
  // min differs from max here: max accepts the a-cycle, min rejects it
  auto max_version = parse_formula("max x. (<b@p> tt \\/ <a@p> x)");
  CHECK(members(eval_positions(max_version, one_loc({}, {0}), s)) ==
        std::vector<int>{0});
}

TEST_CASE("satisfies requires a closed formula") {
  Trace t = one_loc({}, {0});
  CHECK(satisfies(parse_formula("tt"), t));
  CHECK_THROWS_AS(satisfies(parse_formula("<a@p> tt"), t), UsageError);
  CHECK_THROWS_AS(satisfies(parse_formula("x \\/ tt"), t), UsageError);
  // unguarded but closed formulas still evaluate
  CHECK(satisfies(parse_formula("max x. x"), t));
}

namespace {

// The consensus property and hypertraces discussed alongside it: T1 breaks
// it at the first position, T2 satisfies it everywhere.
const char* kPhiA =
    "forall p. max x. (<b@p> x \\/ exists q. (q != p /\\ <a@q> x))";

Trace fixture_t1() {
  Trace t;
  t.ctx = ctx2({"l1", "l2", "l3"});
  t.prefix = {{0, 1, 1}};          // a, b, b
  t.loop = {{0, 0, 0}, {0, 0, 1}}; // a a a / a a b
  return t;
}

Trace fixture_t2() {
  Trace t;
  t.ctx = ctx2({"l1", "l2", "l3"});
  t.loop = {{0, 0, 1}, {0, 1, 0}};  // l1: a^w, l2: (ab)^w, l3: (ba)^w
  return t;
}

}  // namespace

TEST_CASE("consensus property separates the two reference hypertraces") {
  auto f = parse_formula(kPhiA);
  CHECK(!satisfies(f, fixture_t1()));
  CHECK(satisfies(f, fixture_t2()));
}

TEST_CASE("iterated and enumerated fixpoints agree on fixtures") {
  Sigma s{{"p", 0}};
  for (const char* text :
       {"max x. <a@p> x", "min x. (<b@p> tt \\/ <a@p> x)",
        "max x. ([a@p] x /\\ [b@p] x)"}) {
    auto f = parse_formula(text);
    for (const Trace& t :
         {one_loc({}, {0, 1}), one_loc({1, 1}, {0}), one_loc({0}, {1})}) {
      CHECK(eval_positions(f, t, s) == eval_positions_enum(f, t, s));
    }
  }
  auto f = parse_formula(kPhiA);
  CHECK(eval_positions(f, fixture_t2()) ==
        eval_positions_enum(f, fixture_t2()));
}

TEST_CASE("position sets support the set algebra") {
  PositionSet a = PositionSet::none(4);
  a.add(1);
  a.add(3);
  PositionSet b = PositionSet::none(4);
  b.add(1);
  CHECK(b.subset_of(a));
  CHECK(!a.subset_of(b));
  CHECK(a.intersect(b).members() == std::vector<int>{1});
  CHECK(a.unite(b).members() == std::vector<int>{1, 3});
  CHECK(PositionSet::full(2).members() == std::vector<int>{0, 1});
}
