#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hypermon/formula.hpp"

using namespace hypermon;

namespace {

FormulaPtr rt(const std::string& text) {
  FormulaPtr f = parse_formula(text);
  FormulaPtr again = parse_formula(print_formula(f));
  REQUIRE(alpha_equal(f, again));
  return f;
}

const char* kPhiA =
    "forall p. max x. (<b@p> x \\/ exists q. (q != p /\\ <a@q> x))";
const char* kPhiEh = "exists p. max x. ([a@p]<a@p> x /\\ [b@p]<a@p> x)";

}  // namespace

TEST_CASE("parse and print round trip across all constructs") {
  rt("tt");
  rt("ff");
  rt("tt /\\ ff \\/ tt");
  rt("exists p. forall q. (p = q \\/ p != q)");
  rt("max x. forall p. [a@p] x");
  rt("min y. exists p. <b@p> y");
  rt(kPhiA);
  rt(kPhiEh);
}

TEST_CASE("conjunction binds tighter than disjunction") {
  FormulaPtr f = parse_formula("tt \\/ ff /\\ tt");
  REQUIRE(f->kind == FK::Or);
  CHECK(f->b->kind == FK::And);
}

TEST_CASE("binders extend maximally to the right") {
  FormulaPtr f = parse_formula("exists p. tt \\/ ff");
  REQUIRE(f->kind == FK::Exists);
  CHECK(f->a->kind == FK::Or);
}

TEST_CASE("shadowed binders are renamed apart") {
  FormulaPtr f = parse_formula("exists p. (exists p. <a@p> tt) /\\ <b@p> tt");
  REQUIRE(f->kind == FK::Exists);
  const auto& conj = f->a;
  REQUIRE(conj->kind == FK::And);
  const auto& inner = conj->a;
  REQUIRE(inner->kind == FK::Exists);
  CHECK(inner->var != f->var);
  CHECK(inner->a->var == inner->var);   // <a@.> uses the inner binder
  CHECK(conj->b->var == f->var);        // <b@.> still sees the outer one
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_formula("exists . tt"), ParseError);
  CHECK_THROWS_AS(parse_formula("(tt"), ParseError);
  CHECK_THROWS_AS(parse_formula("[a@p tt"), ParseError);
  CHECK_THROWS_AS(parse_formula("tt tt"), ParseError);
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  try {
    parse_formula("tt /\\\n @");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("2:") == 0);
  }
}

TEST_CASE("a context restricts modality actions") {
  Context ctx = Context::make({"a", "b"}, {"l1"});
  CHECK_NOTHROW(parse_formula("exists p. [a@p] tt", &ctx));
  CHECK_THROWS_AS(parse_formula("exists p. [z@p] tt", &ctx), ParseError);
}

TEST_CASE("comments and whitespace are skipped") {
  FormulaPtr f = parse_formula("# leading note\n  tt /\\ # trailing\n tt\n");
  CHECK(f->kind == FK::And);
}

TEST_CASE("free variables distinguish trace and recursion names") {
  FormulaPtr f = parse_formula(kPhiA);
  FreeVars fv = free_vars(f);
  CHECK(fv.trace_vars.empty());
  CHECK(fv.rec_vars.empty());

  FormulaPtr open = parse_formula("<a@p> x");
  FreeVars fo = free_vars(open);
  CHECK(fo.trace_vars == std::set<std::string>{"p"});
  CHECK(fo.rec_vars == std::set<std::string>{"x"});
}

TEST_CASE("unguarded recursion is reported") {
  CHECK(check_well_formed(parse_formula(kPhiEh)).empty());
  auto probs = check_well_formed(parse_formula("max x. (x \\/ tt)"));
  REQUIRE(probs.size() == 1);
  CHECK(probs[0].find("unguarded") != std::string::npos);
  // guarded by a modality, even through a conjunction
  CHECK(check_well_formed(parse_formula("max x. forall p. ([a@p] x /\\ tt)"))
            .empty());
}

TEST_CASE("fragments follow the binder structure") {
  auto frs = classify(parse_formula(kPhiA));
  CHECK(frs.count(Fragment::HyperRecHML));
  CHECK(frs.count(Fragment::HyperMaxHML));
  CHECK(!frs.count(Fragment::PHyperRecHML));  // quantifier under max
  CHECK(!frs.count(Fragment::PHyperMaxHML));

  auto ehs = classify(parse_formula(kPhiEh));
  CHECK(ehs.count(Fragment::PHyperMaxHML));
  CHECK(ehs.count(Fragment::HyperMaxHML));

  auto with_min = classify(parse_formula("exists p. min x. [a@p] x"));
  CHECK(with_min.count(Fragment::PHyperRecHML));
  CHECK(!with_min.count(Fragment::PHyperMaxHML));
  CHECK(!with_min.count(Fragment::HyperMaxHML));

  auto qf = classify(parse_formula("p = q /\\ tt"));
  CHECK(qf.count(Fragment::Qf));
  CHECK(qf.count(Fragment::PHyperMaxHML));

  // fragment inclusions hold on every output
  for (const char* text : {kPhiA, kPhiEh, "tt", "exists p. [a@p] ff"}) {
    auto out = classify(parse_formula(text));
    if (out.count(Fragment::PHyperMaxHML)) {
      CHECK(out.count(Fragment::PHyperRecHML));
      CHECK(out.count(Fragment::HyperMaxHML));
    }
    if (out.count(Fragment::PHyperRecHML))
      CHECK(out.count(Fragment::HyperRecHML));
  }
}

TEST_CASE("substitution respects binders") {
  // substituting the body of max x into an occurrence of x
  FormulaPtr f = parse_formula("max x. forall p. [a@p] x");
  FormulaPtr body = f->a;
  FormulaPtr unfolded = substitute(body, f->var, f);
  REQUIRE(unfolded->kind == FK::Forall);
  const auto& inner = unfolded->a->a;  // under forall, under box
  CHECK(alpha_equal(inner, f));
}

TEST_CASE("alpha equality ignores binder names only") {
  CHECK(alpha_equal(parse_formula("exists p. <a@p> tt"),
                    parse_formula("exists q. <a@q> tt")));
  CHECK(alpha_equal(parse_formula("max x. forall p. [a@p] x"),
                    parse_formula("max y. forall r. [a@r] y")));
  CHECK(!alpha_equal(parse_formula("exists p. <a@p> tt"),
                     parse_formula("exists q. <b@q> tt")));
  // reordering an equality is not a renaming
  CHECK(!alpha_equal(parse_formula("exists p. exists q. p = q"),
                     parse_formula("exists p. exists q. q = p")));
}

TEST_CASE("sigma text parses into sorted bindings") {
  Context ctx = Context::make({"a", "b"}, {"l1", "l2"});
  Sigma s = parse_sigma("q=l2, p=l1", ctx);
  REQUIRE(s.size() == 2);
  CHECK(s.at("p") == 0);
  CHECK(s.at("q") == 1);
  CHECK_THROWS_AS(parse_sigma("p=nowhere", ctx), UsageError);
  CHECK_THROWS_AS(parse_sigma("p", ctx), UsageError);
}
