#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace bumg;
using bumg::testing::canonical_set;
using bumg::testing::Generator;

TEST(Parse, PolarityDecidesSide) {
  Problem p = parse("cnf(c, axiom, (q(X) | ~p(X) | r)).");
  ASSERT_EQ(p.clauses.size(), 1u);
  const Clause& c = p.clauses[0];
  EXPECT_EQ(c.head().size(), 2u);
  EXPECT_EQ(c.body().size(), 1u);
  EXPECT_EQ(c.body()[0].predicate, "p");
  EXPECT_EQ(c.label(), "c");
}

TEST(Parse, DisequalityBecomesBodyEquation) {
  Problem p = parse("cnf(c, axiom, (f(X) != a | X = b)).");
  const Clause& c = p.clauses[0];
  ASSERT_EQ(c.body().size(), 1u);
  EXPECT_TRUE(c.body()[0].is_equation());
  ASSERT_EQ(c.head().size(), 1u);
  EXPECT_TRUE(c.head()[0].is_equation());
}

TEST(Parse, NegatedEquationIsBodyEquation) {
  Problem p = parse("cnf(c, axiom, ~(a = b)).");
  EXPECT_TRUE(p.clauses[0].is_goal());
  EXPECT_TRUE(p.clauses[0].body()[0].is_equation());
}

TEST(Parse, FalseIsEmptyClause) {
  Problem p = parse("cnf(c, axiom, $false).");
  EXPECT_TRUE(p.clauses[0].head().empty());
  EXPECT_TRUE(p.clauses[0].body().empty());
}

TEST(Parse, CommentsAndAnnotations) {
  Problem p = parse(
      "% line comment\n/* block\ncomment */\n"
      "cnf(c1, axiom, p(a), file('x.p', c1)).\n"
      "cnf('quoted name', hypothesis, q(a)).\n");
  ASSERT_EQ(p.clauses.size(), 2u);
  EXPECT_EQ(p.clauses[1].label(), "quoted name");
}

TEST(Parse, VariablesArePerClause) {
  Problem p = parse("cnf(a, axiom, (q(X) | ~p(X))). cnf(b, axiom, (q(Y) | ~p(Y))).");
  EXPECT_EQ(to_string(p.clauses[0]), to_string(p.clauses[1]));
}

TEST(ParseErrors, ReportPosition) {
  try {
    parse("cnf(c, axiom, p(a)).\ncnf(d, axiom, p(a) | ).");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 1u);
  }
}

TEST(ParseErrors, Rejections) {
  EXPECT_THROW(parse("include('Axioms/SET001-0.ax')."), ParseError);
  EXPECT_THROW(parse("fof(c, axiom, p(a))."), ParseError);
  EXPECT_THROW(parse("cnf(c, axiom, p(a)"), ParseError);
  EXPECT_THROW(parse("cnf(c, axiom, X)."), ParseError);
  EXPECT_THROW(parse("cnf(c, axiom, ~$false)."), ParseError);
  EXPECT_THROW(parse("cnf(c, axiom, p(a)). /* open"), ParseError);
  EXPECT_THROW(parse("cnf(c, axiom, p(a)). cnf(d, axiom, p(a,b))."), Error);
}

TEST(ParseErrors, ReservedSymbols) {
  EXPECT_THROW(parse("cnf(c, axiom, dom(a))."), ParseError);
  EXPECT_THROW(parse("cnf(c, axiom, NOT_p(a))."), ParseError);
  Problem p = parse("cnf(c, axiom, dom(a)).", {"generated", true});
  EXPECT_TRUE(p.signature.is_special("dom"));
}

TEST(Print, RoundTripPreservesClauses) {
  Generator gen(3);
  for (int round = 0; round < 100; ++round) {
    std::string text = round % 2 ? gen.unary_function_problem() : gen.bs_problem({3, 3, 2, 6, true});
    Problem p = parse(text);
    Problem again = parse(print_clauses(p));
    EXPECT_EQ(canonical_set(p.clauses), canonical_set(again.clauses)) << text;
    EXPECT_EQ(print_clauses(p), print_clauses(again));
  }
}

TEST(Print, GeneratedSymbolsRoundTrip) {
  Problem p = bumg::testing::load("shifting_example.p");
  PipelineConfig cfg;
  cfg.shift = true;
  cfg.blocking = Blocking::SubtermPredicate;
  Problem out = apply_pipeline(p, cfg).problem;
  Problem again = parse(print_clauses(out), {"generated", true});
  EXPECT_EQ(canonical_set(out.clauses), canonical_set(again.clauses));
}

TEST(Szs, Lines) {
  EXPECT_EQ(print_szs(SzsStatus::Satisfiable, "x"), "% SZS status Satisfiable for x");
  EXPECT_EQ(print_szs(SzsStatus::Unsatisfiable, "x"), "% SZS status Unsatisfiable for x");
  EXPECT_EQ(to_string(SzsStatus::GaveUp), "GaveUp");
  EXPECT_EQ(to_string(SzsStatus::Timeout), "Timeout");
}

TEST(ModelFormat, RoundTrip) {
  const std::string text =
      "model.\n"
      "domain: a, f(a).\n"
      "class: a = a, b.\n"
      "class: f(a) = f(a), f(f(a)).\n"
      "fn a: () -> a.\n"
      "fn b: () -> a.\n"
      "fn f: (a) -> f(a).\n"
      "fn f: (f(a)) -> a.\n"
      "pred p: (a).\n"
      "pred r: (a,f(a)).\n";
  ModelDocument m = parse_model(text);
  EXPECT_EQ(m.domain.size(), 2u);
  EXPECT_EQ(m.functions.at("f").at({1}), 0u);
  EXPECT_EQ(m.predicates.at("r").count({0, 1}), 1u);
  EXPECT_EQ(print_model(m), text);
}

TEST(ModelFormat, Errors) {
  EXPECT_THROW(parse_model("domain: a."), ParseError);
  EXPECT_THROW(parse_model("model.\ndomain: a.\npred p: (b).\n"), ParseError);
  EXPECT_THROW(parse_model("model.\ndomain: X.\n"), ParseError);
}
