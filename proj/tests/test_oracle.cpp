#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace bumg;
using namespace bumg::oracle;

namespace {

std::vector<Clause> clauses(const std::string& text) { return parse(text).clauses; }

}  // namespace

TEST(Evaluate, DetectsFalsifiedInstance) {
  auto cs = clauses("cnf(a, axiom, p(a)). cnf(b, axiom, (q(X) | ~p(X))).");
  FiniteInterpretation fi;
  fi.size = 1;
  fi.set_function("a", {}, 0);
  fi.set_predicate("p", {0}, true);
  auto cx = evaluate(cs, fi);
  ASSERT_TRUE(cx.has_value());
  EXPECT_EQ(cx->clause_index, 1u);
  fi.set_predicate("q", {0}, true);
  EXPECT_FALSE(evaluate(cs, fi).has_value());
}

TEST(Evaluate, EqualityIsIdentity) {
  auto cs = clauses("cnf(a, axiom, a != b).");
  FiniteInterpretation fi;
  fi.size = 2;
  fi.set_function("a", {}, 0);
  fi.set_function("b", {}, 1);
  EXPECT_FALSE(evaluate(cs, fi).has_value());
  fi.set_function("b", {}, 0);
  EXPECT_TRUE(evaluate(cs, fi).has_value());
}

TEST(Evaluate, MissingFunctionIsReported) {
  auto cs = clauses("cnf(a, axiom, p(f(X))).");
  FiniteInterpretation fi;
  fi.size = 1;
  fi.set_predicate("p", {0}, true);
  auto cx = evaluate(cs, fi);
  ASSERT_TRUE(cx.has_value());
  EXPECT_NE(cx->reason.find("f"), std::string::npos);
}

TEST(FindModel, SmallestSizes) {
  auto distinct = clauses("cnf(a, axiom, a != b). cnf(b, axiom, b != c). cnf(c, axiom, a != c).");
  EXPECT_FALSE(find_model(distinct, 2).has_value());
  auto m = find_model(distinct, 3);
  ASSERT_TRUE(m.has_value());
  EXPECT_FALSE(evaluate(distinct, *m).has_value());
}

TEST(FindModel, Unsatisfiable) {
  auto cs = clauses("cnf(a, axiom, p(a)). cnf(b, axiom, ~p(X)).");
  EXPECT_FALSE(find_model_up_to(cs, 3).has_value());
}

TEST(FindModel, InfiniteHerbrandModelHasFiniteQuotient) {
  auto cs = clauses("cnf(a, axiom, nat(z)). cnf(b, axiom, (nat(s(X)) | ~nat(X))). cnf(c, axiom, ~lt(X,X)).");
  auto m = find_model_up_to(cs, 2);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->size, 1u);
}

TEST(FindModel, BudgetIsEnforced) {
  auto cs = clauses(
      "cnf(a, axiom, (r(X,Y) | r(Y,X) | X = Y)). cnf(b, axiom, (~r(X,Y) | ~r(Y,Z) | r(X,Z))). "
      "cnf(c, axiom, ~r(X,X)).");
  EXPECT_THROW(find_model(cs, 4, 10), BudgetExceeded);
  EXPECT_THROW(find_model(cs, 0), Error);
}

// Every model the search returns must pass the evaluator.
TEST(FindModel, ResultsPassEvaluation) {
  bumg::testing::Generator gen(31);
  int found = 0;
  for (int round = 0; round < 80; ++round) {
    auto cs = parse(gen.tiny_problem()).clauses;
    try {
      if (auto m = find_model_up_to(cs, 3, 1 << 20)) {
        ++found;
        EXPECT_FALSE(evaluate(cs, *m).has_value());
      }
    } catch (const BudgetExceeded&) {
    }
  }
  EXPECT_GT(found, 10);
}
