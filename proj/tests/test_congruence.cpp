#include <gtest/gtest.h>

#include "bumg/congruence.hpp"
#include "test_support.hpp"

using namespace bumg;
using bumg::testing::Generator;
using bumg::testing::ground;

namespace {

struct Fixture {
  TermBank bank;
  CongruenceClosure cc{&bank};

  Fixture() {
    for (const char* s : {"a", "b", "c"}) bank.declare(s, 0);
    bank.declare("f", 1);
    bank.declare("g", 2);
  }

  TermId term(const std::string& text) { return bank.intern(ground(text)); }
  void merge(const std::string& l, const std::string& r) { cc.merge(term(l), term(r)); }
  bool same(const std::string& l, const std::string& r) {
    TermId a = term(l), b = term(r);
    cc.add(a);
    cc.add(b);
    return cc.find(a) == cc.find(b);
  }
};

}  // namespace

TEST(TermBank, HashConsing) {
  Fixture fx;
  EXPECT_EQ(fx.term("g(a,f(b))"), fx.term("g(a,f(b))"));
  EXPECT_NE(fx.term("f(a)"), fx.term("f(b)"));
  EXPECT_EQ(fx.bank.to_string(fx.term("g(a,f(b))")), "g(a,f(b))");
  EXPECT_EQ(fx.bank.to_term(fx.term("f(c)")), ground("f(c)"));
}

TEST(TermBank, OrderPrefersLighterThenEarlierSymbols) {
  Fixture fx;
  EXPECT_TRUE(fx.bank.less(fx.term("a"), fx.term("b")));
  EXPECT_TRUE(fx.bank.less(fx.term("b"), fx.term("f(a)")));
  EXPECT_TRUE(fx.bank.less(fx.term("f(a)"), fx.term("f(b)")));
  EXPECT_FALSE(fx.bank.less(fx.term("a"), fx.term("a")));
}

TEST(Congruence, FixedPointCollapse) {
  Fixture fx;
  fx.merge("f(a)", "a");
  EXPECT_TRUE(fx.same("f(f(a))", "a"));
  EXPECT_TRUE(fx.same("f(f(f(a)))", "f(a)"));
  EXPECT_EQ(fx.cc.rep(fx.term("f(f(a))")), fx.term("a"));
}

TEST(Congruence, PropagatesThroughArguments) {
  Fixture fx;
  fx.cc.add(fx.term("g(a,f(b))"));
  fx.cc.add(fx.term("g(c,f(a))"));
  fx.merge("a", "c");
  EXPECT_FALSE(fx.same("g(a,f(b))", "g(c,f(a))"));
  fx.merge("a", "b");
  EXPECT_TRUE(fx.same("g(a,f(b))", "g(c,f(a))"));
}

TEST(Congruence, LookupFindsCongruentApplication) {
  Fixture fx;
  fx.cc.add(fx.term("f(a)"));
  fx.merge("a", "b");
  auto hit = fx.cc.lookup(*fx.bank.symbol("f"), {fx.cc.find(fx.term("b"))});
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(fx.cc.find(*hit), fx.cc.find(fx.term("f(a)")));
}

TEST(Congruence, CopiesAreIndependent) {
  Fixture fx;
  fx.cc.add(fx.term("f(a)"));
  CongruenceClosure branch = fx.cc;
  branch.merge(fx.term("a"), fx.term("f(a)"));
  EXPECT_TRUE(branch.find(fx.term("a")) == branch.find(fx.term("f(a)")));
  EXPECT_FALSE(fx.cc.find(fx.term("a")) == fx.cc.find(fx.term("f(a)")));
}

// Every pair of subterms agrees with a naive fixpoint over the same terms.
TEST(Congruence, AgreesWithNaiveClosure) {
  Generator gen(21);
  for (int round = 0; round < 500; ++round) {
    auto eqs = bumg::testing::random_equations(gen, 8);
    std::vector<Term> roots;
    for (const auto& [l, r] : eqs) {
      roots.push_back(l);
      roots.push_back(r);
    }
    auto terms = bumg::testing::subterm_closure(roots);
    auto expected = bumg::testing::naive_closure(terms, eqs);

    Fixture fx;
    std::vector<TermId> ids;
    for (const auto& t : terms) {
      ids.push_back(fx.bank.intern(t));
      fx.cc.add(ids.back());
    }
    for (const auto& [l, r] : eqs) fx.cc.merge(fx.bank.intern(l), fx.bank.intern(r));
    for (std::size_t i = 0; i < terms.size(); ++i)
      for (std::size_t j = 0; j < terms.size(); ++j)
        ASSERT_EQ(fx.cc.find(ids[i]) == fx.cc.find(ids[j]), expected[i] == expected[j])
            << to_string(terms[i]) << " ~ " << to_string(terms[j]) << " in round " << round;
  }
}
