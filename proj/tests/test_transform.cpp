#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace bumg;
using bumg::testing::canonical_set;
using bumg::testing::Generator;
using bumg::testing::load;

namespace {

// Builds the expected set from TPTP lines; generated symbols allowed.
std::multiset<std::string> expected(const std::string& text) {
  return canonical_set(parse(text, {"expected", true}).clauses);
}

std::multiset<std::string> added_by(const Problem& before, const Problem& after) {
  auto out = canonical_set(after.clauses);
  for (const auto& c : before.clauses) {
    auto it = out.find(bumg::testing::clause_key(c));
    if (it != out.end()) out.erase(it);
  }
  return out;
}

}  // namespace

// Hand enumeration of rr on the single clause with the deep body term.
TEST(RangeRestrictionGolden, RunningExample) {
  Problem out = rr(load("running_example.p"));
  EXPECT_EQ(canonical_set(out.clauses), expected(R"(
    cnf(s1, axiom, dom(a)).
    cnf(dd, axiom, (q(X,g(X,Y)) | r(Y,Z) | ~p(a,f(X,Y),X) | ~dom(Z))).
    cnf(s2a, axiom, (dom(a) | ~p(X1,X2,X))).
    cnf(s2b, axiom, (dom(f(X,Y)) | ~p(X1,X2,X) | ~dom(Y))).
    cnf(p1, axiom, (dom(X1) | ~p(X1,X2,X3))).
    cnf(p2, axiom, (dom(X2) | ~p(X1,X2,X3))).
    cnf(p3, axiom, (dom(X3) | ~p(X1,X2,X3))).
    cnf(q1, axiom, (dom(X1) | ~q(X1,X2))).
    cnf(q2, axiom, (dom(X2) | ~q(X1,X2))).
    cnf(r1, axiom, (dom(X1) | ~r(X1,X2))).
    cnf(r2, axiom, (dom(X2) | ~r(X1,X2))).
    cnf(f1, axiom, (dom(X1) | ~dom(f(X1,X2)))).
    cnf(f2, axiom, (dom(X2) | ~dom(f(X1,X2)))).
    cnf(g1, axiom, (dom(X1) | ~dom(g(X1,X2)))).
    cnf(g2, axiom, (dom(X2) | ~dom(g(X1,X2)))).
  )"));
}

TEST(RangeRestrictionGolden, RunningExampleReport) {
  TransformReport report;
  rr(load("running_example.p"), ConstantPolicy::ReuseFirst, &report);
  EXPECT_EQ(report.added("step1"), 1u);
  EXPECT_EQ(report.added("step2"), 2u);
  EXPECT_EQ(report.rewritten("restrict"), 2u);
  EXPECT_EQ(report.added("step4"), 7u);
  EXPECT_EQ(report.added("step5"), 4u);
}

TEST(RangeRestrictionGolden, ClassicalOnRunningExample) {
  Problem out = crr(load("running_example.p"));
  EXPECT_EQ(canonical_set(out.clauses), expected(R"(
    cnf(s1, axiom, dom(a)).
    cnf(s2f, axiom, (dom(f(X,Y)) | ~dom(X) | ~dom(Y))).
    cnf(s2g, axiom, (dom(g(X,Y)) | ~dom(X) | ~dom(Y))).
    cnf(dd, axiom, (q(X,g(X,Y)) | r(Y,Z) | ~p(a,f(X,Y),X) | ~dom(Z))).
  )"));
}

TEST(RangeRestrictionGolden, FreshConstantPolicy) {
  Problem out = rr(load("running_example.p"), ConstantPolicy::AlwaysFresh);
  auto got = canonical_set(out.clauses);
  EXPECT_EQ(got.count("dom(c0) <- true"), 1u);
  EXPECT_EQ(got.count("dom(a) <- true"), 0u);
  EXPECT_EQ(got.count("dom(a) <- p(X0,X1,X2)"), 1u);
}

TEST(RangeRestrictionGolden, EmptyInputGetsFreshSeed) {
  Problem out = rr(load("empty.p"));
  EXPECT_EQ(canonical_set(out.clauses), expected("cnf(s, axiom, dom(c0))."));
  ASSERT_TRUE(out.signature.domain_seed.has_value());
  EXPECT_EQ(*out.signature.domain_seed, "c0");
}

TEST(MyEqual, PositiveEquationsAreReplaced) {
  Problem p = parse("cnf(c, axiom, (f(X) = X | ~p(X))).");
  Problem out = myequal_rewrite(p);
  EXPECT_EQ(canonical_set(out.clauses), expected(R"(
    cnf(c, axiom, (myequal(f(X),X) | ~p(X))).
    cnf(m1, axiom, (X = Y | ~myequal(X,Y))).
    cnf(m2, axiom, (dom(X) | ~myequal(X,Y))).
    cnf(m3, axiom, (dom(Y) | ~myequal(X,Y))).
  )"));
}

TEST(MyEqual, NoEquationsNoChange) {
  Problem p = load("dl_example.p");
  EXPECT_EQ(canonical_set(myequal_rewrite(p).clauses), canonical_set(p.clauses));
}

TEST(Shifting, BasicShiftingOnDeepBodyAtom) {
  Problem out = bs(load("shifting_example.p"));
  EXPECT_EQ(canonical_set(out.clauses), expected(R"(
    cnf(ss, axiom, (r(X) | 'NOT_p'(f(X)) | ~q(X))).
    cnf(cons, axiom, (~'NOT_p'(X) | ~p(X))).
  )"));
}

TEST(Shifting, PartialFlatteningExtractsBodyTerms) {
  Problem out = pf(load("shifting_example.p"));
  EXPECT_EQ(canonical_set(out.clauses), expected("cnf(x, axiom, (r(X) | ~q(X) | ~p(U) | f(X) != U))."));
}

TEST(Shifting, PartialFlatteningLeavesEquationsAlone) {
  Problem p = parse("cnf(c, axiom, f(a) != b).");
  EXPECT_EQ(canonical_set(pf(p).clauses), canonical_set(p.clauses));
}

TEST(Shifting, ShiftThenRangeRestrict) {
  PipelineConfig cfg;
  cfg.shift = true;
  Problem out = apply_pipeline(load("shifting_example.p"), cfg).problem;
  auto got = canonical_set(out.clauses);
  for (const auto& s : expected(R"(
    cnf(a, axiom, (r(X) | neq(f(X),U) | ~q(X) | ~p(U))).
    cnf(b, axiom, (dom(X) | ~neq(X,Y))).
    cnf(c, axiom, (dom(Y) | ~neq(X,Y))).
    cnf(d, axiom, (~neq(X,Y) | X != Y)).
  )"))
    EXPECT_EQ(got.count(s), 1u) << s;
}

TEST(Shifting, IdentityOnFlatInput) {
  Problem p = parse("cnf(c, axiom, (q(X) | ~p(X,a))).");
  EXPECT_EQ(canonical_set(sh(p).clauses), canonical_set(p.clauses));
  EXPECT_TRUE(sh(parse("")).clauses.empty());
}

TEST(Shifting, NoDeepBodyAtomsAfterBs) {
  Generator gen(5);
  for (int round = 0; round < 100; ++round) {
    Problem out = bs(pf(parse(gen.unary_function_problem())));
    for (const auto& c : out.clauses)
      for (const auto& b : c.body()) EXPECT_FALSE(has_proper_functional_term(b)) << to_string(c);
  }
}

TEST(Blocking, SubtermDomainOnUnaryFunction) {
  Problem p = rr(parse("cnf(c, axiom, p(f(a)))."));
  Problem out = bl_sd(p);
  EXPECT_EQ(added_by(p, out), expected(R"(
    cnf(b1, axiom, (sub(X,X) | ~dom(X))).
    cnf(b2, axiom, (sub(X,f(Y)) | ~sub(X,Y) | ~dom(X) | ~dom(f(Y)))).
    cnf(b3, axiom, (X = Y | neq(X,Y) | ~sub(X,Y))).
    cnf(b4, axiom, (~neq(X,Y) | X != Y)).
  )"));
}

TEST(Blocking, UnrestrictedDomainIsSignatureIndependent) {
  for (const char* name : {"dl_example.p", "running_example.p", "empty.p"}) {
    Problem p = rr(load(name));
    EXPECT_EQ(added_by(p, bl_ud(p)), expected(R"(
      cnf(b1, axiom, (X = Y | neq(X,Y) | ~dom(X) | ~dom(Y))).
      cnf(b2, axiom, (~neq(X,Y) | X != Y)).
    )")) << name;
  }
}

TEST(Blocking, PredicateVariantsGuardEachUnaryInputPredicate) {
  Problem p = rr(parse("cnf(a, axiom, p(a)). cnf(b, axiom, (q(f(X)) | ~p(X)))."));
  EXPECT_EQ(added_by(p, bl_up(p)), expected(R"(
    cnf(u1, axiom, (X = Y | neq(X,Y) | ~p(X) | ~p(Y))).
    cnf(u2, axiom, (X = Y | neq(X,Y) | ~q(X) | ~q(Y))).
    cnf(u3, axiom, (~neq(X,Y) | X != Y)).
  )"));
  auto sp = added_by(p, bl_sp(p));
  for (const auto& s : expected(R"(
    cnf(s1, axiom, (X = Y | neq(X,Y) | ~sub(X,Y) | ~p(X) | ~p(Y))).
    cnf(s2, axiom, (X = Y | neq(X,Y) | ~sub(X,Y) | ~q(X) | ~q(Y))).
  )"))
    EXPECT_EQ(sp.count(s), 1u) << s;
}

TEST(Blocking, DomainVariantsNeedRangeRestriction) {
  Problem p = load("dl_example.p");
  EXPECT_THROW(bl_sd(p), ConfigError);
  EXPECT_THROW(bl_ud(p), ConfigError);
  PipelineConfig cfg;
  cfg.rr = RangeRestriction::None;
  cfg.blocking = Blocking::UnrestrictedDomain;
  EXPECT_THROW(apply_pipeline(p, cfg), ConfigError);
}

TEST(Pipeline, LabelsRoundTrip) {
  auto all = PipelineConfig::all();
  ASSERT_EQ(all.size(), 20u);
  std::set<std::string> labels;
  for (const auto& cfg : all) {
    labels.insert(cfg.label());
    EXPECT_EQ(PipelineConfig::from_label(cfg.label()).label(), cfg.label());
  }
  EXPECT_EQ(labels.size(), 20u);
  EXPECT_EQ(labels.count("sh.rr.blud"), 1u);
  EXPECT_EQ(labels.count("crr"), 1u);
  EXPECT_THROW(PipelineConfig::from_label("rr.blxx"), ConfigError);
}

TEST(Pipeline, NoneIsIdentity) {
  PipelineConfig cfg;
  cfg.rr = RangeRestriction::None;
  Problem p = load("dl_example.p");
  auto res = apply_pipeline(p, cfg);
  EXPECT_EQ(canonical_set(res.problem.clauses), canonical_set(p.clauses));
  EXPECT_EQ(res.report.total_added(), 0u);
}

TEST(Pipeline, DeterministicOutput) {
  for (const auto& cfg : PipelineConfig::all()) {
    Problem p = load("dl_example.p");
    EXPECT_EQ(print_clauses(apply_pipeline(p, cfg).problem), print_clauses(apply_pipeline(p, cfg).problem))
        << cfg.label();
  }
}

TEST(Pipeline, GeneratedSymbolsAreFresh) {
  Problem p = load("dl_example.p");
  for (const auto& cfg : PipelineConfig::all()) {
    Problem out = apply_pipeline(p, cfg).problem;
    for (const auto& [name, tag] : out.signature.specials) {
      if (tag.kind == SpecialKind::FreshConstant) continue;
      EXPECT_FALSE(p.signature.predicates.contains(name)) << name;
    }
  }
}

TEST(Pipeline, HornStaysHorn) {
  Problem p = load("dl_example.p");
  for (auto rr_kind : {RangeRestriction::Classical, RangeRestriction::New}) {
    PipelineConfig cfg;
    cfg.rr = rr_kind;
    for (const auto& c : apply_pipeline(p, cfg).problem.clauses) EXPECT_TRUE(c.is_horn()) << to_string(c);
  }
}

TEST(Invariants, RangeRestrictedOutputOnRandomInputs) {
  Generator gen(13);
  for (int round = 0; round < 60; ++round) {
    Problem p = parse(gen.tiny_problem());
    for (const auto& cfg : PipelineConfig::all())
      for (const auto& c : apply_pipeline(p, cfg).problem.clauses)
        ASSERT_TRUE(is_range_restricted(c)) << cfg.label() << ": " << to_string(c);
  }
}

TEST(Invariants, ClauseCountBound) {
  Generator gen(17);
  for (int round = 0; round < 100; ++round) {
    Problem p = parse(gen.tiny_problem());
    EXPECT_LE(rr(p).clauses.size(), rr_clause_bound(p)) << print_clauses(p);
  }
}

TEST(Report, CsvShape) {
  auto res = apply_pipeline(load("running_example.p"), PipelineConfig{});
  std::string header = TransformReport::csv_header();
  std::string row = res.report.csv_row();
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
  EXPECT_EQ(row.substr(0, 5), "1,15,");
}
