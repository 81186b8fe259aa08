#include "kbott/oracle.hpp"

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "kbott/error.hpp"

namespace kbott {
namespace {

gb::Poly make_poly(std::initializer_list<std::pair<gb::Mono, int>> terms) {
  gb::Poly out;
  for (const auto& [m, c] : terms) gb::add_term(out, m, Rat(c));
  return out;
}

TEST(DegRevLexTest, PinnedComparisons) {
  // Same degree: the rightmost differing exponent decides, smaller wins.
  EXPECT_EQ(gb::cmp({2, 0, 0}, {1, 1, 0}), 1);
  EXPECT_EQ(gb::cmp({1, 1, 0}, {2, 0, 0}), -1);
  EXPECT_EQ(gb::cmp({1, 0, 1}, {0, 1, 1}), 1);
  // Total degree dominates everything else.
  EXPECT_EQ(gb::cmp({0, 0, 3}, {1, 1, 0}), 1);
  EXPECT_EQ(gb::cmp({1, 2, 3}, {1, 2, 3}), 0);
}

TEST(DegRevLexTest, PolyLeadingTermIsLargest) {
  const gb::Poly p = make_poly({{{0, 0}, 1}, {{1, 0}, 2}, {{2, 0}, 3}});
  EXPECT_EQ(p.begin()->first, (gb::Mono{2, 0}));
  EXPECT_EQ(p.begin()->second, 3);
}

TEST(MonoOpsTest, DividesQuotientLcmCoprime) {
  EXPECT_TRUE(gb::divides({1, 0}, {2, 1}));
  EXPECT_FALSE(gb::divides({1, 2}, {2, 1}));
  EXPECT_EQ(gb::mono_quotient({3, 2}, {1, 2}), (gb::Mono{2, 0}));
  EXPECT_EQ(gb::mono_lcm({3, 0}, {1, 2}), (gb::Mono{3, 2}));
  EXPECT_TRUE(gb::coprime({1, 0}, {0, 2}));
  EXPECT_FALSE(gb::coprime({1, 1}, {0, 2}));
}

TEST(PolyOpsTest, AddTermCancels) {
  gb::Poly p = make_poly({{{1, 0}, 1}});
  gb::add_term(p, {1, 0}, Rat(-1));
  EXPECT_TRUE(p.empty());
}

TEST(PolyOpsTest, MakeMonicNormalizesLead) {
  gb::Poly p = make_poly({{{2, 0}, 4}, {{0, 0}, 2}});
  gb::make_monic(p);
  EXPECT_EQ(p.begin()->second, 1);
  EXPECT_EQ(p[(gb::Mono{0, 0})], Rat(1, 2));
}

TEST(NormalFormTest, ReducesAgainstLinearRule) {
  // x^2 reduced against {x - 1} leaves 1.
  gb::Budget budget;
  const std::vector<gb::Poly> basis = {make_poly({{{1}, 1}, {{0}, -1}})};
  const gb::Poly r = gb::normal_form(make_poly({{{2}, 1}}), basis, budget);
  EXPECT_EQ(r, make_poly({{{0}, 1}}));
  EXPECT_EQ(budget.used, 2u);
}

TEST(NormalFormTest, BudgetIsEnforced) {
  gb::Budget budget;
  budget.limit = 1;
  const std::vector<gb::Poly> basis = {make_poly({{{1}, 1}, {{0}, -1}})};
  try {
    gb::normal_form(make_poly({{{3}, 1}}), basis, budget);
    FAIL() << "expected a budget error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::budget);
  }
}

TEST(BuchbergerTest, ProducesAConfluentBasis) {
  // (x^2 - y, x y - 1) in degrevlex; afterwards every generator and every
  // S-polynomial must reduce to zero against the completed basis.
  gb::Budget budget;
  const std::vector<gb::Poly> gens = {
      make_poly({{{2, 0}, 1}, {{0, 1}, -1}}),
      make_poly({{{1, 1}, 1}, {{0, 0}, -1}}),
  };
  const std::vector<gb::Poly> basis = gb::buchberger(gens, budget);
  EXPECT_GE(basis.size(), 2u);
  for (const gb::Poly& g : gens) {
    gb::Budget check;
    EXPECT_TRUE(gb::normal_form(g, basis, check).empty());
  }
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      const gb::Mono lcm =
          gb::mono_lcm(basis[i].begin()->first, basis[j].begin()->first);
      gb::Poly s;
      gb::add_scaled(s, basis[i], Rat(1),
                     gb::mono_quotient(lcm, basis[i].begin()->first));
      gb::add_scaled(s, basis[j], Rat(-1),
                     gb::mono_quotient(lcm, basis[j].begin()->first));
      gb::Budget check;
      EXPECT_TRUE(gb::normal_form(std::move(s), basis, check).empty())
          << "S-poly " << i << "," << j;
    }
}

TEST(BuchbergerTest, CoprimeLeadsNeedNoWork) {
  gb::Budget budget;
  const std::vector<gb::Poly> gens = {
      make_poly({{{1, 0}, 1}, {{0, 0}, -1}}),
      make_poly({{{0, 1}, 1}, {{0, 0}, -1}}),
  };
  const std::vector<gb::Poly> basis = gb::buchberger(gens, budget);
  EXPECT_EQ(basis.size(), 2u);
  EXPECT_EQ(budget.used, 0u);
}

TEST(MinimalLeadingMonomialsTest, DropsMultiples) {
  const std::vector<gb::Poly> basis = {
      make_poly({{{2, 0}, 1}}),
      make_poly({{{2, 1}, 1}}),
      make_poly({{{0, 1}, 1}}),
  };
  const std::vector<gb::Mono> lms = gb::minimal_leading_monomials(basis);
  ASSERT_EQ(lms.size(), 2u);
  EXPECT_EQ(lms[0], (gb::Mono{2, 0}));
  EXPECT_EQ(lms[1], (gb::Mono{0, 1}));
}

TEST(StandardMonomialsTest, PinnedCounts) {
  // Staircase {x^2, y^3}: all (a,b) with a<2, b<3.
  EXPECT_EQ(gb::count_standard_monomials({{2, 0}, {0, 3}}, 2), 6);
  // Adding xy removes (1,1) and (1,2).
  EXPECT_EQ(gb::count_standard_monomials({{2, 0}, {1, 1}, {0, 3}}, 2), 4);
  // A unit leading term means the ideal is everything.
  EXPECT_EQ(gb::count_standard_monomials({{0, 0}}, 2), 0);
}

TEST(StandardMonomialsTest, RefusesPositiveDimension) {
  try {
    gb::count_standard_monomials({{2, 0}}, 2);
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
    EXPECT_NE(std::string(e.what()).find("not zero-dimensional"),
              std::string::npos);
  }
}

TEST(ProblemConversionTest, ClearsNegativeExponentsAndAddsLocalizer) {
  const PolynomialIdealProblem problem =
      laurent_to_polynomial_problem(build_ideal(corpus::a2_negative()));
  ASSERT_EQ(problem.variable_names.size(), 5u);
  EXPECT_EQ(problem.variable_names[0], "y_1_1");
  EXPECT_EQ(problem.variable_names[3], "y_2_2");
  EXPECT_EQ(problem.variable_names[4], "z");
  // Four relations plus the localizing generator.
  ASSERT_EQ(problem.generators.size(), 5u);
  for (const gb::Poly& g : problem.generators)
    for (const auto& [m, c] : g)
      for (std::int64_t e : m) EXPECT_GE(e, 0);

  // Stage-2 r=2 relation y21 y22 - y11^{-1} clears to y11 y21 y22 - 1.
  const gb::Poly& cleared = problem.generators[3];
  EXPECT_EQ(cleared, make_poly({{{1, 0, 1, 1, 0}, 1}, {{0, 0, 0, 0, 0}, -1}}));

  // The localizer is z * (product of everything) - 1.
  const gb::Poly& localizer = problem.generators[4];
  EXPECT_EQ(localizer, make_poly({{{1, 1, 1, 1, 1}, 1}, {{0, 0, 0, 0, 0}, -1}}));
}

TEST(ProblemConversionTest, RejectsForeignVariables) {
  Presentation pres = build_ideal(corpus::point_line());
  Relation alien;
  alien.stage = 1;
  alien.r = 1;
  alien.poly = LaurentPolynomial::variable(VarId{5, 1});
  pres.relations.push_back(alien);
  try {
    laurent_to_polynomial_problem(pres);
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
  }
}

TEST(GroebnerDimensionTest, PinnedDimensions) {
  EXPECT_EQ(groebner_dimension(
                laurent_to_polynomial_problem(build_ideal(corpus::point_line()))),
            2);
  EXPECT_EQ(groebner_dimension(
                laurent_to_polynomial_problem(build_ideal(corpus::full_flag3()))),
            6);
  EXPECT_EQ(groebner_dimension(
                laurent_to_polynomial_problem(build_ideal(corpus::hirzebruch()))),
            4);
  EXPECT_EQ(groebner_dimension(laurent_to_polynomial_problem(
                build_ideal(corpus::a2_negative()))),
            4);
}

TEST(GroebnerDimensionTest, LocalizationIsOptionalWhenTwistsAreNonnegative) {
  // With nonnegative twists every generator is already invertible in the
  // plain polynomial quotient, so dropping the localizer cannot change the
  // dimension.
  for (const auto& spec :
       {corpus::point_line(), corpus::full_flag3(), corpus::hirzebruch()}) {
    const Int with_z =
        groebner_dimension(laurent_to_polynomial_problem(build_ideal(spec)));
    const Int without_z = groebner_dimension(
        laurent_to_polynomial_problem(build_ideal(spec), false));
    EXPECT_EQ(with_z, without_z);
  }
}

TEST(GroebnerDimensionTest, DroppedRelationIsNotZeroDimensional) {
  PolynomialIdealProblem problem =
      laurent_to_polynomial_problem(build_ideal(corpus::hirzebruch()));
  // Remove the last stage-2 relation (keep the localizer at the back).
  problem.generators.erase(problem.generators.end() - 2);
  try {
    groebner_dimension(problem);
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
    EXPECT_NE(std::string(e.what()).find("not zero-dimensional"),
              std::string::npos);
  }
}

TEST(GroebnerDimensionTest, TinyBudgetRaisesBudgetError) {
  const PolynomialIdealProblem problem =
      laurent_to_polynomial_problem(build_ideal(corpus::full_flag3()));
  try {
    groebner_dimension(problem, 5);
    FAIL() << "expected a budget error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::budget);
    EXPECT_NE(std::string(e.what()).find("budget"), std::string::npos);
  }
}

TEST(CrossCheckTest, ConfirmsCorpusRanks) {
  const RankCrossCheck check = cross_check_rank(corpus::hirzebruch());
  EXPECT_EQ(check.verdict, RankCrossCheck::Verdict::pass);
  EXPECT_EQ(check.expected, 4);
  EXPECT_EQ(check.dimension, 4);
  EXPECT_GT(check.steps, 0u);
  EXPECT_NE(check.detail.find("rank 4 confirmed"), std::string::npos);
}

TEST(CrossCheckTest, BudgetExhaustionIsInconclusive) {
  const RankCrossCheck check = cross_check_rank(corpus::chain_flag(), 3);
  EXPECT_EQ(check.verdict, RankCrossCheck::Verdict::inconclusive);
  EXPECT_NE(check.detail.find("budget"), std::string::npos);
}

TEST(RandomLaurentTest, DeterministicGivenSeed) {
  const std::vector<VarId> vars = corpus::hirzebruch().variables();
  std::mt19937_64 a(7);
  std::mt19937_64 b(7);
  for (int i = 0; i < 20; ++i)
    EXPECT_EQ(random_laurent(a, vars), random_laurent(b, vars));

  std::mt19937_64 c(7);
  for (int i = 0; i < 20; ++i) {
    const LaurentPolynomial p = random_laurent(c, vars, 4, 3, 9);
    EXPECT_LE(p.terms().size(), 4u);
    for (const auto& [e, coeff] : p.terms()) {
      EXPECT_LE(coeff, 9);
      EXPECT_GE(coeff, -9);
      for (const auto& [v, exp] : e.entries()) {
        EXPECT_LE(exp, 3);
        EXPECT_GE(exp, -3);
      }
    }
  }
}

TEST(FirstNonvanishingRelationTest, FlagsCorruption) {
  const QuotientRing engine(corpus::hirzebruch());
  std::vector<Relation> relations = build_ideal(corpus::hirzebruch()).relations;
  EXPECT_FALSE(first_nonvanishing_relation(engine, relations).has_value());

  relations[2].poly += LaurentPolynomial(1);
  const auto bad = first_nonvanishing_relation(engine, relations);
  ASSERT_TRUE(bad.has_value());
  EXPECT_NE(bad->find("stage 2"), std::string::npos);
}

TEST(InvariantSuiteTest, PassesOnCorpusSamples) {
  InvariantSuiteOptions options;
  options.random_pairs = 25;
  for (const auto& spec : {corpus::hirzebruch(), corpus::a2_negative(),
                           corpus::twisted_cube()}) {
    const InvariantSuiteReport report = run_invariant_suite(spec, options);
    EXPECT_EQ(report.checks.size(), 8u);
    for (const InvariantCheck& check : report.checks)
      EXPECT_TRUE(check.pass) << check.name << ": " << check.detail;
    EXPECT_TRUE(report.all_pass());
  }
}

TEST(InvariantSuiteTest, ReportsAreDeterministic) {
  InvariantSuiteOptions options;
  options.random_pairs = 10;
  options.seed = 99;
  const InvariantSuiteReport a = run_invariant_suite(corpus::hirzebruch(), options);
  const InvariantSuiteReport b = run_invariant_suite(corpus::hirzebruch(), options);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].name, b.checks[i].name);
    EXPECT_EQ(a.checks[i].pass, b.checks[i].pass);
  }
}

}  // namespace
}  // namespace kbott
