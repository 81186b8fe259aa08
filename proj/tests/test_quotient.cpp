#include "kbott/quotient.hpp"

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "kbott/error.hpp"
#include "kbott/linalg.hpp"
#include "kbott/presentation.hpp"

namespace kbott {
namespace {

const VarId y11{1, 1};
const VarId y12{1, 2};
const VarId y13{1, 3};
const VarId y21{2, 1};
const VarId y22{2, 2};

LaurentPolynomial var(VarId v, std::int64_t e = 1) {
  return LaurentPolynomial::variable(v, e);
}

LaurentPolynomial constant(int c) { return LaurentPolynomial(c); }

// Convenience: the canonical representative of reduce(p).
LaurentPolynomial normal(const QuotientRing& engine, const LaurentPolynomial& p) {
  return engine.reduce(p).to_polynomial();
}

TEST(QuotientElementTest, Arithmetic) {
  QuotientElement a;
  a.add_coord(ExponentVector::variable(y11), 2);
  a.add_coord(ExponentVector(), -1);
  QuotientElement b;
  b.add_coord(ExponentVector::variable(y11), -2);
  EXPECT_EQ((a + b).coord(ExponentVector::variable(y11)), 0);
  EXPECT_EQ((a + b).coord(ExponentVector()), -1);
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ(-a + a, QuotientElement());
  QuotientElement scaled;
  scaled.add_scaled(a, 3);
  EXPECT_EQ(scaled.coord(ExponentVector::variable(y11)), 6);
  EXPECT_EQ(QuotientElement::one().to_polynomial(), constant(1));
  EXPECT_EQ(a.to_polynomial(), var(y11) * constant(2) - constant(1));
}

TEST(QuotientRingTest, RankIsProductOfFactorials) {
  EXPECT_EQ(QuotientRing::rank(corpus::point_line()), 2);
  EXPECT_EQ(QuotientRing::rank(corpus::full_flag3()), 6);
  EXPECT_EQ(QuotientRing::rank(corpus::hirzebruch()), 4);
  EXPECT_EQ(QuotientRing::rank(corpus::a2_negative()), 4);
  EXPECT_EQ(QuotientRing::rank(corpus::chain_flag()), 12);
  EXPECT_EQ(QuotientRing::rank(corpus::three_stage()), 24);
  EXPECT_EQ(QuotientRing::rank(corpus::twisted_cube()), 8);
}

TEST(QuotientRingTest, BasisEnumerationOrderAndBounds) {
  const QuotientRing engine(corpus::full_flag3());
  const auto& basis = engine.basis();
  ASSERT_EQ(basis.size(), 6u);
  // Exponent of y[1,k] is bounded by n_1 + 1 - k; the later slot varies
  // fastest in the enumeration.
  auto mono = [](std::int64_t e1, std::int64_t e2) {
    ExponentVector e;
    e.set_exponent(VarId{1, 1}, e1);
    e.set_exponent(VarId{1, 2}, e2);
    return e;
  };
  EXPECT_EQ(basis[0], mono(0, 0));
  EXPECT_EQ(basis[1], mono(0, 1));
  EXPECT_EQ(basis[2], mono(1, 0));
  EXPECT_EQ(basis[3], mono(1, 1));
  EXPECT_EQ(basis[4], mono(2, 0));
  EXPECT_EQ(basis[5], mono(2, 1));
  for (std::size_t i = 0; i < basis.size(); ++i)
    EXPECT_EQ(engine.basis_index(basis[i]), i);
}

TEST(QuotientRingTest, BasisSizeMatchesRankEverywhere) {
  for (const corpus::NamedSpec& named : corpus::all()) {
    const QuotientRing engine(named.spec);
    EXPECT_EQ(Int(engine.basis().size()), QuotientRing::rank(named.spec))
        << named.name;
  }
}

TEST(QuotientRingTest, RejectsOversizedTowers) {
  TowerSpec spec;
  spec.dims = {9};  // 10! basis monomials is past the configured cap
  try {
    QuotientRing engine(spec);
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
    EXPECT_NE(std::string(e.what()).find("dense engine"), std::string::npos);
  }
}

TEST(FiberChainTest, PointLineChain) {
  const QuotientRing engine(corpus::point_line());
  const FiberChain& chain = engine.chain(1);
  ASSERT_EQ(chain.size(), 2u);

  // p_{1,1}(t) = t^2 - 2t + 1
  EXPECT_EQ(chain[0].degree(), 2);
  EXPECT_EQ(chain[0].coeffs[0].to_polynomial(), constant(1));
  EXPECT_EQ(chain[0].coeffs[1].to_polynomial(), constant(-2));
  EXPECT_EQ(chain[0].coeffs[2].to_polynomial(), constant(1));

  // p_{1,2}(t) = t - (2 - y11)
  EXPECT_EQ(chain[1].degree(), 1);
  EXPECT_EQ(chain[1].coeffs[0].to_polynomial(), var(y11) - constant(2));
  EXPECT_EQ(chain[1].coeffs[1].to_polynomial(), constant(1));

  EXPECT_EQ(build_chain(corpus::point_line(), 1).size(), 2u);
  try {
    engine.chain(2);
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
  }
}

TEST(FiberChainTest, FullFlagChainCoefficients) {
  const QuotientRing engine(corpus::full_flag3());
  const FiberChain& chain = engine.chain(1);
  ASSERT_EQ(chain.size(), 3u);

  // p_{1,1}(t) = t^3 - 3t^2 + 3t - 1
  EXPECT_EQ(chain[0].coeffs[0].to_polynomial(), constant(-1));
  EXPECT_EQ(chain[0].coeffs[1].to_polynomial(), constant(3));
  EXPECT_EQ(chain[0].coeffs[2].to_polynomial(), constant(-3));
  EXPECT_EQ(chain[0].coeffs[3].to_polynomial(), constant(1));

  // p_{1,2}(t) = t^2 + (y11 - 3)t + (y11^2 - 3 y11 + 3)
  EXPECT_EQ(chain[1].coeffs[0].to_polynomial(),
            var(y11, 2) - constant(3) * var(y11) + constant(3));
  EXPECT_EQ(chain[1].coeffs[1].to_polynomial(), var(y11) - constant(3));
  EXPECT_EQ(chain[1].coeffs[2].to_polynomial(), constant(1));

  // p_{1,3}(t) = t + (y11 + y12 - 3)
  EXPECT_EQ(chain[2].coeffs[0].to_polynomial(),
            var(y11) + var(y12) - constant(3));
  EXPECT_EQ(chain[2].coeffs[1].to_polynomial(), constant(1));
}

TEST(FiberChainTest, ChainCoefficientsOnlyUseEarlierVariables) {
  // Coefficients of p_{j,k} may involve y[j,1..k-1] and lower stages only:
  // that containment is what makes the rewriting terminate.
  for (const corpus::NamedSpec& named : corpus::all()) {
    const QuotientRing engine(named.spec);
    for (int j = 1; j <= named.spec.stages(); ++j) {
      const FiberChain& chain = engine.chain(j);
      for (const FiberPolynomial& p : chain)
        for (const QuotientElement& c : p.coeffs)
          for (const auto& [e, coeff] : c.coords())
            for (const auto& [v, exp] : e.entries())
              EXPECT_TRUE(v.j < j || (v.j == j && v.k < p.k))
                  << named.name << ": coefficient of p_{" << j << "," << p.k
                  << "} touches " << v.expr_name();
    }
  }
}

TEST(ReduceTest, ClassicalOneStageValues) {
  const QuotientRing engine(corpus::point_line());
  const LaurentPolynomial square =
      (var(y11) - constant(1)) * (var(y11) - constant(1));
  EXPECT_TRUE(engine.reduce(square).is_zero());
  EXPECT_EQ(normal(engine, var(y11, 2)), constant(2) * var(y11) - constant(1));
  EXPECT_EQ(normal(engine, var(y12)), constant(2) - var(y11));
}

TEST(ReduceTest, FullFlagValues) {
  const QuotientRing engine(corpus::full_flag3());
  EXPECT_EQ(normal(engine, var(y11, 3)),
            constant(3) * var(y11, 2) - constant(3) * var(y11) + constant(1));
  EXPECT_EQ(normal(engine, var(y11, 4)),
            constant(6) * var(y11, 2) - constant(8) * var(y11) + constant(3));
  EXPECT_EQ(normal(engine, var(y12) * var(y13)),
            var(y11, 2) - constant(3) * var(y11) + constant(3));
  EXPECT_EQ(normal(engine, var(y13)),
            constant(3) - var(y11) - var(y12));
}

TEST(ReduceTest, TwoStageValues) {
  const QuotientRing hirz(corpus::hirzebruch());
  EXPECT_EQ(normal(hirz, var(y22)), var(y11) + constant(1) - var(y21));
  EXPECT_EQ(normal(hirz, var(y21) * var(y22)), var(y11));

  const QuotientRing neg(corpus::a2_negative());
  EXPECT_EQ(normal(neg, var(y22)), constant(3) - var(y11) - var(y21));
  EXPECT_EQ(normal(neg, var(y21) * var(y22)), constant(2) - var(y11));
}

TEST(ReduceTest, AllRelationsVanishInTheirQuotient) {
  for (const corpus::NamedSpec& named : corpus::all()) {
    const QuotientRing engine(named.spec);
    for (const Relation& rel : build_ideal(named.spec).relations)
      EXPECT_TRUE(engine.reduce(rel.poly).is_zero())
          << named.name << " stage " << rel.stage << " r=" << rel.r;
  }
}

TEST(ReduceTest, OutputStaysOnTheBasis) {
  const QuotientRing engine(corpus::chain_flag());
  const LaurentPolynomial p =
      (var(y21) + var(y11, -2)) * (var(y22, 3) - constant(5) * var(y12));
  const QuotientElement q = engine.reduce(p);
  for (const auto& [e, c] : q.coords())
    EXPECT_NO_THROW(engine.basis_index(e));
}

TEST(ReduceTest, IsIdempotentAndLinear) {
  const QuotientRing engine(corpus::twisted_cube());
  const LaurentPolynomial p = var(y21, 2) * var(VarId{3, 1}) - var(y11, -1);
  const LaurentPolynomial q = var(y22) * var(VarId{3, 2}, -2) + constant(4);
  const QuotientElement rp = engine.reduce(p);
  const QuotientElement rq = engine.reduce(q);
  EXPECT_EQ(engine.reduce(rp.to_polynomial()), rp);
  EXPECT_EQ(engine.reduce(p + q), rp + rq);
  EXPECT_EQ(engine.reduce(p * q), engine.multiply_elements(rp, rq));
}

TEST(InverseTest, PinnedInverses) {
  const QuotientRing line(corpus::point_line());
  EXPECT_EQ(line.invert_generator(y11).to_polynomial(),
            constant(2) - var(y11));
  // y12 = e_2 / y11, so its inverse is the class of y11.
  EXPECT_EQ(line.invert_generator(y12).to_polynomial(), var(y11));

  const QuotientRing flag(corpus::full_flag3());
  EXPECT_EQ(flag.invert_generator(y11).to_polynomial(),
            var(y11, 2) - constant(3) * var(y11) + constant(3));
}

TEST(InverseTest, NegativePowersReduceThroughInverses) {
  const QuotientRing engine(corpus::point_line());
  EXPECT_EQ(normal(engine, var(y11, -1)), constant(2) - var(y11));
  // y11^{-2} = (2 - y11)^2 = 4 - 4 y11 + y11^2 = 3 - 2 y11.
  EXPECT_EQ(normal(engine, var(y11, -2)), constant(3) - constant(2) * var(y11));
  EXPECT_TRUE(engine.reduce(var(y11, -1) * var(y11) - constant(1)).is_zero());
}

TEST(InverseTest, EveryGeneratorCancelsAgainstItsInverse) {
  for (const corpus::NamedSpec& named : corpus::all()) {
    const QuotientRing engine(named.spec);
    for (const VarId& v : named.spec.variables()) {
      const QuotientElement product = engine.reduce(
          var(v) * engine.invert_generator(v).to_polynomial());
      EXPECT_EQ(product, QuotientElement::one())
          << named.name << " " << v.expr_name();
    }
  }
}

TEST(InverseTest, RejectsOutOfRangeVariables) {
  const QuotientRing engine(corpus::point_line());
  try {
    engine.invert_generator(VarId{2, 1});
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
  }
}

TEST(MultMatrixTest, PointLinePinnedMatrices) {
  const QuotientRing engine(corpus::point_line());
  const auto m11 = engine.mult_matrix(y11);
  ASSERT_EQ(m11.size(), 2u);
  EXPECT_EQ(m11[0], (std::vector<Int>{0, -1}));
  EXPECT_EQ(m11[1], (std::vector<Int>{1, 2}));

  const auto m12 = engine.mult_matrix(y12);
  EXPECT_EQ(m12[0], (std::vector<Int>{2, 1}));
  EXPECT_EQ(m12[1], (std::vector<Int>{-1, 0}));
}

TEST(MultMatrixTest, DeterminantsAreUnits) {
  const QuotientRing engine(corpus::hirzebruch());
  for (const VarId& v : engine.spec().variables()) {
    const Int det = bareiss_determinant(engine.mult_matrix(v));
    EXPECT_TRUE(det == 1 || det == -1)
        << v.expr_name() << ": det " << det.str();
  }
}

TEST(MultMatrixTest, MatrixActionAgreesWithReduce) {
  const QuotientRing engine(corpus::a2_negative());
  const auto matrix = engine.mult_matrix(y21);
  const auto& basis = engine.basis();
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const QuotientElement direct =
        engine.reduce(var(y21) * LaurentPolynomial::monomial(basis[b]));
    for (std::size_t i = 0; i < basis.size(); ++i)
      EXPECT_EQ(direct.coord(basis[i]), matrix[i][b]) << "entry " << i << "," << b;
  }
}

TEST(StageProductTest, GeneratorProductsMatchTwistClasses) {
  // prod_k y[j,k] equals the monomial of column sums of the stage's twist
  // matrices; pinned here for the two-stage corpus members.
  const QuotientRing hirz(corpus::hirzebruch());
  EXPECT_EQ(normal(hirz, var(y21) * var(y22)), var(y11));

  const QuotientRing neg(corpus::a2_negative());
  EXPECT_EQ(normal(neg, var(y21) * var(y22)),
            normal(neg, var(y11, -1)));
}

TEST(ThreeStageTest, DeepTowerIsConsistent) {
  const QuotientRing engine(corpus::three_stage());
  EXPECT_EQ(engine.basis().size(), 24u);
  for (const Relation& rel : build_ideal(corpus::three_stage()).relations)
    EXPECT_TRUE(engine.reduce(rel.poly).is_zero())
        << "stage " << rel.stage << " r=" << rel.r;
  // Spot product check across all three stages.
  const LaurentPolynomial p = var(VarId{3, 1}) * var(y21) * var(y11, -1);
  const QuotientElement direct = engine.reduce(p);
  const QuotientElement stepwise = engine.multiply_elements(
      engine.reduce(var(VarId{3, 1})),
      engine.multiply_elements(engine.reduce(var(y21)),
                               engine.reduce(var(y11, -1))));
  EXPECT_EQ(direct, stepwise);
}

}  // namespace
}  // namespace kbott
