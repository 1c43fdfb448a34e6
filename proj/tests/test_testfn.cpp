#include <gtest/gtest.h>

#include <cmath>

#include "soi/errors.hpp"
#include "soi/testfn.hpp"

namespace soi {
namespace {

// Reference values computed independently with 30-digit mpmath quadrature.
constexpr double kBumpMass = 0.443993816168079437823048921171;
constexpr double kBumpM2 = 0.0702014767529754099883759076064;
constexpr double kBumpM4 = 0.0235235995711447684167916679361;
constexpr double kBumpM6 = 0.0102398235135444272909103274877;

TestFunction sample_fn() { return TestFunction(0.25, 0.8, {1.0, -0.5, 0.3}); }

TEST(TestFunction, BaseBumpMoments) {
  EXPECT_NEAR(base_bump_moment(0), kBumpMass, 1e-15);
  EXPECT_NEAR(base_bump_moment(2), kBumpM2, 1e-15);
  EXPECT_NEAR(base_bump_moment(4), kBumpM4, 1e-15);
  EXPECT_NEAR(base_bump_moment(6), kBumpM6, 1e-15);
  EXPECT_EQ(base_bump_moment(3), 0.0);
  EXPECT_NEAR(TestFunction::base_bump().mass(), kBumpMass, 1e-15);
}

TEST(TestFunction, DerivativesOfBump) {
  const TestFunction B = TestFunction::base_bump();
  EXPECT_NEAR(eval(B, 0.3, 0), 0.333237077156223803736783722945, 1e-14);
  EXPECT_NEAR(eval(B, 0.3, 1), -0.24144698260322941944459634557, 1e-13);
  EXPECT_NEAR(eval(B, 0.3, 2), -0.948274447232503902717436116302, 1e-12);
  EXPECT_NEAR(eval(B, 0.3, 3), -1.49897836397149910506491336192, 1e-11);
}

TEST(TestFunction, VanishesOutsideSupport) {
  const TestFunction phi = sample_fn();
  EXPECT_EQ(phi(phi.support().hi), 0.0);
  EXPECT_EQ(phi(phi.support().lo), 0.0);
  EXPECT_EQ(phi(5.0), 0.0);
  EXPECT_EQ(eval(phi, 1.2, 3), 0.0);
  EXPECT_GT(std::abs(phi(0.25)), 0.0);
}

TEST(TestFunction, DerivativeOrderBounds) {
  const TestFunction phi = sample_fn();
  EXPECT_THROW(eval(phi, 0.0, 5), DomainError);
  EXPECT_THROW(eval(phi, 0.0, -1), DomainError);
  EXPECT_NO_THROW(eval(phi, 0.0, 6, 6));
}

TEST(TestFunction, JetMatchesFiniteDifferences) {
  const TestFunction phi = sample_fn();
  const double h = 1e-5;
  for (double y : {-0.3, 0.1, 0.5, 0.9}) {
    const double fd = (phi(y + h) - phi(y - h)) / (2 * h);
    EXPECT_NEAR(eval(phi, y, 1), fd, 1e-7);
    const double fd2 = (eval(phi, y + h, 1) - eval(phi, y - h, 1)) / (2 * h);
    EXPECT_NEAR(eval(phi, y, 2), fd2, 1e-6);
  }
}

TEST(TestFunction, MomentsAgreeBetweenRoutes) {
  const TestFunction phi = sample_fn();
  for (int j = 0; j <= 6; ++j)
    EXPECT_NEAR(moment(phi, j), moment_closed_form(phi, j), 1e-12) << "j = " << j;
  EXPECT_NEAR(phi.mass(), moment(phi, 0), 1e-13);
}

TEST(TestFunction, ScaleIsAnAction) {
  const TestFunction phi = sample_fn();
  EXPECT_EQ(scale(1.0, phi), phi);
  EXPECT_EQ(scale(2.0, scale(3.0, phi)), scale(6.0, phi));
  EXPECT_NEAR(diam_supp(scale(0.5, phi)), 0.5 * diam_supp(phi), 1e-12);
  EXPECT_NEAR(scale(0.37, phi).mass(), phi.mass(), 1e-13);
  EXPECT_THROW(scale(0.0, phi), DomainError);
  EXPECT_THROW(scale(-1.0, phi), DomainError);
  // r (.) phi (y) = phi(y / r) / r
  const TestFunction s = scale(0.4, phi);
  for (double y : {-0.1, 0.05, 0.2}) EXPECT_NEAR(s(y), phi(y / 0.4) / 0.4, 1e-14);
}

TEST(TestFunction, TranslateIsAnAction) {
  const TestFunction phi = sample_fn();
  EXPECT_EQ(translate(0.0, phi), phi);
  EXPECT_EQ(translate(0.3, translate(-0.7, phi)), translate(-0.4, phi));
  EXPECT_EQ(translate(0.5, phi).mass(), phi.mass());
  for (double y : {-0.1, 0.4, 0.8}) EXPECT_NEAR(translate(0.3, phi)(y), phi(y - 0.3), 1e-15);
}

TEST(TestFunction, ZeroFunctionHasNoDiameter) {
  const TestFunction z(0.0, 1.0, {0.0});
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(diam_supp(z), 0.0);
  EXPECT_EQ(diam_supp(sample_fn()), 1.6);
}

TEST(TestFunction, CumulativeIntegral) {
  const TestFunction B = TestFunction::base_bump();
  EXPECT_EQ(cumulative(B, -1.0), 0.0);
  EXPECT_NEAR(cumulative(B, 0.0), kBumpMass / 2, 1e-14);
  EXPECT_NEAR(cumulative(B, 2.0), kBumpMass, 1e-14);
}

TEST(Mollifier, MomentsVanish) {
  for (int q = 0; q <= 6; ++q) {
    const TestFunction phi = make_Aq(q, 1.0);
    EXPECT_NEAR(phi.mass(), 1.0, 1e-12);
    for (int j = 1; j <= q; ++j) EXPECT_NEAR(moment(phi, j), 0.0, 1e-10) << q << " " << j;
    EXPECT_TRUE(in_Aq(phi, q));
  }
}

TEST(Mollifier, MembershipIsScaleInvariant) {
  const TestFunction phi = make_Aq(3, 0.5);
  EXPECT_TRUE(in_Aq(phi, 3));
  EXPECT_TRUE(in_Aq(scale(7.0, phi), 3));
  EXPECT_FALSE(in_Aq(translate(0.2, phi), 1));
  EXPECT_TRUE(in_Aq(translate(0.2, phi), 0));
}

TEST(Mollifier, RejectsOrdersBeyondMax) {
  EXPECT_THROW(make_Aq(7, 1.0), PreconditionError);
  EXPECT_THROW(make_Aq(-1, 1.0), PreconditionError);
}

TEST(TestFunction, Serialization) {
  EXPECT_EQ(TestFunction(0.0, 1.0, {1.0, 0.5}).to_string(), "bump(0, 1; 1, 0.5)");
}

}  // namespace
}  // namespace soi
