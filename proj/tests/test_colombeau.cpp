#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "soi/colombeau.hpp"
#include "soi/errors.hpp"

namespace soi {
namespace {

const TestFunction& bump() {
  static const TestFunction phi = make_Aq(0);
  return phi;
}

double peak(const TestFunction& phi) {
  return grid_sup([&](double y) { return phi(y); }, phi.support()).value;
}

std::shared_ptr<const IndexSet> special() { return make_index_set(IndexKind::special); }
std::shared_ptr<const IndexSet> full() { return make_index_set(IndexKind::full); }

RepNet delta() { return embed_delta(bump()); }
RepNet heaviside() { return embed_heaviside(bump()); }
RepNet smooth(std::vector<double> p) { return embed_smooth(std::move(p)); }

TEST(RepNet, DerivativeOfDeltaRaisesKernelOrder) {
  const RepNet d = rep_derive(delta());
  ASSERT_EQ(d.atoms().size(), 1u);
  EXPECT_EQ(d.atoms()[0].factors[0].j, 1);
  EXPECT_EQ(d.atoms()[0].power, Rational(-2));
}

TEST(RepNet, FormalProduct) {
  const RepNet xd = rep_mul(smooth({0.0, 1.0}), delta());
  ASSERT_EQ(xd.atoms().size(), 1u);
  const Atom& a = xd.atoms()[0];
  EXPECT_EQ(a.power, Rational(-1));
  EXPECT_EQ(a.poly, (std::vector<double>{0.0, 1.0}));
  ASSERT_EQ(a.factors.size(), 1u);
  EXPECT_EQ(a.factors[0].j, 0);
}

TEST(RepNet, LeibnizOnNormalFormsAndGrid) {
  auto S = special();
  const std::vector<RepNet> nets = {delta(), heaviside(), smooth({1.0, -2.0, 0.5}),
                                    rep_mul(smooth({0.0, 1.0}), rep_derive(delta())),
                                    embed_gauge_power(Rational(3, 2))};
  const IndexPoint eps = SpecialPoint{std::ldexp(1.0, -10)};
  for (const RepNet& u : nets)
    for (const RepNet& v : nets) {
      const RepNet lhs = rep_derive(rep_mul(u, v));
      const RepNet rhs = rep_add(rep_mul(rep_derive(u), v), rep_mul(u, rep_derive(v)));
      EXPECT_TRUE(rep_sub(lhs, rhs).is_zero()) << u.to_string() << " / " << v.to_string();
      const RepSlice a(lhs, eps, *S), b(rhs, eps, *S);
      for (int i = 0; i < 400; ++i) {
        const double x = -1.0 + 2.0 * i / 399.0 * 0.01;  // concentrate near the kernels
        EXPECT_NEAR(a(x), b(x), 1e-8 * std::max(1.0, std::abs(a(x))));
      }
    }
}

TEST(RepNet, DomainMismatch) {
  const RepNet a = embed_smooth({1.0}, Domain{-1.0, 1.0});
  const RepNet b = embed_smooth({1.0});
  EXPECT_THROW(rep_add(a, b), DomainError);
  EXPECT_THROW(rep_mul(a, b), DomainError);
}

TEST(Embedding, DeltaHasUnitIntegral) {
  auto S = special();
  for (double g : {0.5, 0.1, 1e-3}) {
    const RepSlice s(delta(), SpecialPoint{g}, *S);
    const double I = integrate([&](double x) { return s(x); }, -g, g).value;
    EXPECT_NEAR(I, 1.0, 1e-10) << g;
  }
}

TEST(Embedding, RejectsNonUnitMass) {
  EXPECT_THROW(embed_delta(TestFunction::base_bump()), PreconditionError);
  EXPECT_THROW(embed_heaviside(scale(1.0, TestFunction(0.0, 1.0, {2.0}))), PreconditionError);
}

TEST(Embedding, HeavisideTendsToStep) {
  auto S = special();
  for (int k = 1; k <= 20; ++k) {
    const RepSlice s(heaviside(), SpecialPoint{std::ldexp(1.0, -k)}, *S);
    EXPECT_NEAR(s(0.5), 1.0, 1e-8) << k;
    EXPECT_NEAR(s(-0.5), 0.0, 1e-8) << k;
  }
}

TEST(Embedding, DerivativeOfHeavisideIsDelta) {
  EXPECT_EQ(rep_derive(heaviside()), delta());
}

TEST(SupOnK, Examples) {
  auto S = special();
  const IndexPoint eps = SpecialPoint{std::ldexp(1.0, -10)};
  EXPECT_NEAR(sup_on_K(smooth({0.0, 0.0, 1.0}), {-1.0, 2.0}, 0, eps, *S), 4.0, 1e-12);
  const double expected = std::ldexp(1.0, 10) * peak(bump());
  EXPECT_NEAR(sup_on_K(delta(), {-1.0, 1.0}, 0, eps, *S), expected, 0.01 * expected);
  EXPECT_EQ(sup_on_K(delta(), {1.0, 2.0}, 0, SpecialPoint{0.5}, *S), 0.0);
}

TEST(SupOnK, FullInstanceDomainShrinks) {
  auto S = full();
  const RepNet u = embed_smooth({1.0}, Domain{-1.0, 1.0});
  const IndexPoint wide = FullIndexSet::point(0.5, make_Aq(0));
  const IndexPoint narrow = FullIndexSet::point(0.01, make_Aq(0));
  EXPECT_NO_THROW(sup_on_K(u, {-0.9, 0.9}, 0, narrow, *S));
  try {
    sup_on_K(u, {-0.9, 0.9}, 0, wide, *S);
    FAIL() << "expected a domain error";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("eps"), std::string::npos);
  }
}

TEST(SymbolicExponent, VanishingAndExcludedAtoms) {
  EXPECT_EQ(symbolic_exponent(delta(), {-1.0, 1.0}), 1.0);
  EXPECT_TRUE(std::isinf(symbolic_exponent(delta(), {1.0, 2.0})));
  EXPECT_EQ(symbolic_exponent(rep_mul(smooth({0.0, 1.0}), delta()), {-1.0, 1.0}), 0.0);
  EXPECT_EQ(symbolic_exponent(rep_mul(smooth({0.0, 0.0, 1.0}), delta()), {-1.0, 1.0}), -1.0);
  EXPECT_EQ(symbolic_exponent(heaviside(), {-1.0, 1.0}), 0.0);
  EXPECT_TRUE(std::isinf(symbolic_exponent(heaviside(), {-2.0, -1.0})));
}

TEST(Moderate, Delta) {
  auto S = special();
  const ModerateReport r = is_moderate(delta(), *S);
  EXPECT_TRUE(r.moderate);
  EXPECT_FALSE(r.indeterminate);
  for (int alpha = 0; alpha <= 3; ++alpha) EXPECT_EQ(r.N(alpha), 1 + alpha);
  for (const ModerateProbe& p : r.probes) EXPECT_NEAR(p.slope, -(1.0 + p.alpha), 0.1);
}

TEST(Moderate, SmoothAndDeltaSquared) {
  auto S = special();
  const ModerateReport s = is_moderate(smooth({1.0, 0.0, 3.0}), *S);
  EXPECT_TRUE(s.moderate);
  for (int alpha = 0; alpha <= 3; ++alpha) EXPECT_EQ(s.N(alpha), 0);
  const ModerateReport d2 = is_moderate(rep_mul(delta(), delta()), *S);
  EXPECT_TRUE(d2.moderate);
  EXPECT_EQ(d2.N(0), 2);
  for (const ModerateProbe& p : d2.probes)
    if (p.alpha == 0) EXPECT_NEAR(p.slope, -2.0, 0.1);
}

TEST(Moderate, MonotoneInAlpha) {
  auto S = special();
  for (const RepNet& u : {delta(), heaviside(), rep_mul(smooth({0.0, 1.0}), delta()),
                          rep_mul(delta(), delta()), smooth({0.0, 0.0, 1.0})}) {
    const ModerateReport r = is_moderate(u, *S);
    for (const ModerateProbe& p : r.probes)
      for (const ModerateProbe& q : r.probes)
        if (q.alpha == p.alpha + 1 && q.K.lo == p.K.lo) EXPECT_LE(q.N, p.N + 1);
  }
}

TEST(Moderate, CsvExport) {
  auto S = special();
  std::ostringstream out;
  write_csv(out, is_moderate(delta(), *S, ModerateOptions{.alpha_max = 0}));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "K_lo,K_hi,alpha,k,gauge,sup,slope");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2 * 13);
}

TEST(Moderate, SlopeFitNeedsThreeGauges) {
  auto S = special();
  EXPECT_THROW(is_moderate(delta(), *S, ModerateOptions{.k_min = 8, .k_max = 9}), DomainError);
}

TEST(Negligible, ExplicitGaugePower) {
  auto S = special();
  const RepNet u = rep_mul(embed_gauge_power(Rational(10)), smooth({0.0, 1.0}));
  const NegligibleReport r = is_negligible(u, *S);
  EXPECT_TRUE(r.negligible);
  EXPECT_FALSE(r.indeterminate);
  ASSERT_TRUE(r.derivatives_decay.has_value());
  EXPECT_TRUE(*r.derivatives_decay);
}

void expect_certificate(const NegligibleReport& r, const IndexSet& S) {
  ASSERT_TRUE(r.verdict.counterexample.has_value());
  const Counterexample& ce = *r.verdict.counterexample;
  ASSERT_GE(ce.terms.size(), 3u);
  for (std::size_t i = 0; i < ce.terms.size(); ++i) {
    EXPECT_GT(ce.terms[i].lhs, ce.terms[i].rhs);
    if (i > 0) EXPECT_TRUE(S.less(ce.terms[i].point, ce.terms[i - 1].point));
  }
}

TEST(Negligible, DeltaIsNot) {
  auto S = special();
  const NegligibleReport r = is_negligible(delta(), *S);
  EXPECT_FALSE(r.negligible);
  EXPECT_FALSE(r.indeterminate);
  EXPECT_EQ(r.failing_m, 0);
  expect_certificate(r, *S);
  // sup * u tends to the peak of the kernel.
  const double g = std::ldexp(1.0, -15);
  EXPECT_NEAR(sup_on_K(delta(), {-1.0, 1.0}, 0, SpecialPoint{g}, *S) * g, peak(bump()), 1e-9);
}

TEST(Negligible, XDeltaIsModerateButNot) {
  auto S = special();
  const RepNet xd = rep_mul(smooth({0.0, 1.0}), delta());
  EXPECT_EQ(is_moderate(xd, *S).N(0), 0);
  const NegligibleReport r = is_negligible(xd, *S);
  EXPECT_FALSE(r.negligible);
  EXPECT_EQ(r.failing_m, 1);
  expect_certificate(r, *S);
  const double limit =
      grid_sup([](double y) { return y * bump()(y); }, bump().support()).value;
  for (int k : {10, 20, 30})
    EXPECT_NEAR(sup_on_K(xd, {-1.0, 1.0}, 0, SpecialPoint{std::ldexp(1.0, -k)}, *S), limit,
                1e-9);
}

TEST(Negligible, InterpolationIdentity) {
  auto S = special();
  const std::vector<RepNet> nets = {
      rep_mul(embed_gauge_power(Rational(10)), smooth({0.0, 1.0, 1.0})),
      rep_mul(embed_gauge_power(Rational(6)), delta()), smooth({1.0, 0.0, -2.0}), delta()};
  for (const RepNet& u : nets)
    for (int k : {2, 4, 6}) {
      const double g = std::ldexp(1.0, -k);
      const IndexPoint eps = SpecialPoint{g};
      for (double x : {-0.3 * g, 0.1 * g, 0.25}) {
        const InterpolationCheck c = interpolation_identity(u, x, std::pow(g, 3), eps, *S);
        EXPECT_TRUE(c.holds()) << u.to_string() << " k=" << k << " x=" << x << " residual "
                               << c.residual << " bound " << c.bound;
      }
    }
}

TEST(GenEqual, Examples) {
  auto S = special();
  EXPECT_TRUE(gen_equal(delta(), delta(), *S).value);
  EXPECT_TRUE(gen_equal(rep_derive(heaviside()), delta(), *S).value);
  const RepNet phi = embed_delta(make_Aq(1, 1.0));
  const RepNet psi = embed_delta(make_Aq(1, 0.5));
  const Decision d = gen_equal(phi, psi, *S);
  EXPECT_FALSE(d.value);
  EXPECT_FALSE(d.indeterminate);
  // The full instance takes the kernel from the index, so both agree there.
  EXPECT_TRUE(gen_equal(phi, psi, *full()).value);
  const RepNet tiny = rep_mul(embed_gauge_power(Rational(12)), smooth({0.0, 1.0}));
  EXPECT_TRUE(gen_equal(rep_add(delta(), tiny), delta(), *S).value);
}

TEST(GenEqual, PolynomialsFormASubalgebra) {
  auto S = special();
  const std::vector<double> P = {1.0, -1.0, 2.0}, Q = {0.5, 3.0};
  std::vector<double> PQ(P.size() + Q.size() - 1, 0.0);
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = 0; j < Q.size(); ++j) PQ[i + j] += P[i] * Q[j];
  EXPECT_TRUE(gen_equal(rep_mul(smooth(P), smooth(Q)), smooth(PQ), *S).value);
}

std::vector<RepNet> small_corpus() {
  const RepNet tiny = rep_mul(embed_gauge_power(Rational(12)), smooth({0.0, 1.0}));
  return {delta(), rep_add(delta(), tiny), rep_derive(heaviside()), tiny, RepNet(),
          smooth({0.0, 1.0})};
}

TEST(GenEqual, EquivalenceOnCorpus) {
  auto S = special();
  const auto c = small_corpus();
  const int n = static_cast<int>(c.size());
  std::vector<std::vector<int>> eq(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Decision d = gen_equal(c[i], c[j], *S);
      ASSERT_FALSE(d.indeterminate) << i << " " << j << " " << d.note;
      eq[i][j] = d.value;
    }
  for (int i = 0; i < n; ++i) {
    EXPECT_TRUE(eq[i][i]);
    for (int j = 0; j < n; ++j) {
      EXPECT_EQ(eq[i][j], eq[j][i]);
      for (int k = 0; k < n; ++k)
        if (eq[i][j] && eq[j][k]) EXPECT_TRUE(eq[i][k]) << i << j << k;
    }
  }
  EXPECT_TRUE(eq[0][1]);
  EXPECT_TRUE(eq[0][2]);
  EXPECT_TRUE(eq[3][4]);
  EXPECT_FALSE(eq[0][5]);
}

TEST(Negligible, IdealWithinCorpus) {
  auto S = special();
  const std::vector<RepNet> negligible = {
      rep_mul(embed_gauge_power(Rational(10)), smooth({0.0, 1.0})),
      rep_mul(embed_gauge_power(Rational(12)), delta())};
  const std::vector<RepNet> moderate = {delta(), rep_derive(delta()), heaviside(),
                                        smooth({2.0, 0.0, 1.0})};
  for (const RepNet& n : negligible) {
    ASSERT_TRUE(is_negligible(n, *S).negligible);
    for (const RepNet& m : moderate) {
      const NegligibleReport r = is_negligible(rep_mul(n, m), *S);
      EXPECT_TRUE(r.negligible) << n.to_string() << " * " << m.to_string() << ": " << r.note;
    }
  }
}

TEST(ForallSmall, Examples) {
  auto S = special();
  auto g = [&](const IndexPoint& p) { return S->gauge(p); };
  EXPECT_TRUE(forall_small([&](const IndexPoint& p) { return g(p) < 0.1; }, *S).value);
  const Decision no = forall_small([&](const IndexPoint& p) { return g(p) > 0.1; }, *S);
  EXPECT_FALSE(no.value);
  EXPECT_FALSE(no.indeterminate);
  EXPECT_TRUE(forall_small([&](const IndexPoint& p) {
                const double x = 0.3 + g(p);
                return 0.2 <= x && x <= 0.45;
              }, *S).value);
  const Decision osc = forall_small(
      [&](const IndexPoint& p) { return static_cast<long>(std::round(-std::log2(g(p)))) % 2 == 0; },
      *S);
  EXPECT_TRUE(osc.indeterminate);
}

TEST(ForallSmall, FullInstance) {
  auto S = full();
  EXPECT_TRUE(forall_small([&](const IndexPoint& p) { return S->gauge(p) < 0.01; }, *S).value);
}

SymbolicNet net(const std::string& s) { return parse_net(s); }

TEST(GenPoint, CompactSupport) {
  auto S = special();
  const GenPoint p = make_gen_point(net("0.3 + u"), Domain{0.0, 1.0}, *S, Interval{0.2, 0.45});
  EXPECT_TRUE(p.compact());
  EXPECT_EQ(p.N, 0);
  const GenPoint q = make_gen_point(net("0.3 + u"), Domain{0.0, 1.0}, *S);
  ASSERT_TRUE(q.compact());
  EXPECT_TRUE(q.K->contains(0.3));
  EXPECT_THROW(make_gen_point(net("0.3 + u"), Domain{0.0, 1.0}, *S, Interval{0.35, 0.45}),
               DomainError);
  EXPECT_THROW(make_gen_point(net("u^-1"), Domain{0.0, 1.0}, *S), DomainError);
  const GenPoint r = make_gen_point(net("u^-1"), Domain{}, *S);
  EXPECT_FALSE(r.compact());
  EXPECT_EQ(r.N, 1);
}

TEST(GenPoint, EquivalentRepresentatives) {
  auto S = special();
  const SymbolicNet d = net("0.3 + u") - net("0.3 + u + u^10");
  EXPECT_TRUE(bigo_symbolic(d, net("u^4")).holds);
  const GenPoint x = make_gen_point(net("0.3 + u"), Domain{}, *S);
  const GenPoint y = make_gen_point(net("0.3 + u + u^10"), Domain{}, *S);
  for (const RepNet& u : {smooth({0.0, 0.0, 1.0}), delta(), heaviside()}) {
    const GenNumber a = eval_at(u, x, *S).value, b = eval_at(u, y, *S).value;
    const GenNumber diff{[a, b](const IndexPoint& p) { return a.rep(p) - b.rep(p); }, 0};
    EXPECT_TRUE(is_zero(diff, *S).value) << u.to_string();
  }
}

TEST(EvalAt, Examples) {
  auto S = special();
  const GenPoint x = make_gen_point(net("0.3 + u"), Domain{0.0, 1.0}, *S);
  const PointValue sq = eval_at(embed_smooth({0.0, 0.0, 1.0}, Domain{0.0, 1.0}), x, *S);
  EXPECT_TRUE(sq.well_defined.value);
  for (double g : {0.1, 1e-3}) EXPECT_NEAR(sq.value.rep(SpecialPoint{g}), (0.3 + g) * (0.3 + g), 1e-15);
  const Leading lead = leading_behavior(sq.value, *S);
  EXPECT_NEAR(lead.coefficient, 0.09, 1e-3);
  EXPECT_EQ(lead.exponent, 0.0);

  const RepNet d = RepNet(delta().atoms(), Domain{-1.0, 1.0});
  const GenPoint zero = make_gen_point(SymbolicNet(), Domain{-1.0, 1.0}, *S);
  const PointValue dv = eval_at(d, zero, *S);
  EXPECT_TRUE(dv.well_defined.value);
  EXPECT_EQ(dv.value.N, 1);
  EXPECT_NEAR(dv.value.rep(SpecialPoint{0.01}), bump()(0.0) / 0.01, 1e-9);
  EXPECT_FALSE(is_zero(dv.value, *S).value);

  const RepNet tiny = rep_mul(embed_gauge_power(Rational(10)), smooth({0.0, 1.0}));
  const GenPoint any = make_gen_point(net("0.5 - u"), Domain{}, *S);
  EXPECT_TRUE(is_zero(eval_at(tiny, any, *S).value, *S).value);
}

TEST(EvalAt, Preconditions) {
  auto S = special();
  const GenPoint far = make_gen_point(net("u^-1"), Domain{}, *S);
  EXPECT_THROW(eval_at(delta(), far, *S), PreconditionError);
  auto T = make_index_set(IndexKind::trivial);
  const GenPoint zero = make_gen_point(SymbolicNet(), Domain{}, *T);
  EXPECT_THROW(eval_at(delta(), zero, *T), UnsupportedError);
}

TEST(ZeroTest, DeltaWitnessAtOrigin) {
  auto S = special();
  const ZeroTestReport r = zero_test_by_points(delta(), *S);
  EXPECT_FALSE(r.zero);
  EXPECT_FALSE(r.indeterminate);
  EXPECT_TRUE(r.agrees_with_negligible);
  ASSERT_TRUE(r.witness.has_value());
  for (int k : {5, 10, 20}) EXPECT_NEAR(r.witness->rep(SpecialPoint{std::ldexp(1.0, -k)}), 0.0, 1e-12);
}

TEST(ZeroTest, NegligibleNetIsZero) {
  auto S = special();
  const RepNet u = rep_mul(embed_gauge_power(Rational(10), Domain{-1.0, 1.0}),
                           embed_smooth({0.0, 1.0}, Domain{-1.0, 1.0}));
  const ZeroTestReport r = zero_test_by_points(u, *S);
  EXPECT_TRUE(r.zero);
  EXPECT_TRUE(r.agrees_with_negligible);
  EXPECT_FALSE(r.witness.has_value());
}

TEST(FullForms, AgreeOnSmallCorpus) {
  auto S = full();
  for (const RepNet& u : {delta(), rep_mul(smooth({0.0, 1.0}), delta()), smooth({1.0, 1.0})}) {
    const FullFormsReport r = full_moderate_forms(u, *S, FullFormsOptions{.alpha_max = 0});
    EXPECT_TRUE(r.identical()) << u.to_string();
    EXPECT_TRUE(r.exists_N_q.moderate);
  }
  EXPECT_THROW(full_moderate_forms(delta(), *special()), KindMismatch);
}

TEST(Parse, BuiltIns) {
  EXPECT_EQ(parse_repnet("delta()"), delta());
  EXPECT_EQ(parse_repnet("dH()"), delta());
  EXPECT_EQ(parse_repnet("heaviside()"), heaviside());
  EXPECT_EQ(parse_repnet("x*delta()"), rep_mul(smooth({0.0, 1.0}), delta()));
  EXPECT_EQ(parse_repnet("smooth(1 + 2*x^2)"), smooth({1.0, 0.0, 2.0}));
  EXPECT_EQ(parse_repnet("scale-embed(3)"), embed_delta(make_Aq(3)));
  EXPECT_EQ(parse_repnet("D(heaviside()) - delta()"), RepNet());
  EXPECT_EQ(parse_repnet("u^10 * x"), rep_mul(embed_gauge_power(Rational(10)), smooth({0.0, 1.0})));
  EXPECT_EQ(parse_repnet("x", Domain{0.0, 1.0}).domain(), (Domain{0.0, 1.0}));
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_repnet("delta("), ParseError);
  EXPECT_THROW(parse_repnet("smooth(delta())"), ParseError);
  EXPECT_THROW(parse_repnet("scale-embed(9)"), ParseError);
  try {
    parse_repnet("x + * x");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
}

}  // namespace
}  // namespace soi
