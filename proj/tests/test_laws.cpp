#include <gtest/gtest.h>

#include "soi/errors.hpp"
#include "soi/laws.hpp"

namespace soi {
namespace {

void expect_all_pass(const LawReport& r) {
  for (const auto& l : r.laws) {
    EXPECT_TRUE(l.ok()) << l.law << ": " << l.passed << " passed, " << l.failed
                        << " failed, " << l.indeterminate << " indeterminate"
                        << (l.counterexamples.empty() ? "" : "; " + l.counterexamples[0]);
  }
}

TEST(Laws, SpecialInstancePasses) {
  expect_all_pass(law_suite(3, 60, SpecialIndexSet{}));
}

TEST(Laws, FullInstancePasses) {
  expect_all_pass(law_suite(4, 40, FullIndexSet{}));
}

TEST(Laws, NsaAndTrivialInstancesPass) {
  expect_all_pass(law_suite(5, 20, NsaIndexSet{}, {4, 3}));
  expect_all_pass(law_suite(6, 20, TrivialIndexSet{}, {4, 3}));
}

TEST(Laws, NegativeControlFails) {
  const LawReport r = law_suite(9, 20, SpecialIndexSet{}, {4, 0});
  const LawResult& nc = r.law("(vii) without x, y >= 0");
  EXPECT_TRUE(nc.negative_control);
  EXPECT_EQ(nc.failed, nc.trials);
  EXPECT_EQ(nc.passed, 0);
}

TEST(Laws, Deterministic) {
  const LawReport a = law_suite(11, 10, SpecialIndexSet{}, {4, 2});
  const LawReport b = law_suite(11, 10, SpecialIndexSet{}, {4, 2});
  ASSERT_EQ(a.laws.size(), b.laws.size());
  for (std::size_t i = 0; i < a.laws.size(); ++i) {
    EXPECT_EQ(a.laws[i].law, b.laws[i].law);
    EXPECT_EQ(a.laws[i].passed, b.laws[i].passed);
    EXPECT_EQ(a.laws[i].counterexamples, b.laws[i].counterexamples);
  }
}

TEST(Laws, RejectsZeroTrials) {
  EXPECT_THROW(law_suite(1, 0, SpecialIndexSet{}), PreconditionError);
}

TEST(Laws, BoundedNetsAreBounded) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const SymbolicNet b = random_bounded_net(rng);
    EXPECT_TRUE(decide_symbolic(b, SymbolicNet::constant(1.0)).holds) << b.to_string();
  }
}

}  // namespace
}  // namespace soi
