#include "mcduff/verify.hpp"
#include "oracles/float256.hpp"
#include "oracles/print.hpp"

#include <gtest/gtest.h>

using namespace mcduff;
using verify::McDuffParams;
using verify::TraceMode;

namespace {

// (num/den)^e >= 4 by big-integer cross-multiplication.
bool ratio_power_reaches_four(long num, long den, unsigned long e) {
  return mcduff::pow(Integer(num), e) >= 4 * mcduff::pow(Integer(den), e);
}

std::vector<const CertificateItem*> with_prefix(const Certificate& c, std::string_view prefix) {
  std::vector<const CertificateItem*> out;
  for (const auto& it : c.items)
    if (it.name.starts_with(prefix)) out.push_back(&it);
  return out;
}

McDuffParams theorem_params() {
  McDuffParams p;
  p.epsilon = Rational(1, 4);
  p.delta = Rational(1, 200);
  p.T_size = 400;
  p.D_size = 10000;
  p.mode = TraceMode::Bounded;
  p.displacements = {{"h0", 2}, {"h1", 1}, {"h2", 0}};
  return p;
}

// Independent check of an exact item against the float oracle.
void expect_oracle_agrees(const CertificateItem& it) {
  if (it.relation == Relation::Holds || it.value.starts_with("[")) return;
  const auto v = oracle::evaluate(ExactScalar::parse(it.value));
  const auto b = oracle::evaluate(ExactScalar::parse(it.bound));
  const auto tol = oracle::Float256(1e-60);
  switch (it.relation) {
    case Relation::LessEq: EXPECT_EQ(it.pass, v <= b + tol) << it.name; break;
    case Relation::GreaterEq: EXPECT_EQ(it.pass, v + tol >= b) << it.name; break;
    case Relation::Equal: EXPECT_EQ(it.pass, abs(v - b) <= tol) << it.name; break;
    default: break;
  }
}

}  // namespace

TEST(ChooseDelta, QuarterAccuracy) {
  // delta = 1/b works iff (128/127)^(b-1) >= 4
  EXPECT_TRUE(ratio_power_reaches_four(128, 127, 199));
  EXPECT_FALSE(ratio_power_reaches_four(128, 127, 99));
  EXPECT_TRUE(ratio_power_reaches_four(128, 127, 177));
  EXPECT_FALSE(ratio_power_reaches_four(128, 127, 176));
  EXPECT_EQ(verify::choose_delta(Rational(1, 4)), Rational(1, 178));
}

TEST(ChooseDelta, Range) {
  EXPECT_EQ(verify::choose_delta(Rational(31)), Rational(1, 2));
  EXPECT_THROW(verify::choose_delta(Rational(0)), std::invalid_argument);
  EXPECT_THROW(verify::choose_delta(Rational(32)), std::invalid_argument);
  EXPECT_THROW(verify::choose_delta(Rational(1, 1000000), 100), std::invalid_argument);
}

TEST(ChooseShiftDelta, TenthAccuracy) {
  // 1 - 2^(-2/(b-1)) <= 1/80 iff (80/79)^(b-1) >= 4
  EXPECT_TRUE(ratio_power_reaches_four(80, 79, 111));
  EXPECT_FALSE(ratio_power_reaches_four(80, 79, 110));
  EXPECT_EQ(verify::choose_shift_delta(Rational(1, 10)), Rational(1, 112));
  EXPECT_EQ(verify::choose_shift_delta(Rational(8)), Rational(1, 2));
}

TEST(SizeConditions, WindowAtFourHundred) {
  const auto items = verify::check_size_conditions(400, Rational(1, 200), Rational(1, 4));
  Certificate c;
  c.items = items;
  const auto* theta1 = c.find("theta_window(r=|T|,theta=1)");
  ASSERT_NE(theta1, nullptr);
  EXPECT_TRUE(theta1->pass);
  const auto* ceil = c.find("ceil_condition");
  ASSERT_NE(ceil, nullptr);
  EXPECT_TRUE(ceil->pass);  // (1 - delta)|T| = 398 is an integer
  EXPECT_EQ(with_prefix(c, "theta_window").size(), 4U);
}

TEST(SizeConditions, WindowFailsAtTen) {
  Certificate c;
  c.items = verify::check_size_conditions(10, Rational(1, 200), Rational(1, 100));
  const auto* theta1 = c.find("theta_window(r=|T|,theta=1)");
  ASSERT_NE(theta1, nullptr);
  EXPECT_FALSE(theta1->pass);
  EXPECT_FALSE(theta1->undecided);
  EXPECT_THROW(verify::check_size_conditions(1, Rational(1, 2), Rational(1, 4)), std::invalid_argument);
}

TEST(McDuff, BoundedTheoremScale) {
  const auto c = verify::mcduff_certificate(theorem_params());
  EXPECT_TRUE(c.pass()) << c.to_json();
  const auto* nc = c.find("noncommutation");
  ASSERT_NE(nc, nullptr);
  EXPECT_TRUE(nc->pass);
  EXPECT_EQ(nc->relation, Relation::GreaterEq);
  EXPECT_EQ(ExactScalar::parse(nc->bound), ExactScalar(Rational(1, 4)));
  for (const auto* it : with_prefix(c, "centrality[")) {
    EXPECT_TRUE(it->pass) << it->name;
    EXPECT_EQ(ExactScalar::parse(it->bound), ExactScalar(Rational(1, 4)));
  }
  for (const auto& it : c.items) EXPECT_FALSE(it.undecided) << it.name;
  EXPECT_TRUE(c.revalidate().empty());
}

TEST(McDuff, EnumeratedNineRecordsMixedResults) {
  McDuffParams p;
  p.epsilon = Rational(1, 4);
  p.delta = Rational(1, 20);
  p.T_size = 40;
  p.D_size = 9;
  p.mode = TraceMode::Enumerated;
  p.displacements = {{"h0", 1}};
  const auto c = verify::mcduff_certificate(p);
  ASSERT_NE(c.find("pqv_identities"), nullptr);
  EXPECT_TRUE(c.find("pqv_identities")->pass);
  EXPECT_TRUE(c.find("trace_v_equals_trace_pq")->pass);
  for (const auto* it : with_prefix(c, "bounded_consistency")) EXPECT_TRUE(it->pass) << it->name;
  EXPECT_FALSE(c.pass());
  EXPECT_FALSE(c.find("delta_condition")->pass);
}

TEST(McDuff, ZeroDisplacementIsCentral) {
  auto p = theorem_params();
  p.displacements = {{"h0", 0}, {"h1", 0}};
  const auto c = verify::mcduff_certificate(p);
  for (const auto* it : with_prefix(c, "centrality[")) EXPECT_TRUE(it->pass);
  McDuffParams e;
  e.epsilon = Rational(1, 4);
  e.delta = Rational(1, 20);
  e.T_size = 40;
  e.D_size = 9;
  e.mode = TraceMode::Enumerated;
  e.displacements = {{"h0", 0}};
  const auto ce = verify::mcduff_certificate(e);
  EXPECT_EQ(ce.find("centrality[h0]")->value, "0");
}

TEST(McDuff, LargerEpsilonNeverBreaksAPass) {
  for (const Rational eps : {Rational(1, 4), Rational(1, 3), Rational(1, 2)}) {
    auto p = theorem_params();
    p.epsilon = eps;
    EXPECT_TRUE(verify::mcduff_certificate(p).pass()) << to_string(eps);
  }
}

TEST(McDuff, InconsistentParameters) {
  auto p = theorem_params();
  p.displacements = {{"h0", 401}};
  EXPECT_THROW(verify::mcduff_certificate(p), std::invalid_argument);
  p = theorem_params();
  p.D_size = 4;
  EXPECT_THROW(verify::mcduff_certificate(p), std::invalid_argument);
}

TEST(Shift, IntegersWithSymmetricF) {
  const auto Z = groups::Group::free_abelian(1);
  const auto act = groups::make_translation_action(Z);
  const std::vector<groups::Element> F{Z.identity(), Z.vector({1}), Z.vector({-1})};
  const auto c = verify::shift_certificate(*act, {}, F, Rational(1, 10));
  EXPECT_TRUE(c.pass()) << c.to_json();
  EXPECT_EQ(ExactScalar::parse(c.find("commutator_norm_sq")->value), ExactScalar(Rational(1, 2)));
  for (const auto* it : with_prefix(c, "centrality_uniform[")) EXPECT_TRUE(it->pass);
  const auto* uniform = c.find("delta_condition");  // 8(1 - 2^(-2 delta/(1-delta))) <= eps
  ASSERT_NE(uniform, nullptr);
  EXPECT_TRUE(uniform->pass);
  EXPECT_EQ(ExactScalar::parse(uniform->bound), ExactScalar(Rational(1, 10)));
  for (const auto& it : c.items) expect_oracle_agrees(it);
}

TEST(Shift, AvoidsForbiddenSupports) {
  const auto Z = groups::Group::free_abelian(1);
  const auto act = groups::make_translation_action(Z);
  const std::vector<groups::Element> F{Z.identity(), Z.vector({1}), Z.vector({-1})};
  std::vector<groups::Element> Y;
  for (long i = 0; i <= 9; ++i) Y.push_back(Z.vector({i}));
  const auto c = verify::shift_certificate(*act, Y, F, Rational(1, 10));
  EXPECT_TRUE(c.pass());
  EXPECT_TRUE(c.find("T_avoids_Y")->pass);
}

TEST(Shift, HugeEpsilon) {
  const auto Z = groups::Group::free_abelian(1);
  const auto act = groups::make_translation_action(Z);
  const std::vector<groups::Element> F{Z.identity(), Z.vector({1}), Z.vector({-1})};
  EXPECT_TRUE(verify::shift_certificate(*act, {}, F, Rational(8)).pass());
}

TEST(FreeExample, CommutatorNormSquaredIsTwo) {
  const auto F2 = groups::Group::free(2);
  const auto a = F2.parse_element("a");
  const auto b = F2.parse_element("b");
  const std::vector<std::pair<groups::Element, long>> supports{{a, 1}, {b, 2}};
  const std::vector<verify::BilateralElement> F{{a, {{1, b}}}, {F2.parse_element("ab"), {{2, a}}}};
  const auto c = verify::free_example_check(3, supports, F);
  EXPECT_TRUE(c.pass()) << c.to_json();
  EXPECT_EQ(c.find("commutator_norm_sq")->value, "2");
  EXPECT_EQ(with_prefix(c, "conjugation_fixed").size(), 4U);
  EXPECT_EQ(with_prefix(c, "tensor_fixed").size(), 4U);
  EXPECT_THROW(verify::free_example_check(1, supports, F), std::invalid_argument);
  EXPECT_THROW(verify::free_example_check(2, supports, F), std::invalid_argument);
}
