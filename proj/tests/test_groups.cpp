#include "mcduff/groups.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mcduff;
using groups::Element;
using groups::Group;

namespace {

std::vector<Element> box(const Group& g, const std::vector<long>& lo, const std::vector<long>& hi) {
  std::vector<Element> out;
  std::vector<long> cur = lo;
  while (true) {
    out.push_back(g.vector(cur));
    std::size_t k = 0;
    while (k < cur.size() && ++cur[k] > hi[k]) cur[k] = lo[k], ++k;
    if (k == cur.size()) break;
  }
  return out;
}

}  // namespace

TEST(Group, FreeGroupReduction) {
  const auto F2 = Group::free(2);
  const auto a = F2.parse_element("a");
  const auto b = F2.parse_element("b");
  EXPECT_EQ(F2.multiply(a, F2.inverse(a)), F2.identity());
  EXPECT_EQ(F2.format(F2.commutator(a, b)), "ABab");
  EXPECT_EQ(F2.parse_element("aAbB"), F2.identity());
}

TEST(Group, PermutationsAndProducts) {
  const auto S3 = Group::symmetric(3);
  const auto t = S3.generator(0);
  EXPECT_EQ(S3.power(t, 2), S3.identity());
  EXPECT_THROW(Group::alternating(4).validate(S3.parse_element("[1,0,2]")), std::invalid_argument);
  const auto P = Group::parse("F2 x Z^2");
  ASSERT_EQ(P.factors().size(), 2U);
  const auto x = P.parse_element("ab|(1,-2)");
  EXPECT_EQ(P.format(x), "ab | (1,-2)");
  EXPECT_EQ(P.multiply(x, P.inverse(x)), P.identity());
}

TEST(InvarianceDefect, IdentityOnlyKIsZero) {
  const auto Z2 = Group::free_abelian(2);
  const auto act = groups::make_translation_action(Z2);
  const auto T = box(Z2, {0, 0}, {4, 6});
  const std::vector<Element> K{Z2.identity()};
  EXPECT_EQ(groups::invariance_defect(*act, T, K), 0);
}

TEST(InvarianceDefect, TenByTenBox) {
  const auto Z2 = Group::free_abelian(2);
  const auto act = groups::make_translation_action(Z2);
  const auto T = box(Z2, {0, 0}, {9, 9});
  const std::vector<Element> K{Z2.identity(), Z2.vector({1, 0}), Z2.vector({0, 1})};
  EXPECT_EQ(groups::invariance_defect(*act, T, K), Rational(19, 100));
  EXPECT_EQ(groups::invariance_core(*act, T, K).size(), 81U);
}

TEST(InvarianceDefect, SingletonHasEmptyCore) {
  const auto Z = Group::free_abelian(1);
  const auto act = groups::make_translation_action(Z);
  const std::vector<Element> T{Z.vector({0})};
  const std::vector<Element> K{Z.identity(), Z.vector({1})};
  EXPECT_EQ(groups::invariance_defect(*act, T, K), 1);
}

TEST(InvarianceDefect, RejectsBadInput) {
  const auto Z = Group::free_abelian(1);
  const auto act = groups::make_translation_action(Z);
  const std::vector<Element> K{Z.vector({1})};
  const std::vector<Element> T{Z.vector({0})};
  EXPECT_THROW(groups::invariance_defect(*act, T, K), std::invalid_argument);
  const std::vector<Element> none;
  const std::vector<Element> Ke{Z.identity()};
  EXPECT_THROW(groups::invariance_defect(*act, none, Ke), std::invalid_argument);
}

TEST(InvarianceDefect, BoxFormula) {
  for (int d = 1; d <= 3; ++d) {
    const auto G = Group::free_abelian(d);
    const auto act = groups::make_translation_action(G);
    std::vector<Element> K{G.identity()};
    for (int i = 0; i < d; ++i) K.push_back(G.generator(i));
    for (long n = 1; n <= (d == 3 ? 20 : 50); n += (d == 1 ? 1 : 3)) {
      const auto T = box(G, std::vector<long>(d, 0), std::vector<long>(d, n - 1));
      const Rational expected = 1 - mcduff::pow(Rational(n - 1, n), d);
      ASSERT_EQ(groups::invariance_defect(*act, T, K), expected) << "d=" << d << " n=" << n;
    }
  }
}

TEST(InvarianceDefect, MonotoneInK) {
  const auto Z2 = Group::free_abelian(2);
  const auto act = groups::make_translation_action(Z2);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> side(1, 8);
  std::uniform_int_distribution<long> step(-2, 2);
  for (int i = 0; i < 50; ++i) {
    const auto T = box(Z2, {0, 0}, {side(rng), side(rng)});
    std::vector<Element> K1{Z2.identity(), Z2.vector({step(rng), step(rng)})};
    auto K2 = K1;
    K2.push_back(Z2.vector({step(rng), step(rng)}));
    EXPECT_LE(groups::invariance_defect(*act, T, K1), groups::invariance_defect(*act, T, K2));
  }
}

TEST(FolnerSearch, SmallestInterval) {
  const auto Z = Group::free_abelian(1);
  const auto act = groups::make_translation_action(Z);
  const std::vector<Element> K{Z.identity(), Z.vector({1}), Z.vector({-1})};
  const auto c = groups::folner_search(*act, K, Rational(1, 10), 1000);
  ASSERT_EQ(c.T.size(), 20U);
  EXPECT_EQ(c.T.front(), Z.vector({0}));
  EXPECT_EQ(c.T.back(), Z.vector({19}));
  EXPECT_EQ(c.defect, Rational(1, 10));
}

TEST(FolnerSearch, PlaneBox) {
  const auto Z2 = Group::free_abelian(2);
  const auto act = groups::make_translation_action(Z2);
  const std::vector<Element> K{Z2.identity(), Z2.vector({1, 0})};
  const auto c = groups::folner_search(*act, K, Rational(1, 2), 1000);
  EXPECT_EQ(c.T.size(), 4U);
  EXPECT_EQ(c.defect, Rational(1, 2));
}

TEST(FolnerSearch, AvoidsForbiddenSet) {
  const auto Z = Group::free_abelian(1);
  const auto act = groups::make_translation_action(Z);
  const std::vector<Element> K{Z.identity(), Z.vector({1})};
  std::vector<Element> Y;
  for (long i = 0; i <= 5; ++i) Y.push_back(Z.vector({i}));
  const auto c = groups::folner_search(*act, K, Rational(1, 10), 1000, Y);
  EXPECT_EQ(c.T.size(), 10U);
  for (const auto& t : c.T) EXPECT_EQ(std::find(Y.begin(), Y.end(), t), Y.end());
  EXPECT_LE(groups::invariance_defect(*act, c.T, K), Rational(1, 10));
}

TEST(FolnerSearch, CapExhausted) {
  const auto Z = Group::free_abelian(1);
  const auto act = groups::make_translation_action(Z);
  const std::vector<Element> K{Z.identity(), Z.vector({1})};
  EXPECT_THROW(groups::folner_search(*act, K, Rational(1, 1000), 50), std::runtime_error);
}

TEST(GroupRing, CommutatorNorms) {
  const auto F2 = Group::free(2);
  const auto n = groups::ring_commutator_two_norm(F2, F2.parse_element("a"), F2.parse_element("b"));
  EXPECT_EQ(n.square, ExactScalar(2L));
  ASSERT_TRUE(n.value.has_value());
  EXPECT_EQ(*n.value, ExactScalar::dyadic(Rational(1, 2)));
  EXPECT_TRUE(groups::ring_commutator_two_norm(F2, F2.parse_element("a"), F2.identity()).square.is_zero());
  const auto Z2 = Group::free_abelian(2);
  EXPECT_TRUE(groups::ring_commutator_two_norm(Z2, Z2.vector({1, 0}), Z2.vector({0, 1})).square.is_zero());
}

TEST(GroupRing, TraceAndAdjoint) {
  const auto S3 = Group::symmetric(3);
  auto x = groups::GroupRingElement::unit(S3, S3.generator(0));
  x.add(S3.identity(), GaussianRational(Rational(1, 2), Rational(1)));
  EXPECT_EQ(x.trace(), GaussianRational(Rational(1, 2), Rational(1)));
  EXPECT_EQ(x.norm_squared(), Rational(9, 4));
  EXPECT_EQ((x.adjoint() * x).trace(), GaussianRational(Rational(9, 4)));
}
