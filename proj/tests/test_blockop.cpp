#include "mcduff/blockop.hpp"
#include "oracles/print.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mcduff;
using blockop::AlgebraElement;
using blockop::Block;
using blockop::PqvConstruction;
using blockop::TracialAlgebra;

namespace {

void expect_identities(const PqvConstruction& c) {
  const auto& v = c.v;
  EXPECT_EQ(v.adjoint() * v, c.p);
  EXPECT_EQ(v * v.adjoint(), c.q);
  EXPECT_EQ(v * c.p * c.q, c.p * c.q);
  EXPECT_EQ(c.p * c.p, c.p);
  EXPECT_EQ(c.q * c.q, c.q);
  EXPECT_EQ(c.p.adjoint(), c.p);
}

AlgebraElement random_element(const TracialAlgebra& A, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> val(-3, 3);
  auto a = AlgebraElement::zero(A);
  for (std::size_t l = 0; l < A.block_count(); ++l) {
    const auto k = A.blocks()[l].size;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) a.block(l).add(i, j, GaussianRational(Rational(val(rng)), Rational(val(rng))));
  }
  return a;
}

TracialAlgebra toy() {
  return TracialAlgebra({{1, ExactScalar(Rational(1, 6))}, {2, ExactScalar(Rational(1, 3))}, {3, ExactScalar(Rational(1, 2))}});
}

}  // namespace

TEST(TracialAlgebra, RejectsBadWeights) {
  EXPECT_THROW(TracialAlgebra({{1, ExactScalar(Rational(1, 2))}}), std::invalid_argument);
  EXPECT_THROW(TracialAlgebra({{1, ExactScalar(2L)}, {1, ExactScalar(-1L)}}), std::invalid_argument);
}

TEST(Trace, UnitaryAndMatrixUnit) {
  const TracialAlgebra A({{2, ExactScalar(1L)}});
  EXPECT_EQ(blockop::trace(A, AlgebraElement::identity(A)).re, ExactScalar(1L));
  EXPECT_TRUE(blockop::two_norm(A, AlgebraElement::zero(A)).square.is_zero());
  AlgebraElement e12 = AlgebraElement::zero(A);
  e12.block(0).add(0, 1, 1L);
  const auto n = blockop::two_norm(A, e12);
  EXPECT_EQ(n.square, ExactScalar(Rational(1, 2)));
  ASSERT_TRUE(n.value.has_value());
  EXPECT_EQ(*n.value, ExactScalar::dyadic(Rational(-1, 2)));
}

TEST(Trace, ShapeMismatch) {
  const auto A = toy();
  const AlgebraElement bad({blockop::SparseMatrix(1)});
  EXPECT_THROW(blockop::check_shape(A, bad), std::invalid_argument);
}

TEST(Trace, TracialAndCauchySchwarz) {
  const auto A = toy();
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_element(A, rng);
    const auto b = random_element(A, rng);
    EXPECT_EQ(blockop::trace(A, a * b), blockop::trace(A, b * a));
    const auto ip = blockop::trace(A, a.adjoint() * b);
    const auto lhs = ip.norm_squared();
    const auto rhs = blockop::two_norm(A, a).square * blockop::two_norm(A, b).square;
    EXPECT_LE(sign(lhs - rhs), 0);
  }
}

TEST(Trace, MatchesWeightedBlockTraces) {
  const auto W = repalg::alternating_wedderburn(5, repalg::WedderburnMode::Enumerated);
  const auto A = TracialAlgebra::from_wedderburn(W);
  ASSERT_EQ(A.block_count(), 5U);
  std::mt19937_64 rng(4);
  const auto a = random_element(A, rng);
  ExactComplex expected;
  expected += ExactComplex(ExactScalar(W.trivial_weight * a.block(0).at(0, 0).re), ExactScalar(W.trivial_weight * a.block(0).at(0, 0).im));
  for (std::size_t l = 1; l < 5; ++l) {
    const auto tr = a.block(l).trace();
    const Rational scale = W.blocks[l - 1].weight / Rational(W.blocks[l - 1].degree);
    expected += ExactComplex(ExactScalar(tr.re * scale), ExactScalar(tr.im * scale));
  }
  EXPECT_EQ(blockop::trace(A, a), expected);
}

TEST(PqvAlternating, IdentitiesAtSevenAndNine) {
  for (int n : {7, 9}) {
    const auto W = repalg::alternating_wedderburn(n, repalg::WedderburnMode::Enumerated);
    const auto c = blockop::build_pqv_alternating(W, Rational(1, 20), 40);
    expect_identities(c);
    EXPECT_EQ(c.tau_v, ExactComplex(c.tau_pq));
    EXPECT_EQ(c.tau_p, c.tau_q);
    // tau(p) - tau(pq) = sum lambda_l (k_l - d_l) / k_l >= 0
    ExactScalar gap;
    for (std::size_t l = 0; l < W.blocks.size(); ++l) {
      const Integer& k = W.blocks[l].degree;
      gap += ExactScalar(W.blocks[l].weight * Rational(k - c.cuts[l], k));
    }
    EXPECT_EQ(c.tau_p - c.tau_pq, gap);
    EXPECT_GE(sign(gap), 0);
  }
}

TEST(PqvAlternating, NineAgainstBounds) {
  const auto W = repalg::alternating_wedderburn(9, repalg::WedderburnMode::Enumerated);
  const auto c = blockop::build_pqv_alternating(W, Rational(1, 20), 40);
  const auto x = blockop::shrink_factor(Rational(1, 20), 40);
  EXPECT_EQ(x, ExactScalar::dyadic(Rational(-1, 38)));
  EXPECT_LE(sign(c.tau_pq - (ExactScalar(2L) * x - ExactScalar(1L))), 0);
  const auto b = blockop::pqv_trace_bounds(9, Rational(1, 20), 40);
  EXPECT_GE(sign(c.tau_p - b.lower_tau_p), 0);
  EXPECT_LE(sign(c.tau_p - x), 0);
  EXPECT_GE(sign(c.tau_pq - b.lower_tau_pq), 0);
  EXPECT_LE(sign(c.tau_pq - b.upper_tau_pq), 0);
  EXPECT_EQ(b.upper_tau_pq, ExactScalar(2L) * x - ExactScalar(1L));
}

TEST(PqvAlternating, TooCoarseBlockIsRejected) {
  // A_5 has degree-3 blocks: floor(x * 3) = 1 for x below 2/3, so 2d - k < 0.
  const auto W = repalg::alternating_wedderburn(5, repalg::WedderburnMode::Enumerated);
  EXPECT_THROW(blockop::build_pqv_alternating(W, Rational(9, 20), 2), std::invalid_argument);
}

TEST(PqvAlternating, EmptyLeadingSum) {
  // one block of degree 4 with x = 2^(-1/1.1): d = 2 = k/2
  repalg::WedderburnData W;
  W.n = 5;
  W.group_order = 17;
  W.trivial_weight = Rational(1, 17);
  W.blocks.push_back({Integer(4), Rational(16, 17)});
  W.degree_lower_bound = 4;
  const auto c = blockop::build_pqv_alternating(W, Rational(9, 20), 2);
  ASSERT_EQ(c.cuts.size(), 1U);
  EXPECT_EQ(c.cuts[0], 2);
  expect_identities(c);
  EXPECT_TRUE(c.tau_pq.is_zero());
}

TEST(PqvBounds, LargeDegreeFormula) {
  const auto b = blockop::pqv_trace_bounds(2000, Rational(1, 200), 400);
  const Rational order = Rational(factorial(2000) / 2);
  const ExactScalar floor_value = b.x - ExactScalar(Rational(1, 1999)) - ExactScalar(1 / order);
  EXPECT_GE(sign(b.lower_tau_p - floor_value), 0);
  EXPECT_LE(sign(b.lower_tau_p - b.x), 0);
  EXPECT_THROW(blockop::pqv_trace_bounds(5, Rational(1, 20), 40), std::invalid_argument);
}

TEST(PqvIndependent, ExactTraces) {
  for (long m : {1L, 2L, 5L, 50L}) {
    const auto c = blockop::build_pqv_independent(m);
    expect_identities(c);
    const auto t = ExactScalar::dyadic(Rational(-1, m));
    EXPECT_EQ(c.tau_p, t);
    EXPECT_EQ(c.tau_q, t);
    EXPECT_EQ(c.tau_pq, c.tau_p * c.tau_q);
    EXPECT_EQ(c.tau_v, ExactComplex(c.tau_pq));
    // p - pq and q - pq carry the same trace
    EXPECT_EQ(blockop::trace(c.algebra, c.p - c.p * c.q), blockop::trace(c.algebra, c.q - c.p * c.q));
  }
  const auto one = blockop::build_pqv_independent(1);
  EXPECT_EQ(one.tau_pq, ExactScalar(Rational(1, 4)));
  EXPECT_EQ(one.algebra.blocks()[1].weight, ExactScalar(Rational(1, 2)));
  const auto two = blockop::build_pqv_independent(2);
  EXPECT_EQ(two.tau_p, ExactScalar::dyadic(Rational(-1, 2)));
  EXPECT_EQ(two.tau_pq, ExactScalar(Rational(1, 2)));
}
