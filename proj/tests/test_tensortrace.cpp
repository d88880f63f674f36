#include "mcduff/tensortrace.hpp"
#include "oracles/dense.hpp"
#include "oracles/print.hpp"
#include "oracles/random_tensor.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <random>

using namespace mcduff;
using blockop::AlgebraElement;
using blockop::TracialAlgebra;
using tensortrace::TensorSum;
using tensortrace::TensorWord;

namespace {

using oracle::random_sum;
using oracle::random_toy;

ExactComplex lift(const GaussianRational& g) { return {ExactScalar(g.re), ExactScalar(g.im)}; }

}  // namespace

TEST(TensorTrace, SingleWordByHand) {
  auto A = std::make_shared<const TracialAlgebra>(std::vector<blockop::Block>{{2, ExactScalar(1L)}});
  auto e12 = AlgebraElement::zero(*A);
  e12.block(0).add(0, 1, 1L);
  const auto w = TensorWord::elementary(A, {0, 1}, e12, {0, 1});
  const TensorSum x(w);
  EXPECT_TRUE(x.trace().re.is_zero());
  EXPECT_EQ(x.norm_squared(), ExactScalar(Rational(1, 4)));
  const auto d = oracle::expand(x);
  EXPECT_EQ(d.norm_squared, Rational(1, 4));
  EXPECT_THROW(TensorWord::elementary(A, {0, 1}, e12, {2}), std::invalid_argument);
}

// Random tensor sums, products and adjoints over toy algebras against the
// test-side Kronecker expansion and the library's own dense path.
TEST(TensorTrace, FiveHundredRandomSumsMatchDenseOracle) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(99);
  for (int i = 0; i < 500; ++i) {
    const auto x = oracle::random_case(rng);
    const auto ref = oracle::expand(x);
    ASSERT_EQ(x.trace(), lift(ref.trace)) << "case " << i;
    ASSERT_EQ(x.norm_squared(), ExactScalar(ref.norm_squared)) << "case " << i;
    const auto lib = tensortrace::dense_oracle(x);
    ASSERT_EQ(lib.trace, lift(ref.trace));
    ASSERT_EQ(lib.norm_squared, ExactScalar(ref.norm_squared));
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 30.0);
}

TEST(TensorTrace, InnerProductAndPermutation) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto A = random_toy(rng);
    const std::set<long> T{0, 1, 2};
    const auto x = random_sum(A, T, rng);
    const auto y = random_sum(A, T, rng);
    EXPECT_EQ(x.inner(y), (y.adjoint() * x).trace());
    EXPECT_EQ(x.inner(x).re, x.norm_squared());
    const std::map<long, long> sigma{{0, 2}, {1, 0}, {2, 1}};
    EXPECT_EQ(x.permute(sigma).trace(), x.trace());
    EXPECT_EQ(x.permute(sigma).norm_squared(), x.norm_squared());
  }
}

TEST(TensorTrace, NoncommutationIsOneHalf) {
  for (long s : {1L, 2L, 5L, 50L}) {
    const auto c = blockop::build_pqv_independent(s);
    std::set<long> S;
    for (long i = 0; i < s; ++i) S.insert(i);
    EXPECT_EQ(tensortrace::noncommutation_defect(c.tau_p, c.tau_pq, s), ExactScalar(Rational(1, 2)));
    EXPECT_EQ(tensortrace::word_noncommutation_defect(c, S, S), ExactScalar(Rational(1, 2))) << s;
  }
}

TEST(TensorTrace, CentralityClosedForm) {
  const auto tp = ExactScalar::dyadic(Rational(-1, 4));
  const auto tpq = ExactScalar::dyadic(Rational(-1, 2));
  const auto expected = ExactScalar(2L) * (ExactScalar(Rational(1, 2)) - ExactScalar::dyadic(Rational(-7, 4)));
  EXPECT_EQ(tensortrace::centrality_defect(tp, tpq, 4, 1), expected);
  EXPECT_NEAR(expected.approx(), 0.4054, 1e-4);
  const auto c = blockop::build_pqv_independent(4);
  const std::set<long> T{0, 1, 2, 3, 4};
  const std::set<long> S{0, 1, 2, 3};
  const std::map<long, long> shift{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}};
  EXPECT_EQ(tensortrace::word_centrality_defect(c, T, S, shift), expected);
}

TEST(TensorTrace, CentralityAgainstOracle) {
  const auto c = blockop::build_pqv_independent(1);  // rational weights
  const auto A = std::make_shared<const TracialAlgebra>(c.algebra);
  const std::set<long> T{0, 1, 2};
  const std::set<long> S{0, 1};
  const std::map<long, long> sigma{{0, 1}, {1, 2}, {2, 0}};
  const TensorSum v(TensorWord::elementary(A, T, c.v, S));
  const auto ref = oracle::expand(v.permute(sigma) - v);
  EXPECT_EQ(ExactScalar(ref.norm_squared), tensortrace::centrality_defect(c.tau_p, c.tau_pq, 2, 1));
  EXPECT_EQ(tensortrace::word_centrality_defect(c, T, S, sigma), ExactScalar(ref.norm_squared));
}

TEST(TensorTrace, EstimateChainOnRandomDraws) {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<long> den(1, 50);
  std::uniform_int_distribution<long> size(1, 30);
  for (int i = 0; i < 100; ++i) {
    const long d = den(rng);
    std::uniform_int_distribution<long> num(0, d);
    long a = num(rng);
    long b = num(rng);
    if (a < b) std::swap(a, b);
    const ExactScalar tp(make_rational(a, d));
    const ExactScalar tpq(make_rational(b, d));
    const long s = size(rng);
    std::uniform_int_distribution<long> mv(0, s);
    const long moved = mv(rng);
    const auto value = tensortrace::centrality_defect(tp, tpq, s, moved);
    EXPECT_GE(sign(value), 0);
    EXPECT_LE(sign(value - tensortrace::centrality_bound(tpq, moved)), 0) << a << "/" << d << " " << b << "/" << d;
  }
}

TEST(TensorTrace, DefectPreconditions) {
  EXPECT_THROW(tensortrace::noncommutation_defect(ExactScalar(Rational(1, 2)), ExactScalar(Rational(3, 4)), 2), std::invalid_argument);
  EXPECT_THROW(tensortrace::centrality_defect(ExactScalar(Rational(1, 2)), ExactScalar(Rational(1, 4)), 2, 3), std::invalid_argument);
}

TEST(TensorTrace, ElementaryWords) {
  const auto c = blockop::build_pqv_independent(5);
  const auto A = std::make_shared<const TracialAlgebra>(c.algebra);
  const std::set<long> T{0, 1, 2, 3, 4, 5};
  EXPECT_EQ(TensorWord::elementary(A, T, c.p, {}).trace().re, ExactScalar(1L));
  EXPECT_EQ(TensorWord::elementary(A, T, c.p, {0, 1, 2, 3, 4}).trace().re, ExactScalar(Rational(1, 2)));
}

TEST(TensorTrace, NoncommutationSmallValues) {
  EXPECT_EQ(tensortrace::noncommutation_defect(ExactScalar(Rational(3, 5)), ExactScalar(Rational(1, 5)), 2), ExactScalar(Rational(16, 25)));
  EXPECT_TRUE(tensortrace::noncommutation_defect(ExactScalar(Rational(2, 3)), ExactScalar(Rational(2, 3)), 7).is_zero());
  EXPECT_TRUE(tensortrace::centrality_defect(ExactScalar(Rational(2, 3)), ExactScalar(Rational(1, 3)), 7, 0).is_zero());
}

TEST(TensorTrace, CommutatorThreeWays) {
  const auto c = blockop::build_pqv_independent(1);
  const auto A = std::make_shared<const TracialAlgebra>(c.algebra);
  for (long s : {1L, 2L, 3L}) {
    std::set<long> S;
    for (long i = 0; i < s; ++i) S.insert(i);
    const TensorSum v(TensorWord::elementary(A, S, c.v, S));
    const auto ref = oracle::expand(v * v.adjoint() - v.adjoint() * v);
    const auto closed = tensortrace::noncommutation_defect(c.tau_p, c.tau_pq, s);
    EXPECT_EQ(ExactScalar(ref.norm_squared), closed);
    EXPECT_EQ(tensortrace::word_noncommutation_defect(c, S, S), closed);
  }
}

TEST(TensorTrace, PermuteIsTraceAutomorphism) {
  std::mt19937_64 rng(31);
  const std::map<long, long> sigma{{0, 1}, {1, 0}, {2, 2}};
  for (int i = 0; i < 40; ++i) {
    const auto A = random_toy(rng);
    const std::set<long> T{0, 1, 2};
    const auto x = random_sum(A, T, rng);
    const auto y = random_sum(A, T, rng);
    EXPECT_EQ((x.permute(sigma) * y.permute(sigma)).trace(), (x * y).trace());
    EXPECT_EQ(x.permute(sigma).adjoint().trace(), x.adjoint().permute(sigma).trace());
  }
}

TEST(TensorTrace, NoncommutationMonotoneOnGrid) {
  for (long s : {1L, 3L, 8L}) {
    for (long a = 1; a <= 10; ++a) {
      for (long b = 0; b < a; ++b) {
        const auto here = tensortrace::noncommutation_defect(ExactScalar(make_rational(a, 10)), ExactScalar(make_rational(b, 10)), s);
        const auto more_pq = tensortrace::noncommutation_defect(ExactScalar(make_rational(a, 10)), ExactScalar(make_rational(b + 1, 10)), s);
        if (a < 10) {
          const auto more_p = tensortrace::noncommutation_defect(ExactScalar(make_rational(a + 1, 10)), ExactScalar(make_rational(b, 10)), s);
          EXPECT_GE(sign(more_p - here), 0);
        }
        EXPECT_LE(sign(more_pq - here), 0);
      }
    }
  }
}
