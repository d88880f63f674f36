#include "mcduff/cantor.hpp"

#include <gtest/gtest.h>

using namespace mcduff;
using namespace mcduff::cantor;

namespace {

std::shared_ptr<const Subshift> fibonacci() { return std::make_shared<const Subshift>(Substitution::fibonacci()); }

std::vector<long> interval(long n) {
  std::vector<long> T;
  for (long i = 0; i < n; ++i) T.push_back(i);
  return T;
}

}  // namespace

TEST(Substitution, ParseAndApply) {
  const auto s = Substitution::parse("a->ab, b->a");
  EXPECT_EQ(s.apply("a", 4), "abaababa");
  EXPECT_EQ(s.alphabet(), "ab");
  EXPECT_THROW(Substitution::parse("a->a, b->b"), std::invalid_argument);
  EXPECT_THROW(Substitution::parse("a->ac, b->a"), std::invalid_argument);
  EXPECT_THROW(Substitution::parse("a->, b->a"), std::invalid_argument);
}

TEST(Subshift, FibonacciLanguage) {
  const auto x = fibonacci();
  EXPECT_TRUE(x->is_legal("aba"));
  EXPECT_FALSE(x->is_legal("bb"));
  EXPECT_FALSE(x->is_legal("aaa"));
  EXPECT_EQ(x->language(3).size(), 4U);  // complexity n + 1
  EXPECT_EQ(x->window(0, 8), Substitution::fibonacci().apply("a", 5).substr(0, 8));
}

TEST(Subshift, Aperiodic) {
  for (const auto& s : {Substitution::fibonacci(), Substitution::thue_morse()}) {
    const Subshift x(s);
    EXPECT_FALSE(x.find_period(10000, 30000).has_value()) << s.to_string();
  }
  const Subshift periodic(Substitution::parse("a->ab, b->ab"));
  EXPECT_TRUE(periodic.find_period(100, 1000).has_value());
}

TEST(ClopenSet, BooleanAlgebra) {
  const auto x = fibonacci();
  const auto a = ClopenSet::cylinder(x, "aa", 0);
  const auto b = ClopenSet::cylinder(x, "b", 1);
  EXPECT_TRUE(a.complement().complement().same_set(a));
  EXPECT_TRUE(a.unite(a.complement()).same_set(ClopenSet::everything(x)));
  EXPECT_TRUE(a.intersect(a.complement()).is_empty());
  EXPECT_TRUE(a.minus(b).unite(a.intersect(b)).same_set(a));
  EXPECT_TRUE(a.shifted(3).shifted(-3).same_set(a));
  EXPECT_TRUE(ClopenSet::cylinder(x, "bb", 0).is_empty());
  for (long j = -50; j < 50; ++j) {
    EXPECT_EQ(a.contains(j), x->window(j, 2) == "aa");
    EXPECT_EQ(a.shifted(2).contains(j), a.contains(j - 2)) << j;
  }
}

TEST(FullGroupElement, SwapIsInvolution) {
  const auto x = fibonacci();
  const auto s = FullGroupElement::swap(x, "aa", 0, 1);
  EXPECT_TRUE(s.inverse().same_map(s));
  for (long j = -100; j < 100; ++j) EXPECT_EQ(s.apply(s.apply(j)), j);
  EXPECT_THROW(FullGroupElement::swap(x, "bb", 0, 1), std::invalid_argument);
  EXPECT_THROW(FullGroupElement::swap(x, "a", 0, 1), std::invalid_argument);  // overlaps its translate
  const auto c = ClopenSet::cylinder(x, "b", 0);
  EXPECT_THROW(FullGroupElement({{c, 1}}), std::invalid_argument);
}

TEST(RefinePartition, Identity) {
  const auto x = fibonacci();
  const auto P = refine_partition({FullGroupElement::identity(x)});
  EXPECT_EQ(P.cells.size(), 1U);
  EXPECT_EQ(P.K, std::set<long>{0});
}

TEST(RefinePartition, OneSwap) {
  const auto x = fibonacci();
  const auto P = refine_partition({FullGroupElement::swap(x, "aa", 0, 1)});
  EXPECT_EQ(P.cells.size(), 3U);
  EXPECT_EQ(P.K, (std::set<long>{-1, 0, 1}));
}

TEST(RefinePartition, OverlappingSwaps) {
  const auto x = fibonacci();
  const std::vector<FullGroupElement> omega{FullGroupElement::swap(x, "aa", 0, 1), FullGroupElement::swap(x, "b", 0, 1)};
  const auto P = refine_partition(omega);
  EXPECT_LE(P.K.size(), 5U);
  for (long j = -200; j < 200; ++j) {
    const auto cell = P.cell_of(j);
    for (std::size_t h = 0; h < omega.size(); ++h) EXPECT_EQ(P.shifts[cell][h], omega[h].shift_at(j));
  }
  EXPECT_THROW(refine_partition({}), std::invalid_argument);
}

TEST(Tower, IdentityOmega) {
  const auto x = fibonacci();
  const std::vector<FullGroupElement> omega{FullGroupElement::identity(x)};
  const auto P = refine_partition(omega);
  const auto tower = find_tower(x, omega, P, interval(12), 2, 100000);
  ASSERT_EQ(tower.D.size(), 2U);
  for (const auto& [t, th] : tower.theta[0]) EXPECT_EQ(th, 0);
  for (const auto& [t, s] : tower.sigma[0]) EXPECT_EQ(s, t);
}

TEST(Tower, CylinderSwapEndToEnd) {
  const auto x = fibonacci();
  const std::vector<FullGroupElement> omega{FullGroupElement::swap(x, "aa", 0, 1)};
  const auto P = refine_partition(omega);
  const auto tower = find_tower(x, omega, P, interval(40), 3, 1000000);
  EXPECT_EQ(tower.D.size(), 3U);
  const std::set<long> core(tower.core.begin(), tower.core.end());
  for (const auto& sigma : tower.sigma) {
    EXPECT_LE(displaced(sigma, core), tower.T.size() - tower.core.size());
    EXPECT_LE(displaced(sigma, core), P.K.size() - 1);
  }
  const auto report = verify_tower(tower, omega, 10);
  EXPECT_TRUE(report.pass);
  EXPECT_GE(report.sample_points, 10U);
  EXPECT_TRUE(report.failures.empty());
}

TEST(Tower, CorruptedThetaIsCaught) {
  const auto x = fibonacci();
  const std::vector<FullGroupElement> omega{FullGroupElement::swap(x, "aa", 0, 1)};
  const auto P = refine_partition(omega);
  auto tower = find_tower(x, omega, P, interval(40), 3, 1000000);
  auto& entry = tower.theta[0].at(tower.core.front());
  entry = entry == 0 ? 1 : 0;
  const auto report = verify_tower(tower, omega, 10);
  EXPECT_FALSE(report.pass);
  ASSERT_FALSE(report.failures.empty());
}

TEST(Tower, ZeroSamplesStillChecksSets) {
  const auto x = fibonacci();
  const std::vector<FullGroupElement> omega{FullGroupElement::swap(x, "aa", 0, 1)};
  const auto P = refine_partition(omega);
  const auto tower = find_tower(x, omega, P, interval(20), 2, 1000000);
  const auto report = verify_tower(tower, omega, 0);
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.sample_points, 0U);
  auto broken = tower;
  broken.D.push_back(broken.D.front());  // tdB no longer pairwise disjoint
  EXPECT_FALSE(verify_tower(broken, omega, 0).pass);
}

TEST(Tower, Preconditions) {
  const auto x = fibonacci();
  const std::vector<FullGroupElement> omega{FullGroupElement::swap(x, "aa", 0, 1)};
  const auto P = refine_partition(omega);
  EXPECT_THROW(find_tower(x, omega, P, interval(40), 3, 1000, Rational(1, 1000)), std::invalid_argument);
  auto periodic = std::make_shared<const Subshift>(Substitution::parse("a->ab, b->ab"));
  const std::vector<FullGroupElement> id{FullGroupElement::identity(periodic)};
  EXPECT_THROW(find_tower(periodic, id, refine_partition(id), interval(10), 2, 1000), std::invalid_argument);
}
