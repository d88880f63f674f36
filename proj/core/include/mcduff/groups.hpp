#pragma once

#include "mcduff/exact_scalar.hpp"
#include "mcduff/gaussian.hpp"
#include "mcduff/rational.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mcduff::groups {

/// Canonical form of a group element (or a point of a countable set).
/// Interpretation is owned by the Group: integer vectors for Z^d, image
/// arrays for permutations, reduced letter sequences (+-(i+1)) for free
/// groups, and one entry of `factors` per factor for direct products.
struct Element {
  std::vector<long> code;
  std::vector<Element> factors;

  friend bool operator==(const Element& a, const Element& b) {
    return a.code == b.code && a.factors == b.factors;
  }
  friend bool operator<(const Element& a, const Element& b) {
    if (a.code != b.code) return a.code < b.code;
    return a.factors < b.factors;
  }
};

using Point = Element;

enum class Family { FreeAbelian, Symmetric, Alternating, Free, Product };

class Group {
 public:
  static Group free_abelian(int rank);
  static Group symmetric(int n);
  static Group alternating(int n);
  static Group free(int rank);
  static Group product(std::vector<Group> factors);
  /// "Z", "Z^3", "S5", "A7", "F2", and "x"-separated products such as "F2 x Z^2".
  static Group parse(std::string_view spec);

  Family family() const { return family_; }
  /// Rank for Z^d and F_r, number of letters for S_n and A_n.
  int parameter() const { return parameter_; }
  const std::vector<Group>& factors() const { return factors_; }
  std::string name() const;

  Element identity() const;
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  /// a^-1 b^-1 a b
  Element commutator(const Element& a, const Element& b) const;
  Element power(const Element& a, long n) const;
  bool is_identity(const Element& a) const { return a == identity(); }
  /// Throws std::invalid_argument when `a` is not a canonical element of this group.
  void validate(const Element& a) const;

  /// Element syntax: Z^d "(1,-2)" (or "3" for d = 1); permutations as image
  /// lists "[1,0,2]"; free words over a,b,c,... with capitals as inverses
  /// ("aB" = a b^-1, "e" = identity); products join factor elements with "|".
  Element parse_element(std::string_view text) const;
  std::string format(const Element& a) const;

  Element vector(std::vector<long> coords) const;
  Element word(std::vector<long> letters) const;
  Element permutation(std::vector<long> images) const;
  Element tuple(std::vector<Element> parts) const;
  /// i-th standard generator (basis vector, letter, or transposition (0 i+1)).
  Element generator(int i) const;

 private:
  Family family_ = Family::FreeAbelian;
  int parameter_ = 0;
  std::vector<Group> factors_;
};

/// A left action of a group on a countable set.
class Action {
 public:
  virtual ~Action() = default;
  virtual const Group& group() const = 0;
  virtual Point act(const Element& g, const Point& x) const = 0;
  virtual std::string name() const = 0;
  virtual std::string format_point(const Point& x) const = 0;
  virtual Point parse_point(std::string_view text) const = 0;

  /// n-th member of an increasing exhaustion by finite sets, when the
  /// action family has one (n >= 1).
  virtual std::optional<std::vector<Point>> exhaustion(std::size_t n) const;
  /// A group element g with gT disjoint from Y such that translating by g
  /// preserves invariance defects; nullopt when the family has none.
  virtual std::optional<Element> separating_shift(std::span<const Point> T, std::span<const Point> Y) const;
};

/// A group acting on itself by left multiplication. For Z^d this is the
/// translation action, with cubes [0,n)^d as exhaustion.
class LeftTranslation final : public Action {
 public:
  explicit LeftTranslation(Group g) : group_(std::move(g)) {}
  const Group& group() const override { return group_; }
  Point act(const Element& g, const Point& x) const override { return group_.multiply(g, x); }
  std::string name() const override { return group_.name() + " on itself"; }
  std::string format_point(const Point& x) const override { return group_.format(x); }
  Point parse_point(std::string_view text) const override { return group_.parse_element(text); }
  std::optional<std::vector<Point>> exhaustion(std::size_t n) const override;
  std::optional<Element> separating_shift(std::span<const Point> T, std::span<const Point> Y) const override;

 private:
  Group group_;
};

/// S_n or A_n permuting {0, ..., n-1}; points are {i}.
class PermutationAction final : public Action {
 public:
  explicit PermutationAction(Group g);
  const Group& group() const override { return group_; }
  Point act(const Element& g, const Point& x) const override;
  std::string name() const override { return group_.name() + " on letters"; }
  std::string format_point(const Point& x) const override;
  Point parse_point(std::string_view text) const override;

 private:
  Group group_;
};

/// F_2 x F_2^(+)N, truncated to the listed coordinates, acting on F_2 x N by
/// (s, (t_k)) . (r, n) = (s r t_n^-1, n). Group elements are tuples
/// (s, t_{c_1}, ..., t_{c_m}) for coordinates c_j; points are tuples (r, {n}).
class BilateralShiftAction final : public Action {
 public:
  explicit BilateralShiftAction(std::vector<long> coordinates);
  const Group& group() const override { return group_; }
  Point act(const Element& g, const Point& x) const override;
  std::string name() const override { return "F2 x F2^(+)N on F2 x N"; }
  std::string format_point(const Point& x) const override;
  Point parse_point(std::string_view text) const override;

  const std::vector<long>& coordinates() const { return coordinates_; }
  const Group& free_factor() const { return free2_; }
  /// g_{s,n}: trivial everywhere except t_n = s.
  Element coordinate_element(const Element& s, long n) const;
  Element element(const Element& s, const std::map<long, Element>& t) const;
  Point point(const Element& r, long n) const;
  /// Indices k with t_k != e.
  std::vector<long> support(const Element& g) const;

 private:
  std::size_t slot(long n) const;

  std::vector<long> coordinates_;
  Group free2_;
  Group group_;
};

std::unique_ptr<Action> make_translation_action(const Group& g);

/// A finite set T together with its core T' = {x in T : s x in T for all s in K}.
struct FolnerCertificate {
  std::vector<Point> T;
  std::vector<Element> K;
  std::vector<Point> core;
  Rational defect;
};

/// 1 - |core(T, K)| / |T|. Requires T nonempty and e in K.
Rational invariance_defect(const Action& action, std::span<const Point> T, std::span<const Element> K);
std::vector<Point> invariance_core(const Action& action, std::span<const Point> T, std::span<const Element> K);

/// Smallest member of the action's exhaustion with defect <= delta, then
/// translated off `forbidden` when that is nonempty. Throws
/// std::runtime_error when |T| would exceed size_cap first.
FolnerCertificate folner_search(const Action& action, std::span<const Element> K, const Rational& delta,
                                std::size_t size_cap, std::span<const Point> forbidden = {});

/// Finitely supported element of the complex group ring Q(i)[G].
class GroupRingElement {
 public:
  explicit GroupRingElement(const Group& g) : group_(&g) {}
  static GroupRingElement unit(const Group& g, const Element& x);

  const std::map<Element, GaussianRational>& coefficients() const { return coeffs_; }
  void add(const Element& x, const GaussianRational& c);

  GroupRingElement operator+(const GroupRingElement& o) const;
  GroupRingElement operator-(const GroupRingElement& o) const;
  GroupRingElement operator*(const GroupRingElement& o) const;
  GroupRingElement adjoint() const;
  /// Coefficient of the identity.
  GaussianRational trace() const;
  /// tau(x* x) = sum |c_g|^2.
  Rational norm_squared() const;

 private:
  const Group* group_;
  std::map<Element, GaussianRational> coeffs_;
};

/// ||u_g u_h - u_h u_g||_2 computed by group ring arithmetic.
TwoNorm ring_commutator_two_norm(const Group& group, const Element& g, const Element& h);

}  // namespace mcduff::groups
