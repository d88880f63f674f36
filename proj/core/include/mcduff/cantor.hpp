#pragma once

// Substitution subshifts over Z and the tower data behind the alternating
// group embedding. Points are orbit offsets j of the fixed point x0, read as
// y_j[i] = x0[i + j]; the shift acts by (n.y)[i] = y[i + n], i.e. j -> j + n.

#include "mcduff/rational.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mcduff::cantor {

class Substitution {
 public:
  /// Throws std::invalid_argument on empty images, letters outside the
  /// alphabet, or a non-primitive substitution matrix.
  explicit Substitution(std::map<char, std::string> rules);
  /// "a->ab, b->a".
  static Substitution parse(std::string_view text);
  static Substitution fibonacci();
  static Substitution thue_morse();

  const std::map<char, std::string>& rules() const { return rules_; }
  std::string alphabet() const;
  std::string apply(std::string_view word, int times = 1) const;
  std::string to_string() const;

 private:
  std::map<char, std::string> rules_;
};

/// Two-sided fixed point x0 = ...L.R... of a power of the substitution,
/// expanded lazily. Window reads are safe from several threads.
class Subshift {
 public:
  /// Seed "L.R"; an empty seed picks the first legal pair that some power
  /// of the substitution fixes.
  explicit Subshift(Substitution sub, std::string_view seed = "");

  const Substitution& substitution() const { return sub_; }
  std::string seed() const { return std::string{left_seed_, '.', right_seed_}; }
  int power() const { return power_; }

  char at(long i) const;
  /// x0[from .. from + length).
  std::string window(long from, std::size_t length) const;
  /// All legal words of the given length, read off a fixed-point prefix
  /// that is doubled until the factor count stabilizes.
  const std::set<std::string>& language(std::size_t length) const;
  bool is_legal(std::string_view word) const;
  /// Smallest p <= max_period with x0[0..length) p-periodic.
  std::optional<long> find_period(long max_period, std::size_t length) const;

 private:
  void ensure(long lo, long hi) const;

  Substitution sub_;
  char left_seed_ = 0;
  char right_seed_ = 0;
  int power_ = 1;
  mutable std::mutex mutex_;
  mutable std::string right_;  // x0[0..)
  mutable std::string left_;   // x0[-|left_|..-1]
  mutable std::map<std::size_t, std::set<std::string>> languages_;
};

/// Finite union of cylinders, kept as one window [lo, lo + len) together
/// with the set of legal words allowed there.
class ClopenSet {
 public:
  ClopenSet() = default;
  /// Illegal words are dropped.
  ClopenSet(std::shared_ptr<const Subshift> shift, long lo, std::size_t len, std::set<std::string> words);
  /// Cyl(word, anchor) = { y : y[anchor .. anchor + |word|) = word }.
  static ClopenSet cylinder(std::shared_ptr<const Subshift> shift, std::string word, long anchor);
  /// Cylinder of x0 itself on [lo, lo + len); skips the legality scan.
  static ClopenSet around_base_point(std::shared_ptr<const Subshift> shift, long lo, std::size_t len);
  static ClopenSet everything(std::shared_ptr<const Subshift> shift);
  static ClopenSet nothing(std::shared_ptr<const Subshift> shift);

  long lo() const { return lo_; }
  std::size_t len() const { return len_; }
  const std::set<std::string>& words() const { return words_; }
  const std::shared_ptr<const Subshift>& shift() const { return shift_; }

  bool contains(long offset) const;
  bool is_empty() const { return words_.empty(); }
  /// Same set on the larger window [lo, lo + len), which must contain the current one.
  ClopenSet extended(long lo, std::size_t len) const;

  ClopenSet unite(const ClopenSet& o) const;
  ClopenSet intersect(const ClopenSet& o) const;
  ClopenSet minus(const ClopenSet& o) const;
  ClopenSet complement() const;
  /// n.C
  ClopenSet shifted(long n) const;
  bool same_set(const ClopenSet& o) const;
  bool disjoint(const ClopenSet& o) const { return intersect(o).is_empty(); }

  std::string to_string() const;

 private:
  std::shared_ptr<const Subshift> shift_;
  long lo_ = 0;
  std::size_t len_ = 0;
  std::set<std::string> words_;
};

struct Piece {
  ClopenSet domain;
  long shift;
};

/// Element of the topological full group: acts by `shift` on `domain`.
class FullGroupElement {
 public:
  /// Throws std::invalid_argument unless the domains and their images both
  /// partition X.
  FullGroupElement(std::vector<Piece> pieces, std::string name = "");
  static FullGroupElement identity(std::shared_ptr<const Subshift> shift);
  /// +k on Cyl(word, anchor), -k on its k-translate, identity elsewhere.
  static FullGroupElement swap(std::shared_ptr<const Subshift> shift, const std::string& word, long anchor, long k);

  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::string& name() const { return name_; }
  long shift_at(long offset) const;
  long apply(long offset) const { return offset + shift_at(offset); }
  FullGroupElement inverse() const;
  /// Same homeomorphism.
  bool same_map(const FullGroupElement& o) const;

 private:
  std::vector<Piece> pieces_;
  std::string name_;
};

/// Common refinement on which every element of Omega is a single shift.
struct Partition {
  std::vector<ClopenSet> cells;
  /// shifts[c][h]: the shift element h applies on cell c.
  std::vector<std::vector<long>> shifts;
  std::set<long> K;

  std::size_t cell_of(long offset) const;
};

/// Throws std::invalid_argument if Omega is empty or not closed under inverses.
Partition refine_partition(const std::vector<FullGroupElement>& omega);

struct TowerData {
  std::shared_ptr<const Subshift> shift;
  std::vector<long> T;
  std::vector<long> core;
  long radius = 0;
  ClopenSet B;
  std::vector<long> D;
  /// theta[h][t]
  std::vector<std::map<long, long>> theta;
  /// sigma[h]: permutation of T
  std::vector<std::map<long, long>> sigma;
  Partition partition;
};

/// Pigeonholes D among multiples of the span of T by the partition profile
/// of t + d, then grows the central cylinder B until all tdB are disjoint
/// and sit inside single partition cells. Throws std::invalid_argument on a
/// precondition failure (defect of T above delta, bad sizes, periodic x0)
/// and std::runtime_error when search_bound candidates are not enough.
TowerData find_tower(std::shared_ptr<const Subshift> shift, const std::vector<FullGroupElement>& omega, const Partition& P,
                     const std::vector<long>& T, std::size_t d_target, std::size_t search_bound,
                     const std::optional<Rational>& delta_cap = std::nullopt);

struct TowerReport {
  bool pass = true;
  std::size_t sample_points = 0;
  std::size_t point_checks = 0;
  std::vector<std::string> failures;
};

/// Checks htdx = theta(h,t) t d x on `samples` points x of B found along the
/// orbit, disjointness of the tdB, cell containment and the sigma relation.
TowerReport verify_tower(const TowerData& tower, const std::vector<FullGroupElement>& omega, std::size_t samples);

/// |sigma S \ S|.
std::size_t displaced(const std::map<long, long>& sigma, const std::set<long>& S);

}  // namespace mcduff::cantor
