#pragma once

#include "mcduff/rational.hpp"

#include <string>
#include <vector>

namespace mcduff::repalg {

/// Largest n for which partitions are enumerated.
inline constexpr int kEnumerationCap = 60;

/// Integer partition with weakly decreasing positive parts.
class Partition {
 public:
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int size() const { return size_; }
  Partition conjugate() const;
  bool self_conjugate() const { return conjugate() == *this; }
  /// Number of standard Young tableaux: n! / prod of hook lengths.
  Integer degree() const;
  std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition&, const Partition&) = default;

 private:
  std::vector<int> parts_;
  int size_ = 0;
};

/// All partitions of n in reverse lexicographic order, starting with (n).
std::vector<Partition> partitions(int n);

/// Irreducible degrees of S_n, one per partition in partitions(n) order.
std::vector<Integer> symmetric_degrees(int n);

enum class WedderburnMode { Enumerated, Bounded };

struct WedderburnBlock {
  Integer degree;
  Rational weight;  // degree^2 / |A_n|
};

/// Artin-Wedderburn data of the group algebra of A_n:
/// C (+) sum_l M_{k_l} with trace weights 1/|A_n| and k_l^2/|A_n|.
struct WedderburnData {
  int n = 0;
  WedderburnMode mode = WedderburnMode::Enumerated;
  Integer group_order;  // n!/2
  Rational trivial_weight;
  /// Nontrivial blocks sorted by degree; empty in bounded mode.
  std::vector<WedderburnBlock> blocks;
  /// A lower bound for every nontrivial degree: n-1, except 3 for n = 5.
  Integer degree_lower_bound;

  Rational nontrivial_weight() const { return Rational(1) - trivial_weight; }
  /// Smallest enumerated nontrivial degree.
  Integer min_degree() const;
};

WedderburnData alternating_wedderburn(int n, WedderburnMode mode);

}  // namespace mcduff::repalg
