#pragma once

#include "mcduff/exact_scalar.hpp"
#include "mcduff/gaussian.hpp"
#include "mcduff/repalg.hpp"

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace mcduff::blockop {

/// Square matrix over Q(i) with sparse storage; zero entries are never stored.
class SparseMatrix {
 public:
  using Index = std::pair<std::size_t, std::size_t>;

  explicit SparseMatrix(std::size_t n = 0) : n_(n) {}
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix unit(std::size_t n, std::size_t row, std::size_t col);

  std::size_t dim() const { return n_; }
  const std::map<Index, GaussianRational>& entries() const { return entries_; }
  GaussianRational at(std::size_t row, std::size_t col) const;
  void add(std::size_t row, std::size_t col, const GaussianRational& value);

  SparseMatrix operator+(const SparseMatrix& o) const;
  SparseMatrix operator-(const SparseMatrix& o) const;
  SparseMatrix operator*(const SparseMatrix& o) const;
  SparseMatrix scaled(const GaussianRational& c) const;
  SparseMatrix adjoint() const;
  /// Unnormalized trace.
  GaussianRational trace() const;
  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) { return a.n_ == b.n_ && a.entries_ == b.entries_; }

 private:
  std::size_t n_;
  std::map<Index, GaussianRational> entries_;
};

struct Block {
  std::size_t size;
  ExactScalar weight;
};

/// Multi-matrix algebra  (+)_l M_{k_l}  with trace  sum_l w_l tr_l,  tr_l the
/// normalized trace on M_{k_l}; the weights are nonnegative and sum to 1.
class TracialAlgebra {
 public:
  explicit TracialAlgebra(std::vector<Block> blocks);
  /// Block 0 is the trivial summand C with weight 1/|A_n|; then one block per
  /// enumerated irreducible.
  static TracialAlgebra from_wedderburn(const repalg::WedderburnData& data);

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }

 private:
  std::vector<Block> blocks_;
};

class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(std::vector<SparseMatrix> blocks) : blocks_(std::move(blocks)) {}
  static AlgebraElement zero(const TracialAlgebra& algebra);
  static AlgebraElement identity(const TracialAlgebra& algebra);

  const std::vector<SparseMatrix>& blocks() const { return blocks_; }
  SparseMatrix& block(std::size_t l) { return blocks_.at(l); }
  const SparseMatrix& block(std::size_t l) const { return blocks_.at(l); }

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(const AlgebraElement& o) const;
  AlgebraElement scaled(const GaussianRational& c) const;
  AlgebraElement adjoint() const;
  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;

 private:
  void check_shape(const AlgebraElement& o) const;
  std::vector<SparseMatrix> blocks_;
};

/// Throws std::invalid_argument when the block shapes do not match.
void check_shape(const TracialAlgebra& algebra, const AlgebraElement& a);

ExactComplex trace(const TracialAlgebra& algebra, const AlgebraElement& a);
/// ||a||_2 = tau(a* a)^(1/2).
TwoNorm two_norm(const TracialAlgebra& algebra, const AlgebraElement& a);

/// Partial isometry v from p to q with vpq = pq, plus the traces the
/// McDuff estimates consume.
struct PqvConstruction {
  TracialAlgebra algebra;
  AlgebraElement p;
  AlgebraElement q;
  AlgebraElement v;
  ExactScalar tau_p;
  ExactScalar tau_q;
  ExactScalar tau_pq;
  ExactComplex tau_v;
  /// Per nontrivial block: the cut d_l (alternating construction only).
  std::vector<Integer> cuts;
  /// 2^(-1/((1-delta)|T|)) (alternating) or 2^(-1/m) (independent).
  ExactScalar x;
};

/// 2^(-1/((1-delta) T_size)).
ExactScalar shrink_factor(const Rational& delta, long T_size);

/// Alternating-group construction with d_l = floor(x k_l); the identities
/// v*v = p, vv* = q, vpq = pq are checked exactly before returning.
/// Throws std::invalid_argument when some block has 2 d_l < k_l.
PqvConstruction build_pqv_alternating(const repalg::WedderburnData& data, const Rational& delta, long T_size);

/// Independent commuting projections of trace t = 2^(-1/m) in the algebra
/// C (+) M_2 (+) C with weights t^2, 2t(1-t), (1-t)^2.
PqvConstruction build_pqv_independent(long m);

struct PqvBounds {
  ExactScalar x;
  ExactScalar lower_tau_p;
  ExactScalar lower_tau_pq;
  ExactScalar upper_tau_pq;
};

/// Bounds valid for every enumeration of A_n data, using only k_l >= n-1 and
/// sum of nontrivial weights = 1 - 1/|A_n|. Requires n >= 6.
PqvBounds pqv_trace_bounds(int n, const Rational& delta, long T_size);

}  // namespace mcduff::blockop
