#pragma once

#include "mcduff/blockop.hpp"

#include <map>
#include <memory>
#include <set>
#include <utility>
#include <vector>

namespace mcduff::tensortrace {

using blockop::AlgebraElement;
using blockop::TracialAlgebra;

/// Elementary tensor  (x)_{t in T} a_t  over a finite index set T of
/// integers. Coordinates not stored carry the identity.
class TensorWord {
 public:
  TensorWord(std::shared_ptr<const TracialAlgebra> base, std::set<long> index_set);

  /// a at every coordinate of R, identity elsewhere. Throws when R is not a subset of T.
  static TensorWord elementary(std::shared_ptr<const TracialAlgebra> base, std::set<long> index_set,
                               const AlgebraElement& a, const std::set<long>& R);

  const TracialAlgebra& base() const { return *base_; }
  const std::shared_ptr<const TracialAlgebra>& base_ptr() const { return base_; }
  const std::set<long>& index_set() const { return *index_; }
  const std::map<long, AlgebraElement>& factors() const { return factors_; }

  /// Sets coordinate t; identity values are dropped.
  void set(long t, const AlgebraElement& a);
  AlgebraElement at(long t) const;

  TensorWord operator*(const TensorWord& o) const;
  TensorWord adjoint() const;
  /// Relabels coordinate t as sigma(t). sigma must be a bijection of T.
  TensorWord permute(const std::map<long, long>& sigma) const;

  /// Product over stored coordinates of tau(a_t).
  ExactComplex trace() const;

  friend bool operator==(const TensorWord& a, const TensorWord& b) {
    return *a.index_ == *b.index_ && a.factors_ == b.factors_;
  }

 private:
  void check_compatible(const TensorWord& o) const;

  std::shared_ptr<const TracialAlgebra> base_;
  std::shared_ptr<const std::set<long>> index_;
  std::map<long, AlgebraElement> factors_;
  AlgebraElement identity_;
};

/// Formal linear combination of words with real ExactScalar coefficients.
class TensorSum {
 public:
  using Term = std::pair<ExactScalar, TensorWord>;

  TensorSum() = default;
  TensorSum(const TensorWord& w) { terms_.emplace_back(ExactScalar(1L), w); }  // NOLINT

  const std::vector<Term>& terms() const { return terms_; }
  void add(const ExactScalar& c, const TensorWord& w);

  TensorSum operator+(const TensorSum& o) const;
  TensorSum operator-(const TensorSum& o) const;
  TensorSum operator*(const TensorSum& o) const;
  TensorSum scaled(const ExactScalar& c) const;
  TensorSum adjoint() const;
  TensorSum permute(const std::map<long, long>& sigma) const;

  ExactComplex trace() const;
  /// <x, y> = tau(y* x).
  ExactComplex inner(const TensorSum& y) const;
  /// ||x||_2^2 = tau(x* x).
  ExactScalar norm_squared() const;

 private:
  std::vector<Term> terms_;
};

/// 2(tau(p)^s - tau(pq)^s): the squared 2-norm of [v_S, v_S*].
/// Throws std::invalid_argument unless 0 <= tau_pq <= tau_p <= 1 and s >= 0.
ExactScalar noncommutation_defect(const ExactScalar& tau_p, const ExactScalar& tau_pq, long s);

/// 2(tau(p)^s - tau(p)^(s-moved) tau(pq)^(2 moved)): the squared 2-norm of
/// v_{sigma S} - v_S when |sigma S \ S| = moved. Needs 0 <= moved <= s.
ExactScalar centrality_defect(const ExactScalar& tau_p, const ExactScalar& tau_pq, long s, long moved);

/// 8(1 - tau(pq)^moved), the coarser estimate dominating centrality_defect.
ExactScalar centrality_bound(const ExactScalar& tau_pq, long moved);

/// The same two quantities through word arithmetic on an actual p/q/v triple.
ExactScalar word_noncommutation_defect(const blockop::PqvConstruction& c, const std::set<long>& T, const std::set<long>& S);
ExactScalar word_centrality_defect(const blockop::PqvConstruction& c, const std::set<long>& T, const std::set<long>& S,
                                   const std::map<long, long>& sigma);

struct DenseResult {
  ExactComplex trace;
  ExactScalar norm_squared;
};

/// Dense Kronecker expansion into the product algebra; independent of the
/// factorized path. Requires |T| <= 3 and total dense dimension <= 10^4.
DenseResult dense_oracle(const TensorSum& x);

}  // namespace mcduff::tensortrace
