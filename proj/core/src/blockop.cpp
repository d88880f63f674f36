#include "mcduff/blockop.hpp"

#include <stdexcept>
#include <string>

namespace mcduff::blockop {

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.entries_.emplace(Index{i, i}, GaussianRational(1L));
  return m;
}

SparseMatrix SparseMatrix::unit(std::size_t n, std::size_t row, std::size_t col) {
  SparseMatrix m(n);
  m.add(row, col, GaussianRational(1L));
  return m;
}

GaussianRational SparseMatrix::at(std::size_t row, std::size_t col) const {
  auto it = entries_.find({row, col});
  return it == entries_.end() ? GaussianRational() : it->second;
}

void SparseMatrix::add(std::size_t row, std::size_t col, const GaussianRational& value) {
  if (row >= n_ || col >= n_) throw std::out_of_range("matrix index out of range");
  if (value.is_zero()) return;
  auto [it, inserted] = entries_.try_emplace({row, col}, value);
  if (!inserted) {
    it->second += value;
    if (it->second.is_zero()) entries_.erase(it);
  }
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& o) const {
  SparseMatrix r = *this;
  for (const auto& [ij, v] : o.entries_) r.add(ij.first, ij.second, v);
  return r;
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& o) const {
  SparseMatrix r = *this;
  for (const auto& [ij, v] : o.entries_) r.add(ij.first, ij.second, -v);
  return r;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
  if (n_ != o.n_) throw std::invalid_argument("matrix dimension mismatch");
  // rows of `o` indexed by their row number
  std::map<std::size_t, std::vector<std::pair<std::size_t, const GaussianRational*>>> rows;
  for (const auto& [ij, v] : o.entries_) rows[ij.first].emplace_back(ij.second, &v);
  SparseMatrix r(n_);
  for (const auto& [ik, a] : entries_) {
    auto it = rows.find(ik.second);
    if (it == rows.end()) continue;
    for (const auto& [j, b] : it->second) r.add(ik.first, j, a * *b);
  }
  return r;
}

SparseMatrix SparseMatrix::scaled(const GaussianRational& c) const {
  SparseMatrix r(n_);
  for (const auto& [ij, v] : entries_) r.add(ij.first, ij.second, v * c);
  return r;
}

SparseMatrix SparseMatrix::adjoint() const {
  SparseMatrix r(n_);
  for (const auto& [ij, v] : entries_) r.entries_.emplace(Index{ij.second, ij.first}, v.conj());
  return r;
}

GaussianRational SparseMatrix::trace() const {
  GaussianRational s;
  for (const auto& [ij, v] : entries_) {
    if (ij.first == ij.second) s += v;
  }
  return s;
}

// ---------------------------------------------------------------------------

TracialAlgebra::TracialAlgebra(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw std::invalid_argument("tracial algebra needs at least one block");
  ExactScalar total;
  for (const auto& b : blocks_) {
    if (b.size == 0) throw std::invalid_argument("block size must be positive");
    if (sign(b.weight) < 0) throw std::invalid_argument("block weight must be nonnegative");
    total += b.weight;
  }
  if (total != ExactScalar(1L)) throw std::invalid_argument("block weights sum to " + total.to_string() + ", not 1");
}

TracialAlgebra TracialAlgebra::from_wedderburn(const repalg::WedderburnData& data) {
  if (data.mode != repalg::WedderburnMode::Enumerated) throw std::invalid_argument("algebra needs enumerated Wedderburn data");
  std::vector<Block> blocks;
  blocks.push_back({1, ExactScalar(data.trivial_weight)});
  for (const auto& b : data.blocks) blocks.push_back({b.degree.get_ui(), ExactScalar(b.weight)});
  return TracialAlgebra(std::move(blocks));
}

AlgebraElement AlgebraElement::zero(const TracialAlgebra& algebra) {
  std::vector<SparseMatrix> blocks;
  for (const auto& b : algebra.blocks()) blocks.emplace_back(b.size);
  return AlgebraElement(std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const TracialAlgebra& algebra) {
  std::vector<SparseMatrix> blocks;
  for (const auto& b : algebra.blocks()) blocks.push_back(SparseMatrix::identity(b.size));
  return AlgebraElement(std::move(blocks));
}

void AlgebraElement::check_shape(const AlgebraElement& o) const {
  if (blocks_.size() != o.blocks_.size()) throw std::invalid_argument("block count mismatch");
  for (std::size_t l = 0; l < blocks_.size(); ++l) {
    if (blocks_[l].dim() != o.blocks_[l].dim()) throw std::invalid_argument("block size mismatch");
  }
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  check_shape(o);
  AlgebraElement r = *this;
  for (std::size_t l = 0; l < blocks_.size(); ++l) r.blocks_[l] = blocks_[l] + o.blocks_[l];
  return r;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  check_shape(o);
  AlgebraElement r = *this;
  for (std::size_t l = 0; l < blocks_.size(); ++l) r.blocks_[l] = blocks_[l] - o.blocks_[l];
  return r;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
  check_shape(o);
  AlgebraElement r = *this;
  for (std::size_t l = 0; l < blocks_.size(); ++l) r.blocks_[l] = blocks_[l] * o.blocks_[l];
  return r;
}

AlgebraElement AlgebraElement::scaled(const GaussianRational& c) const {
  AlgebraElement r = *this;
  for (auto& b : r.blocks_) b = b.scaled(c);
  return r;
}

AlgebraElement AlgebraElement::adjoint() const {
  AlgebraElement r = *this;
  for (auto& b : r.blocks_) b = b.adjoint();
  return r;
}

void check_shape(const TracialAlgebra& algebra, const AlgebraElement& a) {
  if (a.blocks().size() != algebra.block_count()) throw std::invalid_argument("element has wrong number of blocks");
  for (std::size_t l = 0; l < a.blocks().size(); ++l) {
    if (a.block(l).dim() != algebra.blocks()[l].size) throw std::invalid_argument("element block " + std::to_string(l) + " has wrong size");
  }
}

ExactComplex trace(const TracialAlgebra& algebra, const AlgebraElement& a) {
  check_shape(algebra, a);
  ExactComplex sum;
  for (std::size_t l = 0; l < a.blocks().size(); ++l) {
    const GaussianRational tr = a.block(l).trace();
    if (tr.is_zero()) continue;
    const Rational inv(1, static_cast<long>(algebra.blocks()[l].size));
    const ExactScalar& w = algebra.blocks()[l].weight;
    sum += ExactComplex(w * ExactScalar(Rational(tr.re * inv)), w * ExactScalar(Rational(tr.im * inv)));
  }
  return sum;
}

TwoNorm two_norm(const TracialAlgebra& algebra, const AlgebraElement& a) {
  const ExactComplex sq = trace(algebra, a.adjoint() * a);
  return TwoNorm::from_square(sq.re);
}

// ---------------------------------------------------------------------------

namespace {

void require_identities(const PqvConstruction& c) {
  const auto& p = c.p;
  const auto& q = c.q;
  const auto& v = c.v;
  if (v.adjoint() * v != p) throw std::logic_error("v*v != p");
  if (v * v.adjoint() != q) throw std::logic_error("vv* != q");
  if (v * p * q != p * q) throw std::logic_error("vpq != pq");
}

}  // namespace

ExactScalar shrink_factor(const Rational& delta, long T_size) {
  if (delta < 0 || delta >= 1) throw std::invalid_argument("delta must lie in [0, 1)");
  const Rational m = (Rational(1) - delta) * T_size;
  if (m < 1) throw std::invalid_argument("(1 - delta)|T| must be at least 1");
  return ExactScalar::dyadic(Rational(-1) / m);
}

PqvConstruction build_pqv_alternating(const repalg::WedderburnData& data, const Rational& delta, long T_size) {
  const ExactScalar x = shrink_factor(delta, T_size);
  TracialAlgebra algebra = TracialAlgebra::from_wedderburn(data);
  AlgebraElement p = AlgebraElement::zero(algebra);
  AlgebraElement q = p;
  AlgebraElement v = p;
  std::vector<Integer> cuts;
  ExactScalar tau_p_formula;
  ExactScalar tau_pq_formula;
  for (std::size_t l = 1; l < algebra.block_count(); ++l) {
    const long k = static_cast<long>(algebra.blocks()[l].size);
    const Integer d_big = certified_floor(x * ExactScalar(k));
    const long d = to_long(d_big);
    if (2 * d - k < 0) {
      throw std::invalid_argument("block of degree " + std::to_string(k) + " has 2*d - k = " + std::to_string(2 * d - k) +
                                  " < 0; increase |D| or decrease |T|");
    }
    const auto uk = static_cast<std::size_t>(k);
    const auto ud = static_cast<std::size_t>(d);
    const auto lead = static_cast<std::size_t>(2 * d - k);
    for (std::size_t i = 0; i < ud; ++i) p.block(l).add(i, i, 1L);
    for (std::size_t i = 0; i < lead; ++i) {
      q.block(l).add(i, i, 1L);
      v.block(l).add(i, i, 1L);
    }
    for (std::size_t i = ud; i < uk; ++i) {
      q.block(l).add(i, i, 1L);
      v.block(l).add(i, i + ud - uk, 1L);
    }
    cuts.push_back(d_big);
    const ExactScalar& lambda = algebra.blocks()[l].weight;
    tau_p_formula += lambda * ExactScalar(Rational(d, k));
    tau_pq_formula += lambda * ExactScalar(Rational(2 * d - k, k));
  }
  PqvConstruction c{std::move(algebra), std::move(p), std::move(q), std::move(v), {}, {}, {}, {}, std::move(cuts), x};
  require_identities(c);
  c.tau_p = trace(c.algebra, c.p).re;
  c.tau_q = trace(c.algebra, c.q).re;
  c.tau_pq = trace(c.algebra, c.p * c.q).re;
  c.tau_v = trace(c.algebra, c.v);
  if (c.tau_p != tau_p_formula || c.tau_q != tau_p_formula || c.tau_pq != tau_pq_formula) {
    throw std::logic_error("alternating p/q traces disagree with the block formula");
  }
  return c;
}

PqvConstruction build_pqv_independent(long m) {
  if (m < 1) throw std::invalid_argument("independent construction needs m >= 1");
  const ExactScalar t = ExactScalar::dyadic(Rational(-1, m));
  const ExactScalar one(1L);
  TracialAlgebra algebra({{1, t * t}, {2, ExactScalar(2L) * t * (one - t)}, {1, (one - t) * (one - t)}});
  AlgebraElement p = AlgebraElement::zero(algebra);
  AlgebraElement q = p;
  AlgebraElement v = p;
  p.block(0).add(0, 0, 1L);
  p.block(1).add(0, 0, 1L);
  q.block(0).add(0, 0, 1L);
  q.block(1).add(1, 1, 1L);
  v.block(0).add(0, 0, 1L);
  v.block(1).add(1, 0, 1L);
  PqvConstruction c{std::move(algebra), std::move(p), std::move(q), std::move(v), {}, {}, {}, {}, {}, t};
  require_identities(c);
  c.tau_p = trace(c.algebra, c.p).re;
  c.tau_q = trace(c.algebra, c.q).re;
  c.tau_pq = trace(c.algebra, c.p * c.q).re;
  c.tau_v = trace(c.algebra, c.v);
  return c;
}

PqvBounds pqv_trace_bounds(int n, const Rational& delta, long T_size) {
  if (n < 6) throw std::invalid_argument("trace bounds need n >= 6 (degree bound regime)");
  const ExactScalar x = shrink_factor(delta, T_size);
  const Rational nontrivial = Rational(1) - Rational(Integer(2), factorial(static_cast<unsigned long>(n)));
  const Rational slack(1, n - 1);
  const ExactScalar one(1L);
  const ExactScalar two(2L);
  PqvBounds b;
  b.x = x;
  b.lower_tau_p = ExactScalar(nontrivial) * (x - ExactScalar(slack));
  b.lower_tau_pq = ExactScalar(nontrivial) * (two * x - one - ExactScalar(Rational(2 * slack)));
  b.upper_tau_pq = two * x - one;
  return b;
}

}  // namespace mcduff::blockop
