#include "mcduff/tensortrace.hpp"

#include <stdexcept>
#include <string>

namespace mcduff::tensortrace {

TensorWord::TensorWord(std::shared_ptr<const TracialAlgebra> base, std::set<long> index_set)
    : base_(std::move(base)), index_(std::make_shared<const std::set<long>>(std::move(index_set))) {
  if (!base_) throw std::invalid_argument("tensor word needs a base algebra");
  identity_ = AlgebraElement::identity(*base_);
}

TensorWord TensorWord::elementary(std::shared_ptr<const TracialAlgebra> base, std::set<long> index_set,
                                  const AlgebraElement& a, const std::set<long>& R) {
  TensorWord w(std::move(base), std::move(index_set));
  for (long t : R) w.set(t, a);
  return w;
}

void TensorWord::set(long t, const AlgebraElement& a) {
  if (!index_->contains(t)) throw std::invalid_argument("coordinate " + std::to_string(t) + " is not in the index set");
  blockop::check_shape(*base_, a);
  if (a == identity_) {
    factors_.erase(t);
  } else {
    factors_.insert_or_assign(t, a);
  }
}

AlgebraElement TensorWord::at(long t) const {
  auto it = factors_.find(t);
  return it == factors_.end() ? identity_ : it->second;
}

void TensorWord::check_compatible(const TensorWord& o) const {
  if (base_ != o.base_ && base_->blocks().size() != o.base_->blocks().size()) throw std::invalid_argument("tensor words over different algebras");
  if (index_ != o.index_ && *index_ != *o.index_) throw std::invalid_argument("tensor words over different index sets");
}

TensorWord TensorWord::operator*(const TensorWord& o) const {
  check_compatible(o);
  TensorWord r = *this;
  for (const auto& [t, b] : o.factors_) {
    auto it = r.factors_.find(t);
    if (it == r.factors_.end()) {
      r.factors_.emplace(t, b);
    } else {
      AlgebraElement prod = it->second * b;
      if (prod == identity_) {
        r.factors_.erase(it);
      } else {
        it->second = std::move(prod);
      }
    }
  }
  return r;
}

TensorWord TensorWord::adjoint() const {
  TensorWord r = *this;
  for (auto& [t, a] : r.factors_) a = a.adjoint();
  return r;
}

TensorWord TensorWord::permute(const std::map<long, long>& sigma) const {
  std::set<long> image;
  for (long t : *index_) {
    auto it = sigma.find(t);
    if (it == sigma.end()) throw std::invalid_argument("permutation undefined at " + std::to_string(t));
    if (!index_->contains(it->second)) throw std::invalid_argument("permutation leaves the index set");
    image.insert(it->second);
  }
  if (image.size() != index_->size() || sigma.size() != index_->size()) throw std::invalid_argument("map is not a bijection of the index set");
  TensorWord r = *this;
  r.factors_.clear();
  for (const auto& [t, a] : factors_) r.factors_.emplace(sigma.at(t), a);
  return r;
}

ExactComplex TensorWord::trace() const {
  // repeated factors are common (a_R), so trace each distinct one once
  std::vector<std::pair<const AlgebraElement*, ExactComplex>> seen;
  ExactComplex result(ExactScalar(1L));
  for (const auto& [t, a] : factors_) {
    const ExactComplex* tr = nullptr;
    for (const auto& [e, v] : seen) {
      if (*e == a) {
        tr = &v;
        break;
      }
    }
    if (tr == nullptr) {
      seen.emplace_back(&a, blockop::trace(*base_, a));
      tr = &seen.back().second;
    }
    result = result * *tr;
    if (result.re.is_zero() && result.im.is_zero()) break;
  }
  return result;
}

// ---------------------------------------------------------------------------

void TensorSum::add(const ExactScalar& c, const TensorWord& w) {
  if (c.is_zero()) return;
  for (auto& [coef, word] : terms_) {
    if (word == w) {
      coef += c;
      if (coef.is_zero()) std::erase_if(terms_, [](const Term& term) { return term.first.is_zero(); });
      return;
    }
  }
  terms_.emplace_back(c, w);
}

TensorSum TensorSum::operator+(const TensorSum& o) const {
  TensorSum r = *this;
  for (const auto& [c, w] : o.terms_) r.add(c, w);
  return r;
}

TensorSum TensorSum::operator-(const TensorSum& o) const {
  TensorSum r = *this;
  for (const auto& [c, w] : o.terms_) r.add(-c, w);
  return r;
}

TensorSum TensorSum::operator*(const TensorSum& o) const {
  TensorSum r;
  for (const auto& [a, u] : terms_) {
    for (const auto& [b, w] : o.terms_) r.add(a * b, u * w);
  }
  return r;
}

TensorSum TensorSum::scaled(const ExactScalar& c) const {
  TensorSum r;
  for (const auto& [a, u] : terms_) r.add(a * c, u);
  return r;
}

TensorSum TensorSum::adjoint() const {
  TensorSum r;
  for (const auto& [a, u] : terms_) r.add(a, u.adjoint());
  return r;
}

TensorSum TensorSum::permute(const std::map<long, long>& sigma) const {
  TensorSum r;
  for (const auto& [a, u] : terms_) r.add(a, u.permute(sigma));
  return r;
}

ExactComplex TensorSum::trace() const {
  ExactComplex s;
  for (const auto& [a, u] : terms_) s += ExactComplex(a) * u.trace();
  return s;
}

ExactComplex TensorSum::inner(const TensorSum& y) const {
  ExactComplex s;
  for (const auto& [b, w] : y.terms_) {
    const TensorWord wa = w.adjoint();
    for (const auto& [a, u] : terms_) s += ExactComplex(a * b) * (wa * u).trace();
  }
  return s;
}

ExactScalar TensorSum::norm_squared() const {
  const ExactComplex v = inner(*this);
  if (!v.is_real()) throw std::logic_error("tau(x* x) has an imaginary part");
  return v.re;
}

// ---------------------------------------------------------------------------

namespace {

void require_order(const ExactScalar& tau_p, const ExactScalar& tau_pq) {
  if (sign(tau_pq) < 0 || compare(tau_pq, tau_p) > 0 || compare(tau_p, ExactScalar(1L)) > 0) {
    throw std::invalid_argument("need 0 <= tau(pq) <= tau(p) <= 1");
  }
}

}  // namespace

ExactScalar noncommutation_defect(const ExactScalar& tau_p, const ExactScalar& tau_pq, long s) {
  if (s < 0) throw std::invalid_argument("|S| must be nonnegative");
  require_order(tau_p, tau_pq);
  return ExactScalar(2L) * (tau_p.pow(s) - tau_pq.pow(s));
}

ExactScalar centrality_defect(const ExactScalar& tau_p, const ExactScalar& tau_pq, long s, long moved) {
  if (moved < 0 || moved > s) throw std::invalid_argument("need 0 <= moved <= |S|");
  require_order(tau_p, tau_pq);
  return ExactScalar(2L) * (tau_p.pow(s) - tau_p.pow(s - moved) * tau_pq.pow(2 * moved));
}

ExactScalar centrality_bound(const ExactScalar& tau_pq, long moved) {
  if (moved < 0) throw std::invalid_argument("moved must be nonnegative");
  return ExactScalar(8L) * (ExactScalar(1L) - tau_pq.pow(moved));
}

namespace {

TensorWord v_word(const blockop::PqvConstruction& c, const std::set<long>& T, const std::set<long>& S) {
  auto base = std::make_shared<const TracialAlgebra>(c.algebra);
  return TensorWord::elementary(base, T, c.v, S);
}

}  // namespace

ExactScalar word_noncommutation_defect(const blockop::PqvConstruction& c, const std::set<long>& T, const std::set<long>& S) {
  const TensorSum v = v_word(c, T, S);
  const TensorSum comm = v * v.adjoint() - v.adjoint() * v;
  return comm.norm_squared();
}

ExactScalar word_centrality_defect(const blockop::PqvConstruction& c, const std::set<long>& T, const std::set<long>& S,
                                   const std::map<long, long>& sigma) {
  const TensorSum v = v_word(c, T, S);
  return (v.permute(sigma) - v).norm_squared();
}

// ---------------------------------------------------------------------------

namespace {

struct DenseMatrix {
  std::size_t n = 0;
  std::vector<GaussianRational> a;

  explicit DenseMatrix(std::size_t dim) : n(dim), a(dim * dim) {}
  GaussianRational& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const GaussianRational& operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

DenseMatrix densify(const blockop::SparseMatrix& m) {
  DenseMatrix d(m.dim());
  for (const auto& [ij, v] : m.entries()) d(ij.first, ij.second) = v;
  return d;
}

DenseMatrix kron(const DenseMatrix& x, const DenseMatrix& y) {
  DenseMatrix r(x.n * y.n);
  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t j = 0; j < x.n; ++j) {
      if (x(i, j).is_zero()) continue;
      for (std::size_t k = 0; k < y.n; ++k) {
        for (std::size_t l = 0; l < y.n; ++l) r(i * y.n + k, j * y.n + l) = x(i, j) * y(k, l);
      }
    }
  }
  return r;
}

/// tr(x* y), unnormalized.
GaussianRational pairing(const DenseMatrix& x, const DenseMatrix& y) {
  GaussianRational s;
  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t j = 0; j < x.n; ++j) {
      // (x* y)_{jj} = sum_i conj(x_ij) y_ij
      if (!x(i, j).is_zero() && !y(i, j).is_zero()) s += x(i, j).conj() * y(i, j);
    }
  }
  return s;
}

GaussianRational dense_trace(const DenseMatrix& x) {
  GaussianRational s;
  for (std::size_t i = 0; i < x.n; ++i) s += x(i, i);
  return s;
}

ExactComplex weighted(const ExactScalar& w, const GaussianRational& g, std::size_t dim) {
  const Rational inv(1, static_cast<long>(dim));
  return {w * ExactScalar(Rational(g.re * inv)), w * ExactScalar(Rational(g.im * inv))};
}

}  // namespace

DenseResult dense_oracle(const TensorSum& x) {
  DenseResult out;
  if (x.terms().empty()) return out;
  const TensorWord& first = x.terms().front().second;
  const TracialAlgebra& base = first.base();
  const std::vector<long> coords(first.index_set().begin(), first.index_set().end());
  if (coords.size() > 3) throw std::invalid_argument("dense oracle supports |T| <= 3");
  std::size_t per_copy = 0;
  for (const auto& b : base.blocks()) per_copy += b.size;
  std::size_t total = 1;
  for (std::size_t i = 0; i < coords.size(); ++i) total *= per_copy;
  if (total > 10000) throw std::invalid_argument("dense dimension " + std::to_string(total) + " exceeds 10^4");

  const std::size_t nb = base.block_count();
  const std::size_t nt = x.terms().size();
  std::vector<ExactComplex> traces(nt);
  std::vector<std::vector<ExactComplex>> gram(nt, std::vector<ExactComplex>(nt));

  std::vector<std::size_t> tuple(coords.size(), 0);
  while (true) {
    ExactScalar w(1L);
    for (std::size_t i = 0; i < coords.size(); ++i) w *= base.blocks()[tuple[i]].weight;
    std::vector<DenseMatrix> mats;
    mats.reserve(nt);
    for (const auto& [c, word] : x.terms()) {
      DenseMatrix m(1);
      m(0, 0) = GaussianRational(1L);
      for (std::size_t i = 0; i < coords.size(); ++i) m = kron(m, densify(word.at(coords[i]).block(tuple[i])));
      mats.push_back(std::move(m));
    }
    const std::size_t dim = mats.front().n;
    if (!w.is_zero()) {
      for (std::size_t j = 0; j < nt; ++j) {
        traces[j] += weighted(w, dense_trace(mats[j]), dim);
        for (std::size_t k = 0; k < nt; ++k) gram[j][k] += weighted(w, pairing(mats[j], mats[k]), dim);
      }
    }
    std::size_t pos = 0;
    while (pos < tuple.size() && ++tuple[pos] == nb) tuple[pos++] = 0;
    if (pos == tuple.size()) break;
  }

  ExactComplex norm;
  for (std::size_t j = 0; j < nt; ++j) {
    const ExactScalar& cj = x.terms()[j].first;
    out.trace += ExactComplex(cj) * traces[j];
    for (std::size_t k = 0; k < nt; ++k) norm += ExactComplex(cj * x.terms()[k].first) * gram[j][k];
  }
  if (!norm.is_real()) throw std::logic_error("dense norm has an imaginary part");
  out.norm_squared = norm.re;
  return out;
}

}  // namespace mcduff::tensortrace
