#include "mcduff/interval.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <utility>

namespace mcduff {

namespace {

mpfr_prec_t joint(const Interval& a, const Interval& b) {
  return std::max(a.precision(), b.precision());
}

std::string render(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
  if (mpfr_zero_p(x)) return "0";
  mpfr_exp_t exp = 0;
  char* raw = mpfr_get_str(nullptr, &exp, 10, static_cast<std::size_t>(digits), x, rnd);
  std::unique_ptr<char, void (*)(char*)> guard(raw, mpfr_free_str);
  std::string mant(raw);
  std::string sign;
  if (!mant.empty() && mant[0] == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  std::string out = sign + mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  out += "e" + std::to_string(exp - 1);
  return out;
}

}  // namespace

Interval::Interval(mpfr_prec_t precision) {
  mpfr_init2(lo_, precision);
  mpfr_init2(hi_, precision);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& other) {
  mpfr_init2(lo_, other.precision());
  mpfr_init2(hi_, other.precision());
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(other.precision()) {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(Interval other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::exact(const Rational& q, mpfr_prec_t precision) {
  Interval r(precision);
  mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::hull(const Rational& lo, const Rational& hi, mpfr_prec_t precision) {
  if (lo > hi) throw std::invalid_argument("interval endpoints out of order");
  Interval r(precision);
  mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::power_of_two(const Rational& e, mpfr_prec_t precision) {
  // 2^(a/b) = rootn(2^a, b); floor(a/b) is split off so 2^a stays small.
  const Integer whole = floor(e);
  const Rational frac = e - Rational(whole);
  const long shift = to_long(whole);
  Interval r(precision);
  if (frac == 0) {
    mpfr_set_ui_2exp(r.lo_, 1, shift, MPFR_RNDD);
    mpfr_set_ui_2exp(r.hi_, 1, shift, MPFR_RNDU);
    return r;
  }
  const unsigned long a = frac.get_num().get_ui();
  if (!frac.get_den().fits_ulong_p()) throw std::overflow_error("dyadic exponent denominator too large");
  const unsigned long b = frac.get_den().get_ui();
  mpfr_t base;
  mpfr_init2(base, precision);
  mpfr_set_ui_2exp(base, 1, static_cast<mpfr_exp_t>(a), MPFR_RNDN);  // exact
  mpfr_rootn_ui(r.lo_, base, b, MPFR_RNDD);
  mpfr_rootn_ui(r.hi_, base, b, MPFR_RNDU);
  mpfr_clear(base);
  mpfr_mul_2si(r.lo_, r.lo_, shift, MPFR_RNDD);
  mpfr_mul_2si(r.hi_, r.hi_, shift, MPFR_RNDU);
  return r;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(joint(a, b));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(joint(a, b));
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

Interval Interval::operator-() const {
  Interval r(precision());
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  const mpfr_prec_t p = joint(a, b);
  Interval r(p);
  mpfr_t tmp;
  mpfr_init2(tmp, p);
  mpfr_srcptr xs[2] = {a.lo_, a.hi_};
  mpfr_srcptr ys[2] = {b.lo_, b.hi_};
  bool first = true;
  for (auto x : xs) {
    for (auto y : ys) {
      mpfr_mul(tmp, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(tmp, r.lo_)) mpfr_set(r.lo_, tmp, MPFR_RNDD);
      mpfr_mul(tmp, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(tmp, r.hi_)) mpfr_set(r.hi_, tmp, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(tmp);
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw std::domain_error("interval division by an interval containing zero");
  const mpfr_prec_t p = joint(a, b);
  Interval inv(p);
  mpfr_ui_div(inv.lo_, 1, b.hi_, MPFR_RNDD);
  mpfr_ui_div(inv.hi_, 1, b.lo_, MPFR_RNDU);
  return a * inv;
}

Interval Interval::pow(unsigned long n) const {
  Interval r(precision());
  if (n == 0) {
    mpfr_set_ui(r.lo_, 1, MPFR_RNDD);
    mpfr_set_ui(r.hi_, 1, MPFR_RNDU);
    return r;
  }
  const bool odd = (n % 2) == 1;
  if (odd || mpfr_sgn(lo_) >= 0) {
    mpfr_pow_ui(r.lo_, lo_, n, MPFR_RNDD);
    mpfr_pow_ui(r.hi_, hi_, n, MPFR_RNDU);
  } else if (mpfr_sgn(hi_) <= 0) {
    mpfr_pow_ui(r.lo_, hi_, n, MPFR_RNDD);
    mpfr_pow_ui(r.hi_, lo_, n, MPFR_RNDU);
  } else {
    mpfr_t m;
    mpfr_init2(m, precision());
    mpfr_neg(m, lo_, MPFR_RNDU);
    mpfr_max(m, m, hi_, MPFR_RNDU);
    mpfr_set_zero(r.lo_, 1);
    mpfr_pow_ui(r.hi_, m, n, MPFR_RNDU);
    mpfr_clear(m);
  }
  return r;
}

Interval Interval::pow(const Rational& e) const {
  if (e == 0) return pow(0UL);
  if (e < 0) {
    Interval one = exact(Rational(1), precision());
    return one / pow(Rational(-e));
  }
  if (mpfr_sgn(lo_) < 0) throw std::domain_error("rational power of an interval reaching below zero");
  if (!e.get_den().fits_ulong_p()) throw std::overflow_error("exponent denominator too large");
  const unsigned long b = e.get_den().get_ui();
  Interval r(precision());
  mpfr_pow_z(r.lo_, lo_, e.get_num_mpz_t(), MPFR_RNDD);
  mpfr_pow_z(r.hi_, hi_, e.get_num_mpz_t(), MPFR_RNDU);
  if (b != 1) {
    mpfr_rootn_ui(r.lo_, r.lo_, b, MPFR_RNDD);
    mpfr_rootn_ui(r.hi_, r.hi_, b, MPFR_RNDU);
  }
  return r;
}

Interval Interval::sqrt() const {
  if (mpfr_sgn(lo_) < 0) throw std::domain_error("square root of an interval reaching below zero");
  Interval r(precision());
  mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::abs() const {
  if (mpfr_sgn(lo_) >= 0) return *this;
  if (mpfr_sgn(hi_) <= 0) return -*this;
  Interval r(precision());
  mpfr_set_zero(r.lo_, 1);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, hi_, MPFR_RNDU);
  return r;
}

bool Interval::certainly_positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::certainly_negative() const { return mpfr_sgn(hi_) < 0; }
bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
bool Interval::certainly_less(const Interval& other) const { return mpfr_less_p(hi_, other.lo_); }

bool Interval::contains(const Rational& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

std::string Interval::lower_string(int digits) const { return render(lo_, digits, MPFR_RNDD); }
std::string Interval::upper_string(int digits) const { return render(hi_, digits, MPFR_RNDU); }
double Interval::lower_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::upper_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid_double() const {
  mpfr_t m;
  mpfr_init2(m, precision() + 1);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  const double d = mpfr_get_d(m, MPFR_RNDN);
  mpfr_clear(m);
  return d;
}

double Interval::width() const {
  mpfr_t w;
  mpfr_init2(w, precision());
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  const double d = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return d;
}

}  // namespace mcduff
