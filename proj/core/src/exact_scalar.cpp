#include "mcduff/exact_scalar.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mcduff {

namespace {

// Splits r into (floor(r), r - floor(r)).
std::pair<long, Rational> split_exponent(const Rational& r) {
  const Integer whole = floor(r);
  return {to_long(whole), r - Rational(whole)};
}

// Exact b-th root of a nonnegative integer, if it exists.
std::optional<Integer> exact_root(const Integer& z, unsigned long b) {
  Integer r;
  if (mpz_root(r.get_mpz_t(), z.get_mpz_t(), b) == 0) return std::nullopt;
  return r;
}

// Splits |q| = 2^k * m/n with m, n odd.
std::pair<long, Rational> strip_twos(const Rational& q) {
  Integer num = abs(q.get_num());
  Integer den = q.get_den();
  const long vn = static_cast<long>(mpz_scan1(num.get_mpz_t(), 0));
  const long vd = static_cast<long>(mpz_scan1(den.get_mpz_t(), 0));
  mpz_tdiv_q_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(vn));
  mpz_tdiv_q_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(vd));
  return {vn - vd, Rational(num, den)};
}

// Bit-size budget above which cross-exponentiation gives way to intervals.
constexpr double kCrossPowerBitBudget = 4.0e7;

// Sign of c1*2^f1 + c2*2^f2 (c1, c2 nonzero, f1 != f2), exactly.
std::optional<int> two_term_sign(const Rational& c1, const Rational& f1, const Rational& c2, const Rational& f2) {
  const int s1 = sgn(c1);
  const int s2 = sgn(c2);
  if (s1 == s2) return s1;
  // |c1| 2^f1 vs |c2| 2^f2  <=>  2^(f1-f2) vs u := |c2|/|c1|
  const Rational u = abs(c2) / abs(c1);
  const Rational r = f1 - f2;
  const Integer& a = r.get_num();
  const Integer& b = r.get_den();
  if (!b.fits_ulong_p()) return std::nullopt;
  const unsigned long bb = b.get_ui();
  const double bits = static_cast<double>(bb) *
                      static_cast<double>(std::max(mpz_sizeinbase(u.get_num_mpz_t(), 2), mpz_sizeinbase(u.get_den_mpz_t(), 2)));
  if (bits > kCrossPowerBitBudget || !a.fits_slong_p()) return std::nullopt;
  const long aa = a.get_si();
  // lhs = 2^a * den(u)^b, rhs = num(u)^b, with a moved to the other side when negative
  Integer lhs = pow(Integer(u.get_den()), bb);
  Integer rhs = pow(Integer(u.get_num()), bb);
  if (aa >= 0) {
    mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), static_cast<mp_bitcnt_t>(aa));
  } else {
    mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), static_cast<mp_bitcnt_t>(-aa));
  }
  const int c = cmp(lhs, rhs);  // sign of |c1|2^f1 - |c2|2^f2
  if (c == 0) throw std::logic_error("distinct dyadic exponents compared equal");
  return c > 0 ? s1 : s2;
}

int interval_sign(const ExactScalar& x, const PrecisionPolicy& policy) {
  for (mpfr_prec_t p = policy.initial_bits; p <= policy.max_bits; p *= 2) {
    const Interval iv = x.enclose(p);
    if (iv.certainly_positive()) return 1;
    if (iv.certainly_negative()) return -1;
  }
  throw UndecidedError("sign undecided at " + std::to_string(policy.max_bits) + " bits for " + x.decimal(6));
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

ExactScalar::ExactScalar(const Rational& q) {
  if (q == 0) return;
  Rational c = q;
  c.canonicalize();  // callers may pass unreduced mpq values
  terms_.emplace(Rational(0), std::move(c));
}

ExactScalar::ExactScalar(long n) : ExactScalar(Rational(n)) {}

ExactScalar ExactScalar::dyadic(const Rational& exponent) { return term(Rational(1), exponent); }

ExactScalar ExactScalar::term(const Rational& coefficient, const Rational& exponent) {
  ExactScalar s;
  s.add_term(coefficient, exponent);
  return s;
}

void ExactScalar::add_term(const Rational& coefficient, const Rational& exponent) {
  if (coefficient == 0) return;
  Rational e = exponent;
  e.canonicalize();
  auto [whole, frac] = split_exponent(e);
  Rational c = coefficient;
  c.canonicalize();
  c = mul_pow2(c, whole);
  auto [it, inserted] = terms_.try_emplace(frac, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

std::optional<Rational> ExactScalar::as_rational() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first == 0) return terms_.begin()->second;
  return std::nullopt;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& other) {
  for (const auto& [f, c] : other.terms_) add_term(c, f);
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& other) {
  for (const auto& [f, c] : other.terms_) add_term(-c, f);
  return *this;
}

ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
  ExactScalar r;
  for (const auto& [fa, ca] : a.terms_) {
    for (const auto& [fb, cb] : b.terms_) r.add_term(ca * cb, fa + fb);
  }
  return r;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& other) { return *this = *this * other; }

ExactScalar ExactScalar::operator-() const {
  ExactScalar r = *this;
  for (auto& [f, c] : r.terms_) c = -c;
  return r;
}

ExactScalar ExactScalar::pow(long n) const {
  if (n < 0) {
    if (terms_.size() != 1) throw std::domain_error("negative power of a multi-term scalar");
    const auto& [f, c] = *terms_.begin();
    return term(Rational(1) / c, -f).pow(-n);
  }
  ExactScalar result(1L);
  ExactScalar base = *this;
  auto e = static_cast<unsigned long>(n);
  while (e > 0) {
    if (e & 1UL) result *= base;
    e >>= 1UL;
    if (e > 0) base = base * base;
  }
  return result;
}

ExactScalar ExactScalar::pow(const Rational& e) const {
  if (e.get_den() == 1) return pow(to_long(e.get_num()));
  if (terms_.size() != 1) throw std::domain_error("rational power of a multi-term scalar");
  const auto& [f, c] = *terms_.begin();
  if (c < 0) throw std::domain_error("rational power of a negative scalar");
  const unsigned long b = e.get_den().get_ui();
  auto [k, odd] = strip_twos(c);
  auto rn = exact_root(odd.get_num(), b);
  auto rd = exact_root(odd.get_den(), b);
  if (!rn || !rd) throw std::domain_error("rational power leaves the dyadic tower");
  const Rational root(*rn, *rd);
  // (root^b * 2^(k+f))^(a/b) = root^a * 2^((k+f) a / b)
  const long a = to_long(e.get_num());
  return term(mcduff::pow(root, a), (Rational(k) + f) * e);
}

std::optional<ExactScalar> ExactScalar::sqrt() const {
  if (is_zero()) return ExactScalar();
  try {
    return pow(make_rational(1, 2));
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

ExactScalar ExactScalar::divided_by(const ExactScalar& single_term) const {
  return *this * single_term.pow(-1L);
}

Interval ExactScalar::enclose(mpfr_prec_t precision) const {
  Interval sum(precision);
  for (const auto& [f, c] : terms_) {
    sum = sum + Interval::exact(c, precision) * Interval::power_of_two(f, precision);
  }
  return sum;
}

namespace {

// Encloses x tightly enough that the relative width is below 2^-bits
// (cancellation between large coefficients can need far more working precision).
Interval tight_enclosure(const ExactScalar& x, mpfr_prec_t bits) {
  for (mpfr_prec_t p = std::max<mpfr_prec_t>(128, 2 * bits);; p *= 2) {
    Interval iv = x.enclose(p);
    const double w = iv.width();
    const double m = std::max(std::fabs(iv.lower_double()), std::fabs(iv.upper_double()));
    if (w <= std::ldexp(m, -static_cast<int>(bits)) || p >= (1 << 20)) return iv;
  }
}

}  // namespace

double ExactScalar::approx() const { return is_zero() ? 0.0 : tight_enclosure(*this, 60).mid_double(); }

std::string ExactScalar::decimal(int digits) const {
  if (is_zero()) return "0";
  const Interval iv = tight_enclosure(*this, static_cast<mpfr_prec_t>(4 * digits + 8));
  mpfr_t m;
  mpfr_init2(m, iv.precision());
  mpfr_add(m, iv.lo(), iv.hi(), MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, m);
  mpfr_clear(m);
  return std::string(buf.data());
}

std::string ExactScalar::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (const auto& [f, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += mcduff::to_string(c);
    if (f != 0) out += "*2^(" + mcduff::to_string(f) + ")";
  }
  return out;
}

ExactScalar ExactScalar::parse(std::string_view text) {
  ExactScalar result;
  const std::string body = trim(text);
  if (body.empty()) throw std::invalid_argument("empty scalar");
  std::vector<std::string> pieces;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char ch = body[i];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == '+' && depth == 0 && i > start) {
      pieces.push_back(body.substr(start, i - start));
      start = i + 1;
    }
  }
  pieces.push_back(body.substr(start));
  for (const auto& raw : pieces) {
    const std::string piece = trim(raw);
    if (piece.empty()) throw std::invalid_argument("malformed scalar '" + std::string(text) + "'");
    const auto hat = piece.find("2^(");
    if (hat == std::string::npos) {
      result += ExactScalar(parse_rational(piece));
      continue;
    }
    if (piece.back() != ')') throw std::invalid_argument("malformed dyadic term '" + piece + "'");
    const Rational exponent = parse_rational(trim(piece.substr(hat + 3, piece.size() - hat - 4)));
    std::string coef = trim(piece.substr(0, hat));
    Rational c(1);
    if (coef == "-") {
      c = -1;
    } else if (!coef.empty()) {
      if (coef.back() != '*') throw std::invalid_argument("malformed dyadic term '" + piece + "'");
      c = parse_rational(trim(coef.substr(0, coef.size() - 1)));
    }
    result.add_term(c, exponent);
  }
  return result;
}

int sign(const ExactScalar& x, const PrecisionPolicy& policy) {
  const auto& t = x.terms();
  if (t.empty()) return 0;
  if (t.size() == 1) return sgn(t.begin()->second);
  if (t.size() == 2) {
    auto it = t.begin();
    const auto& [f1, c1] = *it++;
    const auto& [f2, c2] = *it;
    if (auto s = two_term_sign(c1, f1, c2, f2)) return *s;
  }
  return interval_sign(x, policy);
}

std::strong_ordering compare(const ExactScalar& a, const ExactScalar& b, const PrecisionPolicy& policy) {
  const int s = sign(a - b, policy);
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Integer certified_floor(const ExactScalar& x, const PrecisionPolicy& policy) {
  if (auto q = x.as_rational()) return floor(*q);
  for (mpfr_prec_t p = policy.initial_bits; p <= policy.max_bits; p *= 2) {
    const Interval iv = x.enclose(p);
    Integer lo;
    Integer hi;
    mpfr_get_z(lo.get_mpz_t(), iv.lo(), MPFR_RNDD);
    mpfr_get_z(hi.get_mpz_t(), iv.hi(), MPFR_RNDD);
    if (lo != hi) continue;
    // Confirm d <= x < d+1 exactly; x is irrational here, so equality cannot occur.
    const ExactScalar d{Rational(lo)};
    if (sign(x - d, policy) >= 0 && sign(x - d - ExactScalar(1L), policy) < 0) return lo;
  }
  throw UndecidedError("floor undecided for " + x.decimal(8));
}

std::string ExactComplex::to_string() const {
  if (im.is_zero()) return re.to_string();
  return "(" + re.to_string() + ") + i*(" + im.to_string() + ")";
}

TwoNorm TwoNorm::from_square(ExactScalar sq) {
  TwoNorm n;
  n.value = sq.sqrt();
  n.square = std::move(sq);
  return n;
}

Interval TwoNorm::enclose(mpfr_prec_t precision) const {
  if (value) return value->enclose(precision);
  return square.enclose(precision).sqrt();
}

std::string TwoNorm::to_string() const {
  if (value) return value->to_string();
  return "sqrt(" + square.to_string() + ")";
}

}  // namespace mcduff
