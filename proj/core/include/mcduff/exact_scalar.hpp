#pragma once

#include "mcduff/interval.hpp"
#include "mcduff/rational.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <stdexcept>
#include <utility>

namespace mcduff {

/// Precision schedule for interval refinement. Comparisons start at
/// `initial_bits` and double until the sign is certain or `max_bits` is hit.
struct PrecisionPolicy {
  mpfr_prec_t initial_bits = 128;
  mpfr_prec_t max_bits = 1 << 16;
};

/// Thrown when a certified decision needs more precision than allowed.
class UndecidedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An element of Q(2^(1/N) : N >= 1): a finite sum  sum_i q_i * 2^(f_i)  with
/// nonzero rational q_i and distinct rational exponents f_i in [0, 1).
///
/// The powers 2^f for distinct f in [0,1) are linearly independent over Q,
/// so this normal form is unique and equality is structural.
class ExactScalar {
 public:
  using TermMap = std::map<Rational, Rational>;  // exponent in [0,1) -> coefficient

  ExactScalar() = default;
  ExactScalar(const Rational& q);  // NOLINT(google-explicit-constructor)
  ExactScalar(long n);             // NOLINT(google-explicit-constructor)

  /// 2^r.
  static ExactScalar dyadic(const Rational& exponent);
  /// coefficient * 2^exponent.
  static ExactScalar term(const Rational& coefficient, const Rational& exponent);
  /// Inverse of to_string(); also accepts non-normalized exponents.
  static ExactScalar parse(std::string_view text);

  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  std::optional<Rational> as_rational() const;

  ExactScalar& operator+=(const ExactScalar& other);
  ExactScalar& operator-=(const ExactScalar& other);
  ExactScalar& operator*=(const ExactScalar& other);
  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);
  ExactScalar operator-() const;
  friend bool operator==(const ExactScalar& a, const ExactScalar& b) { return a.terms_ == b.terms_; }

  /// Integer powers; negative exponents need a single-term value.
  ExactScalar pow(long n) const;
  /// Rational powers of single-term values whose coefficient is 2^k times a
  /// perfect b-th power (b the exponent's denominator). Throws std::domain_error otherwise.
  ExactScalar pow(const Rational& e) const;
  /// Square root when it stays in the tower.
  std::optional<ExactScalar> sqrt() const;
  /// Division by a single-term value.
  ExactScalar divided_by(const ExactScalar& single_term) const;

  Interval enclose(mpfr_prec_t precision) const;
  double approx() const;
  /// Decimal approximation with `digits` significant digits.
  std::string decimal(int digits = 12) const;

  /// Canonical rendering "q1*2^(a1/b1) + q2*2^(a2/b2)"; exponent-0 terms print as "q".
  std::string to_string() const;

 private:
  void add_term(const Rational& coefficient, const Rational& exponent);

  TermMap terms_;
};

/// Sign of x: -1, 0 or +1. Single terms are decided by the sign of the
/// coefficient, two-term values by big-integer cross-exponentiation, longer
/// sums by interval refinement. Throws UndecidedError past policy.max_bits.
int sign(const ExactScalar& x, const PrecisionPolicy& policy = {});

std::strong_ordering compare(const ExactScalar& a, const ExactScalar& b, const PrecisionPolicy& policy = {});

/// Largest integer d with d <= x.
Integer certified_floor(const ExactScalar& x, const PrecisionPolicy& policy = {});

/// Complex number with ExactScalar parts; traces of Gaussian-rational
/// operators against ExactScalar weights land here.
struct ExactComplex {
  ExactScalar re;
  ExactScalar im;

  ExactComplex() = default;
  ExactComplex(ExactScalar real) : re(std::move(real)) {}  // NOLINT
  ExactComplex(ExactScalar real, ExactScalar imag) : re(std::move(real)), im(std::move(imag)) {}

  bool is_real() const { return im.is_zero(); }
  ExactComplex conj() const { return {re, -im}; }
  ExactScalar norm_squared() const { return re * re + im * im; }

  ExactComplex& operator+=(const ExactComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ExactComplex& operator-=(const ExactComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
  friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
  friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const ExactComplex&, const ExactComplex&) = default;

  std::string to_string() const;
};

/// A trace norm ||a||_2 = tau(a*a)^(1/2). `value` is set when the square root
/// stays inside the scalar tower; otherwise only the exact square is known.
struct TwoNorm {
  ExactScalar square;
  std::optional<ExactScalar> value;

  static TwoNorm from_square(ExactScalar sq);
  Interval enclose(mpfr_prec_t precision) const;
  /// "v" when exact, otherwise "sqrt(s)".
  std::string to_string() const;
};

}  // namespace mcduff
