#pragma once

#include "mcduff/rational.hpp"

#include <mpfr.h>

#include <string>

namespace mcduff {

/// Closed interval [lo, hi] with MPFR endpoints. Every operation rounds the
/// lower endpoint toward -inf and the upper toward +inf, so the exact result
/// of the corresponding real operation is always enclosed.
class Interval {
 public:
  explicit Interval(mpfr_prec_t precision = 128);
  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(Interval other) noexcept;
  ~Interval();

  static Interval exact(const Rational& q, mpfr_prec_t precision);
  /// Encloses [lo, hi]; requires lo <= hi.
  static Interval hull(const Rational& lo, const Rational& hi, mpfr_prec_t precision);
  /// Encloses 2^r for a rational r.
  static Interval power_of_two(const Rational& r, mpfr_prec_t precision);

  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);
  Interval operator-() const;

  Interval pow(unsigned long n) const;
  /// x^e for rational e; requires the interval to be strictly positive
  /// (or nonnegative when e > 0).
  Interval pow(const Rational& e) const;
  Interval sqrt() const;
  Interval abs() const;

  bool certainly_positive() const;
  bool certainly_negative() const;
  bool contains_zero() const;
  bool certainly_less(const Interval& other) const;
  bool contains(const Rational& q) const;

  /// Decimal renderings with `digits` significant digits, rounded outward.
  std::string lower_string(int digits = 17) const;
  std::string upper_string(int digits = 17) const;
  double lower_double() const;
  double upper_double() const;
  double mid_double() const;
  /// Width of the interval, rounded up.
  double width() const;

  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

}  // namespace mcduff
