#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace mcduff {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "a/b", "a" or "-a/b" (no whitespace, b != 0) into a canonical rational.
Rational parse_rational(std::string_view text);

/// Renders as "a/b", or "a" when the denominator is one.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Integer pow(const Integer& base, unsigned long exponent);
Rational pow(const Rational& base, long exponent);

/// q * 2^k for any signed k.
Rational mul_pow2(const Rational& q, long k);

Integer factorial(unsigned long n);
Integer floor(const Rational& q);
Integer ceil(const Rational& q);

long to_long(const Integer& z);

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace mcduff
