#pragma once

#include "mcduff/rational.hpp"

#include <string>

namespace mcduff {

/// Element of Q(i).
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(Rational real, Rational imag = Rational(0)) : re(std::move(real)), im(std::move(imag)) {}  // NOLINT
  GaussianRational(long real) : re(real) {}  // NOLINT

  bool is_zero() const { return re == 0 && im == 0; }
  GaussianRational conj() const { return {re, -im}; }
  Rational norm_squared() const { return re * re + im * im; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussianRational operator-() const { return {-re, -im}; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) { return a.re == b.re && a.im == b.im; }

  std::string to_string() const {
    if (im == 0) return mcduff::to_string(re);
    return mcduff::to_string(re) + (im < 0 ? "-" : "+") + mcduff::to_string(Rational(abs(im))) + "i";
  }
};

}  // namespace mcduff
