#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>

namespace merodde {

using Complex = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;

// Complex number with exact rational real/imaginary parts.  Closed under
// +,-,*,/ which is all the series recursions need; used by the exact
// coefficient mode where lambda itself is a Gaussian rational.
class GaussianRational {
 public:
  GaussianRational() : re_(0), im_(0) {}
  GaussianRational(long long v) : re_(v), im_(0) {}
  GaussianRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussianRational from_ratio(long long num, long long den) {
    return GaussianRational(Rational(num, den));
  }
  static GaussianRational i() { return GaussianRational(Rational(0), Rational(1)); }

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

  Complex to_complex() const {
    return Complex(re_.convert_to<double>(), im_.convert_to<double>());
  }

  GaussianRational operator-() const { return GaussianRational(-re_, -im_); }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return GaussianRational(a.re_ + b.re_, a.im_ + b.im_);
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return GaussianRational(a.re_ - b.re_, a.im_ - b.im_);
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return GaussianRational(a.re_ * b.re_ - a.im_ * b.im_,
                            a.re_ * b.im_ + a.im_ * b.re_);
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    Rational d = b.re_ * b.re_ + b.im_ * b.im_;
    return GaussianRational((a.re_ * b.re_ + a.im_ * b.im_) / d,
                            (a.im_ * b.re_ - a.re_ * b.im_) / d);
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
    return !(a == b);
  }

  std::string str() const {
    return re_.str() + (im_.is_zero() ? "" : (" + " + im_.str() + "i"));
  }

 private:
  Rational re_, im_;
};

// Uniform scalar interface for the series algebra: works for
// std::complex<double> (float mode) and GaussianRational (exact mode).
template <class S>
struct scalar_ops;

template <>
struct scalar_ops<Complex> {
  static Complex from_ratio(long long num, long long den) {
    return Complex(static_cast<double>(num) / static_cast<double>(den), 0.0);
  }
  static Complex from_int(long long v) { return Complex(static_cast<double>(v), 0.0); }
  static bool is_zero(const Complex& v) { return v == Complex(0.0, 0.0); }
  static Complex to_complex(const Complex& v) { return v; }
};

template <>
struct scalar_ops<GaussianRational> {
  static GaussianRational from_ratio(long long num, long long den) {
    return GaussianRational::from_ratio(num, den);
  }
  static GaussianRational from_int(long long v) { return GaussianRational(v); }
  static bool is_zero(const GaussianRational& v) { return v.is_zero(); }
  static Complex to_complex(const GaussianRational& v) { return v.to_complex(); }
};

}  // namespace merodde
