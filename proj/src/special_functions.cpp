#include "merodde/special_functions.hpp"

#include <cmath>
#include <numbers>

namespace merodde::sf {

namespace {
constexpr double kPi = std::numbers::pi;
}

Complex trigamma_asymptotic(Complex z, int k_max) {
  Complex inv = 1.0 / z;
  Complex inv2 = inv * inv;
  Complex sum = inv + 0.5 * inv2;
  Complex p = inv * inv2;  // z^{-(2k+1)} running power, k = 1
  for (int k = 1; k <= k_max && k <= 6; ++k) {
    sum += (static_cast<double>(kBernoulli[k - 1].num) /
            static_cast<double>(kBernoulli[k - 1].den)) * p;
    p *= inv2;
  }
  return sum;
}

Complex trigamma(Complex z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw PolePoint("trigamma pole at a nonpositive integer");
  Complex acc(0.0, 0.0);
  // psi'(z) = psi'(z+1) + 1/z^2
  while (z.real() < 16.0) {
    acc += 1.0 / (z * z);
    z += 1.0;
  }
  return acc + trigamma_asymptotic(z, 6);
}

Complex xi(Complex x) {
  double ax = std::abs(x);
  if (ax < 1e-2) {
    // x coth x = 1 + x^2/3 - x^4/45 + 2x^6/945 - x^8/4725 + ...
    Complex x2 = x * x;
    return x2 * (1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0 - x2 / 4725.0)));
  }
  // even function: reduce to Re x >= 0 where exp(2x) does not underflow the
  // denominator
  Complex w = (x.real() < 0.0) ? -x : x;
  double k = std::round(w.imag() / kPi);
  if (k != 0.0 && std::abs(w - Complex(0.0, k * kPi)) < 1e-12 * (1.0 + ax))
    throw PolePoint("Xi pole at i pi k");
  Complex coth;
  if (w.real() > 20.0) {
    coth = 1.0;  // e^{-2w} below double noise for the product w*coth
    Complex e = std::exp(-2.0 * w);
    coth += 2.0 * e / (1.0 - e);
  } else {
    Complex e = std::exp(2.0 * w);
    coth = (e + 1.0) / (e - 1.0);
  }
  return w * coth - 1.0;
}

Complex mu_kernel(Complex z, double b) {
  if (!(b > 0.0)) throw ConfigError("mu_kernel needs b > 0");
  // double poles at z = -2kb, k = 1, 2, ...
  double k = std::round(-z.real() / (2.0 * b));
  if (k >= 1.0 && std::abs(z + 2.0 * k * b) < 1e-12 * (1.0 + std::abs(z)))
    throw PolePoint("mu kernel pole at z = -2kb");
  return trigamma(1.0 + z / (2.0 * b)) / (2.0 * b) - 1.0 / (z + 2.0 * b);
}

}  // namespace merodde::sf
