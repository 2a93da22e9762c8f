#pragma once

#include "merodde/errors.hpp"
#include "merodde/scalars.hpp"

namespace merodde::sf {

// psi'(z), the derivative of the digamma function.  Recurrence pushes the
// argument to Re z > 16, then the Bernoulli asymptotic series takes over.
// Relative accuracy ~1e-12 for |arg z| < 3pi/4.
Complex trigamma(Complex z);

// Bernoulli numbers B_2..B_12 as exact ratios.
struct BernoulliRatio { long long num, den; };
inline constexpr BernoulliRatio kBernoulli[6] = {
    {1, 6}, {-1, 30}, {1, 42}, {-1, 30}, {5, 66}, {-691, 2730}};

// Trigamma via the asymptotic series alone, truncated after the B_{2k} term
// with k <= k_max (diagnostic/test surface).
Complex trigamma_asymptotic(Complex z, int k_max);

// Xi(x) = x coth x - 1.  Simple poles at x = i pi k, k != 0; even function;
// Taylor branch below |x| = 1e-2 keeps the origin stable.
Complex xi(Complex x);

// mu(z) = (1/2b) psi'(1 + z/(2b)) - 1/(z + 2b); double poles at z = -2kb.
Complex mu_kernel(Complex z, double b);

}  // namespace merodde::sf
