#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "merodde/half_power_series.hpp"

namespace merodde::series {

struct DDEParameters {
  double a;    // step, positive real
  double b;    // a/2 exactly
  Complex mu;

  DDEParameters(double a_, Complex mu_) : a(a_), b(a_ / 2.0), mu(mu_) {
    if (!(a > 0.0)) throw ConfigError("step a must be positive");
  }
};

enum class Branch { plus, minus };

inline char branch_char(Branch br) { return br == Branch::plus ? '+' : '-'; }

// arg normalized to [0, 2*pi).
inline double arg_in_2pi(Complex v) {
  double t = std::arg(v);
  if (t < 0.0) t += 2.0 * std::numbers::pi;
  if (t >= 2.0 * std::numbers::pi) t -= 2.0 * std::numbers::pi;
  return t;
}

// lambda = +/- sqrt(-mu / (2b)); the plus branch takes the principal square
// root, the minus branch its negative, and arg lambda is reported in [0,2pi).
inline Complex lambda_from_mu(const DDEParameters& p, Branch br) {
  if (p.mu == Complex(0.0, 0.0))
    throw DegenerateLambda("mu = 0: the square-root scale degenerates; use the elliptic solution");
  Complex v = -p.mu / (2.0 * p.b);
  if (v.imag() == 0.0) v = Complex(v.real(), 0.0);  // scrub -0, keep sqrt on the principal sheet
  Complex w = std::sqrt(v);
  return br == Branch::plus ? w : -w;
}

template <class S>
struct FormalSolutionT {
  S a, b, mu;
  Branch branch;
  S lambda;
  S c0;               // constant term, 1/(2b)
  std::vector<S> y;   // y[k-2] is the coefficient of z^{-k/2}, k = 2..K
  int K = 0;

  // f_hat = lambda z^{1/2} + c0 + sum y_k z^{-k/2}, truncated at order K
  HalfPowerSeries<S> to_series() const {
    using HS = HalfPowerSeries<S>;
    HS f = HS::monomial(lambda, -1) + HS::constant(c0);
    for (int k = 2; k <= K; ++k) f = f + HS::monomial(y[static_cast<size_t>(k - 2)], k);
    return f.truncate_to(K);
  }
};

using FormalSolution = FormalSolutionT<Complex>;
using ExactFormalSolution = FormalSolutionT<GaussianRational>;

namespace detail {

// Left-over of the transformed equation for a candidate correction series
// yhat (terms z^{-k/2}, k >= 2):
//
//   D[z^{1/2} yhat] - (1/2lambda)(S[yhat'] - D[yhat^2] - (1/b) D[yhat])
//     - S[z^{-1/2}]/4 + D[z^{1/2}]/(2b)
//
// with S/D the symmetric shift sum/difference.  The candidate solves the
// equation iff this vanishes order by order.
template <class S>
HalfPowerSeries<S> correction_residual(const HalfPowerSeries<S>& yhat, const S& b,
                                       const S& lambda, int depth) {
  using HS = HalfPowerSeries<S>;
  const S half = scalar_ops<S>::from_ratio(1, 2);
  const S quarter = scalar_ops<S>::from_ratio(1, 4);
  const S inv2l = S(1) / (scalar_ops<S>::from_int(2) * lambda);
  const S invb = S(1) / b;

  HS zhalf_y = HS::monomial(S(1), -1) * yhat;  // z^{1/2} * yhat
  HS lhs = shift_diff(zhalf_y, b, depth);

  HS rhs = (shift_sum(diff(yhat), b, depth) - shift_diff(yhat * yhat, b, depth) -
            shift_diff(yhat, b, depth).scaled(invb))
               .scaled(inv2l);
  rhs = rhs + shift_sum_power(-1, b, depth).scaled(quarter) -
        shift_diff_power(1, b, depth).scaled(half * invb);

  return lhs - rhs;
}

template <class S>
FormalSolutionT<S> formal_solution_core(const S& a, const S& mu, const S& lambda,
                                        Branch br, int K) {
  using HS = HalfPowerSeries<S>;
  if (K < 2) throw ConfigError("formal solution needs K >= 2");
  const S b = a * scalar_ops<S>::from_ratio(1, 2);
  const int depth = K + 4;

  FormalSolutionT<S> fs;
  fs.a = a;
  fs.b = b;
  fs.mu = mu;
  fs.branch = br;
  fs.lambda = lambda;
  fs.c0 = S(1) / (scalar_ops<S>::from_int(2) * b);
  fs.K = K;
  fs.y.reserve(static_cast<size_t>(K - 1));

  // Triangular recursion: the coefficient of z^{-(k+1)/2} in the residual of
  // the partial correction is linear in the next unknown y_k with multiplier
  // (1-k) b, which never vanishes for k >= 2.
  HS yhat = HS::zero();
  for (int k = 2; k <= K; ++k) {
    HS r = correction_residual(yhat, b, lambda, depth);
    S rk = r.known(k + 1) ? r.coeff(k + 1) : S(0);
    S yk = rk / (scalar_ops<S>::from_int(k - 1) * b);
    fs.y.push_back(yk);
    yhat = yhat + HS::monomial(yk, k);
  }
  return fs;
}

}  // namespace detail

// Floating-point coefficient recursion.
inline FormalSolution formal_solution(const DDEParameters& p, Branch br, int K) {
  Complex lambda = lambda_from_mu(p, br);
  return detail::formal_solution_core<Complex>(Complex(p.a, 0.0), p.mu, lambda, br, K);
}

// Exact-rational mode for parameter sets whose lambda is itself a Gaussian
// rational (lambda^2 = -mu/(2b) is validated).  Coefficients come out exact,
// which is what the golden tests freeze.
inline ExactFormalSolution formal_solution_exact(const GaussianRational& a,
                                                 const GaussianRational& mu,
                                                 const GaussianRational& lambda, Branch br,
                                                 int K) {
  if (mu.is_zero()) throw DegenerateLambda("mu = 0 has no square-root series");
  GaussianRational b = a * GaussianRational::from_ratio(1, 2);
  if (lambda * lambda != -mu / (GaussianRational(2) * b))
    throw ConfigError("lambda^2 != -mu/(2b): not an admissible exact branch value");
  return detail::formal_solution_core<GaussianRational>(a, mu, lambda, br, K);
}

// Residual of the full formal solution in the shifted equation
// S[f'](z) - mu - D[f^2](z); all orders within the validity horizon must
// vanish (exactly in exact mode, to 1e-12 in float mode).
template <class S>
HalfPowerSeries<S> dde_residual_formal(const FormalSolutionT<S>& fs) {
  using HS = HalfPowerSeries<S>;
  const int depth = fs.K + 4;
  HS f = fs.to_series();
  HS r = shift_sum(diff(f), fs.b, depth) - HS::constant(fs.mu) -
         shift_diff(f * f, fs.b, depth);
  return r;
}

// Largest stored coefficient magnitude of a float-mode series (test helper).
inline double max_abs_coeff(const HalfPowerSeries<Complex>& s) {
  double m = 0.0;
  for (int n = s.stored_begin(); n < s.stored_end(); ++n)
    m = std::max(m, std::abs(s.coeff(n)));
  return m;
}

}  // namespace merodde::series
