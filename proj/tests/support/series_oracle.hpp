#pragma once

// Independent oracle for the formal-solution coefficients: substitutes a
// truncated half-power ansatz with unknown coefficients directly into the
// untransformed equation
//
//   S[f'](z) = mu + D[f^2](z),     S/D = symmetric shift sum/difference,
//
// and solves the triangular system one unknown at a time.  This route never
// touches the rearranged recursion used by the implementation; the two must
// agree coefficient by coefficient.

#include <vector>

#include "merodde/formal_solution.hpp"
#include "merodde/half_power_series.hpp"

namespace merodde::testing {

template <class S>
struct OracleSolution {
  S c0;
  std::vector<S> y;  // y[k-2] multiplies z^{-k/2}
};

template <class S>
series::HalfPowerSeries<S> oracle_equation_residual(const series::HalfPowerSeries<S>& f,
                                                    const S& b, const S& mu, int depth) {
  using HS = series::HalfPowerSeries<S>;
  return series::shift_sum(series::diff(f), b, depth) - HS::constant(mu) -
         series::shift_diff(f * f, b, depth);
}

// Solve for c0 and y_2..y_K given an admissible lambda (lambda^2 = -mu/(2b)).
// Each unknown w enters the equation residual linearly at a known leading
// order n*; its multiplier is measured by re-evaluating the residual with the
// unit basis monomial added (the quadratic self-term of the monomial only
// shows up at deeper orders, so the difference at n* is exactly linear).
template <class S>
OracleSolution<S> oracle_solve(const S& a, const S& mu, const S& lambda, int K) {
  using HS = series::HalfPowerSeries<S>;
  const S b = a * scalar_ops<S>::from_ratio(1, 2);
  const int depth = K + 6;

  OracleSolution<S> out;
  HS f = HS::monomial(lambda, -1);

  auto solve_unknown = [&](int basis_n, int resid_n) -> S {
    HS r0 = oracle_equation_residual(f, b, mu, depth);
    HS r1 = oracle_equation_residual(f + HS::monomial(S(1), basis_n), b, mu, depth);
    S linear = r1.coeff(resid_n) - r0.coeff(resid_n);
    if (scalar_ops<S>::is_zero(linear)) throw Error("oracle: vanishing multiplier");
    S w = -(r0.coeff(resid_n)) / linear;
    f = f + HS::monomial(w, basis_n);
    return w;
  };

  out.c0 = solve_unknown(0, 1);
  out.y.reserve(static_cast<size_t>(K - 1));
  for (int k = 2; k <= K; ++k) out.y.push_back(solve_unknown(k, k + 1));
  return out;
}

}  // namespace merodde::testing
