#pragma once

#include <string>
#include <vector>

#include "merodde/path_ode.hpp"
#include "merodde/region.hpp"

namespace merodde::cont {

// Local data of the coefficient h at a candidate singular point:
//   h(x) = leading/(x-c)^2 + A_0 + A_1 (x-c) + A_2 (x-c)^2 + ...
// For an admissible chain point leading = -N(N-1) with integer N and the odd
// coefficients vanish through order 2N-2.
struct LocalODEData {
  Complex center;
  int frobenius_n = 1;
  Complex leading{0.0, 0.0};
  std::vector<Complex> analytic;  // A_0 .. A_{max}
  bool analytic_center = false;   // no double pole: N = 1
  std::vector<std::string> warnings;
};

struct ClassifyOptions {
  double radius = 0.15;
  int nodes = 64;
  double radius_check = 0.6;   // second contour at radius * radius_check
  double rel_tol = 1e-6;       // integrality / consistency tolerance
  int analytic_orders = 10;    // depth of the extracted analytic part
};

// Laurent classification by two-radius contour extraction on an explicit
// coefficient closure.
LocalODEData frobenius_classify(const CoefficientFn& h, Complex center,
                                const ClassifyOptions& opt = {});

// Same extraction from pre-walked contour rings (engine path).
LocalODEData classify_from_rings(const Ring& outer, const Ring& inner,
                                 const ClassifyOptions& opt = {});

// Coefficients q_0..q_order of the local solution
//   u = (x-c)^sigma (q_0 + q_1 (x-c) + ...),  q_0 = 1,
// sigma = N for the special (vanishing) branch, sigma = 1-N for the generic
// one.  Odd coefficients through 2N-1 must come out zero; the generic branch
// has a resonance at order 2N-1 whose obstruction must vanish (asserted
// within tolerance) and whose free coefficient is set to zero.
std::vector<Complex> local_expansion_u(const LocalODEData& data, LocalSolutionType type,
                                       int order);

// Chain step of the singularity order: the special branch deepens the next
// double pole, the generic one relaxes it (N = 0 or 1 means the next chain
// point is regular).
inline int predict_next_n(int frobenius_n, LocalSolutionType type) {
  if (frobenius_n < 1) throw ConfigError("frobenius order must be >= 1");
  return type == LocalSolutionType::special ? frobenius_n + 1 : frobenius_n - 1;
}
inline int predict_next_n(const LocalODEData& d, LocalSolutionType type) {
  return predict_next_n(d.frobenius_n, type);
}

// residue of a function by trapezoid contour quadrature
Complex residue_at(const std::function<Complex(Complex)>& f, Complex pole, double radius,
                   int nodes = 64);

}  // namespace merodde::cont
