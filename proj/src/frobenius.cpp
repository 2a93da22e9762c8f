#include "merodde/frobenius.hpp"

#include <cmath>
#include <numbers>

namespace merodde::cont {

namespace {

constexpr double kPi = std::numbers::pi;

Ring sample_ring(const CoefficientFn& h, Complex center, double radius, int nodes) {
  Ring r;
  r.center = center;
  r.radius = radius;
  r.nodes.resize(static_cast<size_t>(nodes));
  for (int k = 0; k < nodes; ++k) {
    double th = 2.0 * kPi * k / nodes;
    Complex x = center + radius * std::exp(Complex(0.0, th));
    r.nodes[static_cast<size_t>(k)] = {x, Complex(0, 0), Complex(0, 0), h(x)};
  }
  return r;
}

}  // namespace

LocalODEData classify_from_rings(const Ring& outer, const Ring& inner,
                                 const ClassifyOptions& opt) {
  LocalODEData d;
  d.center = outer.center;

  double hscale = 0.0;
  for (const auto& n : outer.nodes) hscale = std::max(hscale, std::abs(n.h));

  Complex lead = outer.laurent_h(-2);
  Complex lead2 = inner.laurent_h(-2);
  double lead_scale = std::max({std::abs(lead), std::abs(lead2), 1.0});
  if (std::abs(lead - lead2) > 1e-4 * lead_scale + 1e-9 * hscale * outer.radius * outer.radius)
    d.warnings.push_back("double-pole coefficient differs between contour radii");

  // N(N-1) = -leading
  Complex disc = std::sqrt(1.0 - 4.0 * lead);
  Complex ncand = 0.5 * (1.0 + disc);
  double nr = ncand.real();
  int N = std::max(1, static_cast<int>(std::lround(nr)));
  double scale_n = 1.0 + std::abs(ncand);
  if (std::abs(ncand - Complex(static_cast<double>(N), 0.0)) > opt.rel_tol * scale_n) {
    d.warnings.push_back("non-integer Frobenius order " + std::to_string(nr) +
                         "; continuing with N = " + std::to_string(N));
  }
  d.leading = lead;
  d.frobenius_n = N;
  d.analytic_center = (N == 1);

  // simple-pole part must be absent
  Complex a_m1 = outer.laurent_h(-1);
  if (std::abs(a_m1) > 1e-5 * (hscale + 1.0) * outer.radius)
    d.warnings.push_back("unexpected simple-pole part in the coefficient");

  d.analytic.resize(static_cast<size_t>(opt.analytic_orders) + 1);
  for (int m = 0; m <= opt.analytic_orders; ++m) {
    Complex am = outer.laurent_h(m);
    // peel the double-pole contribution: it has no positive-order content,
    // so the trapezoid mean at m >= 0 already isolates the analytic part
    d.analytic[static_cast<size_t>(m)] = am;
  }
  // odd coefficients through 2N - 2 vanish for admissible chain points
  for (int m = 1; m <= 2 * N - 2 && m <= opt.analytic_orders; m += 2) {
    double sc = hscale / std::pow(outer.radius, m) + 1.0;
    if (std::abs(d.analytic[static_cast<size_t>(m)]) > 1e-5 * sc)
      d.warnings.push_back("odd coefficient A_" + std::to_string(m) + " does not vanish");
  }
  return d;
}

LocalODEData frobenius_classify(const CoefficientFn& h, Complex center,
                                const ClassifyOptions& opt) {
  Ring outer = sample_ring(h, center, opt.radius, opt.nodes);
  Ring inner = sample_ring(h, center, opt.radius * opt.radius_check, opt.nodes);
  return classify_from_rings(outer, inner, opt);
}

std::vector<Complex> local_expansion_u(const LocalODEData& data, LocalSolutionType type,
                                       int order) {
  const int N = data.frobenius_n;
  const double sigma = type == LocalSolutionType::special ? static_cast<double>(N)
                                                          : static_cast<double>(1 - N);
  auto A = [&](int m) -> Complex {
    if (m < 0 || m >= static_cast<int>(data.analytic.size())) return Complex(0.0, 0.0);
    return data.analytic[static_cast<size_t>(m)];
  };

  std::vector<Complex> q(static_cast<size_t>(order) + 1, Complex(0.0, 0.0));
  q[0] = Complex(1.0, 0.0);
  for (int j = 1; j <= order; ++j) {
    Complex num(0.0, 0.0);
    for (int m = 0; m <= j - 2; ++m) num += A(m) * q[static_cast<size_t>(j - 2 - m)];
    // indicial factor (sigma+j)(sigma+j-1) - N(N-1)
    double denom = (sigma + j) * (sigma + j - 1.0) - static_cast<double>(N) * (N - 1);
    if (std::abs(denom) < 1e-12) {
      // resonance of the generic branch at j = 2N-1: the obstruction must
      // vanish; the coefficient itself is a free admixture, set to zero
      if (std::abs(num) > 1e-8 * (1.0 + std::abs(A(0))))
        throw Error("resonance obstruction does not vanish: inadmissible local data");
      q[static_cast<size_t>(j)] = Complex(0.0, 0.0);
    } else {
      q[static_cast<size_t>(j)] = -num / denom;
    }
  }
  return q;
}

Complex residue_at(const std::function<Complex(Complex)>& f, Complex pole, double radius,
                   int nodes) {
  Complex acc(0.0, 0.0);
  for (int k = 0; k < nodes; ++k) {
    double th = 2.0 * kPi * k / nodes;
    Complex w = radius * std::exp(Complex(0.0, th));
    acc += f(pole + w) * w;
  }
  return acc / static_cast<double>(nodes);
}

}  // namespace merodde::cont
