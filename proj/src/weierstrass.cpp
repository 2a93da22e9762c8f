#include "merodde/weierstrass.hpp"

#include <cmath>
#include <numbers>

namespace merodde::sf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSeriesOrder = 26;

// E4, E6 from the q-expansion; q = exp(2 pi i tau), |q| < 1.
void eisenstein(Complex tau, Complex& e4, Complex& e6) {
  Complex q = std::exp(Complex(0.0, 2.0 * kPi) * tau);
  if (std::abs(q) > 0.93)
    throw ConfigError("lattice too degenerate: |q| close to 1");
  Complex s4(0.0, 0.0), s6(0.0, 0.0);
  Complex qn(1.0, 0.0);
  for (int n = 1; n <= 400; ++n) {
    qn *= q;
    double n2 = static_cast<double>(n) * n;
    Complex t = qn / (1.0 - qn);
    Complex t4 = n2 * static_cast<double>(n) * t;
    Complex t6 = n2 * n2 * static_cast<double>(n) * t;
    s4 += t4;
    s6 += t6;
    if (std::abs(t6) < 1e-18 * (1.0 + std::abs(s6)) &&
        std::abs(t4) < 1e-18 * (1.0 + std::abs(s4)))
      break;
  }
  e4 = 1.0 + 240.0 * s4;
  e6 = 1.0 - 504.0 * s6;
}

}  // namespace

Lattice Lattice::make(Complex p1, Complex p2) {
  Lattice lat;
  lat.p1_ = p1;
  lat.p2_ = p2;
  Complex tau = p2 / p1;
  if (!(tau.imag() > 0.0))
    throw ConfigError("lattice periods must satisfy Im(p2/p1) > 0");

  Complex e4, e6;
  eisenstein(tau, e4, e6);
  Complex p1_2 = p1 * p1;
  Complex p1_4 = p1_2 * p1_2;
  lat.g2_ = (4.0 * std::pow(kPi, 4) / 3.0) * e4 / p1_4;
  lat.g3_ = (8.0 * std::pow(kPi, 6) / 27.0) * e6 / (p1_4 * p1_2);

  lat.r_min_ = std::abs(p1);
  for (int m = -2; m <= 2; ++m)
    for (int n = -2; n <= 2; ++n) {
      if (m == 0 && n == 0) continue;
      lat.r_min_ = std::min(lat.r_min_, std::abs(static_cast<double>(m) * p1 +
                                                 static_cast<double>(n) * p2));
    }
  lat.series_radius_ = 0.28 * lat.r_min_;

  // Laurent tail of p about the origin: p = z^-2 + sum c_k z^{2k}
  lat.c_.assign(kSeriesOrder + 1, Complex(0.0, 0.0));
  lat.c_[1] = lat.g2_ / 20.0;
  lat.c_[2] = lat.g3_ / 28.0;
  for (int k = 3; k <= kSeriesOrder; ++k) {
    Complex s(0.0, 0.0);
    for (int m = 1; m <= k - 2; ++m) s += lat.c_[m] * lat.c_[k - 1 - m];
    lat.c_[k] = 3.0 * s / ((2.0 * k + 3.0) * (k - 2.0));
  }
  return lat;
}

Complex Lattice::reduce(Complex z) const {
  // solve z = alpha p1 + beta p2 over the reals
  double det = (p1_ * std::conj(p2_)).imag();
  double alpha = (z * std::conj(p2_)).imag() / det;
  double beta = (p1_ * std::conj(z)).imag() / det;
  return z - std::round(alpha) * p1_ - std::round(beta) * p2_;
}

double Lattice::lattice_distance(Complex z) const {
  Complex r = reduce(z);
  double d = std::abs(r);
  // the centered representative can still be beaten by a neighbour at cell
  // corners
  for (int m = -1; m <= 1; ++m)
    for (int n = -1; n <= 1; ++n)
      d = std::min(d, std::abs(r - static_cast<double>(m) * p1_ -
                               static_cast<double>(n) * p2_));
  return d;
}

Lattice::Jet Lattice::series_jet(Complex z) const {
  Complex z2 = z * z;
  Complex p = 1.0 / z2;
  Complex dp = -2.0 / (z2 * z);
  Complex pw = z2;         // z^{2k}
  Complex dpw = z;         // z^{2k-1}
  for (int k = 1; k <= kSeriesOrder; ++k) {
    p += c_[k] * pw;
    dp += 2.0 * static_cast<double>(k) * c_[k] * dpw;
    pw *= z2;
    dpw *= z2;
  }
  return {p, dp};
}

Lattice::Jet Lattice::wp_jet(Complex z) const {
  Complex w = reduce(z);
  if (std::abs(w) < 1e-12 * r_min_)
    throw LatticePoint("wp evaluated at a lattice point");

  int halvings = 0;
  while (std::abs(w) > series_radius_) {
    w *= 0.5;
    ++halvings;
  }
  Jet j = series_jet(w);
  for (int i = 0; i < halvings; ++i) {
    // tangent rule on y^2 = 4x^3 - g2 x - g3
    Complex m = (6.0 * j.p * j.p - 0.5 * g2_) / j.dp;
    Complex x2 = 0.25 * m * m - 2.0 * j.p;
    Complex y2 = -(m * (x2 - j.p) + j.dp);
    j = {x2, y2};
  }
  return j;
}

EllipticSolution::EllipticSolution(Lattice lat, Complex x0, double a,
                                   cont::StripRegion window)
    : lat_(std::move(lat)), x0_(x0), a_(a), window_(window) {
  if (!(a > 0.0)) throw ConfigError("step a must be positive");
  if (lat_.lattice_distance(Complex(a, 0.0)) < 1e-9 * lat_.min_period())
    throw DegenerateShift("step congruent to a lattice period");
  if (lat_.lattice_distance(Complex(2.0 * a, 0.0)) < 1e-9 * lat_.min_period())
    throw DegenerateShift("step congruent to a half period");
  auto j = lat_.wp_jet(Complex(a, 0.0));
  pa_ = j.p;
  dpa_ = j.dp;

  // poles inside the window: x0 + lattice (residue +1, the generic local
  // type) and x0 - a + lattice (residue -1, the vanishing type)
  const double margin = 0.02 * lat_.min_period();
  auto enumerate = [&](Complex base, Complex residue, int chain_pos, int fro_n,
                       cont::LocalSolutionType t) {
    // crude index bounds from the window corners
    for (int m = -60; m <= 60; ++m)
      for (int n = -60; n <= 60; ++n) {
        Complex p = base + static_cast<double>(m) * lat_.p1() +
                    static_cast<double>(n) * lat_.p2();
        if (window_.contains(p, margin)) {
          cont::PoleRecord rec;
          rec.x = p;
          rec.chain = chain_pos;
          rec.chain_id = 0;
          rec.frobenius_n = fro_n;
          rec.residue = residue;
          rec.type = t;
          poles_.push_back(rec);
        }
      }
  };
  enumerate(x0_ - a_, Complex(-1.0, 0.0), 0, 1, cont::LocalSolutionType::special);
  enumerate(x0_, Complex(1.0, 0.0), 1, 2, cont::LocalSolutionType::generic);
}

Complex EllipticSolution::value(Complex x) const {
  auto j = lat_.wp_jet(x - x0_);
  return -0.5 * (j.dp - dpa_) / (j.p - pa_);
}

Complex EllipticSolution::derivative(Complex x) const {
  auto j = lat_.wp_jet(x - x0_);
  Complex d = j.p - pa_;
  Complex ddp = lat_.wp_second_from(j.p);
  return -0.5 * (ddp * d - (j.dp - dpa_) * j.dp) / (d * d);
}

std::shared_ptr<EllipticSolution> mu0_solution(const Lattice& lat, Complex x0, double a,
                                               const cont::StripRegion& window) {
  return std::make_shared<EllipticSolution>(lat, x0, a, window);
}

}  // namespace merodde::sf
