#pragma once

#include <memory>
#include <vector>

#include "merodde/errors.hpp"
#include "merodde/region.hpp"
#include "merodde/scalars.hpp"

namespace merodde::sf {

// Period lattice {m p1 + n p2} with invariants computed from the Eisenstein
// series of the lattice (q-expansion form, which converges geometrically).
class Lattice {
 public:
  static Lattice make(Complex p1, Complex p2);

  Complex p1() const { return p1_; }
  Complex p2() const { return p2_; }
  Complex g2() const { return g2_; }
  Complex g3() const { return g3_; }
  double min_period() const { return r_min_; }

  // Representative of z in the centered fundamental cell.
  Complex reduce(Complex z) const;
  // Distance from z to the nearest lattice point.
  double lattice_distance(Complex z) const;

  // p(z) and p'(z): lattice reduction, argument halving into the series disc,
  // then tangent-rule doubling back up.  Accuracy ~1e-12 inside the cell.
  struct Jet { Complex p, dp; };
  Jet wp_jet(Complex z) const;
  // p''(z) from the field relation given p(z).
  Complex wp_second_from(Complex p_value) const { return 6.0 * p_value * p_value - 0.5 * g2_; }

 private:
  Lattice() = default;
  Jet series_jet(Complex z) const;

  Complex p1_, p2_;
  Complex g2_, g3_;
  double r_min_ = 0.0;
  double series_radius_ = 0.0;
  std::vector<Complex> c_;  // Laurent tail coefficients of p about 0
};

inline Complex wp(Complex z, const Lattice& lat) { return lat.wp_jet(z).p; }
inline Complex wp_prime(Complex z, const Lattice& lat) { return lat.wp_jet(z).dp; }

// The exact mu = 0 solution
//   f(x) = -(1/2) (p'(x - x0) - p'(a)) / (p(x - x0) - p(a)),
// a meromorphic function whose only singularities are simple poles with
// residue +1 at x0 (mod lattice) and -1 at x0 - a (mod lattice); the naive
// candidate at x0 + a cancels.  Serves as the reference solution and as
// continuation seed data.
class EllipticSolution : public cont::SolutionPatch {
 public:
  EllipticSolution(Lattice lat, Complex x0, double a, cont::StripRegion window);

  cont::StripRegion region() const override { return window_; }
  Complex value(Complex x) const override;
  Complex derivative(Complex x) const override;
  const std::vector<cont::PoleRecord>& poles() const override { return poles_; }

  const Lattice& lattice() const { return lat_; }
  Complex x0() const { return x0_; }
  double a() const { return a_; }

 private:
  Lattice lat_;
  Complex x0_;
  double a_;
  cont::StripRegion window_;
  Complex pa_, dpa_;  // p(a), p'(a)
  std::vector<cont::PoleRecord> poles_;
};

std::shared_ptr<EllipticSolution> mu0_solution(const Lattice& lat, Complex x0, double a,
                                               const cont::StripRegion& window);

}  // namespace merodde::sf
