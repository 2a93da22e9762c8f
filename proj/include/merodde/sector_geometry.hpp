#pragma once

#include <cmath>
#include <numbers>

#include "merodde/errors.hpp"
#include "merodde/formal_solution.hpp"
#include "merodde/scalars.hpp"

// Sector bookkeeping on the three-sheeted surface of z^{1/3}.  Angles are
// carried as unreduced reals (universal-cover representation); reduction
// happens only when a point is materialized as a Complex.
namespace merodde::sector {

inline constexpr double kPi = std::numbers::pi;

struct PolarPoint {
  double r = 0.0;
  double theta = 0.0;  // tracked angle, may exceed +-pi

  Complex to_complex() const { return r * std::exp(Complex(0.0, theta)); }
};

// zeta = z^{3/2} and its inverse, on the tracked-angle representation.
inline PolarPoint to_zeta_plane(const PolarPoint& z) {
  return {std::pow(z.r, 1.5), 1.5 * z.theta};
}
inline PolarPoint from_zeta_plane(const PolarPoint& zeta) {
  return {std::pow(zeta.r, 2.0 / 3.0), zeta.theta * (2.0 / 3.0)};
}

// bisector direction of the n-th sector (n = 0, 1, 2), arg lambda in [0,2pi)
inline double bisector_angle(double arg_lambda, int n) {
  if (n < 0 || n > 2) throw ConfigError("sector index must be 0, 1 or 2");
  return (2.0 / 3.0) * kPi * (1.0 + 2.0 * n) - (2.0 / 3.0) * arg_lambda;
}

struct SectorSpec {
  series::Branch branch = series::Branch::plus;
  int n = 0;
  double bisector = 0.0;
  double arg_lo = 0.0;
  double arg_hi = 0.0;
  bool empty = false;

  double opening() const { return empty ? 0.0 : arg_hi - arg_lo; }
  bool contains(double theta) const { return !empty && theta > arg_lo && theta < arg_hi; }
  bool contains_interval(double lo, double hi) const {
    return !empty && arg_lo < lo && hi < arg_hi;
  }
};

namespace detail {

// smallest angle strictly above t congruent to anchor (mod 2pi)
inline double next_congruent_above(double t, double anchor) {
  double k = std::floor((t - anchor) / (2.0 * kPi)) + 1.0;
  double c = anchor + 2.0 * kPi * k;
  if (c <= t + 1e-14) c += 2.0 * kPi;
  return c;
}
inline double prev_congruent_below(double t, double anchor) {
  double k = std::ceil((t - anchor) / (2.0 * kPi)) - 1.0;
  double c = anchor + 2.0 * kPi * k;
  if (c >= t - 1e-14) c -= 2.0 * kPi;
  return c;
}
inline bool congruent(double t, double anchor) {
  double d = std::remainder(t - anchor, 2.0 * kPi);
  return std::abs(d) < 1e-12;
}

}  // namespace detail

// Sector grown from its bisector ray: each side extends until it hits the
// blocking direction (negative real axis for the plus family, positive real
// axis for the minus family) or sweeps a half turn, whichever comes first.
// A bisector lying on the blocking direction leaves nothing to grow: empty.
inline SectorSpec make_sector(series::Branch branch, int n, double arg_lambda) {
  SectorSpec s;
  s.branch = branch;
  s.n = n;
  s.bisector = bisector_angle(arg_lambda, n);
  const double block = branch == series::Branch::plus ? kPi : 0.0;
  if (detail::congruent(s.bisector, block)) {
    s.empty = true;
    s.arg_lo = s.arg_hi = s.bisector;
    return s;
  }
  s.arg_hi = std::min(detail::next_congruent_above(s.bisector, block), s.bisector + kPi);
  s.arg_lo = std::max(detail::prev_congruent_below(s.bisector, block), s.bisector - kPi);
  return s;
}

// Shifted sector in the zeta plane: the image of a proper subsector under
// zeta = z^{3/2}, translated so its vertex sits at zeta0.
struct SigmaRegion {
  PolarPoint zeta0;
  double bisector_dir = 0.0;   // direction of the translated cone's axis
  double half_opening = 0.0;

  bool contains(const PolarPoint& zeta) const {
    Complex d = zeta.to_complex() - zeta0.to_complex();
    if (std::abs(d) < 1e-12 * (1.0 + zeta0.r)) return true;
    if (half_opening >= kPi) return true;
    double rel = std::remainder(std::arg(d) - bisector_dir, 2.0 * kPi);
    return std::abs(rel) <= half_opening + 1e-12;
  }

  static SigmaRegion make(const SectorSpec& s, const PolarPoint& zeta0) {
    if (s.empty) throw ConfigError("cannot shift an empty sector");
    SigmaRegion r;
    r.zeta0 = zeta0;
    r.bisector_dir = 1.5 * 0.5 * (s.arg_lo + s.arg_hi);
    r.half_opening = 0.75 * (s.arg_hi - s.arg_lo);
    return r;
  }
};

enum class ContourCase { bisector, upper, lower };

struct ContourSpec {
  PolarPoint anchor;       // zeta
  double ray_angle = 0.0;  // direction of the ray leaving the anchor
  ContourCase kind = ContourCase::bisector;
};

// Ray selection for the integral contour attached to zeta: parallel to the
// mapped bisector when zeta sits within a quarter turn of it, otherwise
// perpendicular to zeta on the side facing the bisector.  The three cases
// partition the region (boundaries resolve to the bisector case).
inline ContourSpec gamma_contour(const PolarPoint& zeta, double beta0,
                                 const SigmaRegion& sigma) {
  if (!sigma.contains(zeta)) throw OutsideSigma("contour anchor outside the shifted sector");
  ContourSpec c;
  c.anchor = zeta;
  double d = zeta.theta - 1.5 * beta0;
  if (d < -kPi / 2.0) {
    c.kind = ContourCase::upper;
    c.ray_angle = zeta.theta + kPi / 2.0;
  } else if (d > kPi / 2.0) {
    c.kind = ContourCase::lower;
    c.ray_angle = zeta.theta - kPi / 2.0;
  } else {
    c.kind = ContourCase::bisector;
    c.ray_angle = 1.5 * beta0;
  }
  return c;
}

}  // namespace merodde::sector
