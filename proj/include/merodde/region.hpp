#pragma once

#include <vector>

#include "merodde/scalars.hpp"

namespace merodde::cont {

// Rectangular window in the plane of the independent variable.  The equation
// shifts along the real axis, so seed data must be wider than the step a in
// the real direction; the imaginary extent is the transverse interval the
// continuation sweeps.
struct StripRegion {
  double re_lo = 0.0, re_hi = 0.0;
  double im_lo = 0.0, im_hi = 0.0;

  bool valid() const { return re_hi > re_lo && im_hi > im_lo; }
  bool is_a_wide(double a) const { return re_hi - re_lo > a; }
  bool contains(Complex x, double margin = 0.0) const {
    return x.real() >= re_lo - margin && x.real() <= re_hi + margin &&
           x.imag() >= im_lo - margin && x.imag() <= im_hi + margin;
  }
};

// Local behaviour of the linearizing function u at a singular chain point:
// `special` is the distinguished solution vanishing to order N, `generic` the
// one with exponent -N+1, `regular` marks a chain point where nothing happens.
enum class LocalSolutionType { special, generic, regular };

// Wire tokens used by the pole-map JSON format.
inline const char* local_type_wire(LocalSolutionType t) {
  switch (t) {
    case LocalSolutionType::special: return "m8";
    case LocalSolutionType::generic: return "m9";
    default: return "regular";
  }
}

struct PoleRecord {
  Complex x;
  int chain = 0;          // position in its chain, x_n = x_0 + n a
  int chain_id = 0;       // which chain (bookkeeping across a run)
  int frobenius_n = 1;    // exponent pair is (N, -N+1)
  Complex residue{0.0, 0.0};
  LocalSolutionType type = LocalSolutionType::special;
};

// Evaluator pair over a region plus the poles known inside it.  derivative()
// is structural (closed form or an exact identity), never a finite difference.
class SolutionPatch {
 public:
  virtual ~SolutionPatch() = default;
  virtual StripRegion region() const = 0;
  virtual Complex value(Complex x) const = 0;
  virtual Complex derivative(Complex x) const = 0;
  virtual const std::vector<PoleRecord>& poles() const = 0;
};

}  // namespace merodde::cont
