#pragma once

#include <functional>
#include <vector>

#include "merodde/errors.hpp"
#include "merodde/scalars.hpp"

namespace merodde::cont {

using CoefficientFn = std::function<Complex(Complex)>;

struct PathNode {
  Complex x;
  Complex u;
  Complex du;  // du/dx
  Complex h;   // coefficient value at x
};

// Dense solution record of u'' + h u = 0 along a polyline.  Nodes are the
// accepted integrator steps; between consecutive nodes on the same straight
// segment a quintic two-point expansion (values, first and second
// derivatives) reproduces the local solution at integrator accuracy.
struct Trajectory {
  std::vector<PathNode> nodes;
  // index ranges [seg_begin[i], seg_begin[i+1]) share one straight segment
  std::vector<int> seg_begin;
  std::vector<bool> seg_main;  // straight mainline segment (false on detours)

  // (u, du) at x, which must lie on a mainline segment whose endpoints
  // bracket it; returns false if no segment covers x.real()
  bool eval_on_main(double re, PathNode& out) const;
};

struct IntegrateOptions {
  double tol = 1e-10;     // local error per unit arclength
  double max_dx = 0.0625; // node-density cap
  double min_dx = 1e-11;
};

// Adaptive fifth-order Runge-Kutta along the given polyline.
Trajectory integrate_u(const CoefficientFn& h, const std::vector<Complex>& polyline,
                       Complex u0, Complex du0, const IntegrateOptions& opt);

// Straight path from `from` to `to` that arcs around the listed singular
// points with the given clearance.
std::vector<Complex> build_polyline(Complex from, Complex to,
                                    const std::vector<Complex>& obstacles,
                                    double clearance);

// Closed circular contour sample: M equispaced states of (u, du, h) on
// |x - center| = radius.
struct Ring {
  Complex center;
  double radius = 0.0;
  std::vector<PathNode> nodes;  // angles 2 pi k / M, k = 0..M-1

  // (1/2 pi i) contour integral of g dx by the trapezoid rule
  Complex mean_weighted(const std::function<Complex(const PathNode&)>& g) const;
  // residue of f = -u'/u at the center
  Complex residue_f() const;
  // winding of u around the contour = local order of u at the center
  int u_order() const;
  // exact location of the enclosed zero/pole of u of order k, from the first
  // moment of the logarithmic derivative
  Complex u_center(int k) const;
  // Laurent coefficient of h at offset power m (m = -2 gives the double-pole
  // coefficient)
  Complex laurent_h(int m) const;
};

// Re-integration service: continues u from trusted trajectory states to
// arbitrary nearby targets, detouring the known singularities of h.
class LocalSolver {
 public:
  LocalSolver(CoefficientFn h, std::vector<Complex> h_singularities, double clearance,
              IntegrateOptions opt);

  void add_anchor(const PathNode& n) { anchors_.push_back(n); }
  void add_anchors(const Trajectory& t);
  size_t anchor_count() const { return anchors_.size(); }

  // continue the state (from.x, from.u, from.du) to `to`
  PathNode walk(const PathNode& from, Complex to) const;
  // state at target, starting from the nearest anchor
  PathNode at(Complex target) const;
  // state at target from the nearest anchor at least `standoff` away
  PathNode at_with_standoff(Complex target, double standoff) const;

  // Newton refinement of a zero (or pole, order < 0) of u near seed
  Complex refine_u_zero(const PathNode& seed, int order, double step_cap, double tol,
                        int max_iter = 40) const;

  Ring circle(Complex center, double radius, int nodes) const;

 private:
  CoefficientFn h_;
  std::vector<Complex> sing_;
  double clearance_;
  IntegrateOptions opt_;
  std::vector<PathNode> anchors_;
};

}  // namespace merodde::cont
