#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "merodde/formal_solution.hpp"
#include "merodde/frobenius.hpp"
#include "merodde/path_ode.hpp"
#include "merodde/region.hpp"

namespace merodde::cont {

using series::DDEParameters;

struct ContinuationConfig {
  double rk_tol = 1e-12;
  double path_spacing_rel = 0.1;        // transverse path spacing / a
  double pole_exclusion_radius = 0.1;   // keep-out for residual-style probes
  double margin_rel = 0.2;              // path reach-back into built ground / a
  double advance_rel = 1.0 / 3.0;       // front advance per internal strip / a
  double defer_rel = 0.15;              // unhunted tail behind the raw front / a
  double detour_clearance_rel = 0.1;    // path detour radius around h poles / a
  int contour_nodes = 64;
  double zero_tol = 1e-10;
  double chain_link_rtol = 1e-3;        // |dx - a| < rtol * a links records
  double contour_radius_rel = 0.12;     // classification contour radius / a
};

// coefficient of the linearized equation on the next slab:
// h(x) = mu - f'(x-a) - f(x-a)^2
CoefficientFn h_from_f(const SolutionPatch& patch, const DDEParameters& params);

// initial data for u at x_tilde: u = 1, u' = -f(x_tilde); both x_tilde and
// x_tilde - a must be covered
std::pair<Complex, Complex> seed_u(const SolutionPatch& patch, const DDEParameters& params,
                                   Complex x_tilde);

struct ZeroHit {
  Complex x;
  Complex du;  // u' at the zero
};

struct FindZeroOptions {
  double median_factor = 1e-3;   // depth filter on |u| minima
  double step_proximity = 0.0;   // Newton-step filter: |u/u'| below this
  double zero_tol = 1e-10;
  double step_cap = 0.5;
  double merge_radius = 1e-8;
};

// zeros of u located from |u| minima along the trajectories, refined by
// Newton steps with local re-integration, deduplicated
std::vector<ZeroHit> find_u_zeros(const std::vector<Trajectory>& paths,
                                  const LocalSolver& solver, const StripRegion& slab,
                                  const FindZeroOptions& opt);

// Strip-by-strip rightward meromorphic continuation of the seed solution.
class ContinuedSolution : public SolutionPatch {
 public:
  ContinuedSolution(std::shared_ptr<const SolutionPatch> seed, const DDEParameters& params,
                    ContinuationConfig cfg);
  ContinuedSolution(const ContinuedSolution&) = delete;
  ContinuedSolution& operator=(const ContinuedSolution&) = delete;

  // attach n further slabs of width a on the right
  void extend_right(int n_slabs);

  StripRegion region() const override;
  Complex value(Complex x) const override;
  Complex derivative(Complex x) const override;
  const std::vector<PoleRecord>& poles() const override { return all_poles_; }

  const std::vector<PoleRecord>& discovered_poles() const { return discovered_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const DDEParameters& params() const { return params_; }
  int slab_count() const { return static_cast<int>(slabs_.size()); }

 private:
  struct Slab {
    StripRegion nominal;  // [front, front + advance] x transverse window
    double cover_lo = 0.0, cover_hi = 0.0;
    std::vector<double> path_im;
    double spacing = 0.0;
    std::vector<Trajectory> paths;
    CoefficientFn h;
    std::vector<Complex> h_poles;
    std::shared_ptr<LocalSolver> solver;
  };

  void build_slab();
  const Slab* slab_for(double re) const;
  // singular structure to subtract before transverse interpolation:
  // (location, local order of u) for every known pole near x
  struct Subtraction {
    std::vector<Complex> q;
    std::vector<double> k;
  };
  Subtraction subtraction_set(Complex x) const;
  // log-derivative u'/u with the known singular part removed, and the
  // matching derivative field f^2 + h with its double poles removed
  Complex interp_fields(const Slab& s, Complex x, bool want_derivative) const;

  std::shared_ptr<const SolutionPatch> seed_;
  DDEParameters params_;
  ContinuationConfig cfg_;
  std::vector<Slab> slabs_;
  std::vector<PoleRecord> all_poles_;
  std::vector<PoleRecord> discovered_;
  std::vector<std::string> warnings_;
  double hunted_hi_ = 0.0;  // everything left of this is fully classified
  int next_chain_id_ = 1000;
};

// single continuation step: one slab on the right, returning the new records
std::pair<std::shared_ptr<ContinuedSolution>, std::vector<PoleRecord>> continue_right(
    std::shared_ptr<const SolutionPatch> patch, const DDEParameters& params,
    const ContinuationConfig& cfg, int n_slabs = 1);

// reflected equation data: g(t) = f(-t) solves the same equation with -mu
inline DDEParameters reflect_params(const DDEParameters& p) {
  return DDEParameters(p.a, -p.mu);
}
std::shared_ptr<SolutionPatch> reflect_patch(std::shared_ptr<const SolutionPatch> patch);

struct LeftwardRun {
  std::shared_ptr<SolutionPatch> solution;  // seed plus the leftward slabs
  std::vector<PoleRecord> discovered;       // mapped back to the original coordinates
  std::vector<std::string> warnings;
};

LeftwardRun continue_left(std::shared_ptr<const SolutionPatch> seed,
                          const DDEParameters& params, const ContinuationConfig& cfg,
                          int n_slabs);

// two-sided view stitched from a right-extended and a left-extended solution
class CombinedSolution : public SolutionPatch {
 public:
  CombinedSolution(std::shared_ptr<const SolutionPatch> left,
                   std::shared_ptr<const SolutionPatch> right, double split_re);
  StripRegion region() const override;
  Complex value(Complex x) const override;
  Complex derivative(Complex x) const override;
  const std::vector<PoleRecord>& poles() const override { return poles_; }

 private:
  std::shared_ptr<const SolutionPatch> left_, right_;
  double split_re_;
  std::vector<PoleRecord> poles_;
};

// pointwise residual of the original equation, structural derivatives only
Complex dde_residual_numeric(const SolutionPatch& patch, Complex x,
                             const DDEParameters& params, double pole_standoff = 0.05);

// factorization potentials (f^2 - f' + c, f^2 + f' + c); the second at x
// minus the first at x + a minus mu equals the equation residual
std::pair<Complex, Complex> potentials(const SolutionPatch& patch, Complex spectral_const,
                                       Complex x);

// simple closed-form seeds
class ConstantSolution : public SolutionPatch {
 public:
  ConstantSolution(Complex c, StripRegion window) : c_(c), window_(window) {}
  StripRegion region() const override { return window_; }
  Complex value(Complex) const override { return c_; }
  Complex derivative(Complex) const override { return Complex(0.0, 0.0); }
  const std::vector<PoleRecord>& poles() const override { return none_; }

 private:
  Complex c_;
  StripRegion window_;
  std::vector<PoleRecord> none_;
};

// seed manufactured from the asymptotic series deep in its validity region;
// construction fails if the optimal-truncation error estimate on the window
// exceeds `require_estimate`
class SeriesSolution : public SolutionPatch {
 public:
  SeriesSolution(const series::FormalSolution& fs, StripRegion window,
                 double require_estimate = 1e-8);
  StripRegion region() const override { return window_; }
  Complex value(Complex x) const override;
  Complex derivative(Complex x) const override;
  const std::vector<PoleRecord>& poles() const override { return none_; }
  double worst_estimate() const { return worst_estimate_; }

 private:
  series::HalfPowerSeries<Complex> fhat_, dfhat_;
  double b_;
  StripRegion window_;
  double worst_estimate_ = 0.0;
  std::vector<PoleRecord> none_;
};

}  // namespace merodde::cont
