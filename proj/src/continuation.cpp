#include "merodde/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace merodde::cont {

namespace {

constexpr double kPi = std::numbers::pi;

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(m), v.end());
  return v[m];
}

// polynomial interpolation (Neville) at t over nodes (ts, ys)
Complex neville(const std::vector<double>& ts, std::vector<Complex> ys, double t) {
  const size_t n = ts.size();
  for (size_t level = 1; level < n; ++level)
    for (size_t i = 0; i + level < n; ++i) {
      double denom = ts[i] - ts[i + level];
      ys[i] = ((t - ts[i + level]) * ys[i] - (t - ts[i]) * ys[i + 1]) / denom;
    }
  return ys.empty() ? Complex(0.0, 0.0) : ys[0];
}

}  // namespace

CoefficientFn h_from_f(const SolutionPatch& patch, const DDEParameters& params) {
  const SolutionPatch* p = &patch;
  const double a = params.a;
  const Complex mu = params.mu;
  return [p, a, mu](Complex x) {
    Complex xm = x - a;
    Complex f = p->value(xm);
    return mu - p->derivative(xm) - f * f;
  };
}

std::pair<Complex, Complex> seed_u(const SolutionPatch& patch, const DDEParameters& params,
                                   Complex x_tilde) {
  StripRegion r = patch.region();
  if (!r.contains(x_tilde) || !r.contains(x_tilde - params.a))
    throw OutOfRegion("seed point and its backward shift must both be covered");
  return {Complex(1.0, 0.0), -patch.value(x_tilde)};
}

std::vector<ZeroHit> find_u_zeros(const std::vector<Trajectory>& paths,
                                  const LocalSolver& solver, const StripRegion& slab,
                                  const FindZeroOptions& opt) {
  std::vector<ZeroHit> hits;
  for (const auto& traj : paths) {
    const auto& nodes = traj.nodes;
    if (nodes.size() < 3) continue;
    std::vector<double> mags;
    mags.reserve(nodes.size());
    for (const auto& n : nodes)
      if (slab.contains(n.x, 0.05)) mags.push_back(std::abs(n.u));
    double med = median_of(mags);
    if (med == 0.0) continue;

    for (size_t k = 1; k + 1 < nodes.size(); ++k) {
      double um = std::abs(nodes[k].u);
      if (um > std::abs(nodes[k - 1].u) || um > std::abs(nodes[k + 1].u)) continue;
      if (!slab.contains(nodes[k].x, 0.1)) continue;
      bool deep = um < opt.median_factor * med;
      bool newton_near =
          opt.step_proximity > 0.0 &&
          std::abs(nodes[k].u / nodes[k].du) < opt.step_proximity;
      if (!deep && !newton_near) continue;
      try {
        Complex z = solver.refine_u_zero(nodes[k], 1, opt.step_cap, opt.zero_tol);
        if (!slab.contains(z, 0.1)) continue;
        PathNode at_zero = solver.walk(nodes[k], z);
        // genuine zero: the residual |u| must collapse relative to the scale
        // the Newton path started from
        if (std::abs(at_zero.u) > 1e-6 * (um + med)) continue;
        bool dup = false;
        for (auto& hhit : hits)
          if (std::abs(hhit.x - z) < opt.merge_radius) dup = true;
        if (!dup) hits.push_back({z, at_zero.du});
      } catch (const Error&) {
        // near-zero of analytic u, or the refinement wandered out of the
        // covered region; either way there is no pole to record here
      }
    }
  }
  return hits;
}

ContinuedSolution::ContinuedSolution(std::shared_ptr<const SolutionPatch> seed,
                                     const DDEParameters& params, ContinuationConfig cfg)
    : seed_(std::move(seed)), params_(params), cfg_(cfg) {
  StripRegion r = seed_->region();
  if (!r.is_a_wide(params_.a * (1.0 + cfg_.margin_rel)))
    throw ConfigError(
        "seed region must exceed the step a (plus the path margin) in the real direction");
  all_poles_ = seed_->poles();
  hunted_hi_ = r.re_hi;
}

StripRegion ContinuedSolution::region() const {
  StripRegion r = seed_->region();
  r.re_hi = hunted_hi_;  // everything advertised is hunt-complete
  return r;
}

const ContinuedSolution::Slab* ContinuedSolution::slab_for(double re) const {
  for (const auto& s : slabs_)
    if (re >= s.nominal.re_lo && re <= s.nominal.re_hi) return &s;
  return nullptr;
}

ContinuedSolution::Subtraction ContinuedSolution::subtraction_set(Complex x) const {
  Subtraction sub;
  const double a = params_.a;
  for (const auto& p : all_poles_) {
    if (std::abs(p.x.real() - x.real()) > 1.6 * a) continue;
    if (p.x.imag() < seed_->region().im_lo - 0.8 * a ||
        p.x.imag() > seed_->region().im_hi + 0.8 * a)
      continue;
    sub.q.push_back(p.x);
    // local order of u at the pole: -residue of f (an integer by theory)
    sub.k.push_back(-std::round(p.residue.real()));
  }
  return sub;
}

Complex ContinuedSolution::interp_fields(const Slab& s, Complex x,
                                         bool want_derivative) const {
  Subtraction sub = subtraction_set(x);
  const int P = static_cast<int>(s.path_im.size());
  double fj = (x.imag() - s.path_im.front()) / s.spacing;
  int j0 = static_cast<int>(std::lround(fj));
  const int width = std::min(10, P);
  int lo = std::clamp(j0 - width / 2, 0, P - width);
  int hi = lo + width;

  std::vector<double> ts;
  std::vector<Complex> vals;
  for (int j = lo; j < hi; ++j) {
    const Trajectory& tr = s.paths[static_cast<size_t>(j)];
    Complex xj(x.real(), s.path_im[static_cast<size_t>(j)]);
    // skip ordinates that sit essentially on a singular point: the sample
    // would lose all digits to cancellation
    bool degenerate = false;
    for (Complex q : sub.q)
      if (std::abs(xj - q) < 1e-4 * params_.a) degenerate = true;
    if (degenerate) continue;

    if (!want_derivative) {
      PathNode pn;
      if (!tr.eval_on_main(x.real(), pn)) continue;
      Complex psi = pn.du / pn.u;
      for (size_t m = 0; m < sub.q.size(); ++m) psi -= sub.k[m] / (xj - sub.q[m]);
      ts.push_back(xj.imag());
      vals.push_back(psi);
    } else {
      // the derivative field f^2 + h is exact at the integration nodes; its
      // double-pole part is removed before interpolating along the path
      std::vector<double> rs;
      std::vector<Complex> cs;
      for (size_t seg = 0; seg + 1 < tr.seg_begin.size(); ++seg) {
        if (!tr.seg_main[seg]) continue;
        for (int n = tr.seg_begin[seg]; n <= tr.seg_begin[seg + 1]; ++n) {
          const PathNode& nd = tr.nodes[static_cast<size_t>(n)];
          rs.push_back(nd.x.real());
          Complex f = -nd.du / nd.u;
          Complex chi = f * f + nd.h;
          for (size_t m = 0; m < sub.q.size(); ++m) {
            Complex d = nd.x - sub.q[m];
            chi -= sub.k[m] / (d * d);
          }
          cs.push_back(chi);
        }
      }
      // 6 nearest nodes in re
      if (rs.size() < 6) continue;
      size_t best = 0;
      double bd = 1e300;
      for (size_t n = 0; n < rs.size(); ++n) {
        double d = std::abs(rs[n] - x.real());
        if (d < bd) { bd = d; best = n; }
      }
      size_t nlo = best >= 3 ? best - 3 : 0;
      nlo = std::min(nlo, rs.size() - 6);
      std::vector<double> rr(rs.begin() + static_cast<long>(nlo),
                             rs.begin() + static_cast<long>(nlo) + 6);
      std::vector<Complex> cc(cs.begin() + static_cast<long>(nlo),
                              cs.begin() + static_cast<long>(nlo) + 6);
      bool distinct = true;
      for (size_t n = 1; n < rr.size(); ++n)
        if (rr[n] == rr[n - 1]) distinct = false;
      if (!distinct) continue;
      ts.push_back(xj.imag());
      vals.push_back(neville(rr, cc, x.real()));
    }
  }
  if (ts.size() < 4) throw Error("too few usable paths for transverse interpolation");
  Complex field = neville(ts, vals, x.imag());
  if (!want_derivative) {
    for (size_t m = 0; m < sub.q.size(); ++m) field += sub.k[m] / (x - sub.q[m]);
    return -field;  // f = -u'/u
  }
  for (size_t m = 0; m < sub.q.size(); ++m) {
    Complex d = x - sub.q[m];
    field += sub.k[m] / (d * d);
  }
  return field;
}

Complex ContinuedSolution::value(Complex x) const {
  StripRegion sr = seed_->region();
  if (x.real() <= sr.re_hi) {
    if (!sr.contains(x, 0.02 * params_.a))
      throw OutOfRegion("point outside the continued region");
    return seed_->value(x);
  }
  const Slab* s = slab_for(x.real());
  if (!s) throw OutOfRegion("point beyond the continued region");
  if (x.imag() < s->nominal.im_lo - 1e-9 || x.imag() > s->nominal.im_hi + 1e-9)
    throw OutOfRegion("point outside the transverse window");
  return interp_fields(*s, x, false);
}

Complex ContinuedSolution::derivative(Complex x) const {
  StripRegion sr = seed_->region();
  if (x.real() <= sr.re_hi) {
    if (!sr.contains(x, 0.02 * params_.a))
      throw OutOfRegion("point outside the continued region");
    return seed_->derivative(x);
  }
  const Slab* s = slab_for(x.real());
  if (!s) throw OutOfRegion("point beyond the continued region");
  return interp_fields(*s, x, true);
}

void ContinuedSolution::extend_right(int n_slabs) {
  double target = hunted_hi_ + n_slabs * params_.a;
  while (hunted_hi_ < target - 1e-12) build_slab();
}

void ContinuedSolution::build_slab() {
  const double a = params_.a;
  StripRegion base = seed_->region();
  const double front = slabs_.empty() ? base.re_hi : slabs_.back().nominal.re_hi;
  const double advance = cfg_.advance_rel * a;
  Slab s;
  s.nominal = {front, front + advance, base.im_lo, base.im_hi};
  // paths reach back into built ground so that every backward look of the
  // coefficient lands well behind the hunted frontier; there is no forward
  // overhang, the front cannot be seen past
  const double margin = cfg_.margin_rel * a;
  s.cover_lo = s.nominal.re_lo - margin;
  s.cover_hi = s.nominal.re_hi;

  // the coefficient on this strip looks back one step into what is already
  // built; its singularities sit one step ahead of the known poles
  s.h = h_from_f(*this, params_);
  for (const auto& p : all_poles_) {
    Complex c = p.x + a;
    if (c.real() > s.cover_lo - 0.2 * a && c.real() < s.cover_hi + 0.2 * a &&
        c.imag() > s.nominal.im_lo - 0.5 * a && c.imag() < s.nominal.im_hi + 0.5 * a)
      s.h_poles.push_back(c);
  }

  // transverse path family
  int P = std::max(8, static_cast<int>(std::ceil((base.im_hi - base.im_lo) /
                                                 (cfg_.path_spacing_rel * a))));
  s.spacing = (base.im_hi - base.im_lo) / P;
  IntegrateOptions iopt{cfg_.rk_tol, a / 16.0, 1e-11 * a};
  s.solver = std::make_shared<LocalSolver>(s.h, s.h_poles,
                                           cfg_.detour_clearance_rel * a, iopt);
  const Slab* prev = slabs_.empty() ? nullptr : &slabs_.back();
  for (int j = 0; j <= P; ++j) {
    double im = base.im_lo + s.spacing * j;
    s.path_im.push_back(im);
    Complex start(s.cover_lo, im);
    Complex u0, du0;
    bool carried = false;
    if (prev && j < static_cast<int>(prev->paths.size())) {
      // hand the linearizing solution across strips per path: re-seeding from
      // interpolated values next to a pole is 1/d^3-conditioned and the
      // recessive stretches amplify whatever it injects, whereas a continuous
      // march only carries integration noise.  Magnitude is renormalized; the
      // field extraction is scale-free.
      PathNode pn;
      Complex st = start;
      for (int back = 0; back < 4 && !carried; ++back) {
        if (prev->paths[static_cast<size_t>(j)].eval_on_main(st.real(), pn)) {
          double mag = std::abs(pn.u) + std::abs(pn.du);
          if (mag > 1e-290) {
            start = Complex(st.real(), im);
            u0 = pn.u / mag;
            du0 = pn.du / mag;
            carried = true;
          }
        }
        st -= Complex(0.05 * a, 0.0);
      }
    }
    if (!carried) {
      // first strip, or no usable handoff point: seed from the field, backing
      // away from any pole first
      for (int shift = 0; shift < 5; ++shift) {
        bool clear = true;
        for (const auto& p : all_poles_)
          if (std::abs(start - p.x) < 0.3 * a) clear = false;
        if (clear) break;
        start -= Complex(0.1 * a, 0.0);
      }
      std::tie(u0, du0) = seed_u(*this, params_, start);
    }
    auto line = build_polyline(start, Complex(s.cover_hi, im), s.h_poles,
                               cfg_.detour_clearance_rel * a);
    Trajectory t = integrate_u(s.h, line, u0, du0, iopt);
    s.solver->add_anchors(t);
    s.paths.push_back(std::move(t));
  }

  slabs_.push_back(std::move(s));
  Slab& slab = slabs_.back();

  // ---- pole hunting over the newly secured ground -------------------------
  // The classified zone trails the raw front: contours need elbow room, and
  // interpolation behind the frontier must never feel undiscovered structure.
  const double hunt_lo = hunted_hi_;
  const double hunt_hi = slab.cover_hi - cfg_.defer_rel * a;
  StripRegion hunt_region{hunt_lo, hunt_hi, slab.nominal.im_lo, slab.nominal.im_hi};
  std::vector<PoleRecord> found;

  // chain successors of everything known so far
  std::vector<Complex> candidates;
  for (const auto& p : all_poles_) {
    Complex c = p.x + a;
    if (c.real() > hunt_lo + 1e-9 * a && c.real() <= hunt_hi &&
        c.imag() >= slab.nominal.im_lo - 0.02 * a &&
        c.imag() <= slab.nominal.im_hi + 0.02 * a)
      candidates.push_back(c);
  }

  auto nearest_other = [&](Complex x, const std::vector<Complex>& others) {
    double d = 1e300;
    for (Complex o : others)
      if (std::abs(o - x) > 1e-9) d = std::min(d, std::abs(o - x));
    for (const auto& p : all_poles_) d = std::min(d, std::max(std::abs(p.x - x), 1e-9));
    return d;
  };

  for (Complex c0 : candidates) {
    double radius = std::min(cfg_.contour_radius_rel * a,
                             0.42 * nearest_other(c0, candidates));
    try {
      Ring probe = slab.solver->circle(c0, radius, cfg_.contour_nodes);
      int k = probe.u_order();
      if (k == 0) continue;  // chain ends: regular point
      // recenter on the enclosed zero/pole of u from the contour moment;
      // walking into the point is not an option, the coefficient is singular
      // there
      Complex c = probe.u_center(k);
      if (std::abs(c - c0) > 0.5 * radius) {
        warnings_.push_back("chain point displaced by " + std::to_string(std::abs(c - c0)));
        c = c0;
      } else {
        Ring probe2 = slab.solver->circle(c, radius, cfg_.contour_nodes);
        c = probe2.u_center(k);
      }
      Ring outer = slab.solver->circle(c, radius, cfg_.contour_nodes);
      Ring inner = slab.solver->circle(c, 0.6 * radius, cfg_.contour_nodes);
      ClassifyOptions copt;
      copt.radius = radius;
      LocalODEData ld = classify_from_rings(outer, inner, copt);
      for (auto& w : ld.warnings) warnings_.push_back(w);

      PoleRecord rec;
      rec.x = c;
      rec.frobenius_n = ld.frobenius_n;
      rec.residue = outer.residue_f();
      Complex res_check = inner.residue_f();
      if (std::abs(rec.residue - res_check) > 1e-6 * (1.0 + std::abs(rec.residue)))
        warnings_.push_back("residue differs between contour radii");
      if (k == ld.frobenius_n) {
        rec.type = LocalSolutionType::special;
      } else if (k == -(ld.frobenius_n - 1)) {
        rec.type = LocalSolutionType::generic;
      } else {
        warnings_.push_back("u order " + std::to_string(k) +
                            " inconsistent with N = " + std::to_string(ld.frobenius_n));
        rec.type = k > 0 ? LocalSolutionType::special : LocalSolutionType::generic;
      }
      found.push_back(rec);
    } catch (const Error& e) {
      warnings_.push_back(std::string("chain-point analysis failed: ") + e.what());
    }
  }

  // fresh zeros of u away from the chain candidates
  FindZeroOptions fopt;
  fopt.zero_tol = cfg_.zero_tol;
  fopt.step_proximity = 1.5 * std::max(slab.spacing, a / 16.0);
  fopt.merge_radius = std::max(10.0 * cfg_.zero_tol, 1e-7 * a);
  auto zeros = find_u_zeros(slab.paths, *slab.solver, hunt_region, fopt);
  for (const auto& z : zeros) {
    if (z.x.real() > hunt_hi || z.x.real() <= hunt_lo) continue;  // next pass owns it
    bool chainish = false;
    for (Complex c : candidates)
      if (std::abs(z.x - c) < 0.2 * a) chainish = true;
    for (const auto& r : found)
      if (std::abs(z.x - r.x) < 0.05 * a) chainish = true;
    for (const auto& p : all_poles_)
      if (std::abs(z.x - p.x) < 1e-5 * a) chainish = true;
    if (chainish) continue;

    PoleRecord rec;
    rec.x = z.x;
    try {
      double radius = std::min(cfg_.contour_radius_rel * a,
                               0.42 * nearest_other(z.x, candidates));
      Ring outer = slab.solver->circle(z.x, radius, cfg_.contour_nodes);
      Ring inner = slab.solver->circle(z.x, 0.6 * radius, cfg_.contour_nodes);
      ClassifyOptions copt;
      copt.radius = radius;
      LocalODEData ld = classify_from_rings(outer, inner, copt);
      rec.frobenius_n = ld.frobenius_n;
      rec.residue = outer.residue_f();
      rec.type = LocalSolutionType::special;
      if (!ld.analytic_center)
        warnings_.push_back("fresh zero sits on a singular coefficient point");
    } catch (const Error& e) {
      warnings_.push_back(std::string("fresh-zero analysis failed: ") + e.what());
      rec.frobenius_n = 1;
      rec.residue = Complex(-1.0, 0.0);
      rec.type = LocalSolutionType::special;
    }
    found.push_back(rec);
  }

  // chain bookkeeping
  for (auto& rec : found) {
    bool linked = false;
    for (const auto& prev : all_poles_) {
      if (std::abs(rec.x - prev.x - a) < cfg_.chain_link_rtol * a) {
        rec.chain_id = prev.chain_id;
        rec.chain = prev.chain + 1;
        linked = true;
        break;
      }
    }
    if (!linked) {
      rec.chain_id = next_chain_id_++;
      rec.chain = 0;
    }
    all_poles_.push_back(rec);
    discovered_.push_back(rec);
  }

  hunted_hi_ = hunt_hi;
}

std::pair<std::shared_ptr<ContinuedSolution>, std::vector<PoleRecord>> continue_right(
    std::shared_ptr<const SolutionPatch> patch, const DDEParameters& params,
    const ContinuationConfig& cfg, int n_slabs) {
  auto sol = std::make_shared<ContinuedSolution>(std::move(patch), params, cfg);
  sol->extend_right(n_slabs);
  return {sol, sol->discovered_poles()};
}

namespace {

class ReflectedPatch : public SolutionPatch {
 public:
  explicit ReflectedPatch(std::shared_ptr<const SolutionPatch> inner)
      : inner_(std::move(inner)) {
    StripRegion r = inner_->region();
    region_ = {-r.re_hi, -r.re_lo, -r.im_hi, -r.im_lo};
    for (PoleRecord rec : inner_->poles()) {
      rec.x = -rec.x;
      rec.residue = -rec.residue;
      poles_.push_back(rec);
    }
  }
  StripRegion region() const override { return region_; }
  Complex value(Complex x) const override { return inner_->value(-x); }
  Complex derivative(Complex x) const override { return -inner_->derivative(-x); }
  const std::vector<PoleRecord>& poles() const override { return poles_; }

 private:
  std::shared_ptr<const SolutionPatch> inner_;
  StripRegion region_;
  std::vector<PoleRecord> poles_;
};

}  // namespace

std::shared_ptr<SolutionPatch> reflect_patch(std::shared_ptr<const SolutionPatch> patch) {
  return std::make_shared<ReflectedPatch>(std::move(patch));
}

LeftwardRun continue_left(std::shared_ptr<const SolutionPatch> seed,
                          const DDEParameters& params, const ContinuationConfig& cfg,
                          int n_slabs) {
  auto mirrored = reflect_patch(std::move(seed));
  auto [sol, recs] = continue_right(mirrored, reflect_params(params), cfg, n_slabs);
  LeftwardRun run;
  run.solution = reflect_patch(sol);
  for (PoleRecord rec : recs) {
    rec.x = -rec.x;
    rec.residue = -rec.residue;
    run.discovered.push_back(rec);
  }
  run.warnings = sol->warnings();
  return run;
}

CombinedSolution::CombinedSolution(std::shared_ptr<const SolutionPatch> left,
                                   std::shared_ptr<const SolutionPatch> right,
                                   double split_re)
    : left_(std::move(left)), right_(std::move(right)), split_re_(split_re) {
  poles_ = left_->poles();
  for (const auto& p : right_->poles()) {
    bool dup = false;
    for (const auto& q : poles_)
      if (std::abs(p.x - q.x) < 1e-9) dup = true;
    if (!dup) poles_.push_back(p);
  }
}

StripRegion CombinedSolution::region() const {
  StripRegion l = left_->region(), r = right_->region();
  return {l.re_lo, r.re_hi, std::max(l.im_lo, r.im_lo), std::min(l.im_hi, r.im_hi)};
}

Complex CombinedSolution::value(Complex x) const {
  return x.real() < split_re_ ? left_->value(x) : right_->value(x);
}

Complex CombinedSolution::derivative(Complex x) const {
  return x.real() < split_re_ ? left_->derivative(x) : right_->derivative(x);
}

Complex dde_residual_numeric(const SolutionPatch& patch, Complex x,
                             const DDEParameters& params, double pole_standoff) {
  Complex xa = x + params.a;
  StripRegion r = patch.region();
  if (!r.contains(x) || !r.contains(xa))
    throw OutOfRegion("residual needs both x and x + a inside the region");
  for (const auto& p : patch.poles())
    if (std::abs(x - p.x) < pole_standoff || std::abs(xa - p.x) < pole_standoff)
      throw NearPole("residual point too close to a pole");
  Complex f0 = patch.value(x), f1 = patch.value(xa);
  return patch.derivative(x) + patch.derivative(xa) + f0 * f0 - f1 * f1 - params.mu;
}

std::pair<Complex, Complex> potentials(const SolutionPatch& patch, Complex spectral_const,
                                       Complex x) {
  if (!patch.region().contains(x)) throw OutOfRegion("potential point outside the region");
  Complex f = patch.value(x);
  Complex df = patch.derivative(x);
  return {f * f - df + spectral_const, f * f + df + spectral_const};
}

SeriesSolution::SeriesSolution(const series::FormalSolution& fs, StripRegion window,
                               double require_estimate)
    : b_(fs.b.real()), window_(window) {
  fhat_ = fs.to_series();
  dfhat_ = series::diff(fhat_);
  // the error estimate is largest at the smallest |z| on the window
  for (Complex corner : {Complex(window.re_lo, window.im_lo), Complex(window.re_lo, window.im_hi),
                         Complex(window.re_lo, 0.5 * (window.im_lo + window.im_hi))}) {
    Complex z = corner + b_;
    auto ev = series::evaluate(fhat_, z);
    auto ed = series::evaluate(dfhat_, z);
    worst_estimate_ = std::max({worst_estimate_, ev.error_estimate, ed.error_estimate});
  }
  if (worst_estimate_ > require_estimate)
    throw ConfigError("asymptotic seed window too close in: optimal-truncation estimate " +
                      std::to_string(worst_estimate_));
}

Complex SeriesSolution::value(Complex x) const {
  return series::evaluate(fhat_, x + b_).value;
}

Complex SeriesSolution::derivative(Complex x) const {
  return series::evaluate(dfhat_, x + b_).value;
}

}  // namespace merodde::cont
