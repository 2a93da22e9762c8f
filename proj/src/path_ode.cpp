#include "merodde/path_ode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace merodde::cont {

namespace {

constexpr double kPi = std::numbers::pi;

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

struct State {
  Complex u, v;  // v = du/ds along the path parameter
};

}  // namespace

bool Trajectory::eval_on_main(double re, PathNode& out) const {
  for (size_t s = 0; s + 1 < seg_begin.size(); ++s) {
    if (!seg_main[s]) continue;
    int lo = seg_begin[s];
    int hi = seg_begin[s + 1];  // nodes lo..hi belong to this segment
    if (hi >= static_cast<int>(nodes.size())) hi = static_cast<int>(nodes.size()) - 1;
    if (lo >= hi) continue;
    double r0 = nodes[static_cast<size_t>(lo)].x.real();
    double r1 = nodes[static_cast<size_t>(hi)].x.real();
    if (re < std::min(r0, r1) - 1e-12 || re > std::max(r0, r1) + 1e-12) continue;
    // locate the node interval
    int i = lo;
    for (; i < hi; ++i) {
      double ra = nodes[static_cast<size_t>(i)].x.real();
      double rb = nodes[static_cast<size_t>(i + 1)].x.real();
      if (re >= std::min(ra, rb) - 1e-12 && re <= std::max(ra, rb) + 1e-12) break;
    }
    if (i >= hi) continue;
    const PathNode& A = nodes[static_cast<size_t>(i)];
    const PathNode& B = nodes[static_cast<size_t>(i + 1)];
    Complex dx = B.x - A.x;
    if (std::abs(dx) < 1e-300) { out = A; return true; }
    double t = (re - A.x.real()) / dx.real();
    t = std::clamp(t, 0.0, 1.0);

    // quintic two-point expansion in the chord parameter
    Complex u0 = A.u, m0 = dx * A.du, s0 = -dx * dx * A.h * A.u;
    Complex u1 = B.u, m1 = dx * B.du, s1 = -dx * dx * B.h * B.u;
    double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    double H2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
    double w = 1 - t;
    double s2 = w * w, s3 = s2 * w, s4 = s3 * w, s5 = s4 * w;
    double K0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    double K1 = -(w - 6 * s3 + 8 * s4 - 3 * s5);
    double K2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    Complex u = u0 * H0 + m0 * H1 + s0 * H2 + u1 * K0 + m1 * K1 + s1 * K2;
    // derivative of the quintic in t, then back to d/dx
    double dH0 = -30 * t2 + 60 * t3 - 30 * t4;
    double dH1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    double dH2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
    double dK0 = 30 * s2 - 60 * s3 + 30 * s4;
    double dK1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
    double dK2 = 0.5 * (-2 * w + 9 * s2 - 12 * s3 + 5 * s4);
    Complex du_dt = u0 * dH0 + m0 * dH1 + s0 * dH2 + u1 * dK0 + m1 * dK1 + s1 * dK2;
    out.x = A.x + t * dx;
    out.u = u;
    out.du = du_dt / dx;
    out.h = Complex(0.0, 0.0);  // not interpolated
    return true;
  }
  return false;
}

namespace {

// one adaptive segment integration; appends nodes (excluding the start node)
void integrate_segment(const CoefficientFn& h, Complex x0, Complex x1, State& y,
                       const IntegrateOptions& opt, std::vector<PathNode>& out,
                       Complex& h_at_end) {
  const Complex dir = x1 - x0;
  const double len = std::abs(dir);
  if (len < 1e-300) return;
  const Complex d = dir / len;

  auto rhs = [&](double s, const State& st, Complex& hval) -> State {
    Complex x = x0 + s * d;
    hval = h(x);
    return {d * st.v, -d * hval * st.u};
  };

  double s = 0.0;
  double dt = std::min({0.1 * len, opt.max_dx, 0.05 / (1.0 + std::abs(y.v / (std::abs(y.u) + 1e-30)))});
  Complex hdummy;
  Complex h0 = h(x0);
  int rejections_in_a_row = 0;
  while (s < len - 1e-14) {
    dt = std::min(dt, len - s);
    State k1 = rhs(s, y, hdummy);
    State y2{y.u + dt * a21 * k1.u, y.v + dt * a21 * k1.v};
    State k2 = rhs(s + c2 * dt, y2, hdummy);
    State y3{y.u + dt * (a31 * k1.u + a32 * k2.u), y.v + dt * (a31 * k1.v + a32 * k2.v)};
    State k3 = rhs(s + c3 * dt, y3, hdummy);
    State y4{y.u + dt * (a41 * k1.u + a42 * k2.u + a43 * k3.u),
             y.v + dt * (a41 * k1.v + a42 * k2.v + a43 * k3.v)};
    State k4 = rhs(s + c4 * dt, y4, hdummy);
    State y5{y.u + dt * (a51 * k1.u + a52 * k2.u + a53 * k3.u + a54 * k4.u),
             y.v + dt * (a51 * k1.v + a52 * k2.v + a53 * k3.v + a54 * k4.v)};
    State k5 = rhs(s + c5 * dt, y5, hdummy);
    State y6{y.u + dt * (a61 * k1.u + a62 * k2.u + a63 * k3.u + a64 * k4.u + a65 * k5.u),
             y.v + dt * (a61 * k1.v + a62 * k2.v + a63 * k3.v + a64 * k4.v + a65 * k5.v)};
    State k6 = rhs(s + dt, y6, hdummy);
    State ynew{y.u + dt * (b1 * k1.u + b3 * k3.u + b4 * k4.u + b5 * k5.u + b6 * k6.u),
               y.v + dt * (b1 * k1.v + b3 * k3.v + b4 * k4.v + b5 * k5.v + b6 * k6.v)};
    Complex hnew;
    State k7 = rhs(s + dt, ynew, hnew);
    Complex err_u = dt * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u + e6 * k6.u + e7 * k7.u);
    Complex err_v = dt * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v + e6 * k6.v + e7 * k7.v);

    double scale = std::max(std::abs(y.u), std::abs(ynew.u)) +
                   std::max(std::abs(y.v), std::abs(ynew.v)) + 1e-290;
    // error per unit arclength, with a roundoff floor so that micro-steps do
    // not chase noise below machine precision
    double ratio = (std::abs(err_u) + std::abs(err_v)) /
                   (dt * opt.tol * scale + 4e-14 * scale);
    // remainder steps at the roundoff scale of the coordinates are always
    // accepted: their error is indistinguishable from noise
    const double noise_dt = 3e-11 * (1.0 + std::abs(x0) + len);

    if (ratio <= 1.0 || dt <= noise_dt) {
      s += dt;
      y = ynew;
      h0 = hnew;
      out.push_back({x0 + s * d, y.u, y.v, hnew});
      rejections_in_a_row = 0;
      double grow = 0.9 * std::pow(std::max(ratio, 1e-10), -0.2);
      dt *= std::clamp(grow, 0.2, 5.0);
      dt = std::min(dt, opt.max_dx);
    } else {
      ++rejections_in_a_row;
      dt *= std::clamp(0.9 * std::pow(ratio, -0.25), 0.1, 0.7);
      // sub-noise steps auto-accept, so a stall can only mean persistent
      // stiffness: a singular coefficient on or near the path
      if (rejections_in_a_row > 60)
        throw StepFailure("integration stalled near x = (" +
                          std::to_string((x0 + s * d).real()) + ", " +
                          std::to_string((x0 + s * d).imag()) +
                          "): singular coefficient on or near the path");
    }
  }
  h_at_end = h0;
}

}  // namespace

Trajectory integrate_u(const CoefficientFn& h, const std::vector<Complex>& polyline,
                       Complex u0, Complex du0, const IntegrateOptions& opt) {
  if (polyline.size() < 2) throw ConfigError("path needs at least two points");
  Trajectory t;
  State y{u0, du0};
  t.nodes.push_back({polyline[0], u0, du0, h(polyline[0])});
  for (size_t i = 0; i + 1 < polyline.size(); ++i) {
    t.seg_begin.push_back(static_cast<int>(t.nodes.size()) - 1);
    // mainline segments are the horizontal ones; detour chords are short and
    // oblique
    Complex d = polyline[i + 1] - polyline[i];
    t.seg_main.push_back(std::abs(d.imag()) < 1e-12 * (1.0 + std::abs(d.real())));
    Complex hend;
    integrate_segment(h, polyline[i], polyline[i + 1], y, opt, t.nodes, hend);
  }
  t.seg_begin.push_back(static_cast<int>(t.nodes.size()) - 1);
  return t;
}

std::vector<Complex> build_polyline(Complex from, Complex to,
                                    const std::vector<Complex>& obstacles,
                                    double clearance) {
  std::vector<Complex> pts{from, to};
  Complex d = to - from;
  double len = std::abs(d);
  if (len < 1e-300) return pts;
  Complex dir = d / len;

  struct Hit { double s; Complex c; };
  std::vector<Hit> hits;
  for (Complex c : obstacles) {
    double s = ((c - from) * std::conj(dir)).real();
    if (s < -clearance || s > len + clearance) continue;
    double dist = std::abs(c - (from + std::clamp(s, 0.0, len) * dir));
    if (dist < clearance) hits.push_back({std::clamp(s, 0.0, len), c});
  }
  if (hits.empty()) return pts;
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.s < b.s; });

  std::vector<Complex> path{from};
  for (const auto& hit : hits) {
    // entry and exit points on the line, clearance away from the obstacle
    double foot = ((hit.c - from) * std::conj(dir)).real();
    double off = ((hit.c - from) * std::conj(dir)).imag();  // signed transverse offset
    double half = std::sqrt(std::max(clearance * clearance - off * off, 0.0)) + 0.5 * clearance;
    double s_in = std::max(foot - half, 0.0);
    double s_out = std::min(foot + half, len);
    Complex pin = from + s_in * dir;
    Complex pout = from + s_out * dir;
    if (std::abs(path.back() - pin) > 1e-14) path.push_back(pin);
    // arc on the side away from the obstacle (or above if it sits on the line)
    double side = off > 0.0 ? -1.0 : 1.0;
    double a_in = std::arg(pin - hit.c);
    double a_out = std::arg(pout - hit.c);
    // sweep from a_in to a_out the `side` way round
    double sweep = a_out - a_in;
    while (side > 0 && sweep < 0) sweep += 2.0 * kPi;
    while (side < 0 && sweep > 0) sweep -= 2.0 * kPi;
    const int chords = 8;
    double rr = std::max(clearance, std::abs(pin - hit.c) * 0.999);
    for (int k = 1; k < chords; ++k) {
      double ang = a_in + sweep * k / chords;
      path.push_back(hit.c + rr * std::exp(Complex(0.0, ang)));
    }
    path.push_back(pout);
  }
  if (std::abs(path.back() - to) > 1e-14) path.push_back(to);
  return path;
}

Complex Ring::mean_weighted(const std::function<Complex(const PathNode&)>& g) const {
  Complex acc(0.0, 0.0);
  for (const auto& n : nodes) acc += g(n) * (n.x - center);
  return acc / static_cast<double>(nodes.size());
}

Complex Ring::residue_f() const {
  return mean_weighted([](const PathNode& n) { return -n.du / n.u; });
}

int Ring::u_order() const {
  Complex w = mean_weighted([](const PathNode& n) { return n.du / n.u; });
  return static_cast<int>(std::lround(w.real()));
}

Complex Ring::u_center(int k) const {
  if (k == 0) throw Error("no enclosed zero or pole to locate");
  Complex m = mean_weighted([](const PathNode& n) { return n.x * n.du / n.u; });
  return m / static_cast<double>(k);
}

Complex Ring::laurent_h(int m) const {
  Complex acc(0.0, 0.0);
  for (const auto& n : nodes) {
    Complex w = n.x - center;
    acc += n.h * std::pow(w, -m);
  }
  return acc / static_cast<double>(nodes.size());
}

LocalSolver::LocalSolver(CoefficientFn h, std::vector<Complex> h_singularities,
                         double clearance, IntegrateOptions opt)
    : h_(std::move(h)), sing_(std::move(h_singularities)), clearance_(clearance),
      opt_(opt) {}

void LocalSolver::add_anchors(const Trajectory& t) {
  // thin the trajectory a little; anchors only need to be dense enough that
  // walks stay short
  const size_t stride = 1;
  for (size_t i = 0; i < t.nodes.size(); i += stride) anchors_.push_back(t.nodes[i]);
}

PathNode LocalSolver::walk(const PathNode& from, Complex to) const {
  Complex dx = to - from.x;
  if (std::abs(dx) < 1e-9 * (1.0 + std::abs(from.x))) {
    // below integration resolution: one Taylor step is exact to roundoff
    Complex h0 = h_(from.x);
    PathNode n;
    n.x = to;
    n.u = from.u + dx * from.du - 0.5 * dx * dx * h0 * from.u;
    n.du = from.du - dx * h0 * from.u;
    n.h = h0;
    return n;
  }
  auto line = build_polyline(from.x, to, sing_, clearance_);
  Trajectory t = integrate_u(h_, line, from.u, from.du, opt_);
  return t.nodes.back();
}

PathNode LocalSolver::at(Complex target) const { return at_with_standoff(target, 0.0); }

PathNode LocalSolver::at_with_standoff(Complex target, double standoff) const {
  if (anchors_.empty()) throw Error("local solver has no anchors");
  const PathNode* best = nullptr;
  double bd = 1e300;
  for (const auto& a : anchors_) {
    double d = std::abs(a.x - target);
    if (d < standoff) continue;
    if (d < bd) { bd = d; best = &a; }
  }
  if (!best) throw Error("no anchor outside the requested standoff");
  return walk(*best, target);
}

Complex LocalSolver::refine_u_zero(const PathNode& seed, int order, double step_cap,
                                   double tol, int max_iter) const {
  if (order == 0) throw Error("refine_u_zero needs a nonzero local order");
  PathNode cur = seed;
  for (int it = 0; it < max_iter; ++it) {
    Complex step = -static_cast<double>(order) * cur.u / cur.du;
    if (!(std::abs(step) < 1e290)) throw NewtonStall("derivative vanished during refinement");
    if (std::abs(step) > step_cap) step *= step_cap / std::abs(step);
    if (std::abs(step) < tol) return cur.x + step;
    cur = walk(cur, cur.x + step);
  }
  throw NewtonStall("zero refinement did not converge");
}

Ring LocalSolver::circle(Complex center, double radius, int nodes) const {
  for (Complex s : sing_) {
    double d = std::abs(s - center);
    // the enclosed point itself is exempt; anything else near the contour is
    // disqualifying
    if (d > 0.05 * radius && d < radius * 1.15)
      throw ContourCrossesPole("circle encloses or grazes another singular point");
  }
  // nearest anchor comfortably outside the circle
  const PathNode* best = nullptr;
  double bd = 1e300;
  for (const auto& a : anchors_) {
    double d = std::abs(a.x - center);
    if (d < 1.3 * radius) continue;
    if (d < bd) { bd = d; best = &a; }
  }
  if (!best) throw Error("no anchor outside the contour radius");
  Complex radial = (best->x - center) / std::abs(best->x - center);
  Complex p0 = center + radius * radial;
  // walk in with the other singularities detoured, staying off the center
  std::vector<Complex> guarded = sing_;
  guarded.push_back(center);
  auto approach = build_polyline(best->x, p0, guarded, std::min(clearance_, 0.8 * radius));
  Trajectory ta = integrate_u(h_, approach, best->u, best->du, opt_);
  PathNode cur = ta.nodes.back();

  Ring ring;
  ring.center = center;
  ring.radius = radius;
  ring.nodes.resize(static_cast<size_t>(nodes));
  double theta0 = std::arg(radial);
  // march around the circle, landing exactly on the trapezoid angles
  int steps_per_interval = 3;
  double k0 = theta0 / (2.0 * kPi) * nodes;  // fractional start index
  int first = static_cast<int>(std::ceil(k0 - 1e-9));
  // walk from theta0 to the first node angle
  auto arc_to = [&](PathNode from, double th_from, double th_to) {
    PathNode state = from;
    int m = std::max(1, steps_per_interval);
    for (int j = 1; j <= m; ++j) {
      double th = th_from + (th_to - th_from) * j / m;
      Complex target = center + radius * std::exp(Complex(0.0, th));
      Trajectory seg = integrate_u(h_, {state.x, target}, state.u, state.du, opt_);
      state = seg.nodes.back();
    }
    return state;
  };
  double th_first = 2.0 * kPi * first / nodes;
  cur = arc_to(cur, theta0, th_first);
  for (int k = 0; k < nodes; ++k) {
    int idx = (first + k) % nodes;
    if (idx < 0) idx += nodes;
    ring.nodes[static_cast<size_t>(idx)] = cur;
    double th_a = 2.0 * kPi * (first + k) / nodes;
    double th_b = 2.0 * kPi * (first + k + 1) / nodes;
    cur = arc_to(cur, th_a, th_b);
  }
  // closure consistency: one full turn must reproduce the start state up to
  // integrator error; a mismatch flags an enclosed branch point
  const PathNode& back = ring.nodes[static_cast<size_t>(((first % nodes) + nodes) % nodes)];
  double scale = std::abs(back.u) + std::abs(cur.u) + 1e-290;
  if (std::abs(cur.u - back.u) > 1e-5 * scale)
    throw ContourCrossesPole("contour did not close: branching or crossing a pole");
  return ring;
}

}  // namespace merodde::cont
