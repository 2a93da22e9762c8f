#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "merodde/errors.hpp"
#include "merodde/scalars.hpp"

namespace merodde::series {

// Truncated formal series on the half-integer exponent lattice,
//
//   s(z) = sum_{n = n_min}^{n_trunc} c_n z^{-n/2},
//
// where negative n encode positive powers (n = -1 is z^{1/2}, n = -2 is z).
// n_trunc is the deepest order whose coefficient is known; every operation
// propagates the correct joint validity so that no fabricated orders appear.
// A series with n_trunc == kExactOrder is exact: all deeper coefficients are
// known to vanish.
template <class S>
class HalfPowerSeries {
 public:
  static constexpr int kExactOrder = 1 << 28;

  HalfPowerSeries() = default;  // identically zero, exact

  static HalfPowerSeries zero(int n_trunc = kExactOrder) {
    HalfPowerSeries s;
    s.n_trunc_ = n_trunc;
    return s;
  }

  // c * z^{-n/2}
  static HalfPowerSeries monomial(const S& c, int n, int n_trunc = kExactOrder) {
    HalfPowerSeries s;
    s.n_trunc_ = n_trunc;
    if (!scalar_ops<S>::is_zero(c) && n <= n_trunc) {
      s.n_min_ = n;
      s.c_.push_back(c);
    }
    return s;
  }

  static HalfPowerSeries constant(const S& c) { return monomial(c, 0); }

  bool is_zero() const { return c_.empty(); }
  bool is_exact() const { return n_trunc_ >= kExactOrder; }
  int n_trunc() const { return n_trunc_; }

  // Leading lattice index (smallest n with nonzero stored coefficient).
  int leading_index() const {
    if (c_.empty()) throw Error("leading_index of zero series");
    return n_min_;
  }
  const S& leading_coeff() const {
    if (c_.empty()) throw Error("leading_coeff of zero series");
    return c_.front();
  }

  bool known(int n) const { return n <= n_trunc_; }

  // Coefficient of z^{-n/2}; requires n within the validity range.
  S coeff(int n) const {
    if (!known(n)) throw Error("coefficient order beyond series validity");
    if (n < n_min_ || n >= n_min_ + static_cast<int>(c_.size())) return S(0);
    return c_[static_cast<size_t>(n - n_min_)];
  }

  // Iteration support over the stored (possibly zero-padded) range.
  int stored_begin() const { return c_.empty() ? 0 : n_min_; }
  int stored_end() const { return c_.empty() ? 0 : n_min_ + static_cast<int>(c_.size()); }

  // Lower the validity horizon (raising it is never allowed).
  HalfPowerSeries& truncate_to(int n_trunc) {
    if (n_trunc < n_trunc_) {
      n_trunc_ = n_trunc;
      while (!c_.empty() && stored_end() - 1 > n_trunc_) c_.pop_back();
      normalize();
    }
    return *this;
  }

  friend HalfPowerSeries operator+(const HalfPowerSeries& a, const HalfPowerSeries& b) {
    HalfPowerSeries r;
    r.n_trunc_ = std::min(a.n_trunc_, b.n_trunc_);
    if (a.is_zero() && b.is_zero()) return r;
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    if (!a.is_zero()) { lo = std::min(lo, a.n_min_); hi = std::max(hi, a.stored_end()); }
    if (!b.is_zero()) { lo = std::min(lo, b.n_min_); hi = std::max(hi, b.stored_end()); }
    hi = std::min(hi, r.n_trunc_ + 1);
    if (lo >= hi) return r;
    r.n_min_ = lo;
    r.c_.assign(static_cast<size_t>(hi - lo), S(0));
    auto acc = [&](const HalfPowerSeries& s) {
      for (int n = s.stored_begin(); n < s.stored_end() && n < hi; ++n) {
        if (n < lo) continue;
        r.c_[static_cast<size_t>(n - lo)] = r.c_[static_cast<size_t>(n - lo)] + s.coeff(n);
      }
    };
    acc(a);
    acc(b);
    r.normalize();
    return r;
  }

  friend HalfPowerSeries operator-(const HalfPowerSeries& a, const HalfPowerSeries& b) {
    return a + b.negated();
  }

  HalfPowerSeries negated() const {
    HalfPowerSeries r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
  }

  HalfPowerSeries scaled(const S& f) const {
    HalfPowerSeries r = *this;
    if (scalar_ops<S>::is_zero(f)) return zero(n_trunc_ >= kExactOrder ? kExactOrder : n_trunc_);
    for (auto& c : r.c_) c = c * f;
    r.normalize();
    return r;
  }

  // Cauchy product on the lattice.  Joint validity: order n of the product is
  // complete iff every split n = n' + n'' has both factors known, giving
  // n_trunc = min(a.n_trunc + b.n_min, b.n_trunc + a.n_min).
  friend HalfPowerSeries operator*(const HalfPowerSeries& a, const HalfPowerSeries& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    HalfPowerSeries r;
    long long t1 = static_cast<long long>(a.n_trunc_) + b.n_min_;
    long long t2 = static_cast<long long>(b.n_trunc_) + a.n_min_;
    long long t = std::min({t1, t2, static_cast<long long>(kExactOrder)});
    r.n_trunc_ = static_cast<int>(t);
    int lo = a.n_min_ + b.n_min_;
    int hi = std::min(static_cast<long long>(a.stored_end() - 1 + b.stored_end() - 1),
                      t) + 1;
    if (lo >= hi) return zero(r.n_trunc_);
    r.n_min_ = lo;
    r.c_.assign(static_cast<size_t>(hi - lo), S(0));
    for (int i = a.stored_begin(); i < a.stored_end(); ++i) {
      const S& ca = a.coeff(i);
      if (scalar_ops<S>::is_zero(ca)) continue;
      for (int j = b.stored_begin(); j < b.stored_end(); ++j) {
        int n = i + j;
        if (n >= hi) break;
        r.c_[static_cast<size_t>(n - lo)] =
            r.c_[static_cast<size_t>(n - lo)] + ca * b.coeff(j);
      }
    }
    r.normalize();
    return r;
  }

 private:
  void normalize() {
    size_t lead = 0;
    while (lead < c_.size() && scalar_ops<S>::is_zero(c_[lead])) ++lead;
    if (lead == c_.size()) {
      c_.clear();
      n_min_ = 0;
      return;
    }
    if (lead > 0) {
      c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
      n_min_ += static_cast<int>(lead);
    }
    while (!c_.empty() && scalar_ops<S>::is_zero(c_.back())) c_.pop_back();
  }

  int n_min_ = 0;
  int n_trunc_ = kExactOrder;
  std::vector<S> c_;  // coefficient of z^{-(n_min_+i)/2}
};

// d/dz, termwise: c z^{-n/2} -> -(n/2) c z^{-(n+2)/2}.  Differentiation gains
// two lattice steps of validity.
template <class S>
HalfPowerSeries<S> diff(const HalfPowerSeries<S>& s) {
  using HS = HalfPowerSeries<S>;
  long long t = std::min(static_cast<long long>(s.n_trunc()) + 2,
                         static_cast<long long>(HS::kExactOrder));
  HS r = HS::zero(static_cast<int>(t));
  for (int n = s.stored_begin(); n < s.stored_end(); ++n) {
    S c = s.coeff(n) * scalar_ops<S>::from_ratio(-n, 2);
    r = r + HS::monomial(c, n + 2, static_cast<int>(t));
  }
  return r;
}

namespace detail {

// Binomial expansion of (z+b)^alpha +/- (z-b)^alpha with alpha = alpha_num/2:
//   sum over j (even for the sum, odd for the difference) of
//   2 C(alpha, j) b^j z^{alpha - j}.
// Terminates exactly when alpha is a nonnegative integer; otherwise the
// expansion is carried to depth j <= depth and the validity horizon records
// the first uncomputed order.
template <class S>
HalfPowerSeries<S> shift_power(int alpha_num, const S& b, int depth, bool odd_terms) {
  using HS = HalfPowerSeries<S>;
  const bool terminates = (alpha_num >= 0) && (alpha_num % 2 == 0);
  const int j_stop = terminates ? std::min(depth, alpha_num / 2) : depth;

  HS r = HS::zero(terminates ? HS::kExactOrder : -alpha_num + 2 * depth + 1);
  // C(alpha, j) accumulated incrementally to stay exact for rational scalars.
  S binom = S(1);
  S bpow = S(1);
  const S two = scalar_ops<S>::from_int(2);
  for (int j = 0; j <= j_stop; ++j) {
    if (j > 0) {
      // C(alpha, j) = C(alpha, j-1) * (alpha - j + 1) / j
      S num = scalar_ops<S>::from_ratio(alpha_num - 2 * (j - 1), 2);
      binom = binom * num / scalar_ops<S>::from_int(j);
      bpow = bpow * b;
    }
    if ((j % 2 == 1) != odd_terms) continue;
    S c = two * binom * bpow;
    r = r + HS::monomial(c, -alpha_num + 2 * j, r.n_trunc());
  }
  return r;
}

}  // namespace detail

// (z+b)^alpha + (z-b)^alpha, alpha = alpha_num/2.
template <class S>
HalfPowerSeries<S> shift_sum_power(int alpha_num, const S& b, int depth) {
  return detail::shift_power(alpha_num, b, depth, /*odd_terms=*/false);
}

// (z+b)^alpha - (z-b)^alpha.
template <class S>
HalfPowerSeries<S> shift_diff_power(int alpha_num, const S& b, int depth) {
  return detail::shift_power(alpha_num, b, depth, /*odd_terms=*/true);
}

namespace detail {

template <class S>
HalfPowerSeries<S> shift_apply(const HalfPowerSeries<S>& s, const S& b, int depth,
                               bool odd_terms) {
  using HS = HalfPowerSeries<S>;
  if (s.is_zero()) return HS::zero(s.n_trunc());
  // Deepest order with all term contributions accounted for.
  long long target = std::min(static_cast<long long>(s.n_trunc()),
                              static_cast<long long>(s.leading_index()) + 2LL * depth);
  target = std::min(target, static_cast<long long>(HS::kExactOrder));
  HS r = HS::zero(static_cast<int>(target));
  for (int n = s.stored_begin(); n < s.stored_end(); ++n) {
    const S c = s.coeff(n);
    if (scalar_ops<S>::is_zero(c)) continue;
    int jt = static_cast<int>((target - n) / 2);
    if (jt < 0) continue;
    HS e = detail::shift_power(-n, b, jt, odd_terms);
    // contributions land on the parity sub-lattice of n, so the expansion is
    // actually valid through `target` even when (target - n) is odd
    if (!e.is_exact()) e.truncate_to(static_cast<int>(target));
    r = r + e.scaled(c);
  }
  r.truncate_to(static_cast<int>(std::min(target, static_cast<long long>(s.n_trunc()))));
  return r;
}

}  // namespace detail

// g(z+b) + g(z-b), applied termwise with binomial depth `depth`.
template <class S>
HalfPowerSeries<S> shift_sum(const HalfPowerSeries<S>& s, const S& b, int depth = 32) {
  return detail::shift_apply(s, b, depth, false);
}

// g(z+b) - g(z-b).
template <class S>
HalfPowerSeries<S> shift_diff(const HalfPowerSeries<S>& s, const S& b, int depth = 32) {
  return detail::shift_apply(s, b, depth, true);
}

struct EvalResult {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;
  int terms_used = 0;
};

// Partial sum of the series at z with the first omitted term as the error
// estimate.  n_terms == nullopt selects optimal truncation: sum up to (not
// including) the smallest-magnitude term.  If `tol` is given and even the
// optimal estimate exceeds it, the series is useless at this z.
template <class S>
EvalResult evaluate(const HalfPowerSeries<S>& s, Complex z,
                    std::optional<int> n_terms = std::nullopt,
                    std::optional<double> tol = std::nullopt) {
  EvalResult out;
  if (s.is_zero()) return out;

  struct Term { Complex value; double mag; };
  std::vector<Term> terms;
  const Complex logz = std::log(z);
  for (int n = s.stored_begin(); n < s.stored_end(); ++n) {
    S c = s.coeff(n);
    if (scalar_ops<S>::is_zero(c)) continue;
    Complex t = scalar_ops<S>::to_complex(c) * std::exp(-0.5 * static_cast<double>(n) * logz);
    terms.push_back({t, std::abs(t)});
  }
  if (terms.empty()) return out;

  size_t stop;  // first omitted term index
  if (n_terms.has_value()) {
    stop = std::min<size_t>(static_cast<size_t>(std::max(0, *n_terms)), terms.size());
  } else if (s.is_exact()) {
    stop = terms.size();  // nothing is omitted
  } else {
    // classical superasymptotic rule: stop before the smallest term
    stop = 0;
    for (size_t i = 1; i < terms.size(); ++i)
      if (terms[i].mag < terms[stop].mag) stop = i;
    if (stop == terms.size() - 1) stop = terms.size();  // still decreasing at the horizon
  }

  for (size_t i = 0; i < stop; ++i) out.value += terms[i].value;
  out.terms_used = static_cast<int>(stop);
  if (stop < terms.size()) {
    out.error_estimate = terms[stop].mag;
  } else if (!s.is_exact()) {
    // ran out of computed coefficients before reaching the smallest term; the
    // first unknown order is not justified to be any smaller than the last
    // stored one
    out.error_estimate = terms.back().mag;
  }
  if (tol && out.error_estimate > *tol)
    throw AsymptoticDivergence("series error estimate " + std::to_string(out.error_estimate) +
                               " exceeds requested tolerance at this |z|");
  return out;
}

}  // namespace merodde::series
