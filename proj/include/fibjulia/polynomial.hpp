#pragma once

// Small dense polynomials in the abscissa a = a1(c), plus a rigorous lower
// bound over an interval via Bernstein coefficients.
//
// Substituting a2 = 1 - a and c = a - a^2 turns every breakpoint the region
// catalog uses into a polynomial in a with small integer coefficients.
// Margins between image corners and target edges are then exact integer (or
// dyadic, after bisection) combinations, so edge-tight inclusions cancel to
// the zero polynomial symbolically and only the final bound over the
// a-interval needs outward rounding.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <vector>

#include "fibjulia/interval.hpp"

namespace fibjulia {

// Coefficients are exact doubles: integers from the catalog edges and
// dyadics from bisection, small enough that +,-,* never round.  Index i
// holds the coefficient of a^i.
struct PolyA {
  std::vector<double> k;

  PolyA() = default;
  PolyA(std::initializer_list<double> cs) : k(cs) { trim(); }

  void trim() {
    while (!k.empty() && k.back() == 0.0) k.pop_back();
  }
  bool zero() const { return k.empty(); }
  size_t deg() const { return k.empty() ? 0 : k.size() - 1; }

  friend PolyA operator+(const PolyA& p, const PolyA& q) {
    PolyA r;
    r.k.resize(std::max(p.k.size(), q.k.size()), 0.0);
    for (size_t i = 0; i < p.k.size(); ++i) r.k[i] += p.k[i];
    for (size_t i = 0; i < q.k.size(); ++i) r.k[i] += q.k[i];
    r.trim();
    return r;
  }
  friend PolyA operator-(const PolyA& p, const PolyA& q) {
    PolyA r;
    r.k.resize(std::max(p.k.size(), q.k.size()), 0.0);
    for (size_t i = 0; i < p.k.size(); ++i) r.k[i] += p.k[i];
    for (size_t i = 0; i < q.k.size(); ++i) r.k[i] -= q.k[i];
    r.trim();
    return r;
  }
  friend PolyA operator-(const PolyA& p) { return PolyA{} - p; }
  friend PolyA operator*(const PolyA& p, const PolyA& q) {
    if (p.zero() || q.zero()) return {};
    PolyA r;
    r.k.resize(p.k.size() + q.k.size() - 1, 0.0);
    for (size_t i = 0; i < p.k.size(); ++i) {
      for (size_t j = 0; j < q.k.size(); ++j) r.k[i + j] += p.k[i] * q.k[j];
    }
    r.trim();
    return r;
  }
  friend PolyA operator*(double s, const PolyA& p) {
    PolyA r = p;
    for (double& c : r.k) c *= s;
    r.trim();
    return r;
  }
  friend bool operator==(const PolyA& p, const PolyA& q) { return p.k == q.k; }
};

// The same shape with interval coefficients, for anything downstream of an
// inexact step (the delta inflation, dyadic node corners are still exact but
// route through here so nothing silently rounds).
struct IPolyA {
  std::vector<Interval> k;

  IPolyA() = default;
  explicit IPolyA(const PolyA& p) {
    k.reserve(p.k.size());
    for (double c : p.k) k.push_back(Interval{c, c});
  }

  void trim() {
    while (!k.empty() && k.back().lo == 0.0 && k.back().hi == 0.0) {
      k.pop_back();
    }
  }
  bool zero() const { return k.empty(); }

  friend IPolyA operator+(const IPolyA& p, const IPolyA& q) {
    IPolyA r;
    r.k.resize(std::max(p.k.size(), q.k.size()), Interval{0.0, 0.0});
    for (size_t i = 0; i < p.k.size(); ++i) r.k[i] = r.k[i] + p.k[i];
    for (size_t i = 0; i < q.k.size(); ++i) r.k[i] = r.k[i] + q.k[i];
    r.trim();
    return r;
  }
  friend IPolyA operator*(const Interval& s, const IPolyA& p) {
    IPolyA r = p;
    for (Interval& c : r.k) c = c * s;
    r.trim();
    return r;
  }

  // Plain interval Horner evaluation; used for hull endpoints where a few
  // ulps of conservatism are harmless.
  Interval eval(const Interval& a) const {
    Interval acc{0.0, 0.0};
    for (size_t i = k.size(); i-- > 0;) acc = acc * a + k[i];
    return acc;
  }
};

namespace detail {

inline double binom(int n, int r) {
  static const auto table = [] {
    std::array<std::array<double, 33>, 33> t{};
    for (int i = 0; i < 33; ++i) {
      t[i][0] = 1.0;
      for (int j = 1; j <= i; ++j) {
        t[i][j] = t[i - 1][j - 1] + (j < i ? t[i - 1][j] : 0.0);
      }
    }
    return t;
  }();
  return table[n][r];
}

// Outward-rounded division by an exact positive double (a binomial here).
inline Interval div_exact_pos(const Interval& v, double d) {
  double lo = v.lo / d, hi = v.hi / d;
  if (!(std::fma(lo, d, -v.lo) == 0.0)) lo = next_down(lo);
  if (!(std::fma(hi, d, -v.hi) == 0.0)) hi = next_up(hi);
  return {lo, hi};
}

} // namespace detail

namespace detail {

// Taylor-shift p to the left endpoint, rescale by the width, and take the
// smallest Bernstein coefficient.  Exact cancellations (the zero polynomial,
// zero tail coefficients) survive because every step is interval arithmetic
// on exact inputs.
inline double bernstein_lower(const IPolyA& p, const Interval& a) {
  const int n = static_cast<int>(p.k.size()) - 1;
  std::vector<Interval> q = p.k;
  const Interval lo{a.lo, a.lo};
  for (int i = 0; i < n; ++i) {
    for (int j = n - 1; j >= i; --j) q[j] = q[j] + q[j + 1] * lo;
  }
  const Interval w = Interval{a.hi, a.hi} - lo;
  Interval wp{1.0, 1.0};
  for (int i = 1; i <= n; ++i) {
    wp = wp * w;
    q[i] = q[i] * wp;
  }
  double worst = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= n; ++j) {
    Interval b{0.0, 0.0};
    for (int i = 0; i <= j; ++i) {
      b = b + detail::div_exact_pos(q[i] * detail::binom(j, i),
                                    detail::binom(n, i));
    }
    worst = std::min(worst, b.lo);
  }
  return worst;
}

inline double lower_bound_rec(const IPolyA& p, const Interval& a, int depth) {
  const double lb = bernstein_lower(p, a);
  if (lb >= 0.0 || depth == 0) return lb;
  const double mid = a.lo + (a.hi - a.lo) * 0.5;
  if (!(mid > a.lo) || !(mid < a.hi)) return lb;
  return std::min(lower_bound_rec(p, Interval{a.lo, mid}, depth - 1),
                  lower_bound_rec(p, Interval{mid, a.hi}, depth - 1));
}

} // namespace detail

// Rigorous lower bound for p over the interval [a.lo, a.hi].  Bernstein
// control points can dip below a positive polynomial when the interval is
// wide, so a negative first answer triggers bisection in a; the minimum of
// the piece bounds is still a sound bound for the union.
inline double poly_lower_bound(const IPolyA& p, const Interval& a) {
  if (p.zero()) return 0.0;
  return detail::lower_bound_rec(p, a, 8);
}

inline double poly_lower_bound(const PolyA& p, const Interval& a) {
  return poly_lower_bound(IPolyA(p), a);
}

} // namespace fibjulia
