#pragma once

// Outward-rounded interval arithmetic on doubles, restricted to what the
// quadratic family and its certificates actually use: +, -, *, sqrt, hulls.
// Bounds are widened by one ulp only when the IEEE operation was inexact
// (detected with 2Sum / fma error terms), so integer-valued and dyadic
// intermediate results stay exact.  That exactness is load-bearing: the
// certifier's tail-coefficient rule compares against literal zero, and a
// blanket 1-ulp nudge would turn every true zero into a failure.
//
// Multiplication uses the containment convention 0 * inf = 0, which keeps
// products of half-infinite edges sound (the zero endpoint contributes a
// zero candidate, the infinite one an infinite candidate).

#include <algorithm>
#include <cmath>
#include <limits>

namespace fibjulia {

inline double next_up(double v) {
  if (std::isinf(v)) return v;
  return std::nextafter(v, std::numeric_limits<double>::infinity());
}

inline double next_down(double v) {
  if (std::isinf(v)) return v;
  return std::nextafter(v, -std::numeric_limits<double>::infinity());
}

namespace detail {

// Knuth's 2Sum error term; zero iff a + b was computed exactly.
inline double two_sum_err(double a, double b, double s) {
  const double bv = s - a;
  const double av = s - bv;
  return (a - av) + (b - bv);
}

inline double sum_down(double a, double b) {
  const double s = a + b;
  if (std::isinf(s)) return s;
  return two_sum_err(a, b, s) == 0.0 ? s : next_down(s);
}

inline double sum_up(double a, double b) {
  const double s = a + b;
  if (std::isinf(s)) return s;
  return two_sum_err(a, b, s) == 0.0 ? s : next_up(s);
}

// 0 * inf = 0 by convention (see header comment).
inline double prod(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

inline bool prod_exact(double a, double b, double p) {
  if (a == 0.0 || b == 0.0) return true;
  if (std::isinf(p)) return false;
  return std::fma(a, b, -p) == 0.0;
}

} // namespace detail

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double l, double h) : lo(l), hi(h) {}

  static Interval point(double v) { return {v, v}; }
  static Interval entire() {
    const double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf};
  }

  double width() const { return hi - lo; }
  double mid() const {
    if (std::isinf(lo) && std::isinf(hi)) return 0.0;
    if (std::isinf(lo)) return hi;
    if (std::isinf(hi)) return lo;
    return lo + (hi - lo) / 2;
  }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

inline Interval hull(Interval a, Interval b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

inline Interval operator+(Interval a, Interval b) {
  return {detail::sum_down(a.lo, b.lo), detail::sum_up(a.hi, b.hi)};
}

inline Interval operator-(Interval a, Interval b) { return a + (-b); }

inline Interval operator*(Interval a, Interval b) {
  const double cand[4] = {detail::prod(a.lo, b.lo), detail::prod(a.lo, b.hi),
                          detail::prod(a.hi, b.lo), detail::prod(a.hi, b.hi)};
  const double pa[4] = {a.lo, a.lo, a.hi, a.hi};
  const double pb[4] = {b.lo, b.hi, b.lo, b.hi};
  int ilo = 0, ihi = 0;
  for (int i = 1; i < 4; ++i) {
    if (cand[i] < cand[ilo]) ilo = i;
    if (cand[i] > cand[ihi]) ihi = i;
  }
  double lo = cand[ilo], hi = cand[ihi];
  if (!detail::prod_exact(pa[ilo], pb[ilo], lo)) lo = next_down(lo);
  if (!detail::prod_exact(pa[ihi], pb[ihi], hi)) hi = next_up(hi);
  return {lo, hi};
}

inline Interval operator+(Interval a, double b) { return a + Interval::point(b); }
inline Interval operator*(Interval a, double b) { return a * Interval::point(b); }
inline Interval operator*(double a, Interval b) { return Interval::point(a) * b; }

// Requires a.lo >= 0 up to rounding; the lower bound is clamped at zero.
inline Interval isqrt(Interval a) {
  const double rlo = std::sqrt(std::max(a.lo, 0.0));
  const double rhi = std::sqrt(a.hi);
  const double lo = (std::fma(rlo, rlo, -std::max(a.lo, 0.0)) == 0.0)
                        ? rlo
                        : std::max(next_down(rlo), 0.0);
  const double hi = (std::fma(rhi, rhi, -a.hi) == 0.0) ? rhi : next_up(rhi);
  return {lo, hi};
}

struct IBox {
  Interval x, y;

  bool contains(const IBox& o) const {
    return x.contains(o.x) && y.contains(o.y);
  }
  bool intersects(const IBox& o) const {
    return x.intersects(o.x) && y.intersects(o.y);
  }
};

// Interval enclosure of f(x, y) = (xy + c, x) over a box.  The second
// component is carried over verbatim, so iterating this enclosure loses
// nothing on the y axis.
inline IBox f_image(const IBox& b, Interval c) {
  return {b.x * b.y + c, b.x};
}

} // namespace fibjulia
