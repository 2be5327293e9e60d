#pragma once

// The planar quadratic family f(x, y) = (xy + c, x) and the scalar
// machinery attached to it: the inverse branch, fixed points, the 3-cycle
// through (-1, -1), linear stability, the cubic g whose graph carries the
// basin boundary, and the scalar sequences (c_n, b_n, Fibonacci escape
// exponents) that the orbit analysis leans on.
//
// Everything here is plain double arithmetic; the certified statements live
// in certifier.hpp on top of interval.hpp.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace fibjulia {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double norm_inf(const Point& z) {
  return std::max(std::fabs(z.x), std::fabs(z.y));
}

inline double dist_inf(const Point& a, const Point& b) {
  return std::max(std::fabs(a.x - b.x), std::fabs(a.y - b.y));
}

inline Point apply(const Point& z, double c) { return {z.x * z.y + c, z.x}; }

// The inverse branch: f(x, y) = (u, v) forces x = v and y = (u - c) / v.
// On the line v = 0 the map is not invertible: (c, 0) has a whole line of
// preimages, every other point (u, 0) has none.
struct InverseResult {
  enum class Status { Ok, NonUniquePreimage, NoPreimage };
  Status status = Status::Ok;
  Point value{};

  bool ok() const { return status == Status::Ok; }
};

inline InverseResult apply_inverse(const Point& z, double c) {
  if (z.y == 0.0) {
    return {z.x == c ? InverseResult::Status::NonUniquePreimage
                     : InverseResult::Status::NoPreimage,
            {}};
  }
  return {InverseResult::Status::Ok, {z.y, (z.x - c) / z.y}};
}

struct NonRealError : std::domain_error {
  explicit NonRealError(double c)
      : std::domain_error("fixed points are not real for c = " +
                          std::to_string(c) + " (requires c <= 1/4)") {}
};

// Diagonal fixed points (a, a) with a^2 - a + c = 0.  a1 <= a2, and
// alpha = (a1, a1), theta = (a2, a2).  a1 is computed as c / a2 to avoid
// the cancellation in (1 - sqrt(1 - 4c)) / 2 near c = 0.
struct FixedPoints {
  double a1 = 0.0;
  double a2 = 0.0;
  Point alpha{};
  Point theta{};
};

inline FixedPoints fixed_points(double c) {
  if (c > 0.25) throw NonRealError(c);
  const double a2 = (1.0 + std::sqrt(1.0 - 4.0 * c)) / 2.0;
  const double a1 = c / a2;
  return {a1, a2, {a1, a1}, {a2, a2}};
}

// p -> f(p) -> f(f(p)) -> p for every c.
struct ThreeCycle {
  Point p{-1.0, -1.0};
  Point fp{};
  Point ffp{};
};

inline ThreeCycle three_cycle(double c) {
  return {{-1.0, -1.0}, {1.0 + c, -1.0}, {-1.0, 1.0 + c}};
}

enum class StabilityClass { Attracting, Repelling, Saddle, Indifferent };

inline const char* to_string(StabilityClass s) {
  switch (s) {
    case StabilityClass::Attracting: return "Attracting";
    case StabilityClass::Repelling: return "Repelling";
    case StabilityClass::Saddle: return "Saddle";
    case StabilityClass::Indifferent: return "Indifferent";
  }
  return "?";
}

enum class FixedTarget { Alpha, Theta, Cycle };

struct StabilityReport {
  std::complex<double> lambda1;  // larger modulus first
  std::complex<double> lambda2;
  StabilityClass cls = StabilityClass::Indifferent;
};

namespace detail {

struct Mat2 {
  double a, b, c, d;  // row major
};

inline Mat2 jacobian(const Point& z) { return {z.y, z.x, 1.0, 0.0}; }

inline Mat2 mul(const Mat2& m, const Mat2& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
          m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

} // namespace detail

inline StabilityReport stability(double c, FixedTarget target,
                                 double tol = 1e-9) {
  detail::Mat2 m{};
  switch (target) {
    case FixedTarget::Alpha: {
      m = detail::jacobian(fixed_points(c).alpha);
      break;
    }
    case FixedTarget::Theta: {
      m = detail::jacobian(fixed_points(c).theta);
      break;
    }
    case FixedTarget::Cycle: {
      const ThreeCycle cyc = three_cycle(c);
      m = detail::mul(detail::jacobian(cyc.ffp),
                      detail::mul(detail::jacobian(cyc.fp),
                                  detail::jacobian(cyc.p)));
      break;
    }
  }
  const double tr = m.a + m.d;
  const double det = m.a * m.d - m.b * m.c;
  const double disc = tr * tr - 4.0 * det;
  std::complex<double> l1, l2;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    // Standard cancellation-free form: the larger-magnitude root first,
    // the other via the product.
    const double q = (tr >= 0.0) ? (tr + root) / 2.0 : (tr - root) / 2.0;
    l1 = q;
    l2 = (q != 0.0) ? det / q : (tr - q);
  } else {
    const double im = std::sqrt(-disc) / 2.0;
    l1 = {tr / 2.0, im};
    l2 = {tr / 2.0, -im};
  }
  if (std::abs(l2) > std::abs(l1)) std::swap(l1, l2);
  const double m1 = std::abs(l1), m2 = std::abs(l2);
  StabilityClass cls;
  if (std::fabs(m1 - 1.0) <= tol || std::fabs(m2 - 1.0) <= tol) {
    cls = StabilityClass::Indifferent;
  } else if (m1 < 1.0) {
    cls = StabilityClass::Attracting;
  } else if (m2 > 1.0) {
    cls = StabilityClass::Repelling;
  } else {
    cls = StabilityClass::Saddle;
  }
  return {l1, l2, cls};
}

// g(t) = t(t^2 + c) + c: the second iterate of f restricted to the diagonal
// arc that carries the basin boundary.  g(t) - t factors as
// (t + 1)(t^2 - t + c), so its fixed points are -1, a1, a2.
inline double g_eval(double t, double c) { return t * (t * t + c) + c; }

inline std::vector<double> g_fixed_points(double c) {
  const FixedPoints fp = fixed_points(c);
  return {-1.0, fp.a1, fp.a2};
}

// h1(x) = (a1^2 - a1^5) x^2 + (2 a1^2 - a1^5 - a1^6) x + a1 - a1^6, the
// upper envelope comparison polynomial; h1(x) - x < 0 on [a1^2, |a1|] is
// what pins orbits below the diagonal for -1 < c <= -3/4.
inline double h1_eval(double x, double c) {
  const double a = fixed_points(c).a1;
  const double a2 = a * a;
  const double a5 = a2 * a2 * a;
  const double a6 = a5 * a;
  return ((a2 - a5) * x + (2.0 * a2 - a5 - a6)) * x + (a - a6);
}

// Backward chain under g on [-1, -sqrt(-c)]: z0 = -sqrt(-c) and
// g(z_{k+1}) = z_k.  g is increasing on that bracket with g(-1) = -1 and
// g(-sqrt(-c)) = c >= -sqrt(-c), so each step is a clean bisection.
// Returns {z0, ..., zn}; the chain decreases to -1.
inline std::vector<double> g_inverse_chain(double c, int n) {
  if (!(c > -1.0 && c < 0.0)) {
    throw std::domain_error("g_inverse_chain requires -1 < c < 0");
  }
  const double r = -std::sqrt(-c);
  std::vector<double> chain;
  chain.reserve(static_cast<size_t>(n) + 1);
  chain.push_back(r);
  for (int k = 0; k < n; ++k) {
    const double target = chain.back();
    double lo = -1.0, hi = r;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double m = lo + (hi - lo) / 2.0;
      (g_eval(m, c) < target ? lo : hi) = m;
    }
    chain.push_back(lo + (hi - lo) / 2.0);
  }
  return chain;
}

// c_0 = c, c_{n+1} = c_n^2 + c (the quadratic family's critical orbit).
// Returns {c_0, ..., c_n}.
inline std::vector<double> seq_cn(double c, int n) {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n) + 1);
  out.push_back(c);
  for (int k = 0; k < n; ++k) out.push_back(out.back() * out.back() + c);
  return out;
}

// b_0 = w, b_{n+1} = (b_n - c) / a2.  Returns {b_1, ..., b_n}; the sequence
// converges to -c / (a2 - 1) = a2 and dominates second coordinates of
// backward orbits in L.
inline std::vector<double> seq_bn(double c, double w, int n) {
  const double a2 = fixed_points(c).a2;
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n));
  double b = w;
  for (int k = 0; k < n; ++k) {
    b = (b - c) / a2;
    out.push_back(b);
  }
  return out;
}

// Smallest N >= 1 with (1+c)^{F_{N-1}} + c < 0, where F_0 = 1, F_1 = 2,
// F_{k+1} = F_k + F_{k-1}.  Compared in log space (F ln(1+c) < ln(-c)) so
// the borderline c = -1/2, where (1+c)^{F_0} + c is exactly zero, lands on
// the correct side.
inline int fib_escape_index(double c) {
  if (!(c > -1.0 && c < 0.0)) {
    throw std::domain_error("fib_escape_index requires -1 < c < 0");
  }
  const double l1 = std::log1p(c);
  const double l2 = std::log(-c);
  double fkm1 = 1.0, fk = 2.0;
  for (int n = 1; n <= 100000; ++n) {
    if (fkm1 * l1 < l2) return n;
    const double next = fkm1 + fk;
    fkm1 = fk;
    fk = next;
  }
  throw std::runtime_error("fib_escape_index did not terminate");
}

} // namespace fibjulia
