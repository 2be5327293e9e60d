#pragma once

// Orbit classification for both directions of f(x, y) = (xy + c, x).
//
// Forward verdicts follow a strict rule order per iterate: exact hits on
// the fixed points or the 3-cycle, then entry into the trap square Y
// (certified basin), then entry into the escape union
// S' = L | M | N | P away from theta and the cycle (certified divergence),
// then a raw radius bailout.  Orbits that exhaust the budget can still be
// tagged as stable-manifold candidates: theta candidates stay in A | H2
// with even-step distances to theta non-increasing, cycle candidates close
// in on the 3-cycle metrically (or, optionally, by walking the six-region
// itinerary F C E G B D).
//
// The "certified" claims (Y traps, S' escapes) are theorems only for
// -1 < c < 0; outside that range those rules are disabled and verdicts are
// marked uncertified.
//
// Candidate tags are numerically honest: a saddle's stable set can be
// shadowed in doubles for a few dozen steps only, so candidate runs use
// small iteration budgets.  With the default 5000 the tags effectively
// apply to exact points and trap/escape verdicts.

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "fibjulia/core.hpp"
#include "fibjulia/regions.hpp"

namespace fibjulia {

enum class Direction { Forward, Backward };

enum class ForwardClass {
  FixedAlpha,
  FixedTheta,
  ThreeCycleMember,
  AttractingBasin,
  ThetaStableCandidate,
  CycleStableCandidate,
  Escaping,
  Undecided,
};

enum class BackwardClass {
  FixedAlpha,
  ThetaUnstableCandidate,
  CycleUnstableCandidate,
  BackwardEscaping,
  PreimageFailure,
  Undecided,
};

enum class StopReason {
  Completed,
  ExactFixedPoint,
  ExactCycle,
  EnteredTrap,
  EnteredEscapeRegion,
  EscapeRadius,
  Overflow,
  PreimageUndefined,
  MaxIterations,
  Converged,
};

inline const char* to_string(ForwardClass v) {
  switch (v) {
    case ForwardClass::FixedAlpha: return "FixedAlpha";
    case ForwardClass::FixedTheta: return "FixedTheta";
    case ForwardClass::ThreeCycleMember: return "ThreeCycleMember";
    case ForwardClass::AttractingBasin: return "AttractingBasin";
    case ForwardClass::ThetaStableCandidate: return "ThetaStableCandidate";
    case ForwardClass::CycleStableCandidate: return "CycleStableCandidate";
    case ForwardClass::Escaping: return "Escaping";
    case ForwardClass::Undecided: return "Undecided";
  }
  return "?";
}

inline const char* to_string(BackwardClass v) {
  switch (v) {
    case BackwardClass::FixedAlpha: return "FixedAlpha";
    case BackwardClass::ThetaUnstableCandidate: return "ThetaUnstableCandidate";
    case BackwardClass::CycleUnstableCandidate: return "CycleUnstableCandidate";
    case BackwardClass::BackwardEscaping: return "BackwardEscaping";
    case BackwardClass::PreimageFailure: return "PreimageFailure";
    case BackwardClass::Undecided: return "Undecided";
  }
  return "?";
}

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::Completed: return "Completed";
    case StopReason::ExactFixedPoint: return "ExactFixedPoint";
    case StopReason::ExactCycle: return "ExactCycle";
    case StopReason::EnteredTrap: return "EnteredTrap";
    case StopReason::EnteredEscapeRegion: return "EnteredEscapeRegion";
    case StopReason::EscapeRadius: return "EscapeRadius";
    case StopReason::Overflow: return "Overflow";
    case StopReason::PreimageUndefined: return "PreimageUndefined";
    case StopReason::MaxIterations: return "MaxIterations";
    case StopReason::Converged: return "Converged";
  }
  return "?";
}

enum class CycleMode { Metric, Itinerary };

struct ClassifyOptions {
  int max_iter = 5000;
  double tol = 1e-9;           // candidate threshold and exclusion-ball radius
  double exact_tol = 1e-13;    // exact-hit threshold (inf norm)
  double escape_radius = 1e6;
  CycleMode cycle_mode = CycleMode::Metric;
};

struct ForwardVerdict {
  ForwardClass cls = ForwardClass::Undecided;
  int iterations = 0;
  StopReason stop = StopReason::MaxIterations;
  bool certified_regime = false;
};

struct BackwardVerdict {
  BackwardClass cls = BackwardClass::Undecided;
  int iterations = 0;
  StopReason stop = StopReason::MaxIterations;
  bool certified_regime = false;
};

namespace detail {

inline bool finite(const Point& z) {
  return std::isfinite(z.x) && std::isfinite(z.y);
}

// Non-increasing along stride-w subsequences over the final window, with
// relative slack for rounding.
inline bool tail_monotone(const std::vector<double>& d, int window, int w) {
  const int n = static_cast<int>(d.size());
  for (int k = std::max(w, n - window); k < n; ++k) {
    if (d[k] > d[k - w] * (1.0 + 1e-9) + 1e-15) return false;
  }
  return true;
}

} // namespace detail

inline ForwardVerdict classify_forward(Point z, double c,
                                       const ClassifyOptions& opt = {}) {
  const bool certified = c > -1.0 && c < 0.0;
  const bool real_fp = c <= 0.25;
  const FixedPoints fp = real_fp ? fixed_points(c) : FixedPoints{};
  const ThreeCycle cyc = three_cycle(c);
  const double opc = 1.0 + c;

  const auto in_sprime = [&](const Point& p) {
    return (p.x >= fp.a2 && p.y >= fp.a2) || (p.x <= -1.0 && p.y >= opc) ||
           (p.x <= -1.0 && p.y <= -1.0) || (p.x >= opc && p.y <= -1.0);
  };
  const auto in_y = [&](const Point& p) {
    return p.x >= c && p.x <= 0.0 && p.y >= c && p.y <= 0.0;
  };
  const auto in_ah2 = [&](const Point& p) {
    return (p.x >= 0.0 && p.x <= fp.a2 && p.y >= fp.a2) ||
           (p.x >= fp.a2 && p.y >= 0.0 && p.y <= fp.a2);
  };
  const auto d_cycle = [&](const Point& p) {
    return std::min({dist_inf(p, cyc.p), dist_inf(p, cyc.fp),
                     dist_inf(p, cyc.ffp)});
  };

  std::vector<double> dcyc;
  dcyc.reserve(static_cast<size_t>(opt.max_iter) + 1);
  std::vector<Point> tail_pts;  // last 13 iterates, for the itinerary mode
  bool all_ah2 = true;
  bool theta_mono = true;
  double prev_even = std::numeric_limits<double>::infinity();

  for (int k = 0;; ++k) {
    if (!detail::finite(z)) {
      return {ForwardClass::Escaping, k, StopReason::Overflow, certified};
    }
    if (real_fp) {
      if (dist_inf(z, fp.alpha) <= opt.exact_tol) {
        return {ForwardClass::FixedAlpha, k, StopReason::ExactFixedPoint,
                certified};
      }
      if (dist_inf(z, fp.theta) <= opt.exact_tol) {
        return {ForwardClass::FixedTheta, k, StopReason::ExactFixedPoint,
                certified};
      }
    }
    if (d_cycle(z) <= opt.exact_tol) {
      return {ForwardClass::ThreeCycleMember, k, StopReason::ExactCycle,
              certified};
    }
    if (certified && in_y(z)) {
      return {ForwardClass::AttractingBasin, k, StopReason::EnteredTrap,
              certified};
    }
    if (certified && in_sprime(z) && dist_inf(z, fp.theta) > opt.tol &&
        d_cycle(z) > opt.tol) {
      return {ForwardClass::Escaping, k, StopReason::EnteredEscapeRegion,
              certified};
    }
    if (norm_inf(z) > opt.escape_radius) {
      return {ForwardClass::Escaping, k, StopReason::EscapeRadius, certified};
    }
    if (k == opt.max_iter) break;

    if (real_fp) {
      all_ah2 = all_ah2 && in_ah2(z);
      if (k % 2 == 0) {
        const double d = dist_inf(z, fp.theta);
        if (d > prev_even * (1.0 + 1e-9) + 1e-14) theta_mono = false;
        prev_even = d;
      }
    } else {
      all_ah2 = false;
    }
    dcyc.push_back(d_cycle(z));
    tail_pts.push_back(z);
    if (tail_pts.size() > 13) tail_pts.erase(tail_pts.begin());
    z = apply(z, c);
  }

  if (certified && real_fp && all_ah2 && theta_mono) {
    return {ForwardClass::ThetaStableCandidate, opt.max_iter,
            StopReason::MaxIterations, certified};
  }

  const auto cycle_metric_ok = [&] {
    const int n = static_cast<int>(dcyc.size());
    if (n < 16) return false;
    const double tail_min = std::min({dcyc[n - 1], dcyc[n - 2], dcyc[n - 3]});
    if (tail_min >= opt.tol) return false;
    return detail::tail_monotone(dcyc, std::max(10, opt.max_iter / 10), 3);
  };
  const auto cycle_itinerary_ok = [&] {
    if (tail_pts.size() < 13) return false;
    const auto boxes = catalog(c);
    using R = RegionId;
    static constexpr std::array<R, 6> walk = {R::F, R::C, R::E,
                                              R::G, R::B, R::D};
    for (int rot = 0; rot < 6; ++rot) {
      bool ok = true;
      for (int i = 0; i < 12 && ok; ++i) {
        const R want = walk[(rot + i) % 6];
        ok = boxes[static_cast<int>(want)].contains(tail_pts[i]);
      }
      if (ok) return true;
    }
    return false;
  };

  if (certified && cycle_metric_ok() &&
      (opt.cycle_mode == CycleMode::Metric || cycle_itinerary_ok())) {
    return {ForwardClass::CycleStableCandidate, opt.max_iter,
            StopReason::MaxIterations, certified};
  }
  return {ForwardClass::Undecided, opt.max_iter, StopReason::MaxIterations,
          certified};
}

inline BackwardVerdict classify_backward(Point z, double c,
                                         const ClassifyOptions& opt = {}) {
  const bool certified = c > -1.0 && c < 0.0;
  const bool real_fp = c <= 0.25;
  const FixedPoints fp = real_fp ? fixed_points(c) : FixedPoints{};
  const ThreeCycle cyc = three_cycle(c);
  const auto d_cycle = [&](const Point& p) {
    return std::min({dist_inf(p, cyc.p), dist_inf(p, cyc.fp),
                     dist_inf(p, cyc.ffp)});
  };

  std::vector<double> dth, dcy;
  dth.reserve(static_cast<size_t>(opt.max_iter) + 1);
  dcy.reserve(static_cast<size_t>(opt.max_iter) + 1);

  for (int n = 0;; ++n) {
    if (!detail::finite(z)) {
      return {BackwardClass::BackwardEscaping, n, StopReason::Overflow,
              certified};
    }
    if (real_fp && dist_inf(z, fp.alpha) <= opt.exact_tol) {
      return {BackwardClass::FixedAlpha, n, StopReason::ExactFixedPoint,
              certified};
    }
    if (real_fp && dist_inf(z, fp.theta) <= opt.exact_tol) {
      return {BackwardClass::ThetaUnstableCandidate, n, StopReason::Converged,
              certified};
    }
    if (d_cycle(z) <= opt.exact_tol) {
      return {BackwardClass::CycleUnstableCandidate, n, StopReason::Converged,
              certified};
    }
    if (norm_inf(z) > opt.escape_radius) {
      return {BackwardClass::BackwardEscaping, n, StopReason::EscapeRadius,
              certified};
    }
    if (n == opt.max_iter) break;

    if (real_fp) dth.push_back(dist_inf(z, fp.theta));
    dcy.push_back(d_cycle(z));
    const InverseResult inv = apply_inverse(z, c);
    if (!inv.ok()) {
      return {BackwardClass::PreimageFailure, n + 1,
              StopReason::PreimageUndefined, certified};
    }
    z = inv.value;
  }

  const int window = std::max(10, opt.max_iter / 10);
  if (real_fp && !dth.empty() && dth.back() < opt.tol &&
      detail::tail_monotone(dth, window, 1)) {
    return {BackwardClass::ThetaUnstableCandidate, opt.max_iter,
            StopReason::MaxIterations, certified};
  }
  if (!dcy.empty()) {
    const int n = static_cast<int>(dcy.size());
    const double tail_min =
        n >= 3 ? std::min({dcy[n - 1], dcy[n - 2], dcy[n - 3]}) : dcy.back();
    if (tail_min < opt.tol && detail::tail_monotone(dcy, window, 3)) {
      return {BackwardClass::CycleUnstableCandidate, opt.max_iter,
              StopReason::MaxIterations, certified};
    }
  }
  return {BackwardClass::Undecided, opt.max_iter, StopReason::MaxIterations,
          certified};
}

struct OrbitRecord {
  std::vector<Point> points;                   // z_0 .. z_k, all finite
  std::vector<std::vector<RegionId>> regions;  // parallel to points if traced
  StopReason stop = StopReason::Completed;
};

inline OrbitRecord orbit(Point z, double c, int steps, Direction dir,
                         bool trace_regions = false) {
  OrbitRecord rec;
  rec.points.reserve(static_cast<size_t>(steps) + 1);
  rec.points.push_back(z);
  for (int k = 0; k < steps; ++k) {
    if (dir == Direction::Forward) {
      z = apply(z, c);
    } else {
      const InverseResult inv = apply_inverse(z, c);
      if (!inv.ok()) {
        rec.stop = StopReason::PreimageUndefined;
        break;
      }
      z = inv.value;
    }
    if (!detail::finite(z)) {
      rec.stop = StopReason::Overflow;
      break;
    }
    rec.points.push_back(z);
  }
  if (trace_regions) {
    rec.regions.reserve(rec.points.size());
    for (const Point& p : rec.points) rec.regions.push_back(region_of(p, c));
  }
  return rec;
}

struct NotInRegion : std::invalid_argument {
  explicit NotInRegion(RegionId id)
      : std::invalid_argument(std::string("point is not in region ") +
                              region_name(id)) {}
};

// Steps n >= 0 at which the forward orbit sits in the closed region,
// starting with n = 0 (the point must start there), up to `count` entries
// or the step budget.
inline std::vector<int> return_times(Point z, double c, RegionId region,
                                     int count, int max_steps = 100000) {
  const auto boxes = catalog(c);
  const RegionBox& box = boxes[static_cast<int>(region)];
  if (!box.contains(z)) throw NotInRegion(region);
  std::vector<int> times{0};
  for (int n = 1; n <= max_steps && static_cast<int>(times.size()) < count;
       ++n) {
    z = apply(z, c);
    if (!detail::finite(z)) break;
    if (box.contains(z)) times.push_back(n);
  }
  return times;
}

struct EnvelopeResult {
  bool ok = true;
  std::vector<int> return_steps;  // absolute step count of each return
  std::vector<int> gaps;          // spacing; the lemma allows {2, 3, 4}
  int first_violation = -1;       // 1-based return index, -1 if clean
};

// Orbits starting in Z0 leave QR immediately (the image's second
// coordinate rises above a1 unless x = a1 exactly) and return within two
// to four steps, landing in boxes that shrink geometrically towards alpha:
// the i-th return lies in [a1, a1 + |c|^i |a1|^3] x [a1 - |c|^i |a1|^3, a1].
inline EnvelopeResult envelope_check(Point z, double c, int returns,
                                     double tol = 1e-12) {
  const auto boxes = catalog(c);
  if (!boxes[static_cast<int>(RegionId::Z0)].contains(z)) {
    throw NotInRegion(RegionId::Z0);
  }
  const RegionBox& qr = boxes[static_cast<int>(RegionId::QR)];
  const FixedPoints fp = fixed_points(c);
  const double q = -c;
  double hw = -fp.a1 * fp.a1 * fp.a1;  // |a1|^3
  EnvelopeResult res;
  int step = 0, last = 0;
  for (int i = 1; i <= returns; ++i) {
    bool found = false;
    for (int budget = 0; budget < 64; ++budget) {
      z = apply(z, c);
      ++step;
      if (!detail::finite(z)) break;
      if (qr.contains(z)) {
        found = true;
        break;
      }
    }
    if (!found) {
      res.ok = false;
      res.first_violation = i;
      return res;
    }
    const int gap = step - last;
    res.return_steps.push_back(step);
    res.gaps.push_back(gap);
    hw *= q;
    const bool box_ok = z.x >= fp.a1 - tol && z.x <= fp.a1 + hw + tol &&
                        z.y >= fp.a1 - hw - tol && z.y <= fp.a1 + tol;
    if ((gap < 2 || gap > 4 || !box_ok) && res.first_violation < 0) {
      res.ok = false;
      res.first_violation = i;
    }
    last = step;
  }
  return res;
}

} // namespace fibjulia
