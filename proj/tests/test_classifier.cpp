#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fibjulia/classifier.hpp"

using namespace fibjulia;

namespace {

// Bisect along the vertical segment x = sx, y in [y_inside, y_outside],
// where the inside end classifies as AttractingBasin and the outside end
// as Escaping.  The separating point lies on a stable manifold.
double bisect_boundary(double sx, double y_inside, double y_outside, double c) {
  ForwardVerdict vin = classify_forward({sx, y_inside}, c);
  ForwardVerdict vout = classify_forward({sx, y_outside}, c);
  REQUIRE(vin.cls == ForwardClass::AttractingBasin);
  REQUIRE(vout.cls == ForwardClass::Escaping);
  for (int i = 0; i < 100; ++i) {
    const double mid = y_inside + (y_outside - y_inside) / 2.0;
    const ForwardVerdict vm = classify_forward({sx, mid}, c);
    if (vm.cls == ForwardClass::AttractingBasin) {
      y_inside = mid;
    } else if (vm.cls == ForwardClass::Escaping) {
      y_outside = mid;
    } else {
      break;  // already on the numerical boundary
    }
  }
  return y_inside + (y_outside - y_inside) / 2.0;
}

// Row-major 2x2 helpers, duplicated here so the eigenvector setup below does
// not lean on library internals.
struct M2 {
  double a, b, c, d;
};

M2 jac(const Point& z) { return {z.y, z.x, 1.0, 0.0}; }

M2 mul(const M2& m, const M2& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
          m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

// K^- meets L only along the unstable arc of theta, so backward-convergence
// tests need points of that arc, not generic L points.  A displacement along
// the unstable eigendirection is pushed forward: f contracts transverse
// errors while spreading the arc parameter, so iterates track the manifold to
// rounding accuracy.  Iterates are kept while their theta-distance lies in
// [lo, hi], they stay in int(L), and their norm is at most 10.
std::vector<Point> theta_unstable_arc(double c, double lo, double hi,
                                      int count, std::mt19937& rng) {
  const FixedPoints fp = fixed_points(c);
  const double lam = stability(c, FixedTarget::Theta).lambda1.real();
  const double nrm = std::hypot(lam, 1.0);
  const Point v{lam / nrm, 1.0 / nrm};  // (lam, 1) spans the lam eigenspace
  std::uniform_real_distribution<double> logd(std::log(1e-9), std::log(1e-8));
  std::vector<Point> pts;
  while (static_cast<int>(pts.size()) < count) {
    const double d = std::exp(logd(rng));
    Point z{fp.theta.x + d * v.x, fp.theta.y + d * v.y};
    for (int k = 0; k < 100 && dist_inf(z, fp.theta) < hi; ++k) {
      if (dist_inf(z, fp.theta) >= lo && z.x > fp.a2 && z.y > fp.a2 &&
          norm_inf(z) <= 10.0 && static_cast<int>(pts.size()) < count) {
        pts.push_back(z);
      }
      z = apply(z, c);
    }
  }
  return pts;
}

// Same construction for the unstable arc of the 3-cycle at p, on the branch
// entering N.  Transverse errors grow by 1/|lambda2| ~ 5.8 per backward
// period here, so only points seeded within ~1e-8 of p pull back below the
// candidate threshold before rounding noise is amplified past it; the arc
// band is chosen accordingly.
std::vector<Point> cycle_unstable_arc(double c, double lo, double hi,
                                      int count, std::mt19937& rng) {
  const ThreeCycle cyc = three_cycle(c);
  const M2 m = mul(jac(cyc.ffp), mul(jac(cyc.fp), jac(cyc.p)));
  const double lam = stability(c, FixedTarget::Cycle).lambda1.real();
  Point v{lam - m.d, m.c};  // second row of (m - lam I) v = 0
  const double nrm = std::hypot(v.x, v.y);
  v = {v.x / nrm, v.y / nrm};
  if (v.x > 0.0) v = {-v.x, -v.y};
  REQUIRE(v.y < 0.0);  // both components negative: the arc points into N
  std::uniform_real_distribution<double> logd(std::log(1e-10),
                                              std::log(3e-10));
  std::vector<Point> pts;
  while (static_cast<int>(pts.size()) < count) {
    const double d = std::exp(logd(rng));
    Point z{cyc.p.x + d * v.x, cyc.p.y + d * v.y};
    for (int k = 0; k < 40 && dist_inf(z, cyc.p) < hi; ++k) {
      if (dist_inf(z, cyc.p) >= lo && z.x < -1.0 && z.y < -1.0 &&
          static_cast<int>(pts.size()) < count) {
        pts.push_back(z);
      }
      z = apply(apply(apply(z, c), c), c);
    }
  }
  return pts;
}

} // namespace

TEST_CASE("exact hits resolve immediately") {
  const double c = -0.5;
  const FixedPoints fp = fixed_points(c);
  const ThreeCycle cyc = three_cycle(c);

  const ForwardVerdict vt = classify_forward(fp.theta, c);
  CHECK(vt.cls == ForwardClass::FixedTheta);
  CHECK(vt.iterations == 0);
  CHECK(vt.stop == StopReason::ExactFixedPoint);
  CHECK(vt.certified_regime);

  CHECK(classify_forward(fp.alpha, c).cls == ForwardClass::FixedAlpha);
  CHECK(classify_forward(cyc.p, c).cls == ForwardClass::ThreeCycleMember);
  CHECK(classify_forward(cyc.fp, c).cls == ForwardClass::ThreeCycleMember);
  CHECK(classify_forward(cyc.ffp, c).stop == StopReason::ExactCycle);
}

TEST_CASE("trap square and escape region fire on entry") {
  const double c = -0.5;

  const ForwardVerdict vy = classify_forward({-0.2, -0.2}, c);
  CHECK(vy.cls == ForwardClass::AttractingBasin);
  CHECK(vy.iterations == 0);
  CHECK(vy.stop == StopReason::EnteredTrap);

  const ForwardVerdict ve = classify_forward({2.0, 2.0}, c);
  CHECK(ve.cls == ForwardClass::Escaping);
  CHECK(ve.iterations == 0);
  CHECK(ve.stop == StopReason::EnteredEscapeRegion);

  // Inside A the escape rule must not fire at step zero.
  const ForwardVerdict va = classify_forward({1.0, fixed_points(c).a2}, c);
  CHECK(va.cls == ForwardClass::AttractingBasin);
  CHECK(va.iterations <= 10);
}

TEST_CASE("raw radius bailout outside the certified regime") {
  ClassifyOptions opt;
  opt.escape_radius = 10.0;
  const ForwardVerdict v = classify_forward({20.0, 0.3}, 0.1, opt);
  CHECK(v.cls == ForwardClass::Escaping);
  CHECK(v.stop == StopReason::EscapeRadius);
  CHECK_FALSE(v.certified_regime);
}

TEST_CASE("uncertified attracting fixed point") {
  // For 0 < c < 1/4 alpha attracts; the orbit lands on it to within the
  // exact tolerance and the verdict is marked uncertified.
  const ForwardVerdict v = classify_forward({0.05, 0.05}, 0.1);
  CHECK(v.cls == ForwardClass::FixedAlpha);
  CHECK_FALSE(v.certified_regime);
}

TEST_CASE("the R regions drain into the basin") {
  std::mt19937 rng(908);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double c : {-0.3, -0.5, -0.8}) {
    const double opc = 1.0 + c;
    const ThreeCycle cyc = three_cycle(c);
    int count = 0;
    while (count < 500) {
      // Uniform over R1 | R2 | R3 via their bounding boxes.
      const int pick = static_cast<int>(unit(rng) * 3.0);
      Point z{};
      if (pick == 0) {
        z = {-unit(rng), unit(rng) * opc};
      } else if (pick == 1) {
        z = {-unit(rng), -unit(rng)};
      } else {
        z = {unit(rng) * opc, -unit(rng)};
      }
      if (std::min({dist_inf(z, cyc.p), dist_inf(z, cyc.fp),
                    dist_inf(z, cyc.ffp)}) < 1e-6) {
        continue;
      }
      ++count;
      ClassifyOptions opt;
      opt.max_iter = 400;
      const ForwardVerdict v = classify_forward(z, c, opt);
      CAPTURE(c, z.x, z.y);
      REQUIRE(v.cls == ForwardClass::AttractingBasin);
    }
  }
}

TEST_CASE("theta stable candidate via bisection") {
  const double c = -0.5;
  const double a2 = fixed_points(c).a2;
  const double ystar = bisect_boundary(1.0, a2, 6.0, c);
  ClassifyOptions opt;
  opt.max_iter = 30;
  const ForwardVerdict v = classify_forward({1.0, ystar}, c, opt);
  CHECK(v.cls == ForwardClass::ThetaStableCandidate);
  CHECK(v.stop == StopReason::MaxIterations);
}

TEST_CASE("cycle stable candidate via bisection") {
  const double c = -0.5;
  const double ystar = bisect_boundary(-0.5, -1.01, -3.0, c);
  ClassifyOptions opt;
  opt.max_iter = 40;
  const ForwardVerdict v = classify_forward({-0.5, ystar}, c, opt);
  CHECK(v.cls == ForwardClass::CycleStableCandidate);

  SECTION("itinerary mode agrees on the same point") {
    ClassifyOptions it = opt;
    it.cycle_mode = CycleMode::Itinerary;
    CHECK(classify_forward({-0.5, ystar}, c, it).cls ==
          ForwardClass::CycleStableCandidate);
  }
}

TEST_CASE("undecided when the budget is too small") {
  ClassifyOptions opt;
  opt.max_iter = 2;
  const ForwardVerdict v = classify_forward({-0.9, -0.9}, -0.5, opt);
  CHECK(v.cls == ForwardClass::Undecided);
  CHECK(v.iterations == 2);
  CHECK(v.stop == StopReason::MaxIterations);
}

TEST_CASE("backward classification") {
  const double c = -0.5;
  const FixedPoints fp = fixed_points(c);

  SECTION("alpha is its own preimage") {
    const BackwardVerdict v = classify_backward(fp.alpha, c);
    CHECK(v.cls == BackwardClass::FixedAlpha);
    CHECK(v.iterations == 0);
  }

  SECTION("exact theta and cycle resolve immediately") {
    CHECK(classify_backward(fp.theta, c).cls ==
          BackwardClass::ThetaUnstableCandidate);
    CHECK(classify_backward(three_cycle(c).fp, c).cls ==
          BackwardClass::CycleUnstableCandidate);
  }

  SECTION("the unstable arc in L pulls back to theta") {
    std::mt19937 rng(1414);
    ClassifyOptions opt;
    opt.max_iter = 33;
    for (const Point& z : theta_unstable_arc(c, 0.02, 3.0, 200, rng)) {
      const BackwardVerdict v = classify_backward(z, c, opt);
      CAPTURE(z.x, z.y);
      REQUIRE(v.cls == BackwardClass::ThetaUnstableCandidate);
    }
  }

  SECTION("generic interior points of L escape backward") {
    // Only the wedge x >= a2 y + c pulls back into L; a uniform point exits
    // into H2 within a few steps and the A <-> H2 alternation then blows up.
    // L meets K^- along the unstable arc alone.
    std::mt19937 rng(1414);
    std::uniform_real_distribution<double> coord(fp.a2 + 0.01, 10.0);
    for (int i = 0; i < 300; ++i) {
      const Point z{coord(rng), coord(rng)};
      const BackwardVerdict v = classify_backward(z, c);
      CAPTURE(z.x, z.y);
      REQUIRE(v.cls == BackwardClass::BackwardEscaping);
    }
  }

  SECTION("the unstable arc in N pulls back to the cycle") {
    std::mt19937 rng(1515);
    ClassifyOptions opt;
    opt.max_iter = 15;
    for (const Point& z : cycle_unstable_arc(c, 1e-9, 2e-8, 150, rng)) {
      const BackwardVerdict v = classify_backward(z, c, opt);
      CAPTURE(z.x, z.y);
      REQUIRE(v.cls == BackwardClass::CycleUnstableCandidate);
    }
  }

  SECTION("generic points of N escape backward") {
    std::mt19937 rng(1515);
    std::uniform_real_distribution<double> off(0.01, 1.0);
    for (int i = 0; i < 300; ++i) {
      const Point z{-1.0 - off(rng), -1.0 - off(rng)};
      const BackwardVerdict v = classify_backward(z, c);
      CAPTURE(z.x, z.y);
      REQUIRE(v.cls == BackwardClass::BackwardEscaping);
    }
  }

  SECTION("A-points escape backward") {
    std::mt19937 rng(1616);
    std::uniform_real_distribution<double> ux(0.01, fp.a2 - 0.01);
    std::uniform_real_distribution<double> uy(fp.a2 + 0.01, 5.0);
    for (int i = 0; i < 300; ++i) {
      const BackwardVerdict v = classify_backward({ux(rng), uy(rng)}, c);
      CAPTURE(v.iterations);
      REQUIRE(v.cls == BackwardClass::BackwardEscaping);
    }
  }

  SECTION("the critical line stops the pullback") {
    const BackwardVerdict v = classify_backward({0.7, 0.0}, c);
    CHECK(v.cls == BackwardClass::PreimageFailure);
    CHECK(v.iterations == 1);
    CHECK(v.stop == StopReason::PreimageUndefined);
  }
}

TEST_CASE("orbit records") {
  const double c = -0.5;

  SECTION("forward dyadic steps") {
    const OrbitRecord rec = orbit({-0.5, 0.0}, c, 3, Direction::Forward);
    REQUIRE(rec.points.size() == 4);
    CHECK(rec.stop == StopReason::Completed);
    CHECK(rec.points[1].x == -0.5);
    CHECK(rec.points[1].y == -0.5);
    CHECK(rec.points[2].x == -0.25);
    CHECK(rec.points[2].y == -0.5);
    CHECK(rec.points[3].x == -0.375);
    CHECK(rec.points[3].y == -0.25);
  }

  SECTION("backward stops on the critical line") {
    const OrbitRecord rec = orbit({-0.5, 0.0}, c, 3, Direction::Backward);
    REQUIRE(rec.points.size() == 1);
    CHECK(rec.stop == StopReason::PreimageUndefined);
  }

  SECTION("region tracing") {
    const OrbitRecord rec = orbit({0.0, 0.0}, c, 5, Direction::Forward, true);
    REQUIRE(rec.regions.size() == rec.points.size());
    using R = RegionId;
    CHECK(rec.regions[0] ==
          std::vector<R>{R::R0, R::R1, R::R2, R::R3, R::Y, R::QS});
  }

  SECTION("forward and backward compose to the identity") {
    std::mt19937 rng(2020);
    std::uniform_real_distribution<double> u(-0.45, -0.05);
    for (int i = 0; i < 200; ++i) {
      const Point z{u(rng), u(rng)};
      const OrbitRecord fwd = orbit(z, c, 20, Direction::Forward);
      REQUIRE(fwd.stop == StopReason::Completed);
      const OrbitRecord back =
          orbit(fwd.points.back(), c, 20, Direction::Backward);
      REQUIRE(back.stop == StopReason::Completed);
      CHECK(dist_inf(back.points.back(), z) <= 1e-6);
    }
  }
}

TEST_CASE("return times") {
  // c = -3/4 makes a1 = -1/2 exactly, so alpha is bit-exact fixed and
  // returns to QR at every step.
  const double c = -0.75;
  const Point alpha = fixed_points(c).alpha;
  CHECK(return_times(alpha, c, RegionId::QR, 5) ==
        std::vector<int>{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(return_times({5.0, 5.0}, c, RegionId::QR, 3), NotInRegion);
}

TEST_CASE("return envelope") {
  SECTION("alpha itself violates the gap rule") {
    // f(alpha) = alpha never leaves QR, so its first "return" has gap 1;
    // the lemma speaks about the complement of the x = a1 edge.
    const double c = -0.75;
    const EnvelopeResult res = envelope_check(fixed_points(c).alpha, c, 3);
    CHECK_FALSE(res.ok);
    CHECK(res.first_violation == 1);
  }

  SECTION("sampled Z0 points obey gaps and shrinking boxes") {
    std::mt19937 rng(555);
    std::uniform_real_distribution<double> unit(0.001, 0.999);
    for (double c : {-0.8, -0.9}) {
      const auto boxes = catalog(c);
      const RegionBox& z0 = boxes[static_cast<int>(RegionId::Z0)];
      for (int i = 0; i < 200; ++i) {
        const Point z{z0.x.lo + unit(rng) * (z0.x.hi - z0.x.lo),
                      z0.y.lo + unit(rng) * (z0.y.hi - z0.y.lo)};
        const EnvelopeResult res = envelope_check(z, c, 10);
        CAPTURE(c, z.x, z.y, res.first_violation);
        REQUIRE(res.ok);
        REQUIRE(res.gaps.size() == 10);
        for (int g : res.gaps) {
          CHECK(g >= 2);
          CHECK(g <= 4);
        }
      }
    }
  }

  SECTION("starting outside Z0 is an error") {
    CHECK_THROWS_AS(envelope_check({5.0, 5.0}, -0.8, 3), NotInRegion);
  }
}
