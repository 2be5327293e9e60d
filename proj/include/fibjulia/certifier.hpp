#pragma once

// Adaptive-subdivision prover for the region-transition claims: image
// inclusions f(W) ⊆ V1 ∪ ... ∪ Vk and disjointness f(W) ∩ int V = ∅, each
// certified for every c in a parameter interval at once.
//
// The engine quantifies over c pointwise, not as a decoupled box: a single
// parameter a = a1(c) drives every breakpoint (a2 = 1 - a, c = a - a²,
// 1 + c = 1 + a - a²), so region edges are small integer polynomials in a
// and the margin between an image corner and a target edge is again a
// polynomial in a.  Edge-tight inclusions like f(L) ⊆ L, whose margin at the
// corner is a2² + c - a2 = 0 identically, then cancel symbolically, which no
// enclosure of the endpoints over a c-interval of positive width can do.
//
// Leaf test: f is bilinear, so over a parameter sub-rectangle every margin
// is multilinear in the two source parameters; its minimum sits at a corner,
// and each corner is a polynomial in a bounded below rigorously by its
// Bernstein coefficients over the a-interval.  Unbounded sides use a
// monotone tail rule instead of corners: along a ray the margin is
// constant + offset · growth, and certifying growth ≥ 0 reduces the whole
// ray to its truncation boundary.
//
// Boundary semantics: inclusion targets are closed boxes inflated by
// delta = 2^-50, disjointness avoids the interior deflated by delta.
// Boundary contact (the fixed point θ on two region edges, images grazing a
// shared wall) is therefore allowed; genuine crossings still fail.
//
// Bisection: longest physical side first, ties toward x, lo child first,
// depth-first; the first node whose plain interval image at the c-midpoint
// provably misses every target (or sits strictly inside the deflated avoid
// box) becomes the Failed counterexample, so Failed certificates are honest
// by construction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fibjulia/interval.hpp"
#include "fibjulia/polynomial.hpp"
#include "fibjulia/regions.hpp"

namespace fibjulia {

enum class CertStatus { Certified, Failed, DepthExceeded };

inline const char* cert_status_name(CertStatus s) {
  switch (s) {
    case CertStatus::Certified: return "Certified";
    case CertStatus::Failed: return "Failed";
    case CertStatus::DepthExceeded: return "DepthExceeded";
  }
  return "?";
}

struct Certificate {
  std::string claim;
  CertStatus status = CertStatus::DepthExceeded;
  int max_depth_used = 0;
  std::optional<IBox> counterexample;
  Interval c_interval;
};

struct CertifyOptions {
  int max_depth = 24;
  double r_max = 1e4;      // where a still-failing unbounded side is split
  int power = 1;           // certify f^power(source) against the avoid box
  long node_budget = 1L << 20;
};

namespace detail {

inline constexpr double kCertDelta = 0x1p-50;

inline void require_certified_regime(const Interval& c) {
  if (!(c.lo <= c.hi && c.lo > -1.0 && c.hi < 0.0)) {
    throw std::domain_error("certifier requires -1 < c < 0");
  }
}

// Outward reciprocal of an interval with v.lo > 0.
inline Interval recip_pos(const Interval& v) {
  double lo = 1.0 / v.hi;
  double hi = 1.0 / v.lo;
  if (std::fma(lo, v.hi, -1.0) != 0.0) lo = next_down(lo);
  if (std::fma(hi, v.lo, -1.0) != 0.0) hi = next_up(hi);
  return {lo, hi};
}

inline Interval a2_range(const Interval& c) {
  const Interval disc = Interval{1.0, 1.0} - Interval{4.0, 4.0} * c;
  return (Interval{1.0, 1.0} + isqrt(disc)) * 0.5;
}

// Enclosure of a = a1(c) = c / a2(c) over the c-interval.
// a1 = 1 - a2 keeps the enclosure tight: c occurs once in a2_range, so the
// interval evaluation adds only rounding, while c / a2 would decouple the
// two occurrences and balloon the range on wide parameter intervals.
inline Interval a_range(const Interval& c) {
  return Interval{1.0, 1.0} - a2_range(c);
}

// One side of a box: a polynomial in a, or an infinite end.
struct SymEdge {
  PolyA p;
  int inf = 0;  // -1, 0, +1

  static SymEdge finite(PolyA q) { return {std::move(q), 0}; }
  static SymEdge minus_inf() { return {{}, -1}; }
  static SymEdge plus_inf() { return {{}, +1}; }

  friend bool operator==(const SymEdge& a, const SymEdge& b) {
    return a.inf == b.inf && (a.inf != 0 || a.p == b.p);
  }

  double num(double a) const {
    if (inf != 0) return inf * std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (size_t i = p.k.size(); i-- > 0;) acc = acc * a + p.k[i];
    return acc;
  }
  Interval enclose(const Interval& a) const {
    if (inf != 0) {
      const double v = inf * std::numeric_limits<double>::infinity();
      return {v, v};
    }
    return IPolyA(p).eval(a);
  }
};

struct SymBox {
  SymEdge xlo, xhi, ylo, yhi;
};

inline SymBox region_sym(RegionId id) {
  const PolyA mone{-1.0}, zero{};
  const PolyA aP{0.0, 1.0};            // a1
  const PolyA a2P{1.0, -1.0};          // a2 = 1 - a
  const PolyA cP{0.0, 1.0, -1.0};      // c = a - a²
  const PolyA opcP{1.0, 1.0, -1.0};    // 1 + c
  const PolyA q2P{0.0, 1.0, 1.0};      // a1 + |a1|²
  const PolyA q3P{0.0, 1.0, 0.0, -1.0};  // a1 + |a1|³
  const PolyA p3P{0.0, 1.0, 0.0, 1.0};   // a1 - |a1|³
  const auto F = [](const PolyA& p) { return SymEdge::finite(p); };
  const SymEdge ninf = SymEdge::minus_inf(), pinf = SymEdge::plus_inf();

  switch (id) {
    case RegionId::L: return {F(a2P), pinf, F(a2P), pinf};
    case RegionId::M: return {ninf, F(mone), F(opcP), pinf};
    case RegionId::N: return {ninf, F(mone), ninf, F(mone)};
    case RegionId::P: return {F(opcP), pinf, ninf, F(mone)};
    case RegionId::A: return {F(zero), F(a2P), F(a2P), pinf};
    case RegionId::B: return {F(mone), F(zero), F(opcP), pinf};
    case RegionId::C: return {ninf, F(mone), F(zero), F(opcP)};
    case RegionId::D: return {ninf, F(mone), F(mone), F(zero)};
    case RegionId::E: return {F(mone), F(zero), ninf, F(mone)};
    case RegionId::F: return {F(zero), F(opcP), ninf, F(mone)};
    case RegionId::G: return {F(opcP), pinf, F(mone), F(zero)};
    case RegionId::H1: return {F(opcP), F(a2P), F(zero), F(a2P)};
    case RegionId::H2: return {F(a2P), pinf, F(zero), F(a2P)};
    case RegionId::R0: return {F(zero), F(opcP), F(zero), F(a2P)};
    case RegionId::R1: return {F(mone), F(zero), F(zero), F(opcP)};
    case RegionId::R2: return {F(mone), F(zero), F(mone), F(zero)};
    case RegionId::R3: return {F(zero), F(opcP), F(mone), F(zero)};
    case RegionId::Y: return {F(cP), F(zero), F(cP), F(zero)};
    case RegionId::QR: return {F(aP), F(zero), F(cP), F(aP)};
    case RegionId::QS: return {F(aP), F(zero), F(aP), F(zero)};
    case RegionId::QT: return {F(cP), F(aP), F(aP), F(zero)};
    case RegionId::QU: return {F(cP), F(aP), F(cP), F(aP)};
    case RegionId::Z0: return {F(aP), F(q3P), F(p3P), F(aP)};
    case RegionId::Z1: return {F(q2P), F(zero), F(cP), F(aP)};
    case RegionId::Z2: return {F(q3P), F(q2P), F(cP), F(p3P)};
    case RegionId::Z3: return {F(aP), F(q3P), F(cP), F(p3P)};
    case RegionId::Z4: return {F(q3P), F(q2P), F(p3P), F(aP)};
  }
  throw std::invalid_argument("unknown region id");
}

// One axis of the source, anchored at a finite corner: coordinate =
// base + delta * s with s in [0,1] (bounded) or s in [0, inf) (ray, where
// delta is +-1).
struct SourceAxis {
  PolyA base;
  PolyA delta;
  bool ray = false;
};

inline SourceAxis source_axis(const SymEdge& lo, const SymEdge& hi) {
  if (lo.inf == 0 && hi.inf == 0) return {lo.p, hi.p - lo.p, false};
  if (lo.inf == 0) return {lo.p, PolyA{1.0}, true};
  if (hi.inf == 0) return {hi.p, PolyA{-1.0}, true};
  throw std::invalid_argument("source side unbounded in both directions");
}

// A margin multilinear in the source parameters: value = k00 + s k10 +
// t k01 + s t k11 + slack, required >= 0.  The slack carries the delta
// inflation so exact cancellations stay exact in the k-polynomials.
struct Margin {
  PolyA k00, k10, k01, k11;
  double slack = 0.0;
};

// Image polynomials over the parametrized source: img.x = q00 + s q10 +
// t q01 + s t q11,  img.y = p00 + s p10.
struct ImagePolys {
  PolyA q00, q10, q01, q11;
  PolyA p00, p10;
};

inline ImagePolys image_polys(const SourceAxis& ax, const SourceAxis& ay) {
  const PolyA cP{0.0, 1.0, -1.0};
  ImagePolys img;
  img.q00 = ax.base * ay.base + cP;
  img.q10 = ax.delta * ay.base;
  img.q01 = ax.base * ay.delta;
  img.q11 = ax.delta * ay.delta;
  img.p00 = ax.base;
  img.p10 = ax.delta;
  return img;
}

enum class Side { XLo, XHi, YLo, YHi };

// Margin for one box side.  `inside` builds the inclusion margin (image on
// the inner side of the edge), `!inside` the disjointness margin (image on
// the outer side).
inline Margin side_margin(const ImagePolys& img, Side side, const PolyA& edge,
                          bool inside) {
  const bool xcomp = side == Side::XLo || side == Side::XHi;
  const bool wantGe = (side == Side::XLo || side == Side::YLo) == inside;
  const PolyA& m00 = xcomp ? img.q00 : img.p00;
  const PolyA& m10 = xcomp ? img.q10 : img.p10;
  const PolyA m01 = xcomp ? img.q01 : PolyA{};
  const PolyA m11 = xcomp ? img.q11 : PolyA{};
  Margin m;
  if (wantGe) {
    m.k00 = m00 - edge;
    m.k10 = m10;
    m.k01 = m01;
    m.k11 = m11;
  } else {
    m.k00 = edge - m00;
    m.k10 = -m10;
    m.k01 = -m01;
    m.k11 = -m11;
  }
  m.slack = kCertDelta;
  return m;
}

inline IPolyA with_slack(IPolyA p, double slack) {
  if (slack == 0.0) return p;
  if (p.k.empty()) p.k.push_back(Interval{0.0, 0.0});
  p.k[0] = p.k[0] + Interval{slack, slack};
  return p;
}

inline IPolyA margin_corner(const Margin& m, double sv, double tv) {
  IPolyA out(m.k00);
  out = out + Interval::point(sv) * IPolyA(m.k10);
  out = out + Interval::point(tv) * IPolyA(m.k01);
  out = out + (Interval::point(sv) * Interval::point(tv)) * IPolyA(m.k11);
  return out;
}

// Parameter-space node; an infinite hi end marks a ray.
struct PNode {
  Interval s{0.0, 1.0};
  Interval t{0.0, 1.0};
  int depth = 0;
};

inline bool margin_holds(const Margin& m, const PNode& n, const Interval& a) {
  const auto ok = [&](const IPolyA& p) { return poly_lower_bound(p, a) >= 0.0; };
  const auto okc = [&](double sv, double tv) {
    return ok(with_slack(margin_corner(m, sv, tv), m.slack));
  };
  const auto growth_s = [&](double tv) {
    return IPolyA(m.k10) + Interval::point(tv) * IPolyA(m.k11);
  };
  const auto growth_t = [&](double sv) {
    return IPolyA(m.k01) + Interval::point(sv) * IPolyA(m.k11);
  };
  const bool sray = std::isinf(n.s.hi), tray = std::isinf(n.t.hi);
  if (!sray && !tray) {
    return okc(n.s.lo, n.t.lo) && okc(n.s.hi, n.t.lo) && okc(n.s.lo, n.t.hi) &&
           okc(n.s.hi, n.t.hi);
  }
  if (sray && !tray) {
    return okc(n.s.lo, n.t.lo) && okc(n.s.lo, n.t.hi) &&
           ok(growth_s(n.t.lo)) && ok(growth_s(n.t.hi));
  }
  if (!sray && tray) {
    return okc(n.s.lo, n.t.lo) && okc(n.s.hi, n.t.lo) &&
           ok(growth_t(n.s.lo)) && ok(growth_t(n.s.hi));
  }
  return okc(n.s.lo, n.t.lo) && ok(growth_s(n.t.lo)) && ok(growth_t(n.s.lo)) &&
         ok(IPolyA(m.k11));
}

inline bool margins_hold(const std::vector<Margin>& ms, const PNode& n,
                         const Interval& a) {
  for (const Margin& m : ms) {
    if (!margin_holds(m, n, a)) return false;
  }
  return !ms.empty();
}

// Tries to assemble the target union into one rectangle: boxes grouped by
// identical chain-axis range, transverse ranges chained edge to edge inside
// a group (exact polynomial equality), groups chained along the axis, and
// the common transverse window certified by polynomial comparison.  Any
// point of the resulting cover rectangle then lies in some member box, so
// inclusion in the cover implies inclusion in the union.
class CoverBuilder {
 public:
  CoverBuilder(const std::vector<SymBox>& targets, const Interval& a)
      : targets_(targets), a_(a), amid_(a.mid()) {}

  std::optional<SymBox> build() const {
    if (targets_.size() == 1) return targets_.front();
    if (auto r = chain(/*along_x=*/true)) return r;
    return chain(/*along_x=*/false);
  }

 private:
  struct Group {
    SymEdge clo, chi;        // shared chain-axis range
    std::vector<int> members;
  };

  static const SymEdge& pick(const SymBox& b, bool x, bool lo) {
    if (x) return lo ? b.xlo : b.xhi;
    return lo ? b.ylo : b.yhi;
  }

  // cand >= other over the whole a-interval, certified.
  bool ge(const SymEdge& cand, const SymEdge& other) const {
    if (other.inf == -1 || cand.inf == +1) return true;
    if (cand.inf == -1 || other.inf == +1) return false;
    return poly_lower_bound(cand.p - other.p, a_) >= 0.0;
  }

  std::optional<SymBox> chain(bool along_x) const {
    std::vector<Group> groups;
    for (int i = 0; i < static_cast<int>(targets_.size()); ++i) {
      const SymEdge& lo = pick(targets_[i], along_x, true);
      const SymEdge& hi = pick(targets_[i], along_x, false);
      Group* g = nullptr;
      for (Group& cand : groups) {
        if (cand.clo == lo && cand.chi == hi) g = &cand;
      }
      if (g == nullptr) {
        groups.push_back({lo, hi, {}});
        g = &groups.back();
      }
      g->members.push_back(i);
    }

    // Chain each group's members along the transverse axis.
    std::vector<SymEdge> tlos, this_;
    for (Group& g : groups) {
      std::sort(g.members.begin(), g.members.end(), [&](int i, int j) {
        return pick(targets_[i], !along_x, true).num(amid_) <
               pick(targets_[j], !along_x, true).num(amid_);
      });
      for (size_t k = 0; k + 1 < g.members.size(); ++k) {
        if (!(pick(targets_[g.members[k]], !along_x, false) ==
              pick(targets_[g.members[k + 1]], !along_x, true))) {
          return std::nullopt;
        }
      }
      tlos.push_back(pick(targets_[g.members.front()], !along_x, true));
      this_.push_back(pick(targets_[g.members.back()], !along_x, false));
    }

    // Chain the groups along the chain axis.
    std::sort(groups.begin(), groups.end(), [&](const Group& x, const Group& y) {
      return x.clo.num(amid_) < y.clo.num(amid_);
    });
    for (size_t k = 0; k + 1 < groups.size(); ++k) {
      if (!(groups[k].chi == groups[k + 1].clo)) return std::nullopt;
    }

    // Transverse window: certified max of the lo edges, min of the hi edges.
    const auto extremum = [&](const std::vector<SymEdge>& edges, bool is_max) {
      int best = 0;
      for (int i = 1; i < static_cast<int>(edges.size()); ++i) {
        const bool gt = edges[i].num(amid_) > edges[best].num(amid_);
        if (gt == is_max) best = i;
      }
      for (const SymEdge& e : edges) {
        const bool ok = is_max ? ge(edges[best], e) : ge(e, edges[best]);
        if (!ok) return std::optional<SymEdge>{};
      }
      return std::optional<SymEdge>{edges[best]};
    };
    const auto wlo = extremum(tlos, true);
    const auto whi = extremum(this_, false);
    if (!wlo || !whi) return std::nullopt;

    SymBox cover;
    (along_x ? cover.xlo : cover.ylo) = groups.front().clo;
    (along_x ? cover.xhi : cover.yhi) = groups.back().chi;
    (along_x ? cover.ylo : cover.xlo) = *wlo;
    (along_x ? cover.yhi : cover.xhi) = *whi;
    return cover;
  }

  const std::vector<SymBox>& targets_;
  Interval a_;
  double amid_;
};

inline std::vector<Margin> box_margins(const ImagePolys& img, const SymBox& box,
                                       bool inside) {
  std::vector<Margin> ms;
  if (box.xlo.inf == 0) ms.push_back(side_margin(img, Side::XLo, box.xlo.p, inside));
  if (box.xhi.inf == 0) ms.push_back(side_margin(img, Side::XHi, box.xhi.p, inside));
  if (box.ylo.inf == 0) ms.push_back(side_margin(img, Side::YLo, box.ylo.p, inside));
  if (box.yhi.inf == 0) ms.push_back(side_margin(img, Side::YHi, box.yhi.p, inside));
  return ms;
}

struct ClaimGeom {
  bool inclusion = true;
  int power = 1;
  SourceAxis ax, ay;
  std::vector<Margin> cover;                  // inclusion: cover rectangle
  std::vector<std::vector<Margin>> per_target;  // inclusion: single-box fits
  std::vector<SymBox> targets;                // inclusion: for Failed checks
  std::vector<Margin> sides;                  // disjointness: one must hold
  SymBox avoid;                               // disjointness target box
};

inline ClaimGeom inclusion_geom(const SymBox& source,
                                const std::vector<SymBox>& targets,
                                const Interval& a) {
  ClaimGeom g;
  g.inclusion = true;
  g.ax = source_axis(source.xlo, source.xhi);
  g.ay = source_axis(source.ylo, source.yhi);
  const ImagePolys img = image_polys(g.ax, g.ay);
  if (const auto cover = CoverBuilder(targets, a).build()) {
    g.cover = box_margins(img, *cover, true);
  }
  for (const SymBox& t : targets) g.per_target.push_back(box_margins(img, t, true));
  g.targets = targets;
  return g;
}

inline ClaimGeom disjoint_geom(const SymBox& source, const SymBox& avoid,
                               int power) {
  ClaimGeom g;
  g.inclusion = false;
  g.power = power;
  g.ax = source_axis(source.xlo, source.xhi);
  g.ay = source_axis(source.ylo, source.yhi);
  if (power == 1) g.sides = box_margins(image_polys(g.ax, g.ay), avoid, false);
  g.avoid = avoid;
  return g;
}

class Prover {
 public:
  Prover(const ClaimGeom& g, Interval c, const CertifyOptions& opt)
      : g_(g), opt_(opt), c_(c), a_(a_range(c)),
        cmid_(Interval::point(c.mid())), amid_(a_range(cmid_)) {
    if (!g_.inclusion && g_.power > 1) {
      // Decoupled interval bounds are fine here: the power claims carry
      // genuine slack, unlike the edge-tight single-step lemmas.
      avoid_outer_ = eval_box(g_.avoid, a_);
    }
  }

  Certificate run(std::string claim) {
    Certificate cert;
    cert.claim = std::move(claim);
    cert.c_interval = c_;
    cert.status = visit({axis_full(g_.ax), axis_full(g_.ay), 0});
    cert.max_depth_used = max_depth_;
    cert.counterexample = witness_;
    return cert;
  }

 private:
  static Interval axis_full(const SourceAxis& ax) {
    return {0.0, ax.ray ? std::numeric_limits<double>::infinity() : 1.0};
  }

  static IBox eval_box(const SymBox& b, const Interval& a) {
    return {Interval{b.xlo.enclose(a).lo, b.xhi.enclose(a).hi},
            Interval{b.ylo.enclose(a).lo, b.yhi.enclose(a).hi}};
  }

  IBox phys_box(const PNode& n, const Interval& a) const {
    const Interval x =
        IPolyA(g_.ax.base).eval(a) + IPolyA(g_.ax.delta).eval(a) * n.s;
    const Interval y =
        IPolyA(g_.ay.base).eval(a) + IPolyA(g_.ay.delta).eval(a) * n.t;
    return {x, y};
  }

  bool leaf_certified(const PNode& n) const {
    if (g_.inclusion) {
      if (margins_hold(g_.cover, n, a_)) return true;
      for (const auto& ms : g_.per_target) {
        if (margins_hold(ms, n, a_)) return true;
      }
      return false;
    }
    if (g_.power > 1) return power_separated(n);
    for (const Margin& m : g_.sides) {
      if (margin_holds(m, n, a_)) return true;
    }
    return false;
  }

  bool power_separated(const PNode& n) const {
    IBox img = phys_box(n, a_);
    for (int i = 0; i < g_.power; ++i) img = f_image(img, c_);
    const double d = kCertDelta;
    const bool xsep = (g_.avoid.xlo.inf == 0 && img.x.hi <= avoid_outer_.x.lo + d) ||
                      (g_.avoid.xhi.inf == 0 && img.x.lo >= avoid_outer_.x.hi - d);
    const bool ysep = (g_.avoid.ylo.inf == 0 && img.y.hi <= avoid_outer_.y.lo + d) ||
                      (g_.avoid.yhi.inf == 0 && img.y.lo >= avoid_outer_.y.hi - d);
    return xsep || ysep;
  }

  // A node refutes the claim when its plain interval image at the midpoint
  // parameter provably misses every target (inclusion) or sits strictly
  // inside the deflated avoid box (disjointness): every source point in the
  // node is then a genuine counterexample at mid(c).
  bool refuted(const PNode& n) const {
    IBox img = phys_box(n, amid_);
    for (int i = 0; i < (g_.inclusion ? 1 : g_.power); ++i) {
      img = f_image(img, cmid_);
    }
    if (g_.inclusion) {
      for (const SymBox& t : g_.targets) {
        if (img.intersects(eval_box(t, amid_))) return false;
      }
      return true;
    }
    const IBox v = eval_box(g_.avoid, amid_);
    const double d = 2.0 * kCertDelta;
    const bool xin = (g_.avoid.xlo.inf != 0 || img.x.lo > v.x.lo + d) &&
                     (g_.avoid.xhi.inf != 0 || img.x.hi < v.x.hi - d);
    const bool yin = (g_.avoid.ylo.inf != 0 || img.y.lo > v.y.lo + d) &&
                     (g_.avoid.yhi.inf != 0 || img.y.hi < v.y.hi - d);
    return xin && yin;
  }

  CertStatus visit(const PNode& n) {
    max_depth_ = std::max(max_depth_, n.depth);
    if (++nodes_ > opt_.node_budget) return CertStatus::DepthExceeded;
    if (leaf_certified(n)) return CertStatus::Certified;
    if (refuted(n)) {
      witness_ = phys_box(n, amid_);
      return CertStatus::Failed;
    }
    if (n.depth >= opt_.max_depth) return CertStatus::DepthExceeded;

    const double am = amid_.mid();
    const auto len = [&](const SourceAxis& ax, const Interval& span) {
      if (std::isinf(span.hi)) return std::numeric_limits<double>::infinity();
      double d = 0.0;
      for (size_t i = ax.delta.k.size(); i-- > 0;) d = d * am + ax.delta.k[i];
      return std::abs(d) * span.width();
    };
    const bool split_x = len(g_.ax, n.s) >= len(g_.ay, n.t);
    const Interval span = split_x ? n.s : n.t;
    const double cut = std::isinf(span.hi)
                           ? (span.lo == 0.0 ? opt_.r_max : 2.0 * span.lo)
                           : span.lo + (span.hi - span.lo) / 2.0;
    PNode lo = n, hi = n;
    lo.depth = hi.depth = n.depth + 1;
    (split_x ? lo.s : lo.t) = Interval{span.lo, cut};
    (split_x ? hi.s : hi.t) = Interval{cut, span.hi};

    const CertStatus first = visit(lo);
    if (first == CertStatus::Failed) return first;
    const CertStatus second = visit(hi);
    if (second == CertStatus::Failed) return second;
    if (first == CertStatus::DepthExceeded || second == CertStatus::DepthExceeded) {
      return CertStatus::DepthExceeded;
    }
    return CertStatus::Certified;
  }

  const ClaimGeom& g_;
  CertifyOptions opt_;
  Interval c_, a_, cmid_, amid_;
  IBox avoid_outer_{};
  long nodes_ = 0;
  int max_depth_ = 0;
  std::optional<IBox> witness_;
};

inline Certificate run_inclusion(const SymBox& source,
                                 const std::vector<SymBox>& targets,
                                 std::string claim, Interval c,
                                 const CertifyOptions& opt) {
  const ClaimGeom g = inclusion_geom(source, targets, a_range(c));
  return Prover(g, c, opt).run(std::move(claim));
}

inline Certificate run_disjoint(const SymBox& source, const SymBox& avoid,
                                std::string claim, Interval c,
                                const CertifyOptions& opt) {
  const ClaimGeom g = disjoint_geom(source, avoid, opt.power);
  return Prover(g, c, opt).run(std::move(claim));
}

inline std::string join_names(const std::vector<RegionId>& ids) {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += "|";
    out += region_name(ids[i]);
  }
  return out;
}

} // namespace detail

inline Certificate certify_inclusion(RegionId source,
                                     const std::vector<RegionId>& targets,
                                     Interval c, CertifyOptions opt = {}) {
  detail::require_certified_regime(c);
  if (targets.empty()) throw std::invalid_argument("empty target set");
  std::vector<detail::SymBox> boxes;
  for (RegionId t : targets) boxes.push_back(detail::region_sym(t));
  const std::string claim = std::string("f(") + region_name(source) + ") in " +
                            detail::join_names(targets);
  return detail::run_inclusion(detail::region_sym(source), boxes, claim, c, opt);
}

inline Certificate certify_disjoint(RegionId source, RegionId avoid, Interval c,
                                    CertifyOptions opt = {}) {
  detail::require_certified_regime(c);
  if (opt.power < 1) throw std::invalid_argument("power must be >= 1");
  std::string claim = "f(";
  if (opt.power > 1) {
    claim = "f^" + std::to_string(opt.power) + "(";
  }
  claim += std::string(region_name(source)) + ") misses " + region_name(avoid);
  return detail::run_disjoint(detail::region_sym(source),
                              detail::region_sym(avoid), claim, c, opt);
}

// Certifies the full transition corpus: the forward table rows (including
// the Y trap), the seventeen inverse rows as disjointness families over the
// plane partition, the R2-to-R3 wall, and the corner-square entry wall.
inline std::vector<Certificate> certify_suite(Interval c,
                                              CertifyOptions opt = {}) {
  detail::require_certified_regime(c);
  opt.power = 1;  // the suite's claims are all single-step
  using R = RegionId;
  std::vector<Certificate> out;

  static constexpr R forward_order[] = {
      R::L,  R::M,  R::N,  R::P,   // quadrant 4-cycle
      R::R0, R::R1, R::R2, R::R3,  // square dance
      R::QR, R::QS, R::QT, R::QU,  // inner squares
      R::A,  R::B,  R::C,  R::D, R::E, R::F, R::G, R::H1, R::H2,
      R::Y,
  };
  for (R id : forward_order) {
    out.push_back(certify_inclusion(id, forward_successors(id), c, opt));
  }

  // Inverse rows: f^-1(int V) only meets the listed regions, certified as
  // f(W) ∩ int V = ∅ for every other partition region W.
  for (R v : partition17()) {
    const std::vector<R>& allowed = inverse_successors(v);
    Certificate family;
    family.claim = std::string("f^-1(") + region_name(v) + ") in " +
                   detail::join_names(allowed);
    family.status = CertStatus::Certified;
    family.c_interval = c;
    bool depth_exceeded = false;
    for (R w : partition17()) {
      if (std::find(allowed.begin(), allowed.end(), w) != allowed.end()) {
        continue;
      }
      const Certificate member = certify_disjoint(w, v, c, opt);
      family.max_depth_used = std::max(family.max_depth_used, member.max_depth_used);
      if (member.status == CertStatus::Failed &&
          family.status != CertStatus::Failed) {
        family.status = CertStatus::Failed;
        family.counterexample = member.counterexample;
      }
      depth_exceeded |= member.status == CertStatus::DepthExceeded;
    }
    if (family.status == CertStatus::Certified && depth_exceeded) {
      family.status = CertStatus::DepthExceeded;
    }
    out.push_back(std::move(family));
  }

  const PolyA zero{}, mone{-1.0};
  const PolyA cP{0.0, 1.0, -1.0}, opcP{1.0, 1.0, -1.0};
  const auto F = detail::SymEdge::finite;
  const detail::SymBox corner{F(mone), F(cP), F(mone), F(cP)};

  // R2 feeds R3 only from the corner square: the rest of R2 cannot enter
  // int R3 in one step.
  {
    const detail::SymBox right{F(cP), F(zero), F(mone), F(zero)};
    const detail::SymBox upper{F(mone), F(cP), F(cP), F(zero)};
    const detail::SymBox r3 = detail::region_sym(R::R3);
    Certificate cert;
    cert.claim = "f^-1(R3) cap R2 in [-1,c]x[-1,c]";
    cert.status = CertStatus::Certified;
    cert.c_interval = c;
    for (const detail::SymBox* w : {&right, &upper}) {
      const Certificate member =
          detail::run_disjoint(*w, r3, cert.claim, c, opt);
      cert.max_depth_used = std::max(cert.max_depth_used, member.max_depth_used);
      if (member.status != CertStatus::Certified &&
          cert.status == CertStatus::Certified) {
        cert.status = member.status;
        cert.counterexample = member.counterexample;
      }
    }
    out.push_back(std::move(cert));
  }

  // Within the square dance, the corner square [-1,c]² is entered only from
  // [-1,c]x[0,1+c]: the rest of R1, all of R2, and all of R3 stay out.
  {
    const detail::SymBox r1right{F(cP), F(zero), F(zero), F(opcP)};
    Certificate cert;
    cert.claim = "f^-1([-1,c]x[-1,c]) cap (R1|R2|R3) in [-1,c]x[0,1+c]";
    cert.status = CertStatus::Certified;
    cert.c_interval = c;
    const detail::SymBox sources[] = {r1right, detail::region_sym(R::R2),
                                      detail::region_sym(R::R3)};
    for (const detail::SymBox& w : sources) {
      const Certificate member =
          detail::run_disjoint(w, corner, cert.claim, c, opt);
      cert.max_depth_used = std::max(cert.max_depth_used, member.max_depth_used);
      if (member.status != CertStatus::Certified &&
          cert.status == CertStatus::Certified) {
        cert.status = member.status;
        cert.counterexample = member.counterexample;
      }
    }
    out.push_back(std::move(cert));
  }

  return out;
}

// Smallest n with (-c/a2^n) * sum_{i<n} a2^i > 1 + c certified over the
// whole c-interval: from that n on, the 2n-step return f^-2n(R0) ∩ R0 is
// squeezed into an empty strip.
inline int backward_r0_threshold(Interval c, int cap = 100000) {
  detail::require_certified_regime(c);
  const Interval a2 = detail::a2_range(c);
  const Interval opc = Interval{1.0, 1.0} + c;
  Interval sum{0.0, 0.0};
  Interval pw{1.0, 1.0};
  for (int n = 1; n <= cap; ++n) {
    sum = sum + pw;
    pw = pw * a2;
    const Interval q = (-c) * sum * detail::recip_pos(pw);
    if (q.lo > opc.hi) return n;
  }
  throw std::runtime_error("no certified backward-R0 threshold within cap");
}

} // namespace fibjulia
