#pragma once

// The region catalog: 27 closed axis-aligned boxes (some with infinite
// sides) whose corners sit on the distinguished abscissas
// {-1, c, a1, 0, 1+c, a2} and on the a1-offsets a1 +- |a1|^2, a1 +- |a1|^3.
// Seventeen of them (the "plane partition") tile R^2 up to boundaries; the
// rest refine the square Y and the quadrant QR around alpha.
//
// The forward and inverse tables record which regions an image f(W) or a
// preimage f^-1(W) can meet.  They are combinatorial data here; the
// certified versions of those statements live in certifier.hpp.
//
// Everything needs a1 <= 0 and well-ordered breakpoints, i.e. -2 < c <= 0;
// the certified regime is the subrange -1 < c < 0.

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibjulia/core.hpp"

namespace fibjulia {

enum class RegionId : int {
  L, M, N, P,
  A, B, C, D, E, F, G, H1, H2,
  R0, R1, R2, R3,
  Y,
  QR, QS, QT, QU,
  Z0, Z1, Z2, Z3, Z4,
};

inline constexpr int kRegionCount = 27;

inline const char* region_name(RegionId id) {
  static constexpr const char* names[kRegionCount] = {
      "L",  "M",  "N",  "P",  "A",  "B",  "C",  "D",  "E",
      "F",  "G",  "H1", "H2", "R0", "R1", "R2", "R3", "Y",
      "QR", "QS", "QT", "QU", "Z0", "Z1", "Z2", "Z3", "Z4"};
  return names[static_cast<int>(id)];
}

inline RegionId region_from_name(const std::string& name) {
  for (int i = 0; i < kRegionCount; ++i) {
    const RegionId id = static_cast<RegionId>(i);
    if (name == region_name(id)) return id;
  }
  throw std::invalid_argument("unknown region name: " + name);
}

// A closed interval endpoint may be infinite; an open flag excludes the
// endpoint itself (only Z1's left edge uses it, so the five Z pieces tile
// QR without overlap on that seam).
struct ExtInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_open = false;

  bool contains(double v) const {
    return (lo_open ? v > lo : v >= lo) && v <= hi;
  }
};

struct RegionBox {
  RegionId id{};
  ExtInterval x, y;

  bool contains(const Point& z) const {
    return x.contains(z.x) && y.contains(z.y);
  }
};

inline std::array<RegionBox, kRegionCount> catalog(double c) {
  if (!(c > -2.0 && c <= 0.0)) {
    throw std::domain_error("region catalog requires -2 < c <= 0");
  }
  const FixedPoints fp = fixed_points(c);
  const double a1 = fp.a1, a2 = fp.a2;
  const double inf = std::numeric_limits<double>::infinity();
  const double opc = 1.0 + c;
  // Breakpoints shared between QR and its Z refinement, so the five pieces
  // reassemble to QR exactly, double for double.
  const double q2 = a1 + a1 * a1;        // a1 + |a1|^2
  const double q3 = a1 - a1 * a1 * a1;   // a1 + |a1|^3
  const double p3 = a1 + a1 * a1 * a1;   // a1 - |a1|^3

  const auto iv = [](double lo, double hi) { return ExtInterval{lo, hi}; };
  return {{
      {RegionId::L, iv(a2, inf), iv(a2, inf)},
      {RegionId::M, iv(-inf, -1.0), iv(opc, inf)},
      {RegionId::N, iv(-inf, -1.0), iv(-inf, -1.0)},
      {RegionId::P, iv(opc, inf), iv(-inf, -1.0)},
      {RegionId::A, iv(0.0, a2), iv(a2, inf)},
      {RegionId::B, iv(-1.0, 0.0), iv(opc, inf)},
      {RegionId::C, iv(-inf, -1.0), iv(0.0, opc)},
      {RegionId::D, iv(-inf, -1.0), iv(-1.0, 0.0)},
      {RegionId::E, iv(-1.0, 0.0), iv(-inf, -1.0)},
      {RegionId::F, iv(0.0, opc), iv(-inf, -1.0)},
      {RegionId::G, iv(opc, inf), iv(-1.0, 0.0)},
      {RegionId::H1, iv(opc, a2), iv(0.0, a2)},
      {RegionId::H2, iv(a2, inf), iv(0.0, a2)},
      {RegionId::R0, iv(0.0, opc), iv(0.0, a2)},
      {RegionId::R1, iv(-1.0, 0.0), iv(0.0, opc)},
      {RegionId::R2, iv(-1.0, 0.0), iv(-1.0, 0.0)},
      {RegionId::R3, iv(0.0, opc), iv(-1.0, 0.0)},
      {RegionId::Y, iv(c, 0.0), iv(c, 0.0)},
      {RegionId::QR, iv(a1, 0.0), iv(c, a1)},
      {RegionId::QS, iv(a1, 0.0), iv(a1, 0.0)},
      {RegionId::QT, iv(c, a1), iv(a1, 0.0)},
      {RegionId::QU, iv(c, a1), iv(c, a1)},
      {RegionId::Z0, iv(a1, q3), iv(p3, a1)},
      {RegionId::Z1, {q2, 0.0, true}, iv(c, a1)},
      {RegionId::Z2, iv(q3, q2), iv(c, p3)},
      {RegionId::Z3, iv(a1, q3), iv(c, p3)},
      {RegionId::Z4, iv(q3, q2), iv(p3, a1)},
  }};
}

inline std::vector<RegionId> region_of(const Point& z, double c) {
  std::vector<RegionId> out;
  for (const RegionBox& r : catalog(c)) {
    if (r.contains(z)) out.push_back(r.id);
  }
  return out;
}

struct NoTableEntry : std::out_of_range {
  explicit NoTableEntry(RegionId id)
      : std::out_of_range(std::string("no transition table entry for region ") +
                          region_name(id)) {}
};

// Regions an image f(W) can meet.  Rows exist for the plane partition, the
// R/Q cycles and Y; the Z pieces have no row (their forward behaviour is
// the return-envelope statement, not a table).
inline const std::vector<RegionId>& forward_successors(RegionId id) {
  using R = RegionId;
  static const std::array<std::pair<R, std::vector<R>>, 22> rows = {{
      {R::L, {R::L}},
      {R::M, {R::N}},
      {R::N, {R::P}},
      {R::P, {R::M}},
      {R::A, {R::B, R::H1, R::H2, R::R0, R::R1}},
      {R::B, {R::D, R::R2}},
      {R::C, {R::N, R::E}},
      {R::D, {R::E, R::F, R::P}},
      {R::E, {R::G, R::R2, R::R3}},
      {R::F, {R::C, R::R1}},
      {R::G, {R::M, R::B}},
      {R::H1, {R::B, R::H1, R::R0}},
      {R::H2, {R::B, R::A, R::L}},
      {R::R0, {R::R0, R::R1}},
      {R::R1, {R::R2}},
      {R::R2, {R::R2, R::R3}},
      {R::R3, {R::R1}},
      {R::Y, {R::Y}},
      {R::QR, {R::QS, R::QT}},
      {R::QS, {R::QT}},
      {R::QT, {R::QU, R::QR}},
      {R::QU, {R::QR}},
  }};
  for (const auto& [rid, succ] : rows) {
    if (rid == id) return succ;
  }
  throw NoTableEntry(id);
}

// Plane-partition regions a preimage f^-1(interior W) can meet.  Dual to
// the forward table: r appears in inverse_successors(s) exactly when s
// appears in forward_successors(r).
inline const std::vector<RegionId>& inverse_successors(RegionId id) {
  using R = RegionId;
  static const std::array<std::pair<R, std::vector<R>>, 17> rows = {{
      {R::L, {R::L, R::H2}},
      {R::M, {R::P, R::G}},
      {R::N, {R::M, R::C}},
      {R::P, {R::N, R::D}},
      {R::A, {R::H2}},
      {R::B, {R::A, R::G, R::H1, R::H2}},
      {R::C, {R::F}},
      {R::D, {R::B}},
      {R::E, {R::C, R::D}},
      {R::F, {R::D}},
      {R::G, {R::E}},
      {R::H1, {R::A, R::H1}},
      {R::H2, {R::A}},
      {R::R0, {R::R0, R::A, R::H1}},
      {R::R1, {R::R0, R::R3, R::A, R::F}},
      {R::R2, {R::R1, R::R2, R::B, R::E}},
      {R::R3, {R::R2, R::E}},
  }};
  for (const auto& [rid, succ] : rows) {
    if (rid == id) return succ;
  }
  throw NoTableEntry(id);
}

// The seventeen regions that tile the plane up to boundaries.
inline const std::array<RegionId, 17>& partition17() {
  using R = RegionId;
  static const std::array<RegionId, 17> ids = {
      R::L,  R::M,  R::N,  R::P,  R::A,  R::B,  R::C,  R::D, R::E,
      R::F,  R::G,  R::H1, R::H2, R::R0, R::R1, R::R2, R::R3};
  return ids;
}

// Signed depth of z inside the box: positive inside (distance to the
// nearest edge), negative outside.  Infinite sides never bind.
inline double box_margin(const RegionBox& r, const Point& z) {
  double m = std::numeric_limits<double>::infinity();
  if (!std::isinf(r.x.lo)) m = std::min(m, z.x - r.x.lo);
  if (!std::isinf(r.x.hi)) m = std::min(m, r.x.hi - z.x);
  if (!std::isinf(r.y.lo)) m = std::min(m, z.y - r.y.lo);
  if (!std::isinf(r.y.hi)) m = std::min(m, r.y.hi - z.y);
  return m;
}

struct ConformanceEntry {
  RegionId source{};
  long samples = 0;
  long violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
};

struct ConformanceReport {
  std::vector<ConformanceEntry> rows;
  long total_violations = 0;
};

// Samples each forward-table row: draw points from the source region
// (unbounded sides clipped at +-truncation), apply f once, and measure how
// deep the image sits inside the union of allowed successors.  A negative
// worst margin beyond rounding slack would expose a wrong table row.
template <typename Rng>
ConformanceReport sample_conformance(double c, int per_region, Rng& rng,
                                     double truncation = 100.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto boxes = catalog(c);
  const auto clip = [&](const ExtInterval& e) {
    return std::pair<double, double>{std::max(e.lo, -truncation),
                                     std::min(e.hi, truncation)};
  };
  ConformanceReport report;
  for (const RegionBox& src : boxes) {
    const std::vector<RegionId>* succ;
    try {
      succ = &forward_successors(src.id);
    } catch (const NoTableEntry&) {
      continue;
    }
    ConformanceEntry entry{src.id, 0, 0,
                           std::numeric_limits<double>::infinity()};
    const auto [xlo, xhi] = clip(src.x);
    const auto [ylo, yhi] = clip(src.y);
    for (int i = 0; i < per_region; ++i) {
      const Point z{xlo + unit(rng) * (xhi - xlo),
                    ylo + unit(rng) * (yhi - ylo)};
      const Point w = apply(z, c);
      double margin = -std::numeric_limits<double>::infinity();
      for (RegionId t : *succ) {
        margin = std::max(margin, box_margin(boxes[static_cast<int>(t)], w));
      }
      entry.samples++;
      entry.worst_margin = std::min(entry.worst_margin, margin);
      if (margin < -1e-12) entry.violations++;
    }
    report.total_violations += entry.violations;
    report.rows.push_back(entry);
  }
  return report;
}

} // namespace fibjulia
