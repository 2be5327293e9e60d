#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fibjulia/regions.hpp"

using namespace fibjulia;

namespace {

std::vector<double> test_params() { return {-0.1, -0.3, -0.5, -0.75, -0.9}; }

bool lists_equal(const std::vector<RegionId>& got,
                 std::vector<RegionId> want) {
  std::sort(want.begin(), want.end());
  return got == want;
}

} // namespace

TEST_CASE("catalog boxes are well formed") {
  for (double c : test_params()) {
    const auto boxes = catalog(c);
    REQUIRE(boxes.size() == static_cast<size_t>(kRegionCount));
    for (int i = 0; i < kRegionCount; ++i) {
      CAPTURE(c, region_name(boxes[i].id));
      CHECK(boxes[i].id == static_cast<RegionId>(i));
      CHECK(boxes[i].x.lo <= boxes[i].x.hi);
      CHECK(boxes[i].y.lo <= boxes[i].y.hi);
    }
  }
  CHECK_THROWS_AS(catalog(0.1), std::domain_error);
  CHECK_THROWS_AS(catalog(-2.5), std::domain_error);
}

TEST_CASE("frozen membership queries") {
  using R = RegionId;
  const double c = -0.5;
  const FixedPoints fp = fixed_points(c);

  CHECK(lists_equal(region_of({0.0, 0.0}, c),
                    {R::R0, R::R1, R::R2, R::R3, R::Y, R::QS}));
  CHECK(lists_equal(region_of(fp.theta, c), {R::L, R::A, R::H1, R::H2}));
  CHECK(lists_equal(region_of(fp.alpha, c),
                    {R::R2, R::Y, R::QR, R::QS, R::QT, R::QU, R::Z0}));
  CHECK(lists_equal(region_of({-3.0, 5.0}, c), {R::M}));
  CHECK(region_of({100.0, 100.0}, c) == std::vector<RegionId>{R::L});
}

TEST_CASE("the seventeen partition regions cover the plane") {
  std::mt19937 rng(321);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  for (double c : test_params()) {
    const auto boxes = catalog(c);
    for (int i = 0; i < 4000; ++i) {
      const Point z{coord(rng), coord(rng)};
      int hits = 0;
      for (RegionId id : partition17()) {
        if (boxes[static_cast<int>(id)].contains(z)) ++hits;
      }
      CAPTURE(c, z.x, z.y);
      // Random points land on a seam with probability zero, so coverage is
      // exactly one region almost surely; >= 1 is the hard requirement.
      REQUIRE(hits >= 1);
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("the five Z pieces tile QR exactly") {
  using R = RegionId;
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double c : test_params()) {
    const auto boxes = catalog(c);
    const RegionBox& qr = boxes[static_cast<int>(R::QR)];
    const std::array<R, 5> zs = {R::Z0, R::Z1, R::Z2, R::Z3, R::Z4};

    // Shared breakpoints reassemble bit for bit.
    CHECK(boxes[static_cast<int>(R::Z1)].x.hi == qr.x.hi);
    CHECK(boxes[static_cast<int>(R::Z0)].x.lo == qr.x.lo);
    CHECK(boxes[static_cast<int>(R::Z3)].y.lo == qr.y.lo);
    CHECK(boxes[static_cast<int>(R::Z0)].y.hi == qr.y.hi);
    CHECK(boxes[static_cast<int>(R::Z0)].x.hi ==
          boxes[static_cast<int>(R::Z4)].x.lo);
    CHECK(boxes[static_cast<int>(R::Z4)].x.hi ==
          boxes[static_cast<int>(R::Z1)].x.lo);

    for (int i = 0; i < 4000; ++i) {
      const Point z{qr.x.lo + unit(rng) * (qr.x.hi - qr.x.lo),
                    qr.y.lo + unit(rng) * (qr.y.hi - qr.y.lo)};
      int hits = 0;
      for (R id : zs) {
        if (boxes[static_cast<int>(id)].contains(z)) ++hits;
      }
      CAPTURE(c, z.x, z.y);
      REQUIRE(hits >= 1);
    }
    // And the pieces stay inside QR.
    for (R id : zs) {
      const RegionBox& b = boxes[static_cast<int>(id)];
      CHECK(b.x.lo >= qr.x.lo);
      CHECK(b.x.hi <= qr.x.hi);
      CHECK(b.y.lo >= qr.y.lo);
      CHECK(b.y.hi <= qr.y.hi);
    }
  }
}

TEST_CASE("forward and inverse tables are mutually dual") {
  const auto& p17 = partition17();
  const auto in_p17 = [&](RegionId id) {
    return std::find(p17.begin(), p17.end(), id) != p17.end();
  };
  for (RegionId r : p17) {
    for (RegionId s : forward_successors(r)) {
      if (!in_p17(s)) continue;
      const auto& back = inverse_successors(s);
      CAPTURE(region_name(r), region_name(s));
      CHECK(std::find(back.begin(), back.end(), r) != back.end());
    }
  }
  for (RegionId s : p17) {
    for (RegionId r : inverse_successors(s)) {
      const auto& fwd = forward_successors(r);
      CAPTURE(region_name(r), region_name(s));
      CHECK(std::find(fwd.begin(), fwd.end(), s) != fwd.end());
    }
  }
}

TEST_CASE("missing table rows throw") {
  CHECK_THROWS_AS(forward_successors(RegionId::Z0), NoTableEntry);
  CHECK_THROWS_AS(inverse_successors(RegionId::QR), NoTableEntry);
  CHECK_THROWS_AS(inverse_successors(RegionId::Y), NoTableEntry);
}

TEST_CASE("region names round trip") {
  for (int i = 0; i < kRegionCount; ++i) {
    const RegionId id = static_cast<RegionId>(i);
    CHECK(region_from_name(region_name(id)) == id);
  }
  CHECK_THROWS_AS(region_from_name("XX"), std::invalid_argument);
}

TEST_CASE("sampled forward conformance") {
  std::mt19937 rng(2718);
  for (double c : {-0.2, -0.5, -0.8}) {
    const ConformanceReport rep = sample_conformance(c, 2000, rng);
    REQUIRE(rep.rows.size() == 22);
    for (const ConformanceEntry& e : rep.rows) {
      CAPTURE(c, region_name(e.source), e.worst_margin);
      CHECK(e.violations == 0);
    }
    CHECK(rep.total_violations == 0);
  }
}
