#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "elesim/grid.hpp"
#include "elesim/rng.hpp"
#include "elesim/terrain.hpp"

using namespace elesim;

namespace {

GridHeader header(int nrows, int ncols, double cellsize = 30.0) {
  GridHeader h;
  h.nrows = nrows;
  h.ncols = ncols;
  h.cellsize = cellsize;
  return h;
}

// independent oracle: exact euclidean distance by exhaustive search
RasterGrid brute_distance(const std::vector<std::uint8_t>& mask, const GridHeader& h) {
  RasterGrid out(h, 0.0);
  for (int r = 0; r < h.nrows; ++r)
    for (int c = 0; c < h.ncols; ++c) {
      double best = std::numeric_limits<double>::infinity();
      for (int rr = 0; rr < h.nrows; ++rr)
        for (int cc = 0; cc < h.ncols; ++cc)
          if (mask[static_cast<std::size_t>(rr) * h.ncols + cc]) {
            const double d2 = double(rr - r) * (rr - r) + double(cc - c) * (cc - c);
            best = std::min(best, d2);
          }
      out.at(r, c) = h.cellsize * std::sqrt(best);
    }
  return out;
}

} // namespace

TEST_CASE("horn slope on a planar ramp", "[terrain]") {
  // plane rising 30 m per 30 m cell along x: gradient 1, interior slope 45 deg
  GridHeader h = header(8, 8);
  RasterGrid elev(h, 0.0);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) elev.at(r, c) = 30.0 * c;
  RasterGrid slope = compute_slope(elev);
  for (int r = 1; r < 7; ++r)
    for (int c = 1; c < 7; ++c) REQUIRE(slope.at(r, c) == Catch::Approx(45.0).margin(1e-9));
  // clamped borders see half the cross-border gradient: atan(0.5)
  REQUIRE(slope.at(3, 0) == Catch::Approx(std::atan(0.5) * 180.0 / kPi).margin(1e-9));
  REQUIRE(slope.at(3, 7) == Catch::Approx(std::atan(0.5) * 180.0 / kPi).margin(1e-9));
}

TEST_CASE("horn slope flat and spike cases", "[terrain]") {
  GridHeader h = header(7, 7);
  RasterGrid flat(h, 512.0);
  RasterGrid s = compute_slope(flat);
  for (double v : s.values) REQUIRE(v == 0.0);

  // single-cell spike of 120 m over 30 m cells: cardinal neighbors see
  // gx = 2H/(8*cs) = 1, i.e. 45 degrees
  RasterGrid elev(h, 0.0);
  elev.at(3, 3) = 120.0;
  RasterGrid sp = compute_slope(elev);
  REQUIRE(sp.at(3, 2) == Catch::Approx(45.0).margin(1e-9));
  REQUIRE(sp.at(3, 4) == Catch::Approx(45.0).margin(1e-9));
  REQUIRE(sp.at(2, 3) == Catch::Approx(45.0).margin(1e-9));
  REQUIRE(sp.at(4, 3) == Catch::Approx(45.0).margin(1e-9));
  REQUIRE(sp.at(3, 3) == Catch::Approx(0.0).margin(1e-9)); // symmetric summit
}

TEST_CASE("horn slope rejects tiny grids", "[terrain]") {
  GridHeader h = header(1, 5);
  RasterGrid g(h, 0.0);
  REQUIRE_THROWS_AS(compute_slope(g), DataError);
}

TEST_CASE("distance transform hand cases", "[terrain]") {
  GridHeader h = header(5, 5);
  std::vector<std::uint8_t> mask(25, 0);
  mask[2 * 5 + 2] = 1;
  RasterGrid d = distance_transform(mask, h);
  REQUIRE(d.at(2, 2) == 0.0);
  REQUIRE(d.at(2, 3) == Catch::Approx(30.0));
  REQUIRE(d.at(1, 1) == Catch::Approx(30.0 * std::sqrt(2.0)).margin(1e-9));
  REQUIRE(d.at(1, 1) == Catch::Approx(42.42640687119285).margin(1e-9));
  REQUIRE(d.at(0, 0) == Catch::Approx(30.0 * std::sqrt(8.0)).margin(1e-9));
}

TEST_CASE("distance transform matches brute force oracle", "[terrain]") {
  Rng rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    GridHeader h = header(17 + trial, 23 + (trial % 5), 10.0 + trial);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(h.nrows) * h.ncols, 0);
    bool any = false;
    for (auto& m : mask) {
      m = u(rng) < 0.07 ? 1 : 0;
      any = any || m;
    }
    if (!any) mask[3] = 1;
    RasterGrid fast = distance_transform(mask, h);
    RasterGrid slow = brute_distance(mask, h);
    for (std::size_t i = 0; i < mask.size(); ++i)
      REQUIRE(fast.values[i] == Catch::Approx(slow.values[i]).margin(1e-9));
  }
}

TEST_CASE("distance transform requires a nonempty mask", "[terrain]") {
  GridHeader h = header(4, 4);
  std::vector<std::uint8_t> mask(16, 0);
  REQUIRE_THROWS_AS(distance_transform(mask, h), DataError);
}

TEST_CASE("build stack derives masks and proximity maps", "[terrain]") {
  GridHeader h = header(6, 6);
  RasterGrid elev(h, 100.0);
  RasterGrid lu(h, double(landuse::evergreen_broadleaf));
  lu.at(0, 0) = landuse::water;
  lu.at(5, 5) = landuse::plantation;
  lu.at(5, 4) = landuse::plantation;
  lu.at(2, 2) = landuse::grassland;
  RasterGrid bld(h, 0.0);
  bld.at(5, 5) = 1.0;

  TerrainStack stack = build_stack(elev, lu, bld);
  REQUIRE(stack.water[0] == 1);
  REQUIRE(stack.forest[1] == 1);
  REQUIRE(stack.forest[2 * 6 + 2] == 0);
  REQUIRE(stack.plantation[5 * 6 + 5] == 1);
  REQUIRE(stack.buildings[5 * 6 + 5] == 1);
  REQUIRE(stack.proximity_water.at(0, 0) == 0.0);
  REQUIRE(stack.proximity_water.at(0, 3) == Catch::Approx(90.0));
  REQUIRE(stack.proximity_plantation.at(5, 5) == 0.0);
  REQUIRE(stack.proximity_plantation.at(5, 3) == Catch::Approx(30.0));
  REQUIRE(stack.proximity_forest.at(2, 2) == Catch::Approx(30.0));
  REQUIRE(stack.proximity_forest.at(1, 1) == 0.0);
  REQUIRE(stack.slope.values.size() == stack.elevation.values.size());
  REQUIRE(stack.agri_plots.size() == stack.water.size());

  SECTION("header mismatch rejected") {
    GridHeader h2 = header(6, 7);
    RasterGrid lu2(h2, 0.0);
    REQUIRE_THROWS_AS(build_stack(elev, lu2, bld), DataError);
  }
}

TEST_CASE("build stack with no water yields infinite proximity", "[terrain]") {
  GridHeader h = header(4, 4);
  RasterGrid elev(h, 0.0), lu(h, double(landuse::mixed_forest)), bld(h, 0.0);
  TerrainStack stack = build_stack(elev, lu, bld);
  REQUIRE(std::isinf(stack.proximity_water.at(1, 1)));
  REQUIRE(stack.proximity_forest.at(1, 1) == 0.0);
}
