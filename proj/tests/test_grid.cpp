#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "elesim/grid.hpp"
#include "elesim/rng.hpp"

using namespace elesim;

namespace {

std::string write_temp(const std::string& body) {
  static int counter = 0;
  auto path = std::filesystem::temp_directory_path() /
              ("elesim_grid_" + std::to_string(counter++) + ".asc");
  std::ofstream out(path);
  out << body;
  return path.string();
}

} // namespace

TEST_CASE("ascii grid round trip is bit exact", "[grid]") {
  GridHeader h;
  h.ncols = 4;
  h.nrows = 3;
  h.xllcorner = 100.25;
  h.yllcorner = -7.125;
  h.cellsize = 30.0;
  RasterGrid g(h, 0.0);
  Rng rng(42);
  std::uniform_real_distribution<double> u(-1000.0, 1000.0);
  for (auto& v : g.values) v = u(rng) * 1.0e-3 + 0.1234567890123456;

  auto path = std::filesystem::temp_directory_path() / "elesim_roundtrip.asc";
  save_ascii_grid(g, path.string());
  RasterGrid back = load_ascii_grid(path.string());

  REQUIRE(back.header.ncols == h.ncols);
  REQUIRE(back.header.nrows == h.nrows);
  REQUIRE(back.header.xllcorner == h.xllcorner);
  REQUIRE(back.header.yllcorner == h.yllcorner);
  REQUIRE(back.header.cellsize == h.cellsize);
  for (std::size_t i = 0; i < g.values.size(); ++i) REQUIRE(back.values[i] == g.values[i]);
}

TEST_CASE("ascii grid parses valid header and payload", "[grid]") {
  auto path = write_temp(
      "ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 30\nNODATA_value -9999\n"
      "1 2 3\n4 5 6\n");
  RasterGrid g = load_ascii_grid(path);
  REQUIRE(g.header.ncols == 3);
  REQUIRE(g.header.nrows == 2);
  REQUIRE(g.at(0, 0) == 1.0);
  REQUIRE(g.at(0, 2) == 3.0);
  REQUIRE(g.at(1, 0) == 4.0);
}

TEST_CASE("ascii grid rejects malformed inputs", "[grid]") {
  SECTION("payload shorter than declared") {
    auto path = write_temp("ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 30\n1 2 3 4 5\n");
    REQUIRE_THROWS_AS(load_ascii_grid(path), DataError);
  }
  SECTION("payload longer than declared") {
    auto path = write_temp(
        "ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 30\n1 2 3 4 5 6 7 8 9 10\n");
    REQUIRE_THROWS_AS(load_ascii_grid(path), DataError);
  }
  SECTION("bad header key") {
    auto path = write_temp("ncolumns 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 30\n1 2 3 4 5 6\n");
    REQUIRE_THROWS_AS(load_ascii_grid(path), DataError);
  }
  SECTION("unreadable token") {
    auto path = write_temp("ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 30\n1 2 3 4 x 6\n");
    REQUIRE_THROWS_AS(load_ascii_grid(path), DataError);
  }
  SECTION("missing file") {
    REQUIRE_THROWS_AS(load_ascii_grid("/nonexistent/elesim.asc"), DataError);
  }
}

TEST_CASE("nodata policy replaces with grid minimum", "[grid]") {
  auto path = write_temp(
      "ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 30\nNODATA_value -9999\n"
      "5 -9999 3\n7 2 -9999\n");
  RasterGrid g = load_ascii_grid(path, NodataPolicy::replace_with_min);
  REQUIRE(g.at(0, 1) == 2.0);
  REQUIRE(g.at(1, 2) == 2.0);
  REQUIRE(g.at(1, 1) == 2.0);

  REQUIRE_THROWS_AS(load_ascii_grid(path, NodataPolicy::error_out), DataError);

  SECTION("all nodata is an error under every policy") {
    auto p2 = write_temp(
        "ncols 2\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 30\nNODATA_value -1\n-1 -1\n");
    REQUIRE_THROWS_AS(load_ascii_grid(p2, NodataPolicy::replace_with_min), DataError);
  }
}

TEST_CASE("cell center and cell lookup conventions", "[grid]") {
  GridHeader h;
  h.ncols = 4;
  h.nrows = 3;
  h.xllcorner = 1000.0;
  h.yllcorner = 2000.0;
  h.cellsize = 30.0;

  // row 0 is the northern row
  Vec2 nw = cell_center(h, 0, 0);
  REQUIRE(nw.x == Catch::Approx(1000.0 + 15.0));
  REQUIRE(nw.y == Catch::Approx(2000.0 + 3 * 30.0 - 15.0));
  Vec2 se = cell_center(h, 2, 3);
  REQUIRE(se.x == Catch::Approx(1000.0 + 3.5 * 30.0));
  REQUIRE(se.y == Catch::Approx(2000.0 + 15.0));

  for (int r = 0; r < h.nrows; ++r)
    for (int c = 0; c < h.ncols; ++c) {
      Vec2 p = cell_center(h, r, c);
      CellIndex idx = cell_of(h, p.x, p.y);
      REQUIRE(idx.r == r);
      REQUIRE(idx.c == c);
    }

  REQUIRE(point_in_grid(h, 1000.0 + 1.0, 2000.0 + 1.0));
  REQUIRE_FALSE(point_in_grid(h, 999.0, 2001.0));
  REQUIRE_FALSE(point_in_grid(h, 1000.0 + 4 * 30.0 + 0.1, 2010.0));
}

TEST_CASE("land use class predicates", "[grid]") {
  // forest means evergreen broadleaf, deciduous broadleaf, or mixed forest
  REQUIRE(is_forest(landuse::deciduous_broadleaf));
  REQUIRE(is_forest(landuse::mixed_forest));
  REQUIRE(is_forest(landuse::evergreen_broadleaf));
  REQUIRE_FALSE(is_forest(landuse::plantation));
  REQUIRE_FALSE(is_forest(landuse::shrubland));
  REQUIRE_FALSE(is_forest(landuse::evergreen_needleleaf));
  REQUIRE(is_water(landuse::water));
  REQUIRE_FALSE(is_water(landuse::aquaculture));
  REQUIRE(is_plantation(landuse::plantation));
  REQUIRE(landuse::deciduous_broadleaf == 0);
  REQUIRE(landuse::cropland == 1);
  REQUIRE(landuse::water == 8);
  REQUIRE(landuse::plantation == 9);
  REQUIRE(landuse::evergreen_needleleaf == 18);
}
