#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "elesim/environment.hpp"
#include "elesim/synthetic.hpp"

using namespace elesim;

TEST_CASE("diurnal temperature curve hits min, max and midpoint", "[environment]") {
  // minimum at 05:00, maximum at 17:00, cosine in between
  REQUIRE(temperature_at(20.0, 30.0, 5.0) == Catch::Approx(20.0).margin(1e-12));
  REQUIRE(temperature_at(20.0, 30.0, 17.0) == Catch::Approx(30.0).margin(1e-12));
  REQUIRE(temperature_at(20.0, 30.0, 11.0) == Catch::Approx(25.0).margin(1e-12));
  REQUIRE(temperature_at(20.0, 30.0, 23.0) == Catch::Approx(25.0).margin(1e-12));
  // symmetric about the extremes
  REQUIRE(temperature_at(20.0, 30.0, 3.0) ==
          Catch::Approx(temperature_at(20.0, 30.0, 7.0)).margin(1e-12));
}

TEST_CASE("named food scenarios", "[environment]") {
  const double maxima[5] = {5.0, 10.0, 15.0, 20.0, 25.0};
  for (int i = 0; i < 5; ++i) {
    ScenarioConfig s = scenario_by_name("S" + std::to_string(i + 1));
    REQUIRE(s.forest_max_food_value == maxima[i]);
    REQUIRE(s.forest_food_percent == 0.1);
    REQUIRE(s.cropland_food_percent == 0.3);
    REQUIRE(s.cropland_max_food_value == 100.0);
  }
  REQUIRE_THROWS_AS(scenario_by_name("S9"), DataError);
}

TEST_CASE("home garden probability is the non-rubber midpoint", "[environment]") {
  REQUIRE(home_garden_probability(AgriCategory::none) == 0.0);
  REQUIRE(home_garden_probability(AgriCategory::home_garden) == 1.0);
  REQUIRE(home_garden_probability(AgriCategory::rubber_0_25) == Catch::Approx(0.875));
  REQUIRE(home_garden_probability(AgriCategory::rubber_25_50) == Catch::Approx(0.625));
  REQUIRE(home_garden_probability(AgriCategory::rubber_50_75) == Catch::Approx(0.375));
  REQUIRE(home_garden_probability(AgriCategory::rubber_75_100) == Catch::Approx(0.125));
  REQUIRE(home_garden_probability(AgriCategory::rubber_100) == 0.0);
}

TEST_CASE("agri plot assignment matches category shares", "[environment]") {
  GridHeader h;
  h.nrows = 100;
  h.ncols = 100;
  h.cellsize = 30.0;
  std::vector<int> lu(10000, landuse::plantation);
  lu[0] = landuse::evergreen_broadleaf;
  lu[1] = landuse::water;

  SECTION("single-category landscape: 50-75% rubber") {
    std::array<double, 7> fr{};
    fr[static_cast<int>(AgriCategory::rubber_50_75)] = 1.0;
    Rng rng(11);
    auto mask = assign_agri_plots(lu, h, fr, rng);
    REQUIRE(mask[0] == 0);
    REQUIRE(mask[1] == 0);
    double share = 0.0;
    for (std::size_t i = 2; i < mask.size(); ++i) share += mask[i];
    share /= 9998.0;
    REQUIRE(share == Catch::Approx(0.375).margin(0.02));
  }

  SECTION("default fractions give roughly a third home gardens") {
    Rng rng(12);
    auto mask = assign_agri_plots(lu, h, default_agri_fractions(), rng);
    double share = 0.0;
    for (std::size_t i = 2; i < mask.size(); ++i) share += mask[i];
    share /= 9998.0;
    REQUIRE(share == Catch::Approx(0.35).margin(0.025));
  }
}

TEST_CASE("food initialisation stays within scenario bounds", "[environment]") {
  GridHeader h;
  h.nrows = 120;
  h.ncols = 120;
  h.cellsize = 30.0;
  RasterGrid elev(h, 0.0);
  RasterGrid lu(h, double(landuse::evergreen_broadleaf));
  // right third plantation
  for (int r = 0; r < h.nrows; ++r)
    for (int c = 80; c < h.ncols; ++c) lu.at(r, c) = landuse::plantation;
  RasterGrid bld(h, 0.0);
  TerrainStack stack = build_stack(elev, lu, bld);
  // every plantation cell is a home garden for this check
  for (std::size_t i = 0; i < stack.plantation.size(); ++i)
    stack.agri_plots[i] = stack.plantation[i];

  ScenarioConfig sc = scenario_by_name("S2");
  Rng rng(5);
  FoodGrid food = init_food(stack, sc, rng);

  int forest_with_food = 0, forest_total = 0, hg_with_food = 0, hg_total = 0;
  double forest_max_seen = 0.0, hg_max_seen = 0.0;
  for (int r = 0; r < h.nrows; ++r)
    for (int c = 0; c < h.ncols; ++c) {
      const double f = food.at(r, c);
      REQUIRE(f >= 0.0);
      if (stack.forest[stack.index(r, c)]) {
        ++forest_total;
        if (f > 0.0) ++forest_with_food;
        forest_max_seen = std::max(forest_max_seen, f);
      } else if (stack.agri_plots[stack.index(r, c)]) {
        ++hg_total;
        if (f > 0.0) ++hg_with_food;
        hg_max_seen = std::max(hg_max_seen, f);
      } else {
        REQUIRE(f == 0.0);
      }
    }
  REQUIRE(double(forest_with_food) / forest_total == Catch::Approx(0.1).margin(0.01));
  REQUIRE(double(hg_with_food) / hg_total == Catch::Approx(0.3).margin(0.02));
  REQUIRE(forest_max_seen <= sc.forest_max_food_value);
  REQUIRE(forest_max_seen > 0.5 * sc.forest_max_food_value);
  REQUIRE(hg_max_seen <= sc.cropland_max_food_value);
}

TEST_CASE("disturbance schedule day window", "[environment]") {
  DisturbanceSchedule sch;
  REQUIRE(sch.at(0) == 0.0);
  REQUIRE(sch.at(7 * 60 - 1) == 0.0);
  REQUIRE(sch.at(7 * 60) == 1.0);
  REQUIRE(sch.at(12 * 60) == 1.0);
  REQUIRE(sch.at(19 * 60 - 1) == 1.0);
  REQUIRE(sch.at(19 * 60) == 0.0);
  REQUIRE(sch.at(23 * 60) == 0.0);
  // lookahead: 04:00 with a 3 h lead already sees the day level
  REQUIRE(sch.lookahead_max(4 * 60, 180) == 1.0);
  REQUIRE(sch.lookahead_max(3 * 60 + 59, 180) == 0.0);
  REQUIRE(sch.lookahead_max(12 * 60, 180) == 1.0);
  REQUIRE(sch.lookahead_max(20 * 60, 180) == 0.0);
}

TEST_CASE("synthetic landscape is deterministic and well formed", "[environment]") {
  SyntheticSpec spec;
  Rng rng1(99), rng2(99);
  SyntheticLandscape a = generate_synthetic_landscape(spec, rng1);
  SyntheticLandscape b = generate_synthetic_landscape(spec, rng2);
  REQUIRE(a.stack.landuse == b.stack.landuse);
  REQUIRE(a.stack.elevation.values == b.stack.elevation.values);
  REQUIRE(a.stack.agri_plots == b.stack.agri_plots);
  REQUIRE(a.start.x == b.start.x);

  const TerrainStack& s = a.stack;
  int n_forest = 0, n_plant = 0, n_water = 0, n_hg = 0, n_steep = 0, n_bld = 0;
  for (std::size_t i = 0; i < s.landuse.size(); ++i) {
    n_forest += s.forest[i];
    n_plant += s.plantation[i];
    n_water += s.water[i];
    n_hg += s.agri_plots[i];
    if (s.slope.values[i] > 30.0) ++n_steep;
    if (s.buildings[i]) {
      ++n_bld;
      REQUIRE(s.plantation[i] == 1);
    }
    if (s.agri_plots[i]) REQUIRE(s.plantation[i] == 1);
  }
  REQUIRE(n_forest > 0);
  REQUIRE(n_plant > 0);
  REQUIRE(n_water >= spec.nrows); // river polyline spans every row
  REQUIRE(n_hg > 0);
  REQUIRE(n_steep > 0);
  REQUIRE(n_bld > 0);

  CellIndex start = cell_of(s.header, a.start.x, a.start.y);
  REQUIRE(s.forest[s.index(start.r, start.c)] == 1);

  SECTION("rejects tiny domains") {
    SyntheticSpec small;
    small.ncols = 12;
    small.nrows = 40;
    Rng r(1);
    REQUIRE_THROWS_AS(generate_synthetic_landscape(small, r), DataError);
  }
}
