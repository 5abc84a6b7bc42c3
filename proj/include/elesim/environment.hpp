#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "elesim/rng.hpp"
#include "elesim/sampling.hpp"
#include "elesim/terrain.hpp"

namespace elesim {

// Food distribution parameters for the five forest-productivity scenarios.
struct ScenarioConfig {
  std::string name = "S2";
  double forest_food_percent = 0.1;    // fraction of forest cells bearing food
  double cropland_food_percent = 0.3;  // fraction of home-garden cells bearing food
  double forest_max_food_value = 10.0; // kg, uniform upper bound
  double cropland_max_food_value = 100.0;
};

inline ScenarioConfig scenario_by_name(const std::string& name) {
  ScenarioConfig s;
  s.name = name;
  if (name == "S1")
    s.forest_max_food_value = 5.0;
  else if (name == "S2")
    s.forest_max_food_value = 10.0;
  else if (name == "S3")
    s.forest_max_food_value = 15.0;
  else if (name == "S4")
    s.forest_max_food_value = 20.0;
  else if (name == "S5")
    s.forest_max_food_value = 25.0;
  else
    throw DataError("unknown scenario '" + name + "' (expected S1..S5)");
  return s;
}

// Plot composition classes observed in the fringe villages. Mixed classes are
// rubber shares crossed with home gardens.
enum class AgriCategory : int {
  none = 0,
  home_garden = 1,
  rubber_0_25 = 2,
  rubber_25_50 = 3,
  rubber_50_75 = 4,
  rubber_75_100 = 5,
  rubber_100 = 6,
};

inline constexpr int kAgriCategoryCount = 7;

// P(cell behaves as a home garden) = midpoint of the plot's non-rubber share.
inline double home_garden_probability(AgriCategory cat) {
  switch (cat) {
    case AgriCategory::none: return 0.0;
    case AgriCategory::home_garden: return 1.0;
    case AgriCategory::rubber_0_25: return 0.875;
    case AgriCategory::rubber_25_50: return 0.625;
    case AgriCategory::rubber_50_75: return 0.375;
    case AgriCategory::rubber_75_100: return 0.125;
    case AgriCategory::rubber_100: return 0.0;
  }
  return 0.0;
}

// Village survey shares: the three mixed rubber classes dominate
// (36.9%, 29.6%, 15.7%); the remainder is spread over the minor classes so
// the expected home-garden share lands near 35% of plantation cells.
inline std::array<double, 7> default_agri_fractions() {
  std::array<double, 7> f{};
  f[static_cast<int>(AgriCategory::none)] = 0.050;
  f[static_cast<int>(AgriCategory::home_garden)] = 0.050;
  f[static_cast<int>(AgriCategory::rubber_0_25)] = 0.048;
  f[static_cast<int>(AgriCategory::rubber_25_50)] = 0.157;
  f[static_cast<int>(AgriCategory::rubber_50_75)] = 0.296;
  f[static_cast<int>(AgriCategory::rubber_75_100)] = 0.369;
  f[static_cast<int>(AgriCategory::rubber_100)] = 0.030;
  return f;
}

// Draw a category per plantation cell, then a home-garden Bernoulli within it.
// Row-major order, so the mask is reproducible for a given generator state.
inline std::vector<std::uint8_t> assign_agri_plots(const std::vector<int>& landuse_codes,
                                                   const GridHeader& h,
                                                   const std::array<double, 7>& fractions,
                                                   Rng& rng) {
  if (landuse_codes.size() != static_cast<std::size_t>(h.nrows) * h.ncols)
    throw DataError("assign_agri_plots: land use size mismatch");
  double total = 0.0;
  for (double f : fractions) {
    if (f < 0.0) throw DataError("assign_agri_plots: negative category fraction");
    total += f;
  }
  if (total <= 0.0) throw DataError("assign_agri_plots: all category fractions zero");

  std::vector<std::uint8_t> mask(landuse_codes.size(), 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < landuse_codes.size(); ++i) {
    if (!is_plantation(landuse_codes[i])) continue;
    double pick = unif(rng) * total;
    int cat = 0;
    for (; cat < kAgriCategoryCount - 1; ++cat) {
      pick -= fractions[static_cast<std::size_t>(cat)];
      if (pick < 0.0) break;
    }
    const double p = home_garden_probability(static_cast<AgriCategory>(cat));
    if (p > 0.0 && unif(rng) < p) mask[i] = 1;
  }
  return mask;
}

using FoodGrid = RasterGrid;

// Bernoulli food placement with uniform quantities; forest cells and
// home-garden cells only. Regenerated fresh per replicate.
inline FoodGrid init_food(const TerrainStack& stack, const ScenarioConfig& sc, Rng& rng) {
  FoodGrid food(stack.header, 0.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < stack.forest.size(); ++i) {
    if (stack.forest[i]) {
      if (unif(rng) < sc.forest_food_percent)
        food.values[i] = unif(rng) * sc.forest_max_food_value;
    } else if (stack.agri_plots[i]) {
      if (unif(rng) < sc.cropland_food_percent)
        food.values[i] = unif(rng) * sc.cropland_max_food_value;
    }
  }
  return food;
}

// Cosine diurnal cycle: coolest at 05:00, hottest at 17:00.
inline double temperature_at(double tmin, double tmax, double hour) {
  const double mid = 0.5 * (tmax + tmin);
  const double amp = 0.5 * (tmax - tmin);
  return mid - amp * std::cos(kTwoPi * (hour - 5.0) / 24.0);
}

// Monthly temperature bounds, either scalar or gridded per cell.
struct TemperatureField {
  double tmin = 24.0;
  double tmax = 32.0;
  std::optional<RasterGrid> tmin_grid;
  std::optional<RasterGrid> tmax_grid;

  double at(int r, int c, double hour) const {
    const double lo = tmin_grid ? tmin_grid->at(r, c) : tmin;
    const double hi = tmax_grid ? tmax_grid->at(r, c) : tmax;
    return temperature_at(lo, hi, hour);
  }
};

// Step schedule for the human-disturbance factor.
struct DisturbanceSchedule {
  int day_start_minute = 7 * 60;
  int day_end_minute = 19 * 60;
  double day_level = 1.0;
  double night_level = 0.0;

  double at(int minute_of_day) const {
    minute_of_day = ((minute_of_day % 1440) + 1440) % 1440;
    const bool day = minute_of_day >= day_start_minute && minute_of_day < day_end_minute;
    return day ? day_level : night_level;
  }

  // Level now or within the next `lead_minutes`; valid for leads shorter than
  // either schedule phase.
  double lookahead_max(int minute_of_day, int lead_minutes) const {
    return std::max(at(minute_of_day), at(minute_of_day + lead_minutes));
  }
};

} // namespace elesim
