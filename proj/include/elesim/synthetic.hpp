#pragma once

#include <cmath>
#include <vector>

#include "elesim/environment.hpp"
#include "elesim/terrain.hpp"

namespace elesim {

// Compact test landscape: western forest with a river, a broken ridge in front
// of an eastern plantation strip, scattered steep pillars in the approach
// corridor, and home gardens inside the plantation.
struct SyntheticSpec {
  int ncols = 120;
  int nrows = 120;
  double cellsize = 30.0;
  double xllcorner = 0.0;
  double yllcorner = 0.0;
  double base_elevation = 600.0;

  int plantation_cols = 18;       // width of the eastern strip
  double river_col_frac = 0.38;   // meandering one-cell river
  double river_meander_amp = 3.0;
  double river_meander_period = 48.0;

  int ridge_col = 78;             // two-cell wall with a gap
  double ridge_height = 45.0;     // flank slope ~36.9 deg at 30 m cells
  int gap_row_lo = 50;
  int gap_row_hi = 70;

  int pillar_count = 12;          // lone steep obstacles near the gap corridor
  double pillar_height = 75.0;    // cardinal neighbours at ~32 deg

  double building_density = 0.12; // within the plantation strip
  std::array<double, 7> agri_fractions = default_agri_fractions();

  double start_col_frac = 0.21;
  double start_row_frac = 0.50;
};

struct SyntheticLandscape {
  TerrainStack stack;
  Vec2 start;
};

inline SyntheticLandscape generate_synthetic_landscape(const SyntheticSpec& spec, Rng& rng) {
  if (spec.ncols < 20 || spec.nrows < 20)
    throw DataError("generate_synthetic_landscape: domain must be at least 20x20");
  if (spec.plantation_cols < 2 || spec.plantation_cols >= spec.ncols / 2)
    throw DataError("generate_synthetic_landscape: bad plantation width");
  const int forest_end = spec.ncols - spec.plantation_cols;
  if (spec.ridge_col < 4 || spec.ridge_col + 2 >= forest_end)
    throw DataError("generate_synthetic_landscape: ridge outside the forest block");

  GridHeader h;
  h.ncols = spec.ncols;
  h.nrows = spec.nrows;
  h.cellsize = spec.cellsize;
  h.xllcorner = spec.xllcorner;
  h.yllcorner = spec.yllcorner;

  RasterGrid lu(h, double(landuse::evergreen_broadleaf));
  RasterGrid elev(h, spec.base_elevation);
  RasterGrid bld(h, 0.0);

  const int mixed_rows = spec.nrows / 8;
  for (int r = 0; r < spec.nrows; ++r)
    for (int c = 0; c < spec.ncols; ++c) {
      if (c >= forest_end)
        lu.at(r, c) = landuse::plantation;
      else if (r < mixed_rows)
        lu.at(r, c) = landuse::mixed_forest;
    }

  // one-cell river meandering down the forest block
  for (int r = 0; r < spec.nrows; ++r) {
    const double base = spec.river_col_frac * spec.ncols;
    const double wiggle =
        spec.river_meander_amp * std::sin(kTwoPi * r / spec.river_meander_period);
    int c = static_cast<int>(std::lround(base + wiggle));
    c = std::min(std::max(c, 1), forest_end - 2);
    lu.at(r, c) = landuse::water;
  }

  // ridge wall with a gap
  for (int r = 0; r < spec.nrows; ++r) {
    if (r >= spec.gap_row_lo && r < spec.gap_row_hi) continue;
    elev.at(r, spec.ridge_col) += spec.ridge_height;
    elev.at(r, spec.ridge_col + 1) += spec.ridge_height;
  }

  // lone pillars scattered around the gap corridor
  {
    const int c_lo = std::max(2, spec.ridge_col - 12);
    const int c_hi = std::min(forest_end - 3, spec.ridge_col + 14);
    const int r_lo = std::max(2, spec.gap_row_lo - 8);
    const int r_hi = std::min(spec.nrows - 3, spec.gap_row_hi + 8);
    std::uniform_int_distribution<int> pc(c_lo, c_hi);
    std::uniform_int_distribution<int> pr(r_lo, r_hi);
    std::vector<CellIndex> placed;
    int attempts = 0;
    while (static_cast<int>(placed.size()) < spec.pillar_count && attempts < 1000) {
      ++attempts;
      const int r = pr(rng), c = pc(rng);
      if (lu.at(r, c) != landuse::evergreen_broadleaf &&
          lu.at(r, c) != landuse::mixed_forest)
        continue;
      if (std::fabs(elev.at(r, c) - spec.base_elevation) > 1e-9) continue;
      bool clear = true;
      for (const auto& p : placed)
        if (std::abs(p.r - r) <= 3 && std::abs(p.c - c) <= 3) clear = false;
      if (std::abs(c - spec.ridge_col) <= 2 || std::abs(c - spec.ridge_col - 1) <= 2)
        clear = false;
      if (!clear) continue;
      elev.at(r, c) += spec.pillar_height;
      placed.push_back({r, c});
    }
  }

  // buildings inside the plantation strip
  {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int r = 0; r < spec.nrows; ++r)
      for (int c = forest_end; c < spec.ncols; ++c)
        if (unif(rng) < spec.building_density) bld.at(r, c) = 1.0;
  }

  TerrainStack stack = build_stack(elev, lu, bld);
  stack.agri_plots = assign_agri_plots(stack.landuse, h, spec.agri_fractions, rng);

  int sr = static_cast<int>(std::lround(spec.start_row_frac * (spec.nrows - 1)));
  int sc = static_cast<int>(std::lround(spec.start_col_frac * (spec.ncols - 1)));
  // nudge off the river or a pillar if the fractions land there
  while (sc > 1 && !stack.forest[stack.index(sr, sc)]) --sc;
  SyntheticLandscape out;
  out.stack = std::move(stack);
  out.start = cell_center(h, sr, sc);
  return out;
}

} // namespace elesim
