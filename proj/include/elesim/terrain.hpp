#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "elesim/grid.hpp"
#include "elesim/sampling.hpp"

namespace elesim {

// Horn's 3x3 finite-difference slope in degrees. Border neighborhoods are
// clamped to the grid.
inline RasterGrid compute_slope(const RasterGrid& elevation) {
  const GridHeader& h = elevation.header;
  if (h.nrows < 2 || h.ncols < 2)
    throw DataError("compute_slope: grid must be at least 2x2");
  RasterGrid slope(h, 0.0);
  auto z = [&](int r, int c) {
    r = std::min(std::max(r, 0), h.nrows - 1);
    c = std::min(std::max(c, 0), h.ncols - 1);
    return elevation.at(r, c);
  };
  const double denom = 8.0 * h.cellsize;
  for (int r = 0; r < h.nrows; ++r)
    for (int c = 0; c < h.ncols; ++c) {
      const double gx = (z(r - 1, c + 1) + 2.0 * z(r, c + 1) + z(r + 1, c + 1) -
                         z(r - 1, c - 1) - 2.0 * z(r, c - 1) - z(r + 1, c - 1)) /
                        denom;
      const double gy = (z(r - 1, c - 1) + 2.0 * z(r - 1, c) + z(r - 1, c + 1) -
                         z(r + 1, c - 1) - 2.0 * z(r + 1, c) - z(r + 1, c + 1)) /
                        denom;
      slope.at(r, c) = std::atan(std::sqrt(gx * gx + gy * gy)) * 180.0 / kPi;
    }
  return slope;
}

namespace detail {

// 1-D squared-distance lower envelope (Felzenszwalb & Huttenlocher).
inline void edt_1d(const std::vector<double>& f, std::vector<double>& d) {
  const int n = static_cast<int>(f.size());
  static thread_local std::vector<int> v;
  static thread_local std::vector<double> zb;
  v.assign(static_cast<std::size_t>(n), 0);
  zb.assign(static_cast<std::size_t>(n) + 1, 0.0);
  const double inf = std::numeric_limits<double>::infinity();
  int k = 0;
  v[0] = 0;
  zb[0] = -inf;
  zb[1] = inf;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) /
               (2.0 * q - 2.0 * v[k]);
    while (s <= zb[k]) {
      --k;
      s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) /
          (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    zb[k] = s;
    zb[k + 1] = inf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (zb[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

} // namespace detail

// Exact euclidean distance (meters, between cell centers) to the nearest set
// cell of the mask.
inline RasterGrid distance_transform(const std::vector<std::uint8_t>& mask,
                                     const GridHeader& h) {
  const std::size_t n = static_cast<std::size_t>(h.nrows) * h.ncols;
  if (mask.size() != n) throw DataError("distance_transform: mask size mismatch");
  bool any = false;
  for (auto m : mask) any = any || (m != 0);
  if (!any) throw DataError("distance_transform: empty mask");

  // finite sentinel larger than any attainable squared cell distance; infinities
  // would produce inf - inf in the envelope intersection
  const double big = double(h.nrows) * h.nrows + double(h.ncols) * h.ncols + 1.0;
  RasterGrid sq(h, 0.0);
  std::vector<double> f(static_cast<std::size_t>(std::max(h.nrows, h.ncols)));
  std::vector<double> d(f.size());

  for (int c = 0; c < h.ncols; ++c) {
    f.resize(static_cast<std::size_t>(h.nrows));
    d.resize(f.size());
    for (int r = 0; r < h.nrows; ++r)
      f[static_cast<std::size_t>(r)] = mask[sq.index(r, c)] ? 0.0 : big;
    detail::edt_1d(f, d);
    for (int r = 0; r < h.nrows; ++r) sq.at(r, c) = d[static_cast<std::size_t>(r)];
  }
  for (int r = 0; r < h.nrows; ++r) {
    f.resize(static_cast<std::size_t>(h.ncols));
    d.resize(f.size());
    for (int c = 0; c < h.ncols; ++c) f[static_cast<std::size_t>(c)] = sq.at(r, c);
    detail::edt_1d(f, d);
    for (int c = 0; c < h.ncols; ++c) sq.at(r, c) = d[static_cast<std::size_t>(c)];
  }
  for (double& v : sq.values) v = h.cellsize * std::sqrt(v);
  return sq;
}

// Immutable landscape layers shared by every replicate of a batch.
struct TerrainStack {
  GridHeader header;
  RasterGrid elevation;
  RasterGrid slope;
  std::vector<int> landuse;
  std::vector<std::uint8_t> buildings;
  std::vector<std::uint8_t> water;
  std::vector<std::uint8_t> forest;
  std::vector<std::uint8_t> plantation;
  std::vector<std::uint8_t> agri_plots; // home-garden cells, filled by the environment setup
  RasterGrid proximity_water;
  RasterGrid proximity_forest;
  RasterGrid proximity_plantation;

  int rows() const { return header.nrows; }
  int cols() const { return header.ncols; }
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * header.ncols + c;
  }
  bool in_bounds(int r, int c) const {
    return r >= 0 && r < header.nrows && c >= 0 && c < header.ncols;
  }
  int landuse_at(int r, int c) const { return landuse[index(r, c)]; }
};

inline TerrainStack build_stack(const RasterGrid& elevation, const RasterGrid& landuse_grid,
                                const RasterGrid& buildings_grid) {
  if (!same_extent(elevation.header, landuse_grid.header) ||
      !same_extent(elevation.header, buildings_grid.header))
    throw DataError("build_stack: layer headers disagree");

  TerrainStack s;
  s.header = elevation.header;
  s.elevation = elevation;
  s.slope = compute_slope(elevation);
  const std::size_t n = elevation.values.size();
  s.landuse.resize(n);
  s.buildings.resize(n);
  s.water.resize(n);
  s.forest.resize(n);
  s.plantation.resize(n);
  s.agri_plots.assign(n, 0);
  bool any_water = false, any_forest = false, any_plantation = false;
  for (std::size_t i = 0; i < n; ++i) {
    const int code = static_cast<int>(landuse_grid.values[i]);
    s.landuse[i] = code;
    s.buildings[i] = buildings_grid.values[i] != 0.0 ? 1 : 0;
    s.water[i] = is_water(code) ? 1 : 0;
    s.forest[i] = is_forest(code) ? 1 : 0;
    s.plantation[i] = is_plantation(code) ? 1 : 0;
    any_water = any_water || s.water[i];
    any_forest = any_forest || s.forest[i];
    any_plantation = any_plantation || s.plantation[i];
  }
  auto proximity = [&](const std::vector<std::uint8_t>& mask, bool any) {
    if (!any) return RasterGrid(s.header, std::numeric_limits<double>::infinity());
    return distance_transform(mask, s.header);
  };
  s.proximity_water = proximity(s.water, any_water);
  s.proximity_forest = proximity(s.forest, any_forest);
  s.proximity_plantation = proximity(s.plantation, any_plantation);
  return s;
}

} // namespace elesim
