#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace elesim {

// Input-data problems (missing files, malformed rasters, bad tracks).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridHeader {
  int ncols = 0;
  int nrows = 0;
  double xllcorner = 0.0;
  double yllcorner = 0.0;
  double cellsize = 1.0;
  double nodata = -9999.0;
  bool has_nodata = false;
};

inline bool same_extent(const GridHeader& a, const GridHeader& b, double tol = 1e-6) {
  return a.ncols == b.ncols && a.nrows == b.nrows &&
         std::fabs(a.xllcorner - b.xllcorner) <= tol &&
         std::fabs(a.yllcorner - b.yllcorner) <= tol &&
         std::fabs(a.cellsize - b.cellsize) <= tol;
}

// Row-major raster, row 0 is the northern row.
struct RasterGrid {
  GridHeader header;
  std::vector<double> values;

  RasterGrid() = default;
  explicit RasterGrid(const GridHeader& h, double fill = 0.0)
      : header(h), values(static_cast<std::size_t>(h.nrows) * h.ncols, fill) {}

  int rows() const { return header.nrows; }
  int cols() const { return header.ncols; }
  std::size_t index(int r, int c) const { return static_cast<std::size_t>(r) * header.ncols + c; }
  bool in_bounds(int r, int c) const {
    return r >= 0 && r < header.nrows && c >= 0 && c < header.ncols;
  }
  double& at(int r, int c) { return values[index(r, c)]; }
  double at(int r, int c) const { return values[index(r, c)]; }
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct CellIndex {
  int r = 0;
  int c = 0;
};

inline Vec2 cell_center(const GridHeader& h, int r, int c) {
  return {h.xllcorner + (c + 0.5) * h.cellsize,
          h.yllcorner + (h.nrows - r - 0.5) * h.cellsize};
}

inline CellIndex cell_of(const GridHeader& h, double x, double y) {
  const int c = static_cast<int>(std::floor((x - h.xllcorner) / h.cellsize));
  const int r = h.nrows - 1 - static_cast<int>(std::floor((y - h.yllcorner) / h.cellsize));
  return {r, c};
}

inline bool point_in_grid(const GridHeader& h, double x, double y) {
  return x >= h.xllcorner && x < h.xllcorner + h.ncols * h.cellsize &&
         y >= h.yllcorner && y < h.yllcorner + h.nrows * h.cellsize;
}

enum class NodataPolicy { error_out, replace_with_min };

inline RasterGrid parse_ascii_grid(std::istream& in, NodataPolicy policy,
                                   const std::string& name) {
  GridHeader h;
  bool saw[5] = {false, false, false, false, false};
  std::string key;
  // header: five mandatory keys plus optional NODATA_value, in canonical order
  for (int i = 0; i < 6; ++i) {
    std::streampos before = in.tellg();
    if (!(in >> key)) throw DataError(name + ": truncated header");
    std::string lk;
    for (char ch : key) lk.push_back(static_cast<char>(std::tolower(ch)));
    double value = 0.0;
    if (!(in >> value)) throw DataError(name + ": unreadable header value for " + key);
    if (lk == "ncols") {
      h.ncols = static_cast<int>(value);
      saw[0] = true;
    } else if (lk == "nrows") {
      h.nrows = static_cast<int>(value);
      saw[1] = true;
    } else if (lk == "xllcorner") {
      h.xllcorner = value;
      saw[2] = true;
    } else if (lk == "yllcorner") {
      h.yllcorner = value;
      saw[3] = true;
    } else if (lk == "cellsize") {
      h.cellsize = value;
      saw[4] = true;
    } else if (lk == "nodata_value") {
      h.nodata = value;
      h.has_nodata = true;
      break;
    } else if (i == 5) {
      // sixth token was payload, rewind
      in.clear();
      in.seekg(before);
      break;
    } else {
      throw DataError(name + ": unknown header key '" + key + "'");
    }
  }
  for (bool s : saw)
    if (!s) throw DataError(name + ": incomplete header");
  if (h.ncols <= 0 || h.nrows <= 0 || h.cellsize <= 0.0)
    throw DataError(name + ": nonpositive dimensions or cellsize");

  RasterGrid g(h);
  const std::size_t expected = g.values.size();
  std::size_t count = 0;
  std::string token;
  while (in >> token) {
    if (count >= expected)
      throw DataError(name + ": payload has more values than ncols*nrows");
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
      throw DataError(name + ": unreadable payload token '" + token + "'");
    g.values[count++] = v;
  }
  if (count != expected)
    throw DataError(name + ": payload has " + std::to_string(count) + " values, expected " +
                    std::to_string(expected));

  if (h.has_nodata) {
    double vmin = std::numeric_limits<double>::infinity();
    std::size_t missing = 0;
    for (double v : g.values) {
      if (v == h.nodata)
        ++missing;
      else
        vmin = std::min(vmin, v);
    }
    if (missing == expected) throw DataError(name + ": every cell is nodata");
    if (missing > 0) {
      if (policy == NodataPolicy::error_out)
        throw DataError(name + ": grid contains nodata cells");
      for (double& v : g.values)
        if (v == h.nodata) v = vmin;
    }
  }
  return g;
}

inline RasterGrid load_ascii_grid(const std::string& path,
                                  NodataPolicy policy = NodataPolicy::replace_with_min) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open");
  return parse_ascii_grid(in, policy, path);
}

inline void save_ascii_grid(const RasterGrid& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open for writing");
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  out << "ncols " << g.header.ncols << "\nnrows " << g.header.nrows << "\nxllcorner ";
  put(g.header.xllcorner);
  out << "\nyllcorner ";
  put(g.header.yllcorner);
  out << "\ncellsize ";
  put(g.header.cellsize);
  out << "\n";
  if (g.header.has_nodata) {
    out << "NODATA_value ";
    put(g.header.nodata);
    out << "\n";
  }
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      if (c) out << ' ';
      put(g.at(r, c));
    }
    out << '\n';
  }
  if (!out) throw DataError(path + ": write failed");
}

// Land use classes, coded in the order the classification lists them.
namespace landuse {
inline constexpr int deciduous_broadleaf = 0;
inline constexpr int cropland = 1;
inline constexpr int built_up = 2;
inline constexpr int mixed_forest = 3;
inline constexpr int shrubland = 4;
inline constexpr int barren = 5;
inline constexpr int fallow = 6;
inline constexpr int wasteland = 7;
inline constexpr int water = 8;
inline constexpr int plantation = 9;
inline constexpr int aquaculture = 10;
inline constexpr int mangrove = 11;
inline constexpr int salt_pan = 12;
inline constexpr int grassland = 13;
inline constexpr int evergreen_broadleaf = 14;
inline constexpr int deciduous_needleleaf = 15;
inline constexpr int permanent_wetland = 16;
inline constexpr int snow_ice = 17;
inline constexpr int evergreen_needleleaf = 18;
} // namespace landuse

inline bool is_forest(int code) {
  return code == landuse::deciduous_broadleaf || code == landuse::mixed_forest ||
         code == landuse::evergreen_broadleaf;
}
inline bool is_water(int code) { return code == landuse::water; }
inline bool is_plantation(int code) { return code == landuse::plantation; }

} // namespace elesim
