#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "elesim/engine.hpp"
#include "elesim/grid.hpp"
#include "elesim/io.hpp"
#include "elesim/stats.hpp"

namespace elesim {

struct McpResult {
  double area_km2 = 0.0;
  bool degenerate = true;
  std::vector<Vec2> hull; // counterclockwise
};

// Minimum convex polygon: monotone-chain hull plus the shoelace area.
inline McpResult mcp_area(std::vector<Vec2> pts) {
  McpResult res;
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  if (pts.size() < 3) {
    res.hull = pts;
    return res;
  }
  const auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) { // lower hull
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) { // upper hull
    const Vec2& p = pts[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  if (hull.size() < 3) {
    res.hull = std::move(hull);
    return res; // collinear cloud
  }
  double twice_area = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2& a = hull[i];
    const Vec2& b = hull[(i + 1) % hull.size()];
    twice_area += a.x * b.y - b.x * a.y;
  }
  res.area_km2 = 0.5 * std::fabs(twice_area) / 1e6;
  res.degenerate = false;
  res.hull = std::move(hull);
  return res;
}

struct KdeResult {
  RasterGrid density; // cell masses, total 1
  double cell_area_km2 = 0.0;
};

// Binned gaussian kernel density with per-axis Silverman bandwidths
// (h_i = sigma_i * n^(-1/6) for two dimensions), kernel truncated at 6h.
inline KdeResult kde_grid(const std::vector<Vec2>& pts, double cell_m, double pad_m) {
  if (pts.size() < 2) throw DataError("kde_grid: need at least two points");
  if (cell_m <= 0.0) throw DataError("kde_grid: cell size must be positive");
  std::vector<double> xs, ys;
  xs.reserve(pts.size());
  ys.reserve(pts.size());
  for (const Vec2& p : pts) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  const double sx = sd_of(xs), sy = sd_of(ys);
  if (!(sx > 0.0) || !(sy > 0.0))
    throw DataError("kde_grid: zero variance along an axis");
  const double nfac = std::pow(static_cast<double>(pts.size()), -1.0 / 6.0);
  const double hx = sx * nfac, hy = sy * nfac;

  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  GridHeader h;
  h.cellsize = cell_m;
  h.xllcorner = *xmin - pad_m;
  h.yllcorner = *ymin - pad_m;
  h.ncols = static_cast<int>(std::ceil((*xmax + pad_m - h.xllcorner) / cell_m)) + 1;
  h.nrows = static_cast<int>(std::ceil((*ymax + pad_m - h.yllcorner) / cell_m)) + 1;

  RasterGrid counts(h, 0.0);
  for (const Vec2& p : pts) {
    const CellIndex ci = cell_of(h, p.x, p.y);
    if (ci.r >= 0 && ci.r < h.nrows && ci.c >= 0 && ci.c < h.ncols)
      counts.at(ci.r, ci.c) += 1.0;
  }
  const auto kernel = [&](double bandwidth) {
    const int radius = static_cast<int>(std::ceil(6.0 * bandwidth / cell_m));
    std::vector<double> w(static_cast<std::size_t>(radius) + 1);
    for (int k = 0; k <= radius; ++k) {
      const double d = k * cell_m / bandwidth;
      w[static_cast<std::size_t>(k)] = std::exp(-0.5 * d * d);
    }
    return w;
  };
  const std::vector<double> wx = kernel(hx), wy = kernel(hy);

  RasterGrid tmp(h, 0.0);
  const int rx = static_cast<int>(wx.size()) - 1;
  for (int r = 0; r < h.nrows; ++r)
    for (int c = 0; c < h.ncols; ++c) {
      const double v = counts.at(r, c);
      if (v == 0.0) continue;
      for (int k = -rx; k <= rx; ++k) {
        const int cc = c + k;
        if (cc < 0 || cc >= h.ncols) continue;
        tmp.at(r, cc) += v * wx[static_cast<std::size_t>(std::abs(k))];
      }
    }
  KdeResult out;
  out.density = RasterGrid(h, 0.0);
  const int ry = static_cast<int>(wy.size()) - 1;
  for (int r = 0; r < h.nrows; ++r)
    for (int c = 0; c < h.ncols; ++c) {
      const double v = tmp.at(r, c);
      if (v == 0.0) continue;
      for (int k = -ry; k <= ry; ++k) {
        const int rr = r + k;
        if (rr < 0 || rr >= h.nrows) continue;
        out.density.at(rr, c) += v * wy[static_cast<std::size_t>(std::abs(k))];
      }
    }
  double mass = 0.0;
  for (double v : out.density.values) mass += v;
  if (!(mass > 0.0)) throw DataError("kde_grid: empty density");
  for (double& v : out.density.values) v /= mass;
  out.cell_area_km2 = (cell_m / 1000.0) * (cell_m / 1000.0);
  return out;
}

// Smallest area holding at least fraction q of the density mass.
inline double kde_level_area_km2(const KdeResult& kde, double q) {
  if (!(q > 0.0) || !(q < 1.0))
    throw DataError("kde_level_area_km2: level must be in (0,1)");
  std::vector<double> masses = kde.density.values;
  std::sort(masses.begin(), masses.end(), std::greater<>());
  double acc = 0.0;
  std::size_t cells = 0;
  for (double m : masses) {
    acc += m;
    ++cells;
    if (acc >= q) break;
  }
  return static_cast<double>(cells) * kde.cell_area_km2;
}

struct DayDisplacement {
  int replicate = 0;
  int day = 1;
  double diel_km = 0.0; // summed consecutive within-day displacement
  double net_km = 0.0;  // first fix to last fix
};

inline std::vector<DayDisplacement> displacement_by_day(
    const std::vector<TrackPoint>& pts) {
  std::vector<DayDisplacement> rows;
  std::size_t i = 0;
  while (i < pts.size()) {
    const int rep = pts[i].replicate, day = pts[i].day;
    DayDisplacement row{rep, day, 0.0, 0.0};
    const TrackPoint first = pts[i];
    TrackPoint prev = pts[i];
    ++i;
    while (i < pts.size() && pts[i].replicate == rep && pts[i].day == day) {
      row.diel_km += std::hypot(pts[i].x - prev.x, pts[i].y - prev.y) / 1000.0;
      prev = pts[i];
      ++i;
    }
    row.net_km = std::hypot(prev.x - first.x, prev.y - first.y) / 1000.0;
    rows.push_back(row);
  }
  return rows;
}

// Index-order DBSCAN (FIFO expansion, ascending neighbour lists) with a
// bucket grid for the range queries; labels are -1 for noise.
inline std::vector<int> dbscan(const std::vector<Vec2>& pts, double eps, int min_pts) {
  if (eps <= 0.0) throw DataError("dbscan: eps must be positive");
  const std::size_t n = pts.size();
  std::vector<int> labels(n, -1);
  if (n == 0) return labels;

  std::map<std::pair<long, long>, std::vector<std::size_t>> buckets;
  const auto key = [&](const Vec2& p) {
    return std::make_pair(static_cast<long>(std::floor(p.x / eps)),
                          static_cast<long>(std::floor(p.y / eps)));
  };
  for (std::size_t i = 0; i < n; ++i) buckets[key(pts[i])].push_back(i);

  const auto region = [&](std::size_t i) {
    std::vector<std::size_t> out;
    const auto [bx, by] = key(pts[i]);
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy) {
        const auto it = buckets.find({bx + dx, by + dy});
        if (it == buckets.end()) continue;
        for (std::size_t j : it->second)
          if (std::hypot(pts[j].x - pts[i].x, pts[j].y - pts[i].y) <= eps)
            out.push_back(j);
      }
    std::sort(out.begin(), out.end());
    return out;
  };

  std::vector<char> visited(n, 0);
  int cid = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (visited[i]) continue;
    visited[i] = 1;
    auto seeds = region(i);
    if (seeds.size() < static_cast<std::size_t>(min_pts)) continue;
    labels[i] = cid;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      const std::size_t j = seeds[k];
      if (labels[j] == -1) labels[j] = cid;
      if (visited[j]) continue;
      visited[j] = 1;
      auto nb = region(j);
      if (nb.size() >= static_cast<std::size_t>(min_pts))
        seeds.insert(seeds.end(), nb.begin(), nb.end());
    }
    ++cid;
  }
  return labels;
}

struct RaidStats {
  double raid_probability = 0.0;       // replicates with at least one episode
  double reentry_probability = 0.0;    // of the raiders, those with 2+ episodes
  double deprived_episode_fraction = 0.0;
  double starvation_probability = 0.0; // pooled days with forest intake below demand
  double mean_episodes_per_replicate = 0.0;
};

inline RaidStats compute_raid_stats(const std::vector<ReplicateResult>& reps,
                                    double ddmi) {
  if (reps.empty()) throw DataError("compute_raid_stats: no replicates");
  RaidStats st;
  std::size_t raiders = 0, repeaters = 0, episodes = 0, deprived = 0;
  std::size_t days = 0, starved_days = 0;
  for (const ReplicateResult& r : reps) {
    if (!r.episodes.empty()) ++raiders;
    if (r.episodes.size() >= 2) ++repeaters;
    episodes += r.episodes.size();
    for (const RaidEpisode& ep : r.episodes)
      if (ep.deprived_at_onset) ++deprived;
    for (const DayRow& d : r.days) {
      ++days;
      if (d.forest_intake < ddmi) ++starved_days;
    }
  }
  const double n = static_cast<double>(reps.size());
  st.raid_probability = static_cast<double>(raiders) / n;
  st.reentry_probability =
      raiders > 0 ? static_cast<double>(repeaters) / static_cast<double>(raiders) : 0.0;
  st.deprived_episode_fraction =
      episodes > 0 ? static_cast<double>(deprived) / static_cast<double>(episodes) : 0.0;
  st.starvation_probability =
      days > 0 ? static_cast<double>(starved_days) / static_cast<double>(days) : 0.0;
  st.mean_episodes_per_replicate = static_cast<double>(episodes) / n;
  return st;
}

// Coefficient of variation over growing prefixes (sizes 2..N).
struct CvCurve {
  std::vector<double> cv; // cv[i] belongs to prefix size i + 2
};

inline CvCurve cv_convergence(const std::vector<double>& values) {
  if (values.size() < 2)
    throw DataError("cv_convergence: need at least two values");
  CvCurve out;
  double mean = values[0], m2 = 0.0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double delta = values[k] - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (values[k] - mean);
    if (std::fabs(mean) < 1e-12)
      throw DataError("cv_convergence: prefix mean is zero, cv undefined");
    const double sd = std::sqrt(m2 / static_cast<double>(k));
    out.cv.push_back(sd / std::fabs(mean));
  }
  return out;
}

// Smallest n such that every later increment of the cv curve stays within
// epsilon; 2 when the curve is stable from the start.
inline int nmin_for_epsilon(const CvCurve& curve, double eps) {
  int last_violation = 2;
  for (std::size_t i = 1; i < curve.cv.size(); ++i)
    if (std::fabs(curve.cv[i] - curve.cv[i - 1]) > eps)
      last_violation = static_cast<int>(i) + 2; // prefix size of cv[i]
  return last_violation;
}

struct ConvergenceReport {
  std::vector<double> curve;                // per prefix size, starting at 2
  std::vector<std::pair<double, int>> nmin; // (epsilon, minimum replicate count)
};

// Lorscheid-style stabilization of the coefficient of variation, reported
// over the requested epsilon sweep.
inline ConvergenceReport convergence_cv(
    const std::vector<double>& samples,
    const std::vector<double>& epsilons = {0.1, 0.075, 0.05, 0.025}) {
  const CvCurve c = cv_convergence(samples);
  ConvergenceReport rep;
  rep.curve = c.cv;
  for (double eps : epsilons) rep.nmin.emplace_back(eps, nmin_for_epsilon(c, eps));
  return rep;
}

// KL(P||Q) in nats with 1e-12 additive smoothing and renormalisation.
inline double kl_divergence(std::vector<double> p, std::vector<double> q) {
  if (p.size() != q.size() || p.empty())
    throw DataError("kl_divergence: distributions must share a non-empty support");
  const auto normalize = [](std::vector<double>& d) {
    double tot = 0.0;
    for (double& v : d) {
      if (v < 0.0) throw DataError("kl_divergence: negative mass");
      v += 1e-12;
      tot += v;
    }
    for (double& v : d) v /= tot;
  };
  normalize(p);
  normalize(q);
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) kl += p[i] * std::log(p[i] / q[i]);
  return kl;
}

// KL of each distribution against its predecessor.
inline std::vector<double> kl_curve(const std::vector<std::vector<double>>& dists) {
  std::vector<double> out;
  for (std::size_t i = 1; i < dists.size(); ++i)
    out.push_back(kl_divergence(dists[i], dists[i - 1]));
  return out;
}

// KL stabilization over growing-prefix occupancy distributions. The KL value
// of prefix size n against n-1 is itself the successive difference, so
// nmin(eps) is the smallest n after which all later values stay within eps.
inline ConvergenceReport convergence_kl(
    const std::vector<std::vector<double>>& prefix_dists,
    const std::vector<double>& epsilons = {0.1, 0.075, 0.05, 0.025}) {
  if (prefix_dists.size() < 2)
    throw DataError("convergence_kl: need at least two prefix distributions");
  ConvergenceReport rep;
  rep.curve = kl_curve(prefix_dists);
  for (double eps : epsilons) {
    int last_violation = 2;
    for (std::size_t i = 0; i < rep.curve.size(); ++i)
      if (rep.curve[i] > eps) last_violation = static_cast<int>(i) + 2;
    rep.nmin.emplace_back(eps, last_violation);
  }
  return rep;
}

inline std::vector<double> histogram_density(const std::vector<double>& values,
                                             int nbins, double lo, double hi) {
  if (nbins < 1 || !(hi > lo)) throw DataError("histogram_density: bad binning");
  std::vector<double> h(static_cast<std::size_t>(nbins), 0.0);
  std::size_t total = 0;
  for (double v : values) {
    if (v < lo || v > hi) continue;
    int b = static_cast<int>((v - lo) / (hi - lo) * nbins);
    if (b == nbins) b = nbins - 1; // the top edge belongs to the last bin
    h[static_cast<std::size_t>(b)] += 1.0;
    ++total;
  }
  if (total > 0)
    for (double& v : h) v /= static_cast<double>(total);
  return h;
}

} // namespace elesim
