#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <vector>

#include "elesim/analytics.hpp"
#include "elesim/engine.hpp"
#include "elesim/nsga2.hpp"
#include "elesim/stats.hpp"

namespace elesim {

inline std::vector<TrackPoint> tracks_from_results(
    const std::vector<ReplicateResult>& reps) {
  std::vector<TrackPoint> out;
  for (const ReplicateResult& r : reps)
    for (const TickRow& row : r.track)
      out.push_back({r.replicate, row.day, row.tick, row.x, row.y});
  return out;
}

struct MovementStats {
  BootstrapCi mcp_km2; // per-trajectory convex-hull area, mean across trajectories
  BootstrapCi diel_km; // daily travelled distance
  BootstrapCi net_km;  // daily first-to-last displacement
};

// The three calibration statistics with percentile-bootstrap confidence
// intervals. MCP is computed per replicate (a degenerate hull counts as 0),
// displacements per replicate-day.
inline MovementStats movement_objectives(const std::vector<TrackPoint>& traj,
                                         int resamples = 1000, double level = 0.95,
                                         std::uint64_t seed = 1) {
  if (traj.empty()) throw DataError("movement_objectives: empty trajectory set");
  std::map<int, std::vector<Vec2>> by_rep;
  for (const TrackPoint& p : traj) by_rep[p.replicate].push_back({p.x, p.y});
  std::vector<double> areas;
  for (const auto& [rep, pts] : by_rep) {
    (void)rep;
    const McpResult m = mcp_area(pts);
    areas.push_back(m.degenerate ? 0.0 : m.area_km2);
  }
  std::vector<double> diel, net;
  for (const DayDisplacement& d : displacement_by_day(traj)) {
    diel.push_back(d.diel_km);
    net.push_back(d.net_km);
  }
  const auto mean_stat = [](const std::vector<double>& v) { return mean_of(v); };
  Rng rng = make_rng(seed, 0, Stream::calibration);
  MovementStats st;
  st.mcp_km2 = bootstrap_ci(areas, mean_stat, resamples, level, rng);
  st.diel_km = bootstrap_ci(diel, mean_stat, resamples, level, rng);
  st.net_km = bootstrap_ci(net, mean_stat, resamples, level, rng);
  return st;
}

struct CalibrationTarget {
  double mean = 0.0;
  double halfwidth = 0.0;
};

inline CalibrationTarget target_from_ci(const BootstrapCi& ci) {
  return {ci.estimate, 0.5 * (ci.hi - ci.lo)};
}

// Zero inside the interval, linear outside.
inline double hinge_penalty(double simulated, const CalibrationTarget& t) {
  return std::max(0.0, std::fabs(simulated - t.mean) - t.halfwidth);
}

struct MovementTargets {
  CalibrationTarget mcp_km2;
  CalibrationTarget diel_km;
  CalibrationTarget net_km;
};

inline std::vector<double> movement_penalties(const MovementStats& sim,
                                              const MovementTargets& target) {
  return {hinge_penalty(sim.mcp_km2.estimate, target.mcp_km2),
          hinge_penalty(sim.diel_km.estimate, target.diel_km),
          hinge_penalty(sim.net_km.estimate, target.net_km)};
}

// The inverse-calibration objective: map the four tuned variables
// (forest food probability, forest max food value, memory fraction,
// food-search radius) onto a batch run and score the movement statistics
// against the target intervals.
inline GaEvaluate make_movement_evaluate(const TerrainStack& stack, ScenarioConfig sc,
                                         AgentParams params, RunConfig run, Vec2 start,
                                         int n_replicates,
                                         const MovementTargets& targets,
                                         int n_threads = 1) {
  run.record_track = true;
  auto land = std::make_shared<const TerrainStack>(stack);
  return [land, sc, params, run, start, n_replicates, targets,
          n_threads](const std::vector<double>& x) {
    if (x.size() != 4)
      throw DataError("movement evaluator expects 4 variables: "
                      "forest_food_percent, forest_max_food_value, "
                      "percent_memory, radius_food_search");
    ScenarioConfig s = sc;
    AgentParams p = params;
    s.forest_food_percent = x[0];
    s.forest_max_food_value = x[1];
    p.percent_memory = x[2];
    p.radius_food_search = x[3];
    const auto reps = run_batch(*land, s, p, run, start, n_replicates, n_threads);
    return movement_penalties(movement_objectives(tracks_from_results(reps)), targets);
  };
}

} // namespace elesim
