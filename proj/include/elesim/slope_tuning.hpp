#pragma once

#include <algorithm>
#include <vector>

#include "elesim/engine.hpp"

namespace elesim {

struct SlopeSweepRow {
  double tolerance = 0.0;
  double steep_fraction = 0.0; // share of ticks spent on cells above 30 degrees
};

struct SlopeTuneResult {
  double tolerance = 0.0;
  std::vector<SlopeSweepRow> sweep; // ascending by tolerance
};

// Sweep the candidate tolerances over paired batches (same master seed per
// candidate) and return the smallest one whose batch-wide steep-traversal
// tick fraction stays within max_fraction.
inline SlopeTuneResult tune_slope_tolerance(const TerrainStack& stack,
                                            const ScenarioConfig& sc,
                                            const AgentParams& params,
                                            const RunConfig& run, Vec2 start,
                                            int n_replicates,
                                            std::vector<double> candidates,
                                            double max_fraction = 0.01,
                                            int n_threads = 1) {
  if (candidates.empty())
    throw DataError("tune_slope_tolerance: no candidate tolerances");
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  SlopeTuneResult res;
  bool found = false;
  for (double cand : candidates) {
    AgentParams p = params;
    p.slope_tolerance = cand;
    const auto reps = run_batch(stack, sc, p, run, start, n_replicates, n_threads);
    long long steep = 0, total = 0;
    for (const ReplicateResult& r : reps) {
      steep += r.steep_ticks;
      total += r.total_ticks;
    }
    const double frac =
        total > 0 ? static_cast<double>(steep) / static_cast<double>(total) : 0.0;
    res.sweep.push_back({cand, frac});
    if (!found && frac <= max_fraction) {
      found = true;
      res.tolerance = cand;
    }
  }
  if (!found)
    throw DataError(
        "tune_slope_tolerance: no candidate meets the steep-traversal bound");
  return res;
}

} // namespace elesim
