#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "elesim/environment.hpp"
#include "elesim/sampling.hpp"
#include "elesim/terrain.hpp"

namespace elesim {

// A dead agent is one whose fitness has decayed to (numerically) zero.
inline constexpr double kFitnessEps = 1e-9;

enum class Mode : int {
  random_walk = 0,
  foraging = 1,
  thermoregulation = 2,
  escape = 3,
};

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::random_walk: return "random-walk";
    case Mode::foraging: return "foraging";
    case Mode::thermoregulation: return "thermoregulation";
    case Mode::escape: return "escape";
  }
  return "?";
}

// Two-state movement kernel fitted from GPS collar fixes plus the transition
// matrix between the behavioural states. Step lengths are in km per 5-minute
// tick, turns in radians.
struct MovementDistributions {
  double p11 = 0.8775; // encamped -> encamped
  double p12 = 0.1225;
  double p22 = 0.9096; // exploratory -> exploratory
  double p21 = 0.0904;
  GammaMoments encamped_step{0.0040, 0.0034};
  GammaMoments exploratory_step{0.0398, 0.0378};
  VonMisesParams encamped_turn{-3.0232, 0.3336};
  // The fitted exploratory turn kernel; directed movement replaces it with
  // target homing, so it only matters as calibration ground truth.
  VonMisesParams exploratory_turn{-0.0366, 1.5202};
  double heading_noise_deg = 15.0; // uniform jitter around the target bearing
};

struct AgentParams {
  double age_years = 40.0;
  double fitness_threshold = 0.4;
  double radius_food_search = 750.0;   // m
  double radius_water_search = 750.0;  // m
  double radius_forest_search = 1500.0;
  double knowledge_from_fringe = 1500.0;
  double terrain_radius = 750.0;
  double steep_slope_deg = 30.0;
  double slope_tolerance = 100.0; // summed steep degrees a sector may carry
  double percent_memory = 0.375;  // share of food-bearing forest cells known
  int threshold_num_days = 3;     // deprivation days before risk-taking
  double aggression = 0.2;
  double thermoregulation_threshold = 32.0; // deg C
  double thermo_state = -0.1;               // logistic steepness
  bool temperature_check_first = false;
  bool food_habituation = false;
  int ticks_per_day = 288;
  double fitness_deprecation = 0.1 / 288.0; // per tick
  double dawn_lead_hours = 3.0; // how far ahead the dawn danger check looks
  MovementDistributions movement;
};

// Von Bertalanffy growth curve for bulls, asymptote 4 tonnes.
inline double body_weight_kg(double age_years) {
  const double g = 1.0 - std::exp(-0.149 * (age_years + 3.16));
  return 4000.0 * g * g * g;
}

// Daily dry-matter demand, 1.7% of body weight.
inline double daily_dry_matter_intake_kg(double age_years) {
  return 0.017 * body_weight_kg(age_years);
}

// Logistic heat response; p > 0.5 once the ambient exceeds the threshold.
inline double thermoregulation_probability(double temp_c, double threshold_c,
                                           double state = -0.1) {
  return 1.0 / (1.0 + std::exp(state * (temp_c - threshold_c)));
}

struct ElephantAgent {
  Vec2 pos{};
  double heading = 0.0; // radians clockwise from north
  Mode mode = Mode::random_walk;
  double fitness = 1.0;
  bool alive = true;
  double ddmi = daily_dry_matter_intake_kg(40.0);
  std::optional<Vec2> target;
  std::unordered_map<int, double> memory; // cell index -> believed food (kg)

  double todays_intake = 0.0;
  double todays_forest_intake = 0.0;
  double todays_cropland_intake = 0.0;
  int scheduled_thermo_ticks = 0; // ticks whose heat draw demanded cooling
  int actual_thermo_ticks = 0;    // of those, ticks actually spent cooling
  int num_days_food_deprivation = 0;
  int num_days_water = 0;
  bool visited_water_today = false;
};

// Compass bearing of `to` as seen from `from`: 0 = north, +pi/2 = east.
inline double bearing_of(Vec2 from, Vec2 to) {
  return std::atan2(to.x - from.x, to.y - from.y);
}

// Eight 45-degree sectors, index 0 = north, clockwise.
inline int direction_of_bearing(double bearing) {
  int d = static_cast<int>(std::lround(bearing / (kPi / 4.0))) % 8;
  return d < 0 ? d + 8 : d;
}

struct DirectionCosts {
  std::array<double, 8> cost{};
  std::uint8_t feasible_mask = 0; // bit d set when cost[d] < tolerance
  int fallback_dir = 0;           // cheapest sector, used when the mask is empty

  bool allowed(int dir) const {
    if (feasible_mask != 0) return (feasible_mask >> dir) & 1;
    return dir == fallback_dir;
  }
};

// Sum the steep slope values (> steep_slope_deg) per sector within
// terrain_radius of the position. A sector is feasible while its summed
// steepness stays below the tolerance; if every sector is blocked the
// cheapest one remains usable so the agent is never pinned.
inline DirectionCosts feasible_directions(const TerrainStack& stack,
                                          const AgentParams& params, Vec2 pos) {
  DirectionCosts out;
  const GridHeader& h = stack.header;
  const CellIndex at = cell_of(h, pos.x, pos.y);
  const int reach = static_cast<int>(std::ceil(params.terrain_radius / h.cellsize)) + 1;
  for (int r = at.r - reach; r <= at.r + reach; ++r) {
    for (int c = at.c - reach; c <= at.c + reach; ++c) {
      if (!stack.in_bounds(r, c)) continue;
      const Vec2 ctr = cell_center(h, r, c);
      const double dist = std::hypot(ctr.x - pos.x, ctr.y - pos.y);
      if (dist > params.terrain_radius || dist < 1e-9) continue;
      const double s = stack.slope.at(r, c);
      if (s <= params.steep_slope_deg) continue;
      out.cost[static_cast<std::size_t>(
          direction_of_bearing(bearing_of(pos, ctr)))] += s;
    }
  }
  double best = out.cost[0];
  for (int d = 0; d < 8; ++d) {
    if (out.cost[static_cast<std::size_t>(d)] < params.slope_tolerance)
      out.feasible_mask |= static_cast<std::uint8_t>(1u << d);
    if (out.cost[static_cast<std::size_t>(d)] < best) {
      best = out.cost[static_cast<std::size_t>(d)];
      out.fallback_dir = d;
    }
  }
  return out;
}

// Spatial memory: a fixed share of the food-bearing forest cells plus every
// home-garden cell within reach of the forest fringe.
inline std::unordered_map<int, double> init_memory(const TerrainStack& stack,
                                                   const FoodGrid& food,
                                                   double percent_memory,
                                                   double fringe_m, Rng& rng) {
  std::vector<int> candidates;
  for (std::size_t i = 0; i < food.values.size(); ++i)
    if (stack.forest[i] && food.values[i] > 0.0)
      candidates.push_back(static_cast<int>(i));

  const auto want = static_cast<std::size_t>(std::clamp<long>(
      std::lround(percent_memory * static_cast<double>(candidates.size())), 0,
      static_cast<long>(candidates.size())));
  std::unordered_map<int, double> memory;
  memory.reserve(want + 64);
  for (std::size_t j = 0; j < want; ++j) { // partial Fisher-Yates draw
    std::uniform_int_distribution<std::size_t> pick(j, candidates.size() - 1);
    std::swap(candidates[j], candidates[pick(rng)]);
    memory.emplace(candidates[j], food.values[static_cast<std::size_t>(candidates[j])]);
  }
  for (std::size_t i = 0; i < food.values.size(); ++i)
    if (stack.agri_plots[i] && stack.proximity_forest.values[i] <= fringe_m)
      memory[static_cast<int>(i)] = food.values[i];
  return memory;
}

inline ElephantAgent make_agent(const TerrainStack& stack, const FoodGrid& food,
                                const AgentParams& params, Vec2 start, Rng& rng) {
  ElephantAgent a;
  a.pos = start;
  std::uniform_real_distribution<double> unif(-kPi, kPi);
  a.heading = unif(rng);
  a.ddmi = daily_dry_matter_intake_kg(params.age_years);
  a.memory = init_memory(stack, food, params.percent_memory,
                         params.knowledge_from_fringe, rng);
  return a;
}

// Markov draw between the two undirected states; only random-walk and
// foraging participate in the fitted transition matrix.
inline Mode markov_mode_draw(Mode current, const MovementDistributions& mv, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (current == Mode::random_walk)
    return unif(rng) < mv.p11 ? Mode::random_walk : Mode::foraging;
  if (current == Mode::foraging)
    return unif(rng) < mv.p22 ? Mode::foraging : Mode::random_walk;
  return current;
}

// Per-tick mode arbitration. Danger always preempts; then hunger and heat in
// a configurable order; an in-flight directed trip otherwise persists until
// the engine clears it on arrival.
inline Mode switch_mode(Mode current, bool danger, double fitness, double p_thermo,
                        const AgentParams& params, Rng& rng) {
  if (danger) return Mode::escape;
  if (params.temperature_check_first) {
    if (p_thermo > 0.5) return Mode::thermoregulation;
    if (fitness < params.fitness_threshold) return Mode::foraging;
  } else {
    if (fitness < params.fitness_threshold) return Mode::foraging;
    if (p_thermo > 0.5) return Mode::thermoregulation;
  }
  if (current == Mode::random_walk || current == Mode::foraging)
    return markov_mode_draw(current, params.movement, rng);
  return current;
}

struct StepProposal {
  Vec2 pos{};
  double heading = 0.0;
  double step_km = 0.0;
};

// Encamped kernel: turn relative to the previous heading, short gamma step.
inline StepProposal propose_encamped_step(Vec2 pos, double heading,
                                          const MovementDistributions& mv, Rng& rng) {
  const double turn = sample_von_mises(rng, mv.encamped_turn);
  const double h = wrap_angle(heading + turn);
  const double step =
      sample_gamma(rng, gamma_from_mean_sd(mv.encamped_step.mean, mv.encamped_step.sd));
  return {{pos.x + 1000.0 * step * std::sin(h), pos.y + 1000.0 * step * std::cos(h)},
          h, step};
}

// Directed kernel: aim at the target, jitter the bearing, long gamma step.
inline StepProposal propose_exploratory_step(Vec2 pos, Vec2 target,
                                             const MovementDistributions& mv,
                                             Rng& rng) {
  double h = bearing_of(pos, target);
  if (mv.heading_noise_deg > 0.0) {
    const double half = mv.heading_noise_deg * kPi / 180.0;
    std::uniform_real_distribution<double> noise(-half, half);
    h = wrap_angle(h + noise(rng));
  }
  const double step = sample_gamma(
      rng, gamma_from_mean_sd(mv.exploratory_step.mean, mv.exploratory_step.sd));
  return {{pos.x + 1000.0 * step * std::sin(h), pos.y + 1000.0 * step * std::cos(h)},
          h, step};
}

namespace detail {

struct TargetCandidate {
  int idx = 0;
  Vec2 center{};
};

} // namespace detail

// Pick a remembered food cell within the search radius, restricted to
// feasible sectors. Deprivation past the threshold (or a cropland-heavy
// memory under habituation) makes the agent gamble, with probability
// `aggression`, on the candidate closest to the plantations.
inline std::optional<Vec2> select_food_target(const ElephantAgent& agent,
                                              const TerrainStack& stack,
                                              const AgentParams& params, Rng& rng) {
  const DirectionCosts dc = feasible_directions(stack, params, agent.pos);
  const GridHeader& h = stack.header;
  std::vector<detail::TargetCandidate> cands;
  double cropland_mem = 0.0, forest_mem = 0.0;
  for (const auto& [idx, kg] : agent.memory) {
    if (kg <= 0.0) continue;
    const int r = idx / h.ncols, c = idx % h.ncols;
    const Vec2 ctr = cell_center(h, r, c);
    const double dist = std::hypot(ctr.x - agent.pos.x, ctr.y - agent.pos.y);
    if (dist > params.radius_food_search) continue;
    if (stack.plantation[static_cast<std::size_t>(idx)])
      cropland_mem += kg;
    else
      forest_mem += kg;
    if (dist < 1e-9) continue; // already standing on it
    if (!dc.allowed(direction_of_bearing(bearing_of(agent.pos, ctr)))) continue;
    cands.push_back({idx, ctr});
  }
  if (cands.empty()) return std::nullopt;
  std::sort(cands.begin(), cands.end(),
            [](const auto& a, const auto& b) { return a.idx < b.idx; });

  const bool risky =
      agent.num_days_food_deprivation > params.threshold_num_days ||
      (params.food_habituation && cropland_mem > 0.5 * forest_mem && cropland_mem > 0.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (risky && unif(rng) < params.aggression) {
    const auto* best = &cands.front();
    for (const auto& cand : cands)
      if (stack.proximity_plantation.values[static_cast<std::size_t>(cand.idx)] <
          stack.proximity_plantation.values[static_cast<std::size_t>(best->idx)])
        best = &cand;
    return best->center;
  }
  std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
  return cands[pick(rng)].center;
}

// Cooling destination: any cell already below the heat threshold within the
// long radius, or known water within the short radius; failing both, any
// forest cell (shade). Feasible sectors only.
inline std::optional<Vec2> select_thermo_target(const ElephantAgent& agent,
                                                const TerrainStack& stack,
                                                const TemperatureField& temp,
                                                double hour, const AgentParams& params,
                                                Rng& rng) {
  const DirectionCosts dc = feasible_directions(stack, params, agent.pos);
  const GridHeader& h = stack.header;
  const CellIndex at = cell_of(h, agent.pos.x, agent.pos.y);
  const double reach_m = std::max(params.radius_forest_search, params.radius_water_search);
  const int reach = static_cast<int>(std::ceil(reach_m / h.cellsize)) + 1;

  std::vector<Vec2> cool, shade;
  for (int r = at.r - reach; r <= at.r + reach; ++r) {
    for (int c = at.c - reach; c <= at.c + reach; ++c) {
      if (!stack.in_bounds(r, c)) continue;
      const Vec2 ctr = cell_center(h, r, c);
      const double dist = std::hypot(ctr.x - agent.pos.x, ctr.y - agent.pos.y);
      if (dist < 1e-9 || dist > reach_m) continue;
      if (!dc.allowed(direction_of_bearing(bearing_of(agent.pos, ctr)))) continue;
      const bool is_cool = dist <= params.radius_forest_search &&
                           temp.at(r, c, hour) < params.thermoregulation_threshold;
      const bool is_water =
          dist <= params.radius_water_search && stack.water[stack.index(r, c)];
      if (is_cool || is_water)
        cool.push_back(ctr);
      else if (dist <= params.radius_forest_search && stack.forest[stack.index(r, c)])
        shade.push_back(ctr);
    }
  }
  const std::vector<Vec2>& pool = cool.empty() ? shade : cool;
  if (pool.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  return pool[pick(rng)];
}

// Flight destination: nearest forest cell in the long radius; if there is
// none, the in-radius cell that descends the forest-proximity field fastest.
// Terrain feasibility is deliberately ignored while fleeing.
inline std::optional<Vec2> select_escape_target(const ElephantAgent& agent,
                                                const TerrainStack& stack,
                                                const AgentParams& params, Rng&) {
  const GridHeader& h = stack.header;
  const CellIndex at = cell_of(h, agent.pos.x, agent.pos.y);
  const int reach =
      static_cast<int>(std::ceil(params.radius_forest_search / h.cellsize)) + 1;

  std::optional<Vec2> nearest;
  double nearest_dist = 0.0;
  std::optional<Vec2> downhill;
  double best_prox = stack.in_bounds(at.r, at.c)
                         ? stack.proximity_forest.values[stack.index(at.r, at.c)]
                         : std::numeric_limits<double>::infinity();
  for (int r = at.r - reach; r <= at.r + reach; ++r) {
    for (int c = at.c - reach; c <= at.c + reach; ++c) {
      if (!stack.in_bounds(r, c)) continue;
      const Vec2 ctr = cell_center(h, r, c);
      const double dist = std::hypot(ctr.x - agent.pos.x, ctr.y - agent.pos.y);
      if (dist > params.radius_forest_search) continue;
      if (stack.forest[stack.index(r, c)]) {
        if (!nearest || dist < nearest_dist) {
          nearest = ctr;
          nearest_dist = dist;
        }
      } else if (stack.proximity_forest.values[stack.index(r, c)] < best_prox - 1e-9) {
        best_prox = stack.proximity_forest.values[stack.index(r, c)];
        downhill = ctr;
      }
    }
  }
  if (nearest) return nearest;
  return downhill;
}

struct EatResult {
  double consumed = 0.0;
  bool cropland = false;
};

// Consume a uniform share of whatever the current cell holds and remember
// the remainder; intake is booked against forest or cropland.
inline EatResult eat_food(ElephantAgent& agent, FoodGrid& food,
                          const TerrainStack& stack, Rng& rng) {
  const CellIndex at = cell_of(stack.header, agent.pos.x, agent.pos.y);
  if (!stack.in_bounds(at.r, at.c)) return {};
  const std::size_t i = stack.index(at.r, at.c);
  const double have = food.values[i];
  if (have <= 0.0) return {};
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double taken = unif(rng) * have;
  food.values[i] = have - taken;
  agent.memory[static_cast<int>(i)] = have - taken;
  agent.todays_intake += taken;
  const bool crop = stack.plantation[i] != 0;
  if (crop)
    agent.todays_cropland_intake += taken;
  else
    agent.todays_forest_intake += taken;
  return {taken, crop};
}

// Nightly bookkeeping: restore fitness for food eaten and heat stress
// honoured, advance the deprivation counters, reset the daily tallies.
inline void end_of_day_update(ElephantAgent& agent, const AgentParams& params) {
  const double tpd = static_cast<double>(params.ticks_per_day);
  const int a = agent.scheduled_thermo_ticks;
  const double x = std::min(agent.todays_intake, agent.ddmi);
  double credit =
      0.1 * ((tpd - a) / tpd) * (agent.ddmi > 0.0 ? x / agent.ddmi : 0.0);
  if (a > 0)
    credit += 0.1 * (a / tpd) * (static_cast<double>(agent.actual_thermo_ticks) / a);
  agent.fitness = std::min(1.0, agent.fitness + credit);

  if (agent.todays_intake < agent.ddmi)
    ++agent.num_days_food_deprivation;
  else
    agent.num_days_food_deprivation = 0;
  if (agent.visited_water_today)
    agent.num_days_water = 0;
  else
    ++agent.num_days_water;

  agent.todays_intake = 0.0;
  agent.todays_forest_intake = 0.0;
  agent.todays_cropland_intake = 0.0;
  agent.scheduled_thermo_ticks = 0;
  agent.actual_thermo_ticks = 0;
  agent.visited_water_today = false;
  if (agent.fitness <= kFitnessEps) agent.alive = false;
}

} // namespace elesim
