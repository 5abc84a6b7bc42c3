#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "elesim/agent.hpp"
#include "elesim/environment.hpp"
#include "elesim/rng.hpp"

namespace elesim {

struct RaidEpisode {
  int start_tick = 0; // global tick index
  int end_tick = 0;
  bool deprived_at_onset = false;
};

// Collapses per-tick plantation occupancy into raid episodes; short
// excursions out of the plantations (up to merge_gap ticks) do not split an
// episode.
class EpisodeTracker {
 public:
  explicit EpisodeTracker(int merge_gap_ticks = 12) : gap_(merge_gap_ticks) {}

  void push(int tick, bool in_plantation, bool deprived) {
    if (!in_plantation) return;
    if (open_ && tick - last_ <= gap_) {
      last_ = tick;
      return;
    }
    if (open_) close();
    open_ = true;
    start_ = last_ = tick;
    deprived_ = deprived;
  }

  std::vector<RaidEpisode> finish() {
    if (open_) close();
    return std::move(episodes_);
  }

 private:
  void close() {
    episodes_.push_back({start_, last_, deprived_});
    open_ = false;
  }

  int gap_ = 12;
  bool open_ = false;
  bool deprived_ = false;
  int start_ = 0;
  int last_ = 0;
  std::vector<RaidEpisode> episodes_;
};

struct TickRow {
  int day = 1; // 1-based
  int tick = 0;
  int minute_of_day = 0;
  double x = 0.0;
  double y = 0.0;
  Mode mode = Mode::random_walk;
  double fitness = 1.0;
};

struct DayRow {
  int day = 1;
  double intake = 0.0;
  double forest_intake = 0.0;
  double cropland_intake = 0.0;
  int scheduled_thermo = 0;
  int actual_thermo = 0;
  int deprivation_days = 0;
  int water_days = 0;
  double fitness = 1.0;
  bool alive = true;
};

struct Event {
  int day = 1;
  int tick = 0; // global tick index
  int minute_of_day = 0;
  std::string type;
  double x = 0.0;
  double y = 0.0;
};

struct RunConfig {
  int days = 7;
  bool record_track = true;
  TemperatureField temperature;
  DisturbanceSchedule schedule;
  double prob_crop_damage = 0.1;
  double prob_infrastructure_damage = 0.05;
  std::uint64_t master_seed = 1;
};

struct ReplicateResult {
  int replicate = 0;
  bool died = false;
  int death_day = -1;
  double final_fitness = 1.0;
  int total_ticks = 0;
  int plantation_ticks = 0;
  int day_plantation_ticks = 0; // plantation presence while humans are active
  int night_plantation_ticks = 0;
  int steep_ticks = 0;
  int crop_damage_events = 0;
  int infrastructure_damage_events = 0;
  double total_intake = 0.0;
  double forest_intake = 0.0;
  double cropland_intake = 0.0;
  std::vector<TickRow> track;
  std::vector<DayRow> days;
  std::vector<Event> events;
  std::vector<RaidEpisode> episodes;
};

// One elephant-week (or however many days) on a fixed landscape. Food and
// memory are drawn from the replicate's food stream, every behavioural draw
// from its walk stream, so replicates are independent and reproducible.
inline ReplicateResult run_replicate(const TerrainStack& stack, const ScenarioConfig& sc,
                                     const AgentParams& params, const RunConfig& run,
                                     Vec2 start, int replicate) {
  if (!point_in_grid(stack.header, start.x, start.y))
    throw DataError("run_replicate: start position outside the landscape");

  Rng walk =
      make_rng(run.master_seed, static_cast<std::uint64_t>(replicate), Stream::walk);
  Rng foodr =
      make_rng(run.master_seed, static_cast<std::uint64_t>(replicate), Stream::food);
  FoodGrid food = init_food(stack, sc, foodr);
  ElephantAgent agent = make_agent(stack, food, params, start, foodr);

  ReplicateResult res;
  res.replicate = replicate;
  EpisodeTracker tracker(12);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const int tpd = params.ticks_per_day;
  const int minutes_per_tick = 1440 / tpd;
  const int lead_min = static_cast<int>(std::lround(params.dawn_lead_hours * 60.0));
  const double arrive_radius = 0.5 * stack.header.cellsize;
  if (run.record_track) res.track.reserve(static_cast<std::size_t>(run.days) * tpd);

  auto guarded_move = [&](const StepProposal& prop, bool danger_window) {
    if (!point_in_grid(stack.header, prop.pos.x, prop.pos.y)) return false;
    if (danger_window && agent.mode != Mode::escape) {
      const CellIndex di = cell_of(stack.header, prop.pos.x, prop.pos.y);
      if (stack.plantation[stack.index(di.r, di.c)]) return false;
    }
    return true;
  };

  for (int day = 0; day < run.days && agent.alive; ++day) {
    for (int t = 0; t < tpd; ++t) {
      const int minute = t * minutes_per_tick;
      const double hour = minute / 60.0;
      const int gtick = day * tpd + t;

      CellIndex at = cell_of(stack.header, agent.pos.x, agent.pos.y);
      const double temp = run.temperature.at(at.r, at.c, hour);
      const double p_thermo = thermoregulation_probability(
          temp, params.thermoregulation_threshold, params.thermo_state);
      if (p_thermo > 0.5) ++agent.scheduled_thermo_ticks;

      const bool danger_window = run.schedule.lookahead_max(minute, lead_min) > 0.5;
      const bool danger =
          stack.plantation[stack.index(at.r, at.c)] != 0 && danger_window;

      const Mode prev = agent.mode;
      agent.mode = switch_mode(prev, danger, agent.fitness, p_thermo, params, walk);
      if (agent.mode != prev) agent.target.reset();

      if (!agent.target) {
        if (agent.mode == Mode::foraging)
          agent.target = select_food_target(agent, stack, params, walk);
        else if (agent.mode == Mode::thermoregulation)
          agent.target = select_thermo_target(agent, stack, run.temperature, hour,
                                              params, walk);
        else if (agent.mode == Mode::escape)
          agent.target = select_escape_target(agent, stack, params, walk);
      }
      if (agent.target &&
          std::hypot(agent.target->x - agent.pos.x, agent.target->y - agent.pos.y) <=
              arrive_radius) {
        agent.target.reset();
        if (agent.mode == Mode::thermoregulation || agent.mode == Mode::escape)
          agent.mode = Mode::random_walk;
      }

      StepProposal prop =
          agent.target
              ? propose_exploratory_step(agent.pos, *agent.target, params.movement, walk)
              : propose_encamped_step(agent.pos, agent.heading, params.movement, walk);
      if (!guarded_move(prop, danger_window)) {
        // blocked directed step degrades to milling in place
        StepProposal mill =
            propose_encamped_step(agent.pos, agent.heading, params.movement, walk);
        prop = guarded_move(mill, danger_window)
                   ? mill
                   : StepProposal{agent.pos, mill.heading, 0.0};
      }
      const bool moved = prop.pos.x != agent.pos.x || prop.pos.y != agent.pos.y;
      agent.pos = prop.pos;
      agent.heading = prop.heading;

      at = cell_of(stack.header, agent.pos.x, agent.pos.y);
      const std::size_t ai = stack.index(at.r, at.c);
      if (agent.target &&
          std::hypot(agent.target->x - agent.pos.x, agent.target->y - agent.pos.y) <=
              arrive_radius) {
        agent.target.reset();
        if (agent.mode == Mode::thermoregulation || agent.mode == Mode::escape)
          agent.mode = Mode::random_walk;
      }

      if (moved) {
        if (stack.agri_plots[ai] && unif(walk) < run.prob_crop_damage) {
          ++res.crop_damage_events;
          res.events.push_back(
              {day + 1, gtick, minute, "crop_damage", agent.pos.x, agent.pos.y});
        }
        if (stack.buildings[ai] && unif(walk) < run.prob_infrastructure_damage) {
          ++res.infrastructure_damage_events;
          res.events.push_back({day + 1, gtick, minute, "infrastructure_damage",
                                agent.pos.x, agent.pos.y});
        }
      }

      eat_food(agent, food, stack, walk);
      if (stack.water[ai]) agent.visited_water_today = true;
      if (agent.mode == Mode::thermoregulation && p_thermo > 0.5)
        ++agent.actual_thermo_ticks;

      agent.fitness = std::max(0.0, agent.fitness - params.fitness_deprecation);
      if (agent.fitness <= kFitnessEps) agent.alive = false;

      ++res.total_ticks;
      const bool in_pl = stack.plantation[ai] != 0;
      if (in_pl) {
        ++res.plantation_ticks;
        if (run.schedule.at(minute) > 0.5)
          ++res.day_plantation_ticks;
        else
          ++res.night_plantation_ticks;
      }
      tracker.push(gtick, in_pl,
                   agent.num_days_food_deprivation > params.threshold_num_days);
      if (stack.slope.values[ai] > params.steep_slope_deg) ++res.steep_ticks;

      if (run.record_track)
        res.track.push_back({day + 1, t, minute, agent.pos.x, agent.pos.y, agent.mode,
                             agent.fitness});
      if (!agent.alive) break;
    }

    DayRow row;
    row.day = day + 1;
    row.intake = agent.todays_intake;
    row.forest_intake = agent.todays_forest_intake;
    row.cropland_intake = agent.todays_cropland_intake;
    row.scheduled_thermo = agent.scheduled_thermo_ticks;
    row.actual_thermo = agent.actual_thermo_ticks;
    if (agent.alive) end_of_day_update(agent, params);
    row.deprivation_days = agent.num_days_food_deprivation;
    row.water_days = agent.num_days_water;
    row.fitness = agent.fitness;
    row.alive = agent.alive;
    res.days.push_back(row);
    res.total_intake += row.intake;
    res.forest_intake += row.forest_intake;
    res.cropland_intake += row.cropland_intake;
    if (!agent.alive) {
      res.died = true;
      res.death_day = day + 1;
    }
  }
  res.final_fitness = agent.fitness;
  res.episodes = tracker.finish();
  return res;
}

// Independent replicates over a shared landscape. Each replicate seeds its
// own streams from (master_seed, index), so the outcome is identical for any
// thread count.
inline std::vector<ReplicateResult> run_batch(const TerrainStack& stack,
                                              const ScenarioConfig& sc,
                                              const AgentParams& params,
                                              const RunConfig& run, Vec2 start,
                                              int n_replicates, int n_threads) {
  std::vector<ReplicateResult> results(static_cast<std::size_t>(n_replicates));
  n_threads = std::max(1, n_threads);
  if (n_threads == 1) {
    for (int i = 0; i < n_replicates; ++i)
      results[static_cast<std::size_t>(i)] = run_replicate(stack, sc, params, run, start, i);
    return results;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_replicates) return;
      results[static_cast<std::size_t>(i)] = run_replicate(stack, sc, params, run, start, i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  return results;
}

} // namespace elesim
