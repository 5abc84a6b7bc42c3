// elesim: batch elephant-movement simulator with calibration and analysis
// subcommands. Exit codes: 0 success, 2 config error, 3 input error,
// 4 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "elesim/analytics.hpp"
#include "elesim/config.hpp"
#include "elesim/engine.hpp"
#include "elesim/hmm.hpp"
#include "elesim/io.hpp"
#include "elesim/nsga2.hpp"
#include "elesim/objectives.hpp"
#include "elesim/slope_tuning.hpp"
#include "elesim/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace elesim;

namespace {

Config config_from(const std::string& path, const std::vector<std::string>& sets) {
  if (path.empty()) {
    json doc = json::object();
    for (const std::string& s : sets) apply_set(doc, s);
    return parse_config(doc);
  }
  return load_config(path, sets);
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw DataError("failed writing " + path.string());
}

void emit_json(const json& j, const std::string& out_path) {
  std::cout << j.dump(2) << "\n";
  if (!out_path.empty()) write_json(out_path, j);
}

// Trajectory argument: a single CSV or a directory of them.
std::vector<TrackPoint> read_traj_arg(const std::string& arg) {
  if (fs::is_directory(arg)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(arg))
      if (e.path().extension() == ".csv") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no trajectory CSVs under '" + arg + "'");
    std::vector<TrackPoint> all;
    for (const fs::path& f : files) {
      const auto pts = read_trajectory_csv(f.string());
      all.insert(all.end(), pts.begin(), pts.end());
    }
    return all;
  }
  return read_trajectory_csv(arg);
}

// Point reader for clustering: any CSV with named x and y columns; rows
// without coordinates (raid episode rows in event files) are skipped.
std::vector<Vec2> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  const auto header = detail::split_csv(line);
  int xi = -1, yi = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "x") xi = static_cast<int>(i);
    if (header[i] == "y") yi = static_cast<int>(i);
  }
  if (xi < 0 || yi < 0)
    throw DataError(path + ": header must name 'x' and 'y' columns");
  std::vector<Vec2> pts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv(line);
    if (static_cast<int>(f.size()) <= std::max(xi, yi)) continue;
    if (f[static_cast<std::size_t>(xi)].empty() ||
        f[static_cast<std::size_t>(yi)].empty())
      continue;
    pts.push_back({detail::parse_double_field(f[static_cast<std::size_t>(xi)], path),
                   detail::parse_double_field(f[static_cast<std::size_t>(yi)], path)});
  }
  return pts;
}

json ci_json(const BootstrapCi& ci) {
  return {{"estimate", ci.estimate}, {"lo", ci.lo}, {"hi", ci.hi}};
}

json step_params_json(const StepParams& p) {
  json j{{"family", step_family_name(p.family)}};
  switch (p.family) {
    case StepFamily::gamma:
      j["shape"] = p.a;
      j["scale"] = p.b;
      j["mean"] = p.a * p.b;
      break;
    case StepFamily::exponential:
      j["rate"] = p.a;
      j["mean"] = 1.0 / p.a;
      break;
    case StepFamily::weibull:
      j["shape"] = p.a;
      j["scale"] = p.b;
      j["mean"] = p.b * std::tgamma(1.0 + 1.0 / p.a);
      break;
  }
  return j;
}

json turn_params_json(const TurnParams& p) {
  json j{{"family", turn_family_name(p.family)}, {"mu", p.mu}};
  if (p.family == TurnFamily::von_mises)
    j["kappa"] = p.conc;
  else
    j["rho"] = p.conc;
  return j;
}

json model_json(const HmmModel& m) {
  return {{"transition_matrix",
           {{m.p11, 1.0 - m.p11}, {1.0 - m.p22, m.p22}}},
          {"initial", {m.init[0], m.init[1]}},
          {"states",
           {{{"label", "encamped"},
             {"step", step_params_json(m.step[0])},
             {"turn", turn_params_json(m.turn[0])}},
            {{"label", "exploratory"},
             {"step", step_params_json(m.step[1])},
             {"turn", turn_params_json(m.turn[1])}}}},
          {"log_likelihood", m.log_likelihood}};
}

struct SimulateArgs {
  std::string config, out = "out";
  std::vector<std::string> sets;
  int threads = 0;
};

void cmd_simulate(const SimulateArgs& args) {
  const Config cfg = config_from(args.config, args.sets);
  const BuiltWorld w = build_world(cfg);
  const int threads = args.threads > 0 ? args.threads : w.threads;

  const auto results = run_batch(w.stack, w.scenario, w.agent, w.run, w.start,
                                 w.replicates, threads);

  fs::create_directories(fs::path(args.out) / "events");
  write_json(fs::path(args.out) / "resolved-config.json", resolved_json(cfg));

  if (w.run.record_track) {
    fs::create_directories(fs::path(args.out) / "trajectories");
    char name[32];
    for (const ReplicateResult& r : results) {
      std::snprintf(name, sizeof name, "replicate_%03d.csv", r.replicate);
      write_trajectory_csv((fs::path(args.out) / "trajectories" / name).string(),
                           {r}, w.start_date);
    }
  }
  write_days_csv((fs::path(args.out) / "days.csv").string(), results, w.start_date);
  write_events_csv((fs::path(args.out) / "events" / "events.csv").string(), results,
                   w.start_date, w.agent.ticks_per_day);

  const double ddmi = daily_dry_matter_intake_kg(w.agent.age_years);
  const RaidStats raids = compute_raid_stats(results, ddmi);
  long long plantation = 0, day_pl = 0, night_pl = 0, steep = 0, total = 0;
  long long crop = 0, infra = 0;
  int died = 0;
  double intake = 0.0, forest_intake = 0.0, cropland_intake = 0.0, fitness = 0.0;
  for (const ReplicateResult& r : results) {
    plantation += r.plantation_ticks;
    day_pl += r.day_plantation_ticks;
    night_pl += r.night_plantation_ticks;
    steep += r.steep_ticks;
    total += r.total_ticks;
    crop += r.crop_damage_events;
    infra += r.infrastructure_damage_events;
    died += r.died ? 1 : 0;
    intake += r.total_intake;
    forest_intake += r.forest_intake;
    cropland_intake += r.cropland_intake;
    fitness += r.final_fitness;
  }
  const double n = static_cast<double>(results.size());
  json summary{
      {"build", kBuildId},
      {"scenario", w.scenario.name},
      {"replicates", w.replicates},
      {"days", w.run.days},
      {"master_seed", w.run.master_seed},
      {"raid_probability", raids.raid_probability},
      {"reentry_probability", raids.reentry_probability},
      {"deprived_episode_fraction", raids.deprived_episode_fraction},
      {"starvation_probability", raids.starvation_probability},
      {"mean_episodes_per_replicate", raids.mean_episodes_per_replicate},
      {"mean_total_intake_kg", intake / n},
      {"mean_forest_intake_kg", forest_intake / n},
      {"mean_cropland_intake_kg", cropland_intake / n},
      {"mean_final_fitness", fitness / n},
      {"died", died},
      {"plantation_ticks", plantation},
      {"day_plantation_ticks", day_pl},
      {"night_plantation_ticks", night_pl},
      {"steep_tick_fraction", total > 0 ? double(steep) / double(total) : 0.0},
      {"crop_damage_events", crop},
      {"infrastructure_damage_events", infra}};
  write_json(fs::path(args.out) / "summary.json", summary);
  std::cout << "wrote " << args.out << " (" << results.size() << " replicates)\n";
}

struct HmmArgs {
  std::string track, out = "out";
  int starts = 5;
};

void cmd_calibrate_hmm(const HmmArgs& args) {
  const auto fixes = read_traj_arg(args.track);
  const StepSeries series = extract_steps(fixes);
  FitOptions opt;
  opt.n_starts = args.starts;
  const auto fits = fit_all_families(series.sequences, opt);

  json table = json::array();
  for (const FitResult& f : fits)
    table.push_back({{"step_family", step_family_name(f.step_family)},
                     {"turn_family", turn_family_name(f.turn_family)},
                     {"log_likelihood", f.model.log_likelihood},
                     {"aic", f.aic},
                     {"n_params", hmm_n_params(f.model)},
                     {"em_iterations", f.em_iterations}});
  const FitResult& best = fits.front();
  json report{{"build", kBuildId},
              {"n_sequences", series.sequences.size()},
              {"aic_table", table},
              {"best", model_json(best.model)}};
  fs::create_directories(args.out);
  write_json(fs::path(args.out) / "hmm_fit.json", report);
  std::cout << report["best"]["transition_matrix"].dump() << "\n";
}

struct GaArgs {
  std::string config, out = "out", problem;
  std::vector<std::string> sets;
  int pop = 0, generations = 0, threads = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void cmd_calibrate_ga(const GaArgs& args) {
  const Config cfg = config_from(args.config, args.sets);
  GaConfig ga;
  ga.population = args.pop > 0 ? args.pop : cfg.calibration.ga.population;
  ga.generations =
      args.generations > 0 ? args.generations : cfg.calibration.ga.generations;
  ga.seed = args.seed_set ? args.seed : cfg.calibration.ga.seed;
  const std::string problem =
      args.problem.empty() ? cfg.calibration.ga.problem : args.problem;

  GaBounds bounds;
  GaEvaluate evaluate;
  if (problem == "analytic") {
    bounds = {{-5.0, 5.0}};
    evaluate = [](const std::vector<double>& x) {
      return std::vector<double>{x[0] * x[0], (x[0] - 2.0) * (x[0] - 2.0)};
    };
  } else if (problem == "movement") {
    const MovementTargets& t = cfg.calibration.ga.targets;
    if (t.mcp_km2.mean == 0.0 && t.mcp_km2.halfwidth == 0.0 &&
        t.diel_km.mean == 0.0 && t.diel_km.halfwidth == 0.0 &&
        t.net_km.mean == 0.0 && t.net_km.halfwidth == 0.0)
      throw ConfigError(
          "'calibration.ga.targets' is required for the movement problem");
    if (cfg.calibration.ga.bounds.size() != 4)
      throw ConfigError(
          "'calibration.ga.bounds' must have 4 entries for the movement problem");
    const BuiltWorld w = build_world(cfg);
    const int threads = args.threads > 0 ? args.threads : w.threads;
    for (const auto& b : cfg.calibration.ga.bounds) bounds.push_back({b[0], b[1]});
    evaluate = make_movement_evaluate(w.stack, w.scenario, w.agent, w.run, w.start,
                                      cfg.calibration.ga.replicates, t, threads);
  } else {
    throw ConfigError("unknown GA problem '" + problem + "'");
  }

  const ParetoFront front = nsga2(evaluate, bounds, ga);

  fs::create_directories(args.out);
  const fs::path path = fs::path(args.out) / "pareto_front.csv";
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  for (std::size_t v = 0; v < bounds.size(); ++v) out << "x" << v << ",";
  const std::size_t n_obj = front.members.front().f.size();
  for (std::size_t k = 0; k < n_obj; ++k)
    out << "f" << k << (k + 1 < n_obj ? "," : "\n");
  char buf[32];
  for (const GaIndividual& m : front.members) {
    for (double x : m.x) {
      std::snprintf(buf, sizeof buf, "%.9f,", x);
      out << buf;
    }
    for (std::size_t k = 0; k < n_obj; ++k) {
      std::snprintf(buf, sizeof buf, "%.9f%s", m.f[k], k + 1 < n_obj ? "," : "\n");
      out << buf;
    }
  }
  if (!out) throw DataError("failed writing " + path.string());
  std::cout << "front size " << front.members.size() << " -> " << path.string()
            << "\n";
}

struct SlopeArgs {
  std::string config, out = "out", tolerances;
  std::vector<std::string> sets;
  int threads = 0;
};

void cmd_calibrate_slope(const SlopeArgs& args) {
  const Config cfg = config_from(args.config, args.sets);
  std::vector<double> tol = cfg.calibration.slope.tolerances;
  if (!args.tolerances.empty()) {
    tol.clear();
    std::stringstream ss(args.tolerances);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        tol.push_back(std::stod(item));
      } catch (...) {
        throw ConfigError("--tolerances expects comma-separated numbers");
      }
    }
  }
  const BuiltWorld w = build_world(cfg);
  const int threads = args.threads > 0 ? args.threads : w.threads;
  const SlopeTuneResult res = tune_slope_tolerance(
      w.stack, w.scenario, w.agent, w.run, w.start, cfg.calibration.slope.replicates,
      tol, cfg.calibration.slope.max_fraction, threads);

  json rows = json::array();
  for (const SlopeSweepRow& r : res.sweep)
    rows.push_back({{"tolerance", r.tolerance}, {"steep_fraction", r.steep_fraction}});
  json report{{"build", kBuildId},
              {"chosen_tolerance", res.tolerance},
              {"max_fraction", cfg.calibration.slope.max_fraction},
              {"sweep", rows}};
  fs::create_directories(args.out);
  write_json(fs::path(args.out) / "slope_sweep.json", report);
  std::cout << "chosen tolerance " << res.tolerance << "\n";
}

void cmd_analyze_mcp(const std::string& traj, const std::string& out) {
  const auto pts = read_traj_arg(traj);
  std::vector<Vec2> xy;
  xy.reserve(pts.size());
  for (const TrackPoint& p : pts) xy.push_back({p.x, p.y});
  const McpResult m = mcp_area(xy);
  emit_json({{"area_km2", m.area_km2},
             {"degenerate", m.degenerate},
             {"hull_points", m.hull.size()}},
            out);
}

void cmd_analyze_kde(const std::string& traj, double cell, double pad,
                     const std::string& out) {
  const auto pts = read_traj_arg(traj);
  std::vector<Vec2> xy;
  xy.reserve(pts.size());
  for (const TrackPoint& p : pts) xy.push_back({p.x, p.y});
  const KdeResult kde = kde_grid(xy, cell, pad);
  fs::create_directories(out);
  save_ascii_grid(kde.density, (fs::path(out) / "kde_density.asc").string());
  // "100% space use": every cell carrying mass above machine epsilon
  std::size_t occupied = 0;
  for (double v : kde.density.values)
    if (v > std::numeric_limits<double>::epsilon()) ++occupied;
  const json report{{"area_km2_50", kde_level_area_km2(kde, 0.50)},
                    {"area_km2_95", kde_level_area_km2(kde, 0.95)},
                    {"area_km2_100", double(occupied) * kde.cell_area_km2},
                    {"cell_m", cell}};
  write_json(fs::path(out) / "kde_report.json", report);
  std::cout << report.dump(2) << "\n";
}

void cmd_analyze_displacement(const std::string& traj, const std::string& out) {
  const auto pts = read_traj_arg(traj);
  const auto rows = displacement_by_day(pts);
  if (rows.empty()) throw DataError("no trajectory days to analyze");
  fs::create_directories(out);
  const fs::path path = fs::path(out) / "displacement.csv";
  std::ofstream csv(path);
  if (!csv) throw DataError("cannot open '" + path.string() + "' for writing");
  csv << "replicate,day,diel_km,net_km\n";
  char buf[96];
  double diel = 0.0, net = 0.0;
  for (const DayDisplacement& d : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.6f,%.6f\n", d.replicate, d.day, d.diel_km,
                  d.net_km);
    csv << buf;
    diel += d.diel_km;
    net += d.net_km;
  }
  if (!csv) throw DataError("failed writing " + path.string());
  emit_json({{"mean_diel_km", diel / double(rows.size())},
             {"mean_net_km", net / double(rows.size())},
             {"days", rows.size()}},
            (fs::path(out) / "displacement.json").string());
}

void cmd_analyze_dbscan(const std::string& points, double eps, int min_pts,
                        const std::string& out) {
  const auto pts = read_points_csv(points);
  const auto labels = dbscan(pts, eps, min_pts);
  std::ofstream csv(out);
  if (!csv) throw DataError("cannot open '" + out + "' for writing");
  csv << "x,y,cluster\n";
  char buf[96];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%d\n", pts[i].x, pts[i].y, labels[i]);
    csv << buf;
  }
  if (!csv) throw DataError("failed writing " + out);
  const int clusters =
      pts.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::cout << "clusters " << std::max(0, clusters) << ", points " << pts.size()
            << " -> " << out << "\n";
}

// Rebuild the per-replicate episode/day summaries a raid analysis needs from
// the CSVs a simulate run wrote.
void cmd_analyze_raids(const std::string& runs, double ddmi, const std::string& out) {
  const fs::path days_path = fs::path(runs) / "days.csv";
  std::ifstream days(days_path);
  if (!days) throw DataError("cannot open '" + days_path.string() + "'");
  std::string line;
  if (!std::getline(days, line) || line.rfind("replicate,day,date", 0) != 0)
    throw DataError(days_path.string() + ": unexpected header");
  std::map<int, ReplicateResult> by_rep;
  while (std::getline(days, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv(line);
    if (f.size() < 12) throw DataError(days_path.string() + ": short row");
    const int rep = static_cast<int>(detail::parse_int_field(f[0], days_path.string()));
    DayRow row;
    row.day = static_cast<int>(detail::parse_int_field(f[1], days_path.string()));
    row.intake = detail::parse_double_field(f[3], days_path.string());
    row.forest_intake = detail::parse_double_field(f[4], days_path.string());
    row.cropland_intake = detail::parse_double_field(f[5], days_path.string());
    by_rep[rep].replicate = rep;
    by_rep[rep].days.push_back(row);
  }
  const fs::path events_path = fs::path(runs) / "events" / "events.csv";
  std::ifstream events(events_path);
  if (!events) throw DataError("cannot open '" + events_path.string() + "'");
  if (!std::getline(events, line) || line.rfind("replicate,day,tick", 0) != 0)
    throw DataError(events_path.string() + ": unexpected header");
  while (std::getline(events, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv(line);
    if (f.size() < 5) continue;
    if (f[4] != "raid" && f[4] != "raid_deprived") continue;
    const int rep = static_cast<int>(detail::parse_int_field(f[0], events_path.string()));
    RaidEpisode ep;
    ep.start_tick = static_cast<int>(detail::parse_int_field(f[2], events_path.string()));
    ep.end_tick = ep.start_tick;
    ep.deprived_at_onset = f[4] == "raid_deprived";
    by_rep[rep].episodes.push_back(ep);
  }
  std::vector<ReplicateResult> results;
  results.reserve(by_rep.size());
  for (auto& [rep, r] : by_rep) {
    (void)rep;
    results.push_back(std::move(r));
  }
  const RaidStats st = compute_raid_stats(results, ddmi);
  emit_json({{"raid_probability", st.raid_probability},
             {"reentry_probability", st.reentry_probability},
             {"deprived_episode_fraction", st.deprived_episode_fraction},
             {"starvation_probability", st.starvation_probability},
             {"mean_episodes_per_replicate", st.mean_episodes_per_replicate},
             {"ddmi_kg", ddmi},
             {"replicates", results.size()}},
            out);
}

void cmd_analyze_converge(const std::string& runs, const std::string& metric,
                          const std::string& eps_arg, const std::string& out) {
  std::vector<double> epsilons = {0.1, 0.075, 0.05, 0.025};
  if (!eps_arg.empty()) {
    epsilons.clear();
    std::stringstream ss(eps_arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        epsilons.push_back(std::stod(item));
      } catch (...) {
        throw ConfigError("--eps expects comma-separated numbers");
      }
    }
  }
  std::vector<double> samples;
  if (metric == "mcp") {
    const fs::path dir = fs::path(runs) / "trajectories";
    std::vector<fs::path> files;
    if (fs::is_directory(dir))
      for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".csv") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
      throw DataError("no trajectories under '" + dir.string() + "'");
    for (const fs::path& f : files) {
      const auto pts = read_trajectory_csv(f.string());
      std::vector<Vec2> xy;
      xy.reserve(pts.size());
      for (const TrackPoint& p : pts) xy.push_back({p.x, p.y});
      const McpResult m = mcp_area(xy);
      samples.push_back(m.degenerate ? 0.0 : m.area_km2);
    }
  } else if (metric == "intake") {
    const fs::path days_path = fs::path(runs) / "days.csv";
    std::ifstream days(days_path);
    if (!days) throw DataError("cannot open '" + days_path.string() + "'");
    std::string line;
    if (!std::getline(days, line) || line.rfind("replicate,day,date", 0) != 0)
      throw DataError(days_path.string() + ": unexpected header");
    std::map<int, std::pair<double, int>> acc;
    while (std::getline(days, line)) {
      if (line.empty()) continue;
      const auto f = detail::split_csv(line);
      if (f.size() < 12) continue;
      const int rep = static_cast<int>(detail::parse_int_field(f[0], days_path.string()));
      acc[rep].first += detail::parse_double_field(f[3], days_path.string());
      acc[rep].second += 1;
    }
    for (const auto& [rep, sum] : acc) {
      (void)rep;
      samples.push_back(sum.second ? sum.first / sum.second : 0.0);
    }
  } else {
    throw ConfigError("--metric must be 'mcp' or 'intake'");
  }

  const ConvergenceReport rep = convergence_cv(samples, epsilons);
  json nmin = json::array();
  for (const auto& [eps, n] : rep.nmin)
    nmin.push_back({{"epsilon", eps}, {"nmin", n}});
  emit_json({{"metric", metric},
             {"replicates", samples.size()},
             {"cv_curve", rep.curve},
             {"nmin", nmin}},
            out);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"agent-based elephant crop-raid simulator"};
  app.set_version_flag("--version", std::string(kBuildId));
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "run a batch simulation");
  simulate->add_option("--config", sim.config, "config JSON path");
  simulate->add_option("--set", sim.sets, "override dotted.path=value")
      ->take_all();
  simulate->add_option("--out", sim.out, "output directory");
  simulate->add_option("--threads", sim.threads, "worker thread cap");

  CLI::App* calibrate = app.add_subcommand("calibrate", "calibration pipelines");
  calibrate->require_subcommand(1);

  HmmArgs hmm_args;
  CLI::App* chmm = calibrate->add_subcommand("hmm", "fit the two-state movement HMM");
  chmm->add_option("--track", hmm_args.track, "relocation CSV")->required();
  chmm->add_option("--out", hmm_args.out, "output directory");
  chmm->add_option("--starts", hmm_args.starts, "EM multi-starts");

  GaArgs ga_args;
  CLI::App* cga = calibrate->add_subcommand("ga", "NSGA-II inverse calibration");
  cga->add_option("--config", ga_args.config, "config JSON path");
  cga->add_option("--set", ga_args.sets, "override dotted.path=value")->take_all();
  cga->add_option("--out", ga_args.out, "output directory");
  cga->add_option("--pop", ga_args.pop, "population size");
  cga->add_option("--generations", ga_args.generations, "generation count");
  cga->add_option("--problem", ga_args.problem, "analytic or movement");
  cga->add_option("--threads", ga_args.threads, "worker thread cap");
  cga->add_option("--seed", ga_args.seed, "GA seed")
      ->each([&](const std::string&) { ga_args.seed_set = true; });

  SlopeArgs slope_args;
  CLI::App* cslope = calibrate->add_subcommand("slope", "slope-tolerance sweep");
  cslope->add_option("--config", slope_args.config, "config JSON path");
  cslope->add_option("--set", slope_args.sets, "override dotted.path=value")
      ->take_all();
  cslope->add_option("--out", slope_args.out, "output directory");
  cslope->add_option("--tolerances", slope_args.tolerances,
                     "comma-separated candidates");
  cslope->add_option("--threads", slope_args.threads, "worker thread cap");

  CLI::App* analyze = app.add_subcommand("analyze", "post-hoc analyses");
  analyze->require_subcommand(1);

  std::string a_traj, a_out, a_points, a_runs, a_metric = "mcp", a_eps;
  double a_cell = 100.0, a_pad = 1500.0, a_db_eps = 1000.0, a_ddmi = 0.0;
  int a_min_pts = 4;

  CLI::App* amcp = analyze->add_subcommand("mcp", "minimum convex polygon area");
  amcp->add_option("--traj", a_traj, "trajectory CSV or directory")->required();
  amcp->add_option("--out", a_out, "report JSON path");

  CLI::App* akde = analyze->add_subcommand("kde", "kernel density home range");
  akde->add_option("--traj", a_traj, "trajectory CSV or directory")->required();
  akde->add_option("--cell", a_cell, "grid cell size (m)");
  akde->add_option("--pad", a_pad, "grid padding (m)");
  akde->add_option("--out", a_out, "output directory")->required();

  CLI::App* adis = analyze->add_subcommand("displacement", "daily displacement");
  adis->add_option("--traj", a_traj, "trajectory CSV or directory")->required();
  adis->add_option("--out", a_out, "output directory")->required();

  CLI::App* adb = analyze->add_subcommand("dbscan", "cluster conflict points");
  adb->add_option("--points", a_points, "CSV with x,y columns")->required();
  adb->add_option("--eps", a_db_eps, "neighborhood radius (m)");
  adb->add_option("--min-pts", a_min_pts, "core point threshold");
  adb->add_option("--out", a_out, "labeled CSV path")->required();

  CLI::App* araid = analyze->add_subcommand("raids", "raid and starvation stats");
  araid->add_option("--runs", a_runs, "simulate output directory")->required();
  araid->add_option("--ddmi", a_ddmi, "daily demand (kg), default age-40 bull");
  araid->add_option("--out", a_out, "report JSON path");

  CLI::App* aconv = analyze->add_subcommand("converge", "replicate convergence");
  aconv->add_option("--runs", a_runs, "simulate output directory")->required();
  aconv->add_option("--metric", a_metric, "mcp or intake");
  aconv->add_option("--eps", a_eps, "comma-separated epsilons");
  aconv->add_option("--out", a_out, "report JSON path");

  try {
    app.parse(argc, argv);
    if (*simulate) cmd_simulate(sim);
    if (*chmm) cmd_calibrate_hmm(hmm_args);
    if (*cga) cmd_calibrate_ga(ga_args);
    if (*cslope) cmd_calibrate_slope(slope_args);
    if (*amcp) cmd_analyze_mcp(a_traj, a_out);
    if (*akde) cmd_analyze_kde(a_traj, a_cell, a_pad, a_out);
    if (*adis) cmd_analyze_displacement(a_traj, a_out);
    if (*adb) cmd_analyze_dbscan(a_points, a_db_eps, a_min_pts, a_out);
    if (*araid)
      cmd_analyze_raids(a_runs, a_ddmi > 0.0 ? a_ddmi : daily_dry_matter_intake_kg(40.0),
                        a_out);
    if (*aconv) cmd_analyze_converge(a_runs, a_metric, a_eps, a_out);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
