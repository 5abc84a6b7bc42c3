#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "elesim/agent.hpp"
#include "elesim/engine.hpp"
#include "elesim/environment.hpp"
#include "elesim/io.hpp"
#include "elesim/objectives.hpp"
#include "elesim/synthetic.hpp"
#include "elesim/terrain.hpp"

namespace elesim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LandscapeConfig {
  bool synthetic = true;
  std::uint64_t seed = 1;   // synthetic landscape seed
  std::string elevation;    // ESRI ASCII paths when synthetic = false
  std::string landuse;
  std::string buildings;
};

struct RunSettings {
  int month = 3; // dry months {2,3,4,5} default to hot afternoons
  int year = 2019;
  int days = 7;
  int replicates = 192;
  std::uint64_t master_seed = 1;
  bool record_track = true;
  double prob_crop_damage = 0.1;
  double prob_infrastructure_damage = 0.05;
  std::optional<double> tmin, tmax; // explicit override of the month preset
  int threads = 0;                  // 0: hardware concurrency
  int start_row = -1, start_col = -1; // -1: landscape default start
};

struct GaSettings {
  int population = 50;
  int generations = 100;
  std::uint64_t seed = 1;
  int replicates = 8; // batch size per objective evaluation
  std::string problem = "analytic"; // or "movement"
  std::vector<std::array<double, 2>> bounds = {
      {0.01, 1.0},     // forest_food_percent
      {1.0, 25.0},     // forest_max_food_value
      {0.05, 1.0},     // percent_memory
      {300.0, 1500.0}, // radius_food_search (m)
  };
  MovementTargets targets; // required for the movement problem
};

struct SlopeSettings {
  std::vector<double> tolerances = {25, 50, 100, 200};
  double max_fraction = 0.01;
  int replicates = 16;
};

struct HmmSettings {
  std::string track; // relocation CSV
  int starts = 5;
};

struct CalibrationSettings {
  GaSettings ga;
  SlopeSettings slope;
  HmmSettings hmm;
};

struct AnalysisSettings {
  double kde_cell_m = 100.0;
  double kde_pad_m = 1500.0;
  double dbscan_eps_m = 1000.0;
  int dbscan_min_pts = 4;
  std::vector<double> epsilons = {0.1, 0.075, 0.05, 0.025};
};

struct Config {
  LandscapeConfig landscape;
  ScenarioConfig scenario;
  AgentParams agent;
  RunSettings run;
  CalibrationSettings calibration;
  AnalysisSettings analysis;
};

namespace cfgdetail {

using nlohmann::json;

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline void check_keys(const json& obj, const std::string& path,
                       std::initializer_list<const char*> allowed) {
  if (!obj.is_object())
    throw ConfigError("'" + path + "' must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool known =
        std::any_of(allowed.begin(), allowed.end(),
                    [&](const char* k) { return it.key() == k; });
    if (!known)
      throw ConfigError("unknown config key '" + join(path, it.key()) + "'");
  }
}

inline const json* section(const json& doc, const char* name) {
  if (!doc.contains(name)) return nullptr;
  const json& s = doc.at(name);
  if (!s.is_object())
    throw ConfigError(std::string("'") + name + "' must be an object");
  return &s;
}

inline double get_number(const json& obj, const char* key, const std::string& path,
                         double def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError("'" + join(path, key) + "' must be a number");
  return v.get<double>();
}

inline int get_int(const json& obj, const char* key, const std::string& path,
                   int def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError("'" + join(path, key) + "' must be an integer");
  return v.get<int>();
}

inline std::uint64_t get_seed(const json& obj, const char* key,
                              const std::string& path, std::uint64_t def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0 &&
                                 !v.is_number_unsigned()))
    throw ConfigError("'" + join(path, key) + "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

inline bool get_bool(const json& obj, const char* key, const std::string& path,
                     bool def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_boolean())
    throw ConfigError("'" + join(path, key) + "' must be a boolean");
  return v.get<bool>();
}

inline std::string get_string(const json& obj, const char* key,
                              const std::string& path, std::string def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_string())
    throw ConfigError("'" + join(path, key) + "' must be a string");
  return v.get<std::string>();
}

inline std::vector<double> get_number_list(const json& obj, const char* key,
                                           const std::string& path,
                                           std::vector<double> def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_array())
    throw ConfigError("'" + join(path, key) + "' must be an array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number())
      throw ConfigError("'" + join(path, key) + "' must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

inline CalibrationTarget get_target(const json& obj, const char* key,
                                    const std::string& path, CalibrationTarget def) {
  if (!obj.contains(key)) return def;
  const auto pair = get_number_list(obj, key, path, {});
  require(pair.size() == 2 && pair[1] >= 0.0,
          "'" + join(path, key) + "' must be [mean, halfwidth]");
  return {pair[0], pair[1]};
}

} // namespace cfgdetail

inline Config parse_config(const nlohmann::json& doc) {
  using namespace cfgdetail;
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
  check_keys(doc, "",
             {"landscape", "scenario", "agent", "run", "calibration", "analysis"});
  Config cfg;

  if (const json* ls = section(doc, "landscape")) {
    const std::string p = "landscape";
    check_keys(*ls, p, {"synthetic", "seed", "elevation", "landuse", "buildings"});
    cfg.landscape.synthetic = get_bool(*ls, "synthetic", p, cfg.landscape.synthetic);
    cfg.landscape.seed = get_seed(*ls, "seed", p, cfg.landscape.seed);
    cfg.landscape.elevation = get_string(*ls, "elevation", p, cfg.landscape.elevation);
    cfg.landscape.landuse = get_string(*ls, "landuse", p, cfg.landscape.landuse);
    cfg.landscape.buildings = get_string(*ls, "buildings", p, cfg.landscape.buildings);
  }
  if (!cfg.landscape.synthetic) {
    require(!cfg.landscape.elevation.empty(),
            "'landscape.elevation' is required when synthetic is false");
    require(!cfg.landscape.landuse.empty(),
            "'landscape.landuse' is required when synthetic is false");
    require(!cfg.landscape.buildings.empty(),
            "'landscape.buildings' is required when synthetic is false");
  }

  if (const json* sc = section(doc, "scenario")) {
    const std::string p = "scenario";
    check_keys(*sc, p,
               {"name", "forest_food_percent", "cropland_food_percent",
                "forest_max_food_value", "cropland_max_food_value"});
    if (sc->contains("name")) {
      const std::string name = get_string(*sc, "name", p, cfg.scenario.name);
      try {
        cfg.scenario = scenario_by_name(name);
      } catch (const DataError& e) {
        throw ConfigError("'scenario.name': " + std::string(e.what()));
      }
    }
    cfg.scenario.forest_food_percent =
        get_number(*sc, "forest_food_percent", p, cfg.scenario.forest_food_percent);
    cfg.scenario.cropland_food_percent = get_number(*sc, "cropland_food_percent", p,
                                                    cfg.scenario.cropland_food_percent);
    cfg.scenario.forest_max_food_value = get_number(*sc, "forest_max_food_value", p,
                                                    cfg.scenario.forest_max_food_value);
    cfg.scenario.cropland_max_food_value = get_number(
        *sc, "cropland_max_food_value", p, cfg.scenario.cropland_max_food_value);
    require(cfg.scenario.forest_food_percent >= 0.0 &&
                cfg.scenario.forest_food_percent <= 1.0,
            "'scenario.forest_food_percent' must lie in [0, 1]");
    require(cfg.scenario.cropland_food_percent >= 0.0 &&
                cfg.scenario.cropland_food_percent <= 1.0,
            "'scenario.cropland_food_percent' must lie in [0, 1]");
    require(cfg.scenario.forest_max_food_value > 0.0,
            "'scenario.forest_max_food_value' must be positive");
    require(cfg.scenario.cropland_max_food_value > 0.0,
            "'scenario.cropland_max_food_value' must be positive");
  }

  if (const json* ag = section(doc, "agent")) {
    const std::string p = "agent";
    check_keys(*ag, p,
               {"age_years", "fitness_threshold", "radius_food_search",
                "radius_water_search", "radius_forest_search", "knowledge_from_fringe",
                "terrain_radius", "slope_tolerance", "percent_memory",
                "threshold_num_days", "aggression", "thermoregulation_threshold",
                "temperature_check_first", "food_habituation", "dawn_lead_hours"});
    AgentParams& a = cfg.agent;
    a.age_years = get_number(*ag, "age_years", p, a.age_years);
    a.fitness_threshold = get_number(*ag, "fitness_threshold", p, a.fitness_threshold);
    a.radius_food_search = get_number(*ag, "radius_food_search", p, a.radius_food_search);
    a.radius_water_search =
        get_number(*ag, "radius_water_search", p, a.radius_water_search);
    a.radius_forest_search =
        get_number(*ag, "radius_forest_search", p, a.radius_forest_search);
    a.knowledge_from_fringe =
        get_number(*ag, "knowledge_from_fringe", p, a.knowledge_from_fringe);
    a.terrain_radius = get_number(*ag, "terrain_radius", p, a.terrain_radius);
    a.slope_tolerance = get_number(*ag, "slope_tolerance", p, a.slope_tolerance);
    a.percent_memory = get_number(*ag, "percent_memory", p, a.percent_memory);
    a.threshold_num_days = get_int(*ag, "threshold_num_days", p, a.threshold_num_days);
    a.aggression = get_number(*ag, "aggression", p, a.aggression);
    a.thermoregulation_threshold = get_number(*ag, "thermoregulation_threshold", p,
                                              a.thermoregulation_threshold);
    a.temperature_check_first =
        get_bool(*ag, "temperature_check_first", p, a.temperature_check_first);
    a.food_habituation = get_bool(*ag, "food_habituation", p, a.food_habituation);
    a.dawn_lead_hours = get_number(*ag, "dawn_lead_hours", p, a.dawn_lead_hours);

    require(a.age_years > 0.0, "'agent.age_years' must be positive");
    require(a.fitness_threshold >= 0.0 && a.fitness_threshold <= 1.0,
            "'agent.fitness_threshold' must lie in [0, 1]");
    require(a.aggression >= 0.0 && a.aggression <= 1.0,
            "'agent.aggression' must lie in [0, 1]");
    require(a.percent_memory >= 0.0 && a.percent_memory <= 1.0,
            "'agent.percent_memory' must lie in [0, 1]");
    require(a.radius_food_search > 0.0 && a.radius_water_search > 0.0 &&
                a.radius_forest_search > 0.0 && a.terrain_radius > 0.0,
            "'agent' search radii must be positive");
    require(a.knowledge_from_fringe >= 0.0,
            "'agent.knowledge_from_fringe' must be nonnegative");
    require(a.slope_tolerance >= 0.0, "'agent.slope_tolerance' must be nonnegative");
    require(a.threshold_num_days >= 0,
            "'agent.threshold_num_days' must be nonnegative");
    require(a.dawn_lead_hours >= 0.0 && a.dawn_lead_hours <= 12.0,
            "'agent.dawn_lead_hours' must lie in [0, 12]");
    require(a.thermoregulation_threshold == 28.0 ||
                a.thermoregulation_threshold == 32.0,
            "'agent.thermoregulation_threshold' must be 28 or 32");
  }

  if (const json* rn = section(doc, "run")) {
    const std::string p = "run";
    check_keys(*rn, p,
               {"month", "year", "days", "replicates", "master_seed", "record_track",
                "prob_crop_damage", "prob_infrastructure_damage", "tmin", "tmax",
                "threads", "start_row", "start_col"});
    RunSettings& r = cfg.run;
    r.month = get_int(*rn, "month", p, r.month);
    r.year = get_int(*rn, "year", p, r.year);
    r.days = get_int(*rn, "days", p, r.days);
    r.replicates = get_int(*rn, "replicates", p, r.replicates);
    r.master_seed = get_seed(*rn, "master_seed", p, r.master_seed);
    r.record_track = get_bool(*rn, "record_track", p, r.record_track);
    r.prob_crop_damage = get_number(*rn, "prob_crop_damage", p, r.prob_crop_damage);
    r.prob_infrastructure_damage = get_number(*rn, "prob_infrastructure_damage", p,
                                              r.prob_infrastructure_damage);
    if (rn->contains("tmin")) r.tmin = get_number(*rn, "tmin", p, 0.0);
    if (rn->contains("tmax")) r.tmax = get_number(*rn, "tmax", p, 0.0);
    r.threads = get_int(*rn, "threads", p, r.threads);
    r.start_row = get_int(*rn, "start_row", p, r.start_row);
    r.start_col = get_int(*rn, "start_col", p, r.start_col);

    require(r.month >= 1 && r.month <= 12, "'run.month' must lie in 1..12");
    require(r.year >= 1970 && r.year <= 2100, "'run.year' must lie in 1970..2100");
    require(r.days >= 1, "'run.days' must be at least 1");
    require(r.replicates >= 1, "'run.replicates' must be at least 1");
    require(r.prob_crop_damage >= 0.0 && r.prob_crop_damage <= 1.0,
            "'run.prob_crop_damage' must lie in [0, 1]");
    require(r.prob_infrastructure_damage >= 0.0 &&
                r.prob_infrastructure_damage <= 1.0,
            "'run.prob_infrastructure_damage' must lie in [0, 1]");
    require(r.threads >= 0, "'run.threads' must be nonnegative");
    require(!(r.tmin && r.tmax) || *r.tmin <= *r.tmax,
            "'run.tmin' must not exceed 'run.tmax'");
    require((r.tmin.has_value()) == (r.tmax.has_value()),
            "'run.tmin' and 'run.tmax' must be given together");
  }

  if (const json* cal = section(doc, "calibration")) {
    const std::string p = "calibration";
    check_keys(*cal, p, {"ga", "slope", "hmm"});
    if (cal->contains("ga")) {
      const json& g = cal->at("ga");
      const std::string pg = "calibration.ga";
      check_keys(g, pg,
                 {"population", "generations", "seed", "replicates", "problem",
                  "bounds", "targets"});
      GaSettings& ga = cfg.calibration.ga;
      ga.population = get_int(g, "population", pg, ga.population);
      ga.generations = get_int(g, "generations", pg, ga.generations);
      ga.seed = get_seed(g, "seed", pg, ga.seed);
      ga.replicates = get_int(g, "replicates", pg, ga.replicates);
      ga.problem = get_string(g, "problem", pg, ga.problem);
      require(ga.population >= 4 && ga.population % 2 == 0,
              "'calibration.ga.population' must be even and at least 4");
      require(ga.generations >= 1,
              "'calibration.ga.generations' must be at least 1");
      require(ga.replicates >= 1, "'calibration.ga.replicates' must be at least 1");
      require(ga.problem == "analytic" || ga.problem == "movement",
              "'calibration.ga.problem' must be 'analytic' or 'movement'");
      if (g.contains("bounds")) {
        const json& b = g.at("bounds");
        require(b.is_array() && !b.empty(),
                "'calibration.ga.bounds' must be a nonempty array of [lo, hi]");
        ga.bounds.clear();
        for (const json& e : b) {
          require(e.is_array() && e.size() == 2 && e[0].is_number() &&
                      e[1].is_number() && e[0].get<double>() <= e[1].get<double>(),
                  "'calibration.ga.bounds' entries must be [lo, hi] with lo <= hi");
          ga.bounds.push_back({e[0].get<double>(), e[1].get<double>()});
        }
      }
      if (g.contains("targets")) {
        const json& t = g.at("targets");
        const std::string pt = pg + ".targets";
        check_keys(t, pt, {"mcp_km2", "diel_km", "net_km"});
        ga.targets.mcp_km2 = get_target(t, "mcp_km2", pt, ga.targets.mcp_km2);
        ga.targets.diel_km = get_target(t, "diel_km", pt, ga.targets.diel_km);
        ga.targets.net_km = get_target(t, "net_km", pt, ga.targets.net_km);
      }
    }
    if (cal->contains("slope")) {
      const json& s = cal->at("slope");
      const std::string ps = "calibration.slope";
      check_keys(s, ps, {"tolerances", "max_fraction", "replicates"});
      SlopeSettings& sl = cfg.calibration.slope;
      sl.tolerances = get_number_list(s, "tolerances", ps, sl.tolerances);
      sl.max_fraction = get_number(s, "max_fraction", ps, sl.max_fraction);
      sl.replicates = get_int(s, "replicates", ps, sl.replicates);
      require(!sl.tolerances.empty(),
              "'calibration.slope.tolerances' must be nonempty");
      for (double t : sl.tolerances)
        require(t >= 0.0, "'calibration.slope.tolerances' must be nonnegative");
      require(sl.max_fraction > 0.0 && sl.max_fraction <= 1.0,
              "'calibration.slope.max_fraction' must lie in (0, 1]");
      require(sl.replicates >= 1,
              "'calibration.slope.replicates' must be at least 1");
    }
    if (cal->contains("hmm")) {
      const json& hm = cal->at("hmm");
      const std::string ph = "calibration.hmm";
      check_keys(hm, ph, {"track", "starts"});
      cfg.calibration.hmm.track = get_string(hm, "track", ph, cfg.calibration.hmm.track);
      cfg.calibration.hmm.starts = get_int(hm, "starts", ph, cfg.calibration.hmm.starts);
      require(cfg.calibration.hmm.starts >= 1,
              "'calibration.hmm.starts' must be at least 1");
    }
  }

  if (const json* an = section(doc, "analysis")) {
    const std::string p = "analysis";
    check_keys(*an, p,
               {"kde_cell_m", "kde_pad_m", "dbscan_eps_m", "dbscan_min_pts",
                "epsilons"});
    AnalysisSettings& a = cfg.analysis;
    a.kde_cell_m = get_number(*an, "kde_cell_m", p, a.kde_cell_m);
    a.kde_pad_m = get_number(*an, "kde_pad_m", p, a.kde_pad_m);
    a.dbscan_eps_m = get_number(*an, "dbscan_eps_m", p, a.dbscan_eps_m);
    a.dbscan_min_pts = get_int(*an, "dbscan_min_pts", p, a.dbscan_min_pts);
    a.epsilons = get_number_list(*an, "epsilons", p, a.epsilons);
    require(a.kde_cell_m > 0.0, "'analysis.kde_cell_m' must be positive");
    require(a.kde_pad_m >= 0.0, "'analysis.kde_pad_m' must be nonnegative");
    require(a.dbscan_eps_m > 0.0, "'analysis.dbscan_eps_m' must be positive");
    require(a.dbscan_min_pts >= 1, "'analysis.dbscan_min_pts' must be at least 1");
    require(!a.epsilons.empty(), "'analysis.epsilons' must be nonempty");
    for (double e : a.epsilons)
      require(e > 0.0, "'analysis.epsilons' must be positive");
  }

  return cfg;
}

// Set `dotted.path=value` into the raw document; the value is parsed as JSON
// when possible and as a bare string otherwise.
inline void apply_set(nlohmann::json& doc, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("--set expects dotted.path=value, got '" + spec + "'");
  const std::string path = spec.substr(0, eq);
  const std::string raw = spec.substr(eq + 1);
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(raw);
  } catch (...) {
    value = raw;
  }
  nlohmann::json* cur = &doc;
  std::size_t pos = 0;
  while (true) {
    const auto dot = path.find('.', pos);
    const std::string key =
        path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (key.empty())
      throw ConfigError("--set path has an empty segment: '" + path + "'");
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      return;
    }
    nlohmann::json& child = (*cur)[key];
    if (!child.is_object()) child = nlohmann::json::object();
    cur = &child;
    pos = dot + 1;
  }
}

inline Config load_config(const std::string& path,
                          const std::vector<std::string>& sets = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
  for (const std::string& s : sets) apply_set(doc, s);
  return parse_config(doc);
}

// Full provenance dump: every effective value, defaults included. Feeding it
// back through parse_config reproduces the same configuration.
inline nlohmann::json resolved_json(const Config& cfg) {
  nlohmann::json j;
  j["landscape"] = {{"synthetic", cfg.landscape.synthetic},
                    {"seed", cfg.landscape.seed},
                    {"elevation", cfg.landscape.elevation},
                    {"landuse", cfg.landscape.landuse},
                    {"buildings", cfg.landscape.buildings}};
  j["scenario"] = {{"name", cfg.scenario.name},
                   {"forest_food_percent", cfg.scenario.forest_food_percent},
                   {"cropland_food_percent", cfg.scenario.cropland_food_percent},
                   {"forest_max_food_value", cfg.scenario.forest_max_food_value},
                   {"cropland_max_food_value", cfg.scenario.cropland_max_food_value}};
  j["agent"] = {{"age_years", cfg.agent.age_years},
                {"fitness_threshold", cfg.agent.fitness_threshold},
                {"radius_food_search", cfg.agent.radius_food_search},
                {"radius_water_search", cfg.agent.radius_water_search},
                {"radius_forest_search", cfg.agent.radius_forest_search},
                {"knowledge_from_fringe", cfg.agent.knowledge_from_fringe},
                {"terrain_radius", cfg.agent.terrain_radius},
                {"slope_tolerance", cfg.agent.slope_tolerance},
                {"percent_memory", cfg.agent.percent_memory},
                {"threshold_num_days", cfg.agent.threshold_num_days},
                {"aggression", cfg.agent.aggression},
                {"thermoregulation_threshold", cfg.agent.thermoregulation_threshold},
                {"temperature_check_first", cfg.agent.temperature_check_first},
                {"food_habituation", cfg.agent.food_habituation},
                {"dawn_lead_hours", cfg.agent.dawn_lead_hours}};
  j["run"] = {{"month", cfg.run.month},
              {"year", cfg.run.year},
              {"days", cfg.run.days},
              {"replicates", cfg.run.replicates},
              {"master_seed", cfg.run.master_seed},
              {"record_track", cfg.run.record_track},
              {"prob_crop_damage", cfg.run.prob_crop_damage},
              {"prob_infrastructure_damage", cfg.run.prob_infrastructure_damage},
              {"threads", cfg.run.threads},
              {"start_row", cfg.run.start_row},
              {"start_col", cfg.run.start_col}};
  if (cfg.run.tmin) j["run"]["tmin"] = *cfg.run.tmin;
  if (cfg.run.tmax) j["run"]["tmax"] = *cfg.run.tmax;
  nlohmann::json bounds = nlohmann::json::array();
  for (const auto& b : cfg.calibration.ga.bounds)
    bounds.push_back({b[0], b[1]});
  j["calibration"] = {
      {"ga",
       {{"population", cfg.calibration.ga.population},
        {"generations", cfg.calibration.ga.generations},
        {"seed", cfg.calibration.ga.seed},
        {"replicates", cfg.calibration.ga.replicates},
        {"problem", cfg.calibration.ga.problem},
        {"bounds", bounds},
        {"targets",
         {{"mcp_km2",
           {cfg.calibration.ga.targets.mcp_km2.mean,
            cfg.calibration.ga.targets.mcp_km2.halfwidth}},
          {"diel_km",
           {cfg.calibration.ga.targets.diel_km.mean,
            cfg.calibration.ga.targets.diel_km.halfwidth}},
          {"net_km",
           {cfg.calibration.ga.targets.net_km.mean,
            cfg.calibration.ga.targets.net_km.halfwidth}}}}}},
      {"slope",
       {{"tolerances", cfg.calibration.slope.tolerances},
        {"max_fraction", cfg.calibration.slope.max_fraction},
        {"replicates", cfg.calibration.slope.replicates}}},
      {"hmm",
       {{"track", cfg.calibration.hmm.track},
        {"starts", cfg.calibration.hmm.starts}}}};
  j["analysis"] = {{"kde_cell_m", cfg.analysis.kde_cell_m},
                   {"kde_pad_m", cfg.analysis.kde_pad_m},
                   {"dbscan_eps_m", cfg.analysis.dbscan_eps_m},
                   {"dbscan_min_pts", cfg.analysis.dbscan_min_pts},
                   {"epsilons", cfg.analysis.epsilons}};
  return j;
}

struct BuiltWorld {
  TerrainStack stack;
  Vec2 start{};
  ScenarioConfig scenario;
  AgentParams agent;
  RunConfig run;
  int replicates = 1;
  int threads = 1;
  CivilDate start_date{};
};

inline bool is_dry_month(int month) {
  return month >= 2 && month <= 5;
}

// Materialize the landscape and engine settings a config describes.
inline BuiltWorld build_world(const Config& cfg) {
  BuiltWorld w;
  if (cfg.landscape.synthetic) {
    SyntheticSpec spec;
    Rng rng = make_rng(cfg.landscape.seed, 0, Stream::landscape);
    SyntheticLandscape land = generate_synthetic_landscape(spec, rng);
    w.stack = std::move(land.stack);
    w.start = land.start;
  } else {
    try {
      const RasterGrid elev = load_ascii_grid(cfg.landscape.elevation);
      const RasterGrid lu =
          load_ascii_grid(cfg.landscape.landuse, NodataPolicy::error_out);
      const RasterGrid bld =
          load_ascii_grid(cfg.landscape.buildings, NodataPolicy::error_out);
      w.stack = build_stack(elev, lu, bld);
    } catch (const DataError& e) {
      throw ConfigError(std::string("landscape: ") + e.what());
    }
    w.start = cell_center(w.stack.header, w.stack.header.nrows / 2,
                          w.stack.header.ncols / 2);
  }

  if (cfg.run.start_row >= 0 || cfg.run.start_col >= 0) {
    if (cfg.run.start_row < 0 || cfg.run.start_row >= w.stack.header.nrows)
      throw ConfigError("'run.start_row' is outside the landscape");
    if (cfg.run.start_col < 0 || cfg.run.start_col >= w.stack.header.ncols)
      throw ConfigError("'run.start_col' is outside the landscape");
    w.start = cell_center(w.stack.header, cfg.run.start_row, cfg.run.start_col);
  }

  w.scenario = cfg.scenario;
  w.agent = cfg.agent;
  w.run.days = cfg.run.days;
  w.run.record_track = cfg.run.record_track;
  w.run.prob_crop_damage = cfg.run.prob_crop_damage;
  w.run.prob_infrastructure_damage = cfg.run.prob_infrastructure_damage;
  w.run.master_seed = cfg.run.master_seed;
  if (cfg.run.tmin && cfg.run.tmax) {
    w.run.temperature.tmin = *cfg.run.tmin;
    w.run.temperature.tmax = *cfg.run.tmax;
  } else if (is_dry_month(cfg.run.month)) {
    w.run.temperature.tmin = 24.0; // hot-season preset
    w.run.temperature.tmax = 40.0;
  } else {
    w.run.temperature.tmin = 20.0; // wet-season preset
    w.run.temperature.tmax = 30.0;
  }
  w.replicates = cfg.run.replicates;
  w.threads = cfg.run.threads > 0
                  ? cfg.run.threads
                  : std::max(1u, std::thread::hardware_concurrency());
  w.start_date = {cfg.run.year, cfg.run.month, 1};
  return w;
}

} // namespace elesim
