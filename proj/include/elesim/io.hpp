#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "elesim/engine.hpp"
#include "elesim/grid.hpp"

namespace elesim {

struct CivilDate {
  int y = 2019;
  int m = 3;
  int d = 1;
};

// Proleptic Gregorian day count, epoch 1970-01-01.
inline long days_from_civil(CivilDate cd) {
  int y = cd.y;
  const unsigned m = static_cast<unsigned>(cd.m);
  const unsigned d = static_cast<unsigned>(cd.d);
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3u : 9u)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

inline CivilDate civil_from_days(long z) {
  z += 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long y = static_cast<long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

inline CivilDate parse_date(const std::string& s) {
  CivilDate cd;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%d-%d-%d%c", &cd.y, &cd.m, &cd.d, &tail) != 3)
    throw DataError("invalid date '" + s + "' (expected YYYY-MM-DD)");
  if (cd.m < 1 || cd.m > 12 || cd.d < 1 || cd.d > 31)
    throw DataError("invalid date '" + s + "': out-of-range field");
  const CivilDate back = civil_from_days(days_from_civil(cd));
  if (back.y != cd.y || back.m != cd.m || back.d != cd.d)
    throw DataError("invalid date '" + s + "': no such calendar day");
  return cd;
}

inline std::string format_date(CivilDate start, int day_index) {
  const CivilDate d = civil_from_days(days_from_civil(start) + day_index);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.y, d.m, d.d);
  return buf;
}

inline std::string format_timestamp(CivilDate start, int day_index, int minute_of_day) {
  const long serial = days_from_civil(start) + day_index + minute_of_day / 1440;
  const int m = minute_of_day % 1440;
  const CivilDate d = civil_from_days(serial);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:00", d.y, d.m, d.d, m / 60,
                m % 60);
  return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  return out;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t from = 0;
  for (;;) {
    const std::size_t at = line.find(',', from);
    if (at == std::string::npos) {
      fields.push_back(line.substr(from));
      return fields;
    }
    fields.push_back(line.substr(from, at - from));
    from = at + 1;
  }
}

inline double parse_double_field(const std::string& s, const std::string& path) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw DataError("malformed numeric field '" + s + "' in " + path);
  return v;
}

inline long parse_int_field(const std::string& s, const std::string& path) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw DataError("malformed integer field '" + s + "' in " + path);
  return v;
}

} // namespace detail

inline void write_trajectory_csv(const std::string& path,
                                 const std::vector<ReplicateResult>& results,
                                 CivilDate start) {
  std::ofstream out = detail::open_out(path);
  out << "replicate,day,tick,timestamp,x,y,mode,fitness\n";
  char buf[192];
  for (const ReplicateResult& res : results) {
    for (const TickRow& row : res.track) {
      std::snprintf(buf, sizeof buf, "%d,%d,%d,%s,%.6f,%.6f,%s,%.9f\n", res.replicate,
                    row.day, row.tick,
                    format_timestamp(start, row.day - 1, row.minute_of_day).c_str(),
                    row.x, row.y, mode_name(row.mode), row.fitness);
      out << buf;
    }
  }
  if (!out) throw DataError("failed writing " + path);
}

inline void write_days_csv(const std::string& path,
                           const std::vector<ReplicateResult>& results, CivilDate start) {
  std::ofstream out = detail::open_out(path);
  out << "replicate,day,date,total_intake_kg,forest_intake_kg,cropland_intake_kg,"
         "scheduled_thermo_ticks,actual_thermo_ticks,deprivation_days,water_days,"
         "fitness,alive\n";
  char buf[256];
  for (const ReplicateResult& res : results) {
    for (const DayRow& row : res.days) {
      std::snprintf(buf, sizeof buf, "%d,%d,%s,%.6f,%.6f,%.6f,%d,%d,%d,%d,%.9f,%d\n",
                    res.replicate, row.day, format_date(start, row.day - 1).c_str(),
                    row.intake, row.forest_intake, row.cropland_intake,
                    row.scheduled_thermo, row.actual_thermo, row.deprivation_days,
                    row.water_days, row.fitness, row.alive ? 1 : 0);
      out << buf;
    }
  }
  if (!out) throw DataError("failed writing " + path);
}

inline void write_events_csv(const std::string& path,
                             const std::vector<ReplicateResult>& results, CivilDate start,
                             int ticks_per_day = 288) {
  std::ofstream out = detail::open_out(path);
  out << "replicate,day,tick,timestamp,type,x,y\n";
  char buf[192];
  for (const ReplicateResult& res : results) {
    for (const Event& ev : res.events) {
      std::snprintf(buf, sizeof buf, "%d,%d,%d,%s,%s,%.6f,%.6f\n", res.replicate, ev.day,
                    ev.tick, format_timestamp(start, ev.day - 1, ev.minute_of_day).c_str(),
                    ev.type.c_str(), ev.x, ev.y);
      out << buf;
    }
    for (const RaidEpisode& ep : res.episodes) {
      const int day = ep.start_tick / ticks_per_day;
      const int minute = (ep.start_tick % ticks_per_day) * (1440 / ticks_per_day);
      std::snprintf(buf, sizeof buf, "%d,%d,%d,%s,%s,,\n", res.replicate, day + 1,
                    ep.start_tick, format_timestamp(start, day, minute).c_str(),
                    ep.deprived_at_onset ? "raid_deprived" : "raid");
      out << buf;
    }
  }
  if (!out) throw DataError("failed writing " + path);
}

struct TrackPoint {
  int replicate = 0;
  int day = 1;
  int tick = 0;
  double x = 0.0;
  double y = 0.0;
};

inline std::vector<TrackPoint> read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  if (line.rfind("replicate,day,tick,timestamp,x,y", 0) != 0)
    throw DataError(path + ": unexpected trajectory header");
  std::vector<TrackPoint> points;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = detail::split_csv(line);
    if (fields.size() < 6)
      throw DataError(path + ": short row at line " + std::to_string(lineno));
    TrackPoint p;
    p.replicate = static_cast<int>(detail::parse_int_field(fields[0], path));
    p.day = static_cast<int>(detail::parse_int_field(fields[1], path));
    p.tick = static_cast<int>(detail::parse_int_field(fields[2], path));
    p.x = detail::parse_double_field(fields[4], path);
    p.y = detail::parse_double_field(fields[5], path);
    points.push_back(p);
  }
  return points;
}

} // namespace elesim
