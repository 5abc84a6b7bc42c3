// Acceptance gate: twelve release criteria, one per command-line argument
// (1..12, or "all"). Each criterion prints its sub-checks and one final
// PASS/FAIL line; the process exits nonzero if anything failed. Tolerances
// are pinned here on purpose; do not relax them to make a run green.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "elesim/analytics.hpp"
#include "elesim/config.hpp"
#include "elesim/engine.hpp"
#include "elesim/hmm.hpp"
#include "elesim/nsga2.hpp"
#include "elesim/rng.hpp"
#include "elesim/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace elesim;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
  std::printf("  [%s] %s\n", ok ? "pass" : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

BuiltWorld world_with(const std::function<void(json&)>& edit) {
  json doc = json::object();
  edit(doc);
  return build_world(parse_config(doc));
}

std::vector<ReplicateResult> batch(const BuiltWorld& w) {
  return run_batch(w.stack, w.scenario, w.agent, w.run, w.start, w.replicates,
                   w.threads);
}

// The collar-fit movement kernel that seeds every simulation.
HmmModel reference_model() {
  HmmModel m;
  m.p11 = 0.8775;
  m.p22 = 0.9096;
  m.init = {0.5, 0.5};
  m.step[0] = step_params_gamma(0.0040, 0.0034);
  m.step[1] = step_params_gamma(0.0398, 0.0378);
  m.turn[0] = {TurnFamily::von_mises, -3.0232, 0.3336};
  m.turn[1] = {TurnFamily::von_mises, -0.0366, 1.5202};
  return m;
}

// --- criterion 1: parameter recovery from a simulated track ----------------

void criterion_recovery() {
  const HmmModel truth = reference_model();
  Rng rng = make_rng(2026, 0, Stream::calibration);
  const HmmSequence seq = sample_hmm_sequence(truth, 5000, rng);
  const auto fits = fit_all_families({seq});
  const FitResult& best = fits.front();

  check(best.step_family == StepFamily::gamma &&
            best.turn_family == TurnFamily::von_mises,
        std::string("AIC winner is gamma + von Mises (got ") +
            step_family_name(best.step_family) + " + " +
            turn_family_name(best.turn_family) + ")");
  check(std::fabs(best.model.p11 - 0.8775) <= 0.05,
        fmt("p11 %.4f within 0.8775 +/- 0.05", best.model.p11));
  check(std::fabs(best.model.p22 - 0.9096) <= 0.05,
        fmt("p22 %.4f within 0.9096 +/- 0.05", best.model.p22));
  const double enc = best.model.step[0].a * best.model.step[0].b;
  const double exp_ = best.model.step[1].a * best.model.step[1].b;
  check(std::fabs(enc - 0.0040) <= 0.0008,
        fmt("encamped step mean %.5f km within 0.0040 +/- 0.0008", enc));
  check(std::fabs(exp_ - 0.0398) <= 0.004,
        fmt("exploratory step mean %.5f km within 0.0398 +/- 0.004", exp_));
}

// --- criterion 2: forward algorithm equals exhaustive path summation -------

double brute_force_loglik(const HmmModel& m, const HmmSequence& seq) {
  const std::size_t T = seq.steps.size();
  std::vector<double> lps;
  lps.reserve(std::size_t(1) << T);
  for (std::uint32_t mask = 0; mask < (1u << T); ++mask) {
    double lp = 0.0;
    int prev = -1;
    for (std::size_t t = 0; t < T; ++t) {
      const int s = (mask >> t) & 1;
      if (t == 0)
        lp += std::log(m.init[std::size_t(s)]);
      else if (prev == 0)
        lp += std::log(s == 0 ? m.p11 : 1.0 - m.p11);
      else
        lp += std::log(s == 1 ? m.p22 : 1.0 - m.p22);
      lp += detail::emission_logpdf(m, s, seq.steps[t], seq.turns[t]);
      prev = s;
    }
    lps.push_back(lp);
  }
  const double mx = *std::max_element(lps.begin(), lps.end());
  double sum = 0.0;
  for (double lp : lps) sum += std::exp(lp - mx);
  return mx + std::log(sum);
}

void criterion_forward_exact() {
  const HmmModel m = reference_model();
  std::mt19937_64 rng(5150);
  std::gamma_distribution<double> g(1.2, 0.02);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  bool all_ok = true;
  double worst = 0.0;
  for (std::size_t T = 1; T <= 10; ++T) {
    HmmSequence seq;
    for (std::size_t t = 0; t < T; ++t) {
      seq.steps.push_back(g(rng) + 1e-5);
      seq.turns.push_back(angle(rng));
    }
    if (T >= 4) seq.turns[2] = std::numeric_limits<double>::quiet_NaN();
    const double fwd = detail::forward_pass(m, seq, nullptr, nullptr);
    const double brute = brute_force_loglik(m, seq);
    const double rel = std::fabs(fwd - brute) / std::max(1.0, std::fabs(brute));
    worst = std::max(worst, rel);
    if (rel > 1e-10) all_ok = false;
  }
  check(all_ok, fmt("forward == brute-force path sum, lengths 1..10 "
                    "(worst relative error %.3g <= 1e-10)",
                    worst));
}

// --- criterion 3: fitness increments and starvation clock ------------------

void criterion_fitness() {
  AgentParams params;

  ElephantAgent fed;
  fed.fitness = 0.0;
  fed.ddmi = daily_dry_matter_intake_kg(params.age_years);
  fed.todays_intake = 68.0;
  end_of_day_update(fed, params);
  check(fed.fitness == 0.1,
        fmt("full-demand forest day credits exactly 0.1 (got %.17g)", fed.fitness));

  ElephantAgent hot;
  hot.fitness = 0.0;
  hot.ddmi = daily_dry_matter_intake_kg(params.age_years);
  hot.scheduled_thermo_ticks = 288;
  hot.actual_thermo_ticks = 288;
  end_of_day_update(hot, params);
  check(hot.fitness == 0.1,
        fmt("fully honoured thermoregulation day credits exactly 0.1 (got %.17g)",
            hot.fitness));

  check(std::fabs(params.fitness_deprecation - 0.000347222222) < 1e-9,
        fmt("per-tick deprecation is 0.1/288 = %.9f", params.fitness_deprecation));

  // Foodless landscape, wet-season temperatures: nothing to eat, no heat
  // stress, so fitness can only drain at 0.1 per day from 1.0.
  const BuiltWorld w = world_with([](json& d) {
    d["scenario"]["forest_food_percent"] = 0.0;
    d["scenario"]["cropland_food_percent"] = 0.0;
    d["run"]["replicates"] = 8;
    d["run"]["days"] = 12;
    d["run"]["tmin"] = 20.0;
    d["run"]["tmax"] = 30.0;
  });
  const auto results = batch(w);
  bool all_day10 = true;
  for (const ReplicateResult& r : results)
    if (!r.died || r.death_day != 10) all_day10 = false;
  check(all_day10, "never-fed agents die on day 10 +/- 0 (8 replicates)");
}

// --- criterion 4: thermoregulation logistic --------------------------------

void criterion_thermo() {
  check(thermoregulation_probability(32.0, 32.0) == 0.5,
        "p(T = threshold) is exactly 0.5");
  const double p10 = thermoregulation_probability(42.0, 32.0);
  check(std::fabs(p10 - 0.7311) <= 1e-4,
        fmt("p(threshold + 10) = %.6f within 0.7311 +/- 1e-4", p10));

  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> temp(15.0, 45.0);
  std::uniform_real_distribution<double> thr(20.0, 40.0);
  bool agree = true;
  for (int i = 0; i < 10000; ++i) {
    const double t = temp(rng), th = thr(rng);
    if ((thermoregulation_probability(t, th) > 0.5) != (t > th)) agree = false;
  }
  check(agree, "engagement (p > 0.5) matches T > threshold on 1e4 random pairs");
}

// --- criterion 5: slope tolerance controls steep traversal -----------------

void criterion_slope() {
  const std::vector<double> tolerances{25.0, 50.0, 100.0, 200.0};
  std::vector<double> fractions;
  for (double tol : tolerances) {
    const BuiltWorld w = world_with([&](json& d) {
      d["agent"]["slope_tolerance"] = tol;
      d["run"]["replicates"] = 192;
      d["run"]["days"] = 7;
      d["run"]["record_track"] = false;
    });
    long long steep = 0, total = 0;
    for (const ReplicateResult& r : batch(w)) {
      steep += r.steep_ticks;
      total += r.total_ticks;
    }
    fractions.push_back(double(steep) / double(total));
  }
  for (std::size_t i = 0; i < tolerances.size(); ++i)
    std::printf("  tolerance %-5g steep fraction %.6g\n", tolerances[i],
                fractions[i]);
  check(fractions[2] <= 0.01,
        fmt("tolerance 100: steep-cell ticks %.4g%% <= 1%%", 100.0 * fractions[2]));
  bool monotone = true;
  for (std::size_t i = 1; i < fractions.size(); ++i)
    if (fractions[i] < fractions[i - 1]) monotone = false;
  check(monotone, "steep fraction is monotone in tolerance across {25,50,100,200}");
}

// --- criterion 6: raids stay nocturnal --------------------------------------

void criterion_nocturnal() {
  const BuiltWorld w = world_with([](json& d) {
    d["agent"]["aggression"] = 0.8;
    d["run"]["replicates"] = 192;
    d["run"]["days"] = 7;
    d["run"]["record_track"] = false;
  });
  long long day_pl = 0, night_pl = 0;
  for (const ReplicateResult& r : batch(w)) {
    day_pl += r.day_plantation_ticks;
    night_pl += r.night_plantation_ticks;
  }
  check(night_pl > 0,
        fmt("plantation exposure exists (%g night ticks)", double(night_pl)));
  check(day_pl == 0,
        fmt("100%% of plantation ticks fall in 19:00-07:00 (%g daytime ticks)",
            double(day_pl)));
}

// --- criterion 7: directional conflict trends -------------------------------

struct TrendRun {
  double raid_prob = 0.0;
  double sched_frac = 0.0;
  double actual_frac = 0.0;
};

TrendRun trend_run(const std::function<void(json&)>& edit) {
  const BuiltWorld w = world_with([&](json& d) {
    d["run"]["replicates"] = 192;
    d["run"]["days"] = 14;
    d["run"]["record_track"] = false;
    edit(d);
  });
  const auto results = batch(w);
  TrendRun out;
  out.raid_prob =
      compute_raid_stats(results, daily_dry_matter_intake_kg(w.agent.age_years))
          .raid_probability;
  long long sched = 0, actual = 0, ticks = 0;
  for (const ReplicateResult& r : results) {
    for (const DayRow& d : r.days) {
      sched += d.scheduled_thermo;
      actual += d.actual_thermo;
    }
    ticks += r.total_ticks;
  }
  out.sched_frac = double(sched) / double(ticks);
  out.actual_frac = double(actual) / double(ticks);
  return out;
}

int adjacent_pairs(const std::vector<double>& v, bool nondecreasing) {
  int ok = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (nondecreasing ? v[i] >= v[i - 1] : v[i] <= v[i - 1]) ++ok;
  return ok;
}

void criterion_trends() {
  const std::vector<double> aggressions{0.2, 0.35, 0.5, 0.65, 0.8};
  std::vector<double> by_aggression;
  for (double a : aggressions) {
    by_aggression.push_back(
        trend_run([&](json& d) { d["agent"]["aggression"] = a; }).raid_prob);
    std::printf("  aggression %-5g raid probability %.4f\n", a,
                by_aggression.back());
  }
  const int agg_ok = adjacent_pairs(by_aggression, true);
  check(agg_ok >= 3, fmt("raid probability nondecreasing in aggression on "
                         "%g of 4 adjacent pairs (need >= 3)",
                         double(agg_ok)));

  std::vector<double> by_scenario;
  for (const char* s : {"S1", "S2", "S3", "S4", "S5"}) {
    by_scenario.push_back(trend_run([&](json& d) {
                            d["scenario"]["name"] = s;
                            d["agent"]["aggression"] = 0.8;
                          }).raid_prob);
    std::printf("  scenario %s raid probability %.4f\n", s, by_scenario.back());
  }
  const int sc_ok = adjacent_pairs(by_scenario, false);
  check(sc_ok >= 3, fmt("raid probability nonincreasing S1->S5 on "
                        "%g of 4 adjacent pairs (need >= 3)",
                        double(sc_ok)));

  const TrendRun wet = trend_run([](json& d) {
    d["agent"]["aggression"] = 0.8;
    d["run"]["tmin"] = 20.0;
    d["run"]["tmax"] = 30.0;
  });
  const TrendRun dry = trend_run([](json& d) {
    d["agent"]["aggression"] = 0.8;
    d["run"]["tmin"] = 24.0;
    d["run"]["tmax"] = 40.0;
  });
  std::printf("  wet raid %.4f (thermo sched %.3f), dry raid %.4f "
              "(thermo active %.3f)\n",
              wet.raid_prob, wet.sched_frac, dry.raid_prob, dry.actual_frac);
  check(wet.sched_frac == 0.0, "wet month never schedules thermoregulation");
  check(dry.actual_frac >= 0.30,
        fmt("dry month thermoregulates on %.1f%% of ticks (>= 30%%)",
            100.0 * dry.actual_frac));
  check(wet.raid_prob >= dry.raid_prob,
        fmt("wet raid probability %.4f >= dry %.4f", wet.raid_prob, dry.raid_prob));
}

// --- criterion 8: mode transition frequencies -------------------------------

void criterion_markov() {
  AgentParams params;
  // Fixed seed keeps the 5%-level test deterministic; the draw itself was
  // verified unbiased across independent seeds before this one was pinned.
  Rng rng = make_rng(1, 0, Stream::walk);
  const int n_per_state = 500000;
  long long stay_rw = 0, stay_fg = 0;
  for (int i = 0; i < n_per_state; ++i) {
    // fitness above threshold, no heat, no danger: the pure Markov draw
    if (switch_mode(Mode::random_walk, false, 1.0, 0.0, params, rng) ==
        Mode::random_walk)
      ++stay_rw;
    if (switch_mode(Mode::foraging, false, 1.0, 0.0, params, rng) == Mode::foraging)
      ++stay_fg;
  }
  auto cell = [](double obs, double expd) {
    const double d = obs - expd;
    return d * d / expd;
  };
  const double n = n_per_state;
  const double chi2 = cell(double(stay_rw), n * params.movement.p11) +
                      cell(n - double(stay_rw), n * (1.0 - params.movement.p11)) +
                      cell(double(stay_fg), n * params.movement.p22) +
                      cell(n - double(stay_fg), n * (1.0 - params.movement.p22));
  // two independent binomials -> chi-square with 2 df, alpha 0.05
  check(chi2 < 5.991,
        fmt("1e6 switch_mode draws: chi-square %.3f < 5.991 (df 2, alpha 0.05)",
            chi2));
}

// --- criterion 9: analytics against independent oracles ---------------------

double cross3(Vec2 a, Vec2 b, Vec2 c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

double gift_wrap_area_km2(const std::vector<Vec2>& pts) {
  const std::size_t n = pts.size();
  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (pts[i].x < pts[start].x ||
        (pts[i].x == pts[start].x && pts[i].y < pts[start].y))
      start = i;
  std::vector<Vec2> hull;
  std::size_t p = start;
  do {
    hull.push_back(pts[p]);
    std::size_t q = (p + 1) % n;
    for (std::size_t r = 0; r < n; ++r) {
      const double cr = cross3(pts[p], pts[q], pts[r]);
      const double dq = std::hypot(pts[q].x - pts[p].x, pts[q].y - pts[p].y);
      const double dr = std::hypot(pts[r].x - pts[p].x, pts[r].y - pts[p].y);
      if (cr < 0.0 || (cr == 0.0 && dr > dq)) q = r;
    }
    p = q;
  } while (p != start && hull.size() <= n);
  double twice = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2& a = hull[i];
    const Vec2& b = hull[(i + 1) % hull.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return std::fabs(twice) / 2.0 / 1e6;
}

// Same canonical ordering as analytics::dbscan, but with quadratic
// neighbourhood scans; any grid-bucketing bug shows up as a label mismatch.
std::vector<int> brute_dbscan(const std::vector<Vec2>& pts, double eps, int min_pts) {
  const std::size_t n = pts.size();
  std::vector<int> labels(n, -1);
  std::vector<char> visited(n, 0);
  auto region = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j)
      if (std::hypot(pts[j].x - pts[i].x, pts[j].y - pts[i].y) <= eps)
        out.push_back(j);
    return out;
  };
  int cid = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (visited[i]) continue;
    visited[i] = 1;
    auto seeds = region(i);
    if (seeds.size() < std::size_t(min_pts)) continue;
    labels[i] = cid;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      const std::size_t j = seeds[k];
      if (labels[j] == -1) labels[j] = cid;
      if (visited[j]) continue;
      visited[j] = 1;
      auto nb = region(j);
      if (nb.size() >= std::size_t(min_pts))
        seeds.insert(seeds.end(), nb.begin(), nb.end());
    }
    ++cid;
  }
  return labels;
}

void criterion_analytics() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  std::uniform_int_distribution<int> nn(3, 200);
  bool hull_ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec2> pts;
    const int n = nn(rng);
    for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
    const McpResult m = mcp_area(pts);
    const double ref = gift_wrap_area_km2(pts);
    const double rel = std::fabs(m.area_km2 - ref) / std::max(1e-12, ref);
    worst = std::max(worst, rel);
    if (rel > 1e-9) hull_ok = false;
  }
  check(hull_ok, fmt("MCP equals gift-wrapping hull area on 100 sets "
                     "(worst relative error %.3g <= 1e-9)",
                     worst));

  std::uniform_real_distribution<double> ue(30.0, 300.0);
  std::uniform_int_distribution<int> mp(2, 6);
  std::uniform_real_distribution<double> up(0.0, 2000.0);
  bool db_ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec2> pts;
    const int n = 20 + trial * 9; // up to 191 points
    for (int i = 0; i < n; ++i) pts.push_back({up(rng), up(rng)});
    const double eps = ue(rng);
    const int min_pts = mp(rng);
    if (dbscan(pts, eps, min_pts) != brute_dbscan(pts, eps, min_pts)) db_ok = false;
  }
  check(db_ok, "DBSCAN matches the brute-force partition on 20 sets (<= 200 pts)");

  const double sigma = 300.0;
  std::normal_distribution<double> gs(0.0, sigma);
  std::vector<Vec2> cloud;
  std::mt19937_64 krng(2024);
  for (int i = 0; i < 4000; ++i) cloud.push_back({gs(krng), gs(krng)});
  const KdeResult kde = kde_grid(cloud, 25.0, 1200.0);
  const double est95 = kde_level_area_km2(kde, 0.95);
  const double analytic95 = 2.0 * kPi * sigma * sigma * std::log(20.0) / 1e6;
  check(std::fabs(est95 - analytic95) <= 0.15 * analytic95,
        fmt("KDE 95%% area %.3f km2 within 15%% of analytic %.3f km2", est95,
            analytic95));

  const double kl = kl_divergence({0.9, 0.1}, {0.5, 0.5});
  check(std::fabs(kl - 0.3681) <= 1e-4,
        fmt("KL (0.9,0.1)||(0.5,0.5) = %.6f within 0.3681 +/- 1e-4 nats", kl));
}

// --- criterion 10: NSGA-II on the Schaffer problem ---------------------------

void criterion_nsga2() {
  GaConfig cfg;
  cfg.population = 50;
  cfg.generations = 100;
  cfg.seed = 1;
  const GaBounds bounds{{-5.0, 5.0}};
  const ParetoFront front = nsga2(
      [](const std::vector<double>& x) {
        return std::vector<double>{x[0] * x[0], (x[0] - 2.0) * (x[0] - 2.0)};
      },
      bounds, cfg);

  bool in_range = true;
  for (const GaIndividual& m : front.members)
    if (m.x[0] < -0.01 || m.x[0] > 2.01) in_range = false;
  check(in_range, fmt("all %g front members have x in [0, 2] +/- 0.01",
                      double(front.members.size())));

  bool nondominated = true;
  for (std::size_t i = 0; i < front.members.size(); ++i)
    for (std::size_t j = 0; j < front.members.size(); ++j)
      if (i != j && dominates(front.members[i].f, front.members[j].f))
        nondominated = false;
  check(nondominated, "no dominated pair exists in the returned front");
}

// --- criterion 11: thread-count determinism through the CLI -----------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion_determinism() {
#ifndef ELESIM_BIN
  check(false, "acceptance binary built without ELESIM_BIN");
#else
  const fs::path base = fs::temp_directory_path() / "elesim_acceptance_11";
  fs::remove_all(base);
  fs::create_directories(base);
  bool ran = true;
  for (int threads : {1, 4}) {
    const fs::path out = base / ("t" + std::to_string(threads));
    const std::string cmd = std::string("\"") + ELESIM_BIN +
                            "\" simulate --set run.replicates=6 --set run.days=2"
                            " --threads " +
                            std::to_string(threads) + " --out \"" + out.string() +
                            "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) ran = false;
  }
  check(ran, "CLI simulate ran with 1 and 4 worker threads");
  if (!ran) return;

  bool same = slurp(base / "t1/summary.json") == slurp(base / "t4/summary.json");
  check(same, "summary.json is byte-identical across thread counts");

  std::vector<fs::path> t1_files;
  for (const auto& e : fs::directory_iterator(base / "t1/trajectories"))
    t1_files.push_back(e.path().filename());
  std::sort(t1_files.begin(), t1_files.end());
  bool traj_same = !t1_files.empty();
  for (const fs::path& name : t1_files)
    if (slurp(base / "t1/trajectories" / name) !=
        slurp(base / "t4/trajectories" / name))
      traj_same = false;
  check(traj_same, fmt("all %g trajectory CSVs are byte-identical",
                       double(t1_files.size())));
  fs::remove_all(base);
#endif
}

// --- criterion 12: convergence tooling ---------------------------------------

void criterion_convergence() {
  const BuiltWorld w = world_with([](json& d) {
    d["run"]["replicates"] = 64;
    d["run"]["days"] = 3;
  });
  std::vector<double> areas;
  for (const ReplicateResult& r : batch(w)) {
    std::vector<Vec2> xy;
    xy.reserve(r.track.size());
    for (const TickRow& row : r.track) xy.push_back({row.x, row.y});
    const McpResult m = mcp_area(xy);
    areas.push_back(m.degenerate ? 0.0 : m.area_km2);
  }
  const ConvergenceReport rep = convergence_cv(areas);

  const std::vector<double> sweep{0.1, 0.075, 0.05, 0.025};
  bool format_ok = rep.nmin.size() == sweep.size();
  for (std::size_t i = 0; format_ok && i < sweep.size(); ++i)
    if (rep.nmin[i].first != sweep[i]) format_ok = false;
  check(format_ok, "report sweeps epsilon in {0.1, 0.075, 0.05, 0.025} order");

  bool nonincreasing = true;
  for (std::size_t i = 1; i < rep.nmin.size(); ++i)
    if (rep.nmin[i].second < rep.nmin[i - 1].second) nonincreasing = false;
  for (const auto& [eps, nmin] : rep.nmin)
    std::printf("  epsilon %-6g nmin %d\n", eps, nmin);
  check(nonincreasing, "nmin(epsilon) is nonincreasing in epsilon");

  const CvCurve flat = cv_convergence(std::vector<double>(40, 7.25));
  bool all_zero = true;
  for (double v : flat.cv)
    if (v != 0.0) all_zero = false;
  check(all_zero, "CV curve of a constant output is identically zero");
}

struct Criterion {
  int id;
  const char* name;
  void (*run)();
};

const Criterion kCriteria[] = {
    {1, "HMM parameter recovery", criterion_recovery},
    {2, "forward-algorithm exactness", criterion_forward_exact},
    {3, "fitness arithmetic and starvation clock", criterion_fitness},
    {4, "thermoregulation logistic", criterion_thermo},
    {5, "slope tolerance bounds steep traversal", criterion_slope},
    {6, "nocturnal raiding", criterion_nocturnal},
    {7, "directional conflict trends", criterion_trends},
    {8, "Markov mode frequencies", criterion_markov},
    {9, "analytics oracles", criterion_analytics},
    {10, "NSGA-II front quality", criterion_nsga2},
    {11, "thread-count determinism", criterion_determinism},
    {12, "convergence tooling", criterion_convergence},
};

int run_criterion(const Criterion& c) {
  const int before = g_failures;
  std::printf("criterion %d (%s)\n", c.id, c.name);
  try {
    c.run();
  } catch (const std::exception& e) {
    check(false, std::string("unexpected exception: ") + e.what());
  }
  const bool ok = g_failures == before;
  std::printf("criterion %d: %s\n", c.id, ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
  int bad = 0;
  for (const Criterion& c : kCriteria)
    if (which == "all" || which == std::to_string(c.id)) bad += run_criterion(c);
  if (which != "all" && bad == 0 && g_failures == 0) {
    bool known = false;
    for (const Criterion& c : kCriteria)
      if (which == std::to_string(c.id)) known = true;
    if (!known) {
      std::fprintf(stderr, "unknown criterion '%s'\n", which.c_str());
      return 2;
    }
  }
  return bad == 0 ? 0 : 1;
}
