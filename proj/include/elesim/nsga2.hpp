#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "elesim/grid.hpp"
#include "elesim/rng.hpp"

namespace elesim {

using GaEvaluate = std::function<std::vector<double>(const std::vector<double>&)>;
using GaBounds = std::vector<std::pair<double, double>>; // per-variable [lo, hi]

struct GaConfig {
  int population = 50;
  int generations = 100;
  double crossover_prob = 0.9;
  double sbx_eta = 15.0;
  double mutation_eta = 20.0;
  double mutation_rate = -1.0; // negative: 1 / n_vars
  std::uint64_t seed = 1;
  int n_threads = 1; // parallel objective evaluations; the loop stays sequential
};

struct GaIndividual {
  std::vector<double> x;
  std::vector<double> f;
};

struct ParetoFront {
  std::vector<GaIndividual> members; // mutually nondominated
};

// Minimization dominance: no worse everywhere, strictly better somewhere.
inline bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

// Fast nondominated sort; fronts hold indices in ascending order.
inline std::vector<std::vector<std::size_t>> nondominated_sort(
    const std::vector<std::vector<double>>& f) {
  const std::size_t n = f.size();
  std::vector<int> dominated_by(n, 0);
  std::vector<std::vector<std::size_t>> beats(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(f[i], f[j])) {
        beats[i].push_back(j);
        ++dominated_by[j];
      } else if (dominates(f[j], f[i])) {
        beats[j].push_back(i);
        ++dominated_by[i];
      }
    }
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i)
    if (dominated_by[i] == 0) current.push_back(i);
  while (!current.empty()) {
    fronts.push_back(current);
    std::vector<std::size_t> next;
    for (std::size_t i : current)
      for (std::size_t j : beats[i])
        if (--dominated_by[j] == 0) next.push_back(j);
    std::sort(next.begin(), next.end());
    current = std::move(next);
  }
  return fronts;
}

// Crowding distances aligned with the positions of `front`; boundary members
// of every objective get infinity.
inline std::vector<double> crowding_distances(const std::vector<std::vector<double>>& f,
                                              const std::vector<std::size_t>& front) {
  const std::size_t n = front.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(n, 0.0);
  if (n == 0) return d;
  if (n <= 2) {
    std::fill(d.begin(), d.end(), inf);
    return d;
  }
  const std::size_t m = f[front[0]].size();
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < m; ++k) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return f[front[a]][k] < f[front[b]][k];
    });
    d[order.front()] = inf;
    d[order.back()] = inf;
    const double range = f[front[order.back()]][k] - f[front[order.front()]][k];
    if (range <= 0.0) continue;
    for (std::size_t i = 1; i + 1 < n; ++i)
      d[order[i]] += (f[front[order[i + 1]]][k] - f[front[order[i - 1]]][k]) / range;
  }
  return d;
}

namespace detail {

inline std::string vector_to_string(const std::vector<double>& x) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << "]";
  return os.str();
}

} // namespace detail

// NSGA-II for bounded real decision vectors: binary tournament on
// (rank, crowding), simulated binary crossover, polynomial mutation,
// elitist (mu + lambda) survival. Returns the rank-0 front of the final
// population. Deterministic for a fixed seed: all random draws happen on
// the calling thread and evaluations are stored by index.
inline ParetoFront nsga2(const GaEvaluate& evaluate, const GaBounds& bounds,
                         const GaConfig& cfg = {}) {
  if (bounds.empty()) throw DataError("nsga2: no decision variables");
  for (const auto& [lo, hi] : bounds)
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
      throw DataError("nsga2: bounds must be finite with hi >= lo");
  if (cfg.population < 4 || cfg.population % 2 != 0)
    throw DataError("nsga2: population must be even and at least 4");
  if (cfg.generations < 1) throw DataError("nsga2: need at least one generation");

  const std::size_t nvars = bounds.size();
  const double rate =
      cfg.mutation_rate < 0.0 ? 1.0 / static_cast<double>(nvars) : cfg.mutation_rate;
  Rng rng = make_rng(cfg.seed, 0, Stream::calibration);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::size_t n_objectives = 0;
  const auto evaluate_all = [&](std::vector<GaIndividual>& pop) {
    const int nt = std::max(1, cfg.n_threads);
    std::vector<std::string> errors(pop.size());
    const auto eval_one = [&](std::size_t i) {
      try {
        pop[i].f = evaluate(pop[i].x);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    };
    if (nt == 1 || pop.size() < 2) {
      for (std::size_t i = 0; i < pop.size(); ++i) eval_one(i);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> workers;
      for (int w = 0; w < nt; ++w)
        workers.emplace_back([&] {
          for (std::size_t i = next++; i < pop.size(); i = next++) eval_one(i);
        });
      for (auto& w : workers) w.join();
    }
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (!errors[i].empty())
        throw DataError("nsga2: evaluation failed for x = " +
                        detail::vector_to_string(pop[i].x) + ": " + errors[i]);
      if (pop[i].f.size() < 2)
        throw DataError("nsga2: evaluator must return at least two objectives");
      if (n_objectives == 0) n_objectives = pop[i].f.size();
      if (pop[i].f.size() != n_objectives)
        throw DataError("nsga2: inconsistent objective count for x = " +
                        detail::vector_to_string(pop[i].x));
      for (double v : pop[i].f)
        if (std::isnan(v))
          throw DataError("nsga2: objective is NaN for x = " +
                          detail::vector_to_string(pop[i].x));
    }
  };

  const auto sbx_pair = [&](double& a, double& b, double lo, double hi) {
    if (unif(rng) > 0.5) return; // per-variable exchange probability
    if (std::fabs(a - b) < 1e-14) return;
    const double u = unif(rng);
    const double beta =
        u <= 0.5 ? std::pow(2.0 * u, 1.0 / (cfg.sbx_eta + 1.0))
                 : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (cfg.sbx_eta + 1.0));
    const double c1 = 0.5 * ((1.0 + beta) * a + (1.0 - beta) * b);
    const double c2 = 0.5 * ((1.0 - beta) * a + (1.0 + beta) * b);
    a = std::clamp(c1, lo, hi);
    b = std::clamp(c2, lo, hi);
  };
  const auto mutate = [&](std::vector<double>& x) {
    for (std::size_t v = 0; v < nvars; ++v) {
      if (unif(rng) >= rate) continue;
      const auto [lo, hi] = bounds[v];
      const double span = hi - lo;
      if (span <= 0.0) continue;
      const double u = unif(rng);
      const double d1 = (x[v] - lo) / span, d2 = (hi - x[v]) / span;
      const double ep = cfg.mutation_eta + 1.0;
      double dq;
      if (u < 0.5)
        dq = std::pow(2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, ep), 1.0 / ep) -
             1.0;
      else
        dq = 1.0 -
             std::pow(2.0 * (1.0 - u) + (2.0 * u - 1.0) * std::pow(1.0 - d2, ep),
                      1.0 / ep);
      x[v] = std::clamp(x[v] + dq * span, lo, hi);
    }
  };

  std::vector<GaIndividual> pop(static_cast<std::size_t>(cfg.population));
  for (auto& ind : pop) {
    ind.x.resize(nvars);
    for (std::size_t v = 0; v < nvars; ++v)
      ind.x[v] = bounds[v].first + unif(rng) * (bounds[v].second - bounds[v].first);
  }
  evaluate_all(pop);

  const auto objectives_of = [](const std::vector<GaIndividual>& p) {
    std::vector<std::vector<double>> fs;
    fs.reserve(p.size());
    for (const auto& ind : p) fs.push_back(ind.f);
    return fs;
  };

  for (int gen = 0; gen < cfg.generations; ++gen) {
    const auto fs = objectives_of(pop);
    const auto fronts = nondominated_sort(fs);
    std::vector<int> rank(pop.size(), 0);
    std::vector<double> crowd(pop.size(), 0.0);
    for (std::size_t fi = 0; fi < fronts.size(); ++fi) {
      const auto d = crowding_distances(fs, fronts[fi]);
      for (std::size_t pos = 0; pos < fronts[fi].size(); ++pos) {
        rank[fronts[fi][pos]] = static_cast<int>(fi);
        crowd[fronts[fi][pos]] = d[pos];
      }
    }
    std::uniform_int_distribution<std::size_t> draw(0, pop.size() - 1);
    const auto pick = [&]() -> const GaIndividual& {
      const std::size_t a = draw(rng), b = draw(rng);
      if (rank[a] != rank[b]) return rank[a] < rank[b] ? pop[a] : pop[b];
      if (crowd[a] != crowd[b]) return crowd[a] > crowd[b] ? pop[a] : pop[b];
      return pop[a];
    };

    std::vector<GaIndividual> offspring;
    offspring.reserve(pop.size());
    while (offspring.size() < pop.size()) {
      GaIndividual c1{pick().x, {}};
      GaIndividual c2{pick().x, {}};
      if (unif(rng) < cfg.crossover_prob)
        for (std::size_t v = 0; v < nvars; ++v)
          sbx_pair(c1.x[v], c2.x[v], bounds[v].first, bounds[v].second);
      mutate(c1.x);
      mutate(c2.x);
      offspring.push_back(std::move(c1));
      offspring.push_back(std::move(c2));
    }
    evaluate_all(offspring);

    std::vector<GaIndividual> combined = std::move(pop);
    combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                    std::make_move_iterator(offspring.end()));
    const auto cfs = objectives_of(combined);
    const auto cfronts = nondominated_sort(cfs);
    pop.clear();
    pop.reserve(static_cast<std::size_t>(cfg.population));
    for (const auto& front : cfronts) {
      if (pop.size() + front.size() <= static_cast<std::size_t>(cfg.population)) {
        for (std::size_t i : front) pop.push_back(combined[i]);
        continue;
      }
      const auto d = crowding_distances(cfs, front);
      std::vector<std::size_t> pos(front.size());
      std::iota(pos.begin(), pos.end(), std::size_t{0});
      std::stable_sort(pos.begin(), pos.end(),
                       [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
      for (std::size_t p : pos) {
        if (pop.size() == static_cast<std::size_t>(cfg.population)) break;
        pop.push_back(combined[front[p]]);
      }
      break;
    }
  }

  const auto fronts = nondominated_sort(objectives_of(pop));
  ParetoFront out;
  for (std::size_t i : fronts.front()) out.members.push_back(pop[i]);
  return out;
}

} // namespace elesim
