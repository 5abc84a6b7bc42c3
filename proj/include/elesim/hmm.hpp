#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "elesim/io.hpp"
#include "elesim/rng.hpp"
#include "elesim/sampling.hpp"

namespace elesim {

enum class StepFamily : int { gamma = 0, exponential = 1, weibull = 2 };
enum class TurnFamily : int { von_mises = 0, wrapped_cauchy = 1 };

inline const char* step_family_name(StepFamily f) {
  switch (f) {
    case StepFamily::gamma: return "gamma";
    case StepFamily::exponential: return "exponential";
    case StepFamily::weibull: return "weibull";
  }
  return "?";
}

inline const char* turn_family_name(TurnFamily f) {
  switch (f) {
    case TurnFamily::von_mises: return "von-mises";
    case TurnFamily::wrapped_cauchy: return "wrapped-cauchy";
  }
  return "?";
}

// Step-length density parameters: gamma and weibull use (shape a, scale b),
// the exponential uses rate a.
struct StepParams {
  StepFamily family = StepFamily::gamma;
  double a = 1.0;
  double b = 1.0;
};

inline StepParams step_params_gamma(double mean, double sd) {
  const GammaParams g = gamma_from_mean_sd(mean, sd);
  return {StepFamily::gamma, g.shape, g.scale};
}

inline double step_log_pdf(double x, const StepParams& p) {
  switch (p.family) {
    case StepFamily::gamma:
      return (p.a - 1.0) * std::log(x) - x / p.b - std::lgamma(p.a) -
             p.a * std::log(p.b);
    case StepFamily::exponential:
      return std::log(p.a) - p.a * x;
    case StepFamily::weibull:
      return std::log(p.a / p.b) + (p.a - 1.0) * std::log(x / p.b) -
             std::pow(x / p.b, p.a);
  }
  return -std::numeric_limits<double>::infinity();
}

struct TurnParams {
  TurnFamily family = TurnFamily::von_mises;
  double mu = 0.0;
  double conc = 1.0; // kappa for von Mises, rho for wrapped Cauchy
};

inline double turn_log_pdf(double theta, const TurnParams& p) {
  if (p.family == TurnFamily::von_mises)
    return von_mises_log_pdf(theta, {p.mu, p.conc});
  return wrapped_cauchy_log_pdf(theta, {p.mu, p.conc});
}

// One gap-free run of fixes: steps in km, turns in radians, NaN = missing.
struct HmmSequence {
  std::vector<double> steps;
  std::vector<double> turns;
};

struct HmmModel {
  std::array<StepParams, 2> step{};
  std::array<TurnParams, 2> turn{};
  double p11 = 0.9; // stay probability of state 0 (encamped)
  double p22 = 0.9; // stay probability of state 1 (exploratory)
  std::array<double, 2> init{0.5, 0.5};
  double log_likelihood = -std::numeric_limits<double>::infinity();
};

inline int hmm_n_params(const HmmModel& m) {
  int k = 3; // two free transition entries plus the initial distribution
  for (int s = 0; s < 2; ++s) {
    k += m.step[std::size_t(s)].family == StepFamily::exponential ? 1 : 2;
    k += 2;
  }
  return k;
}

inline double hmm_aic(const HmmModel& m) {
  return 2.0 * hmm_n_params(m) - 2.0 * m.log_likelihood;
}

namespace detail {

inline double emission_logpdf(const HmmModel& m, int s, double step, double turn) {
  double lp = 0.0;
  if (std::isfinite(step)) lp += step_log_pdf(step, m.step[std::size_t(s)]);
  if (std::isfinite(turn)) lp += turn_log_pdf(turn, m.turn[std::size_t(s)]);
  return lp;
}

inline double digamma(double x) {
  double r = 0.0;
  while (x < 6.0) {
    r -= 1.0 / x;
    x += 1.0;
  }
  const double ix = 1.0 / x, ix2 = ix * ix;
  return r + std::log(x) - 0.5 * ix -
         ix2 * (1.0 / 12.0 - ix2 * (1.0 / 120.0 - ix2 / 252.0));
}

inline double trigamma(double x) {
  double r = 0.0;
  while (x < 6.0) {
    r += 1.0 / (x * x);
    x += 1.0;
  }
  const double ix = 1.0 / x, ix2 = ix * ix;
  return r + ix * (1.0 + ix * (0.5 + ix * (1.0 / 6.0 - ix2 * (1.0 / 30.0 - ix2 / 42.0))));
}

// Scaled forward pass; per-tick emission shifts keep everything finite.
inline double forward_pass(const HmmModel& m, const HmmSequence& seq,
                           std::vector<std::array<double, 2>>* alpha_out,
                           std::vector<double>* shifted_b_out) {
  const std::size_t T = seq.steps.size();
  double logL = 0.0;
  std::array<double, 2> alpha{};
  if (alpha_out) alpha_out->resize(T);
  if (shifted_b_out) shifted_b_out->resize(2 * T);
  for (std::size_t t = 0; t < T; ++t) {
    const double lb0 = emission_logpdf(m, 0, seq.steps[t], seq.turns[t]);
    const double lb1 = emission_logpdf(m, 1, seq.steps[t], seq.turns[t]);
    const double mx = std::max(lb0, lb1);
    const double b0 = std::exp(lb0 - mx), b1 = std::exp(lb1 - mx);
    if (shifted_b_out) {
      (*shifted_b_out)[2 * t] = b0;
      (*shifted_b_out)[2 * t + 1] = b1;
    }
    std::array<double, 2> pred{};
    if (t == 0) {
      pred = m.init;
    } else {
      pred[0] = alpha[0] * m.p11 + alpha[1] * (1.0 - m.p22);
      pred[1] = alpha[0] * (1.0 - m.p11) + alpha[1] * m.p22;
    }
    alpha[0] = pred[0] * b0;
    alpha[1] = pred[1] * b1;
    const double c = alpha[0] + alpha[1];
    if (!(c > 0.0)) return -std::numeric_limits<double>::infinity();
    alpha[0] /= c;
    alpha[1] /= c;
    logL += std::log(c) + mx;
    if (alpha_out) (*alpha_out)[t] = alpha;
  }
  return logL;
}

// Sufficient statistics pooled across sequences.
struct EStats {
  double logL = 0.0;
  std::array<double, 2> init_post{};
  double n_seq = 0.0;
  double xi[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  std::vector<double> step_x;
  std::vector<std::array<double, 2>> step_w;
  std::vector<double> turn_x;
  std::vector<std::array<double, 2>> turn_w;
};

inline EStats e_step(const HmmModel& m, const std::vector<HmmSequence>& data) {
  EStats st;
  std::vector<std::array<double, 2>> alpha;
  std::vector<double> bshift;
  for (const HmmSequence& seq : data) {
    const std::size_t T = seq.steps.size();
    if (T == 0) continue;
    st.logL += forward_pass(m, seq, &alpha, &bshift);
    // scaled backward pass with the same emission shifts
    std::vector<std::array<double, 2>> beta(T, {1.0, 1.0});
    for (std::size_t t = T - 1; t-- > 0;) {
      const double b0 = bshift[2 * (t + 1)], b1 = bshift[2 * (t + 1) + 1];
      double v0 = m.p11 * b0 * beta[t + 1][0] + (1.0 - m.p11) * b1 * beta[t + 1][1];
      double v1 = (1.0 - m.p22) * b0 * beta[t + 1][0] + m.p22 * b1 * beta[t + 1][1];
      const double norm = std::max(v0, v1);
      if (norm > 0.0) {
        v0 /= norm;
        v1 /= norm;
      }
      beta[t] = {v0, v1};
    }
    for (std::size_t t = 0; t < T; ++t) {
      double g0 = alpha[t][0] * beta[t][0];
      double g1 = alpha[t][1] * beta[t][1];
      const double gs = g0 + g1;
      if (gs > 0.0) {
        g0 /= gs;
        g1 /= gs;
      } else {
        g0 = g1 = 0.5;
      }
      if (t == 0) {
        st.init_post[0] += g0;
        st.init_post[1] += g1;
        st.n_seq += 1.0;
      }
      if (std::isfinite(seq.steps[t])) {
        st.step_x.push_back(seq.steps[t]);
        st.step_w.push_back({g0, g1});
      }
      if (std::isfinite(seq.turns[t])) {
        st.turn_x.push_back(seq.turns[t]);
        st.turn_w.push_back({g0, g1});
      }
      if (t + 1 < T) {
        const double b0 = bshift[2 * (t + 1)], b1 = bshift[2 * (t + 1) + 1];
        const double trans[2][2] = {{m.p11, 1.0 - m.p11}, {1.0 - m.p22, m.p22}};
        double x[2][2];
        double tot = 0.0;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            x[i][j] = alpha[t][std::size_t(i)] * trans[i][j] *
                      (j == 0 ? b0 : b1) * beta[t + 1][std::size_t(j)];
            tot += x[i][j];
          }
        if (tot > 0.0)
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) st.xi[i][j] += x[i][j] / tot;
      }
    }
  }
  return st;
}

inline void fit_step_weighted(StepParams& p, const std::vector<double>& x,
                              const std::vector<std::array<double, 2>>& w, int state) {
  double sw = 0.0, swx = 0.0, swlx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double wi = w[i][std::size_t(state)];
    sw += wi;
    swx += wi * x[i];
    swlx += wi * std::log(x[i]);
  }
  if (sw < 1e-9 || swx <= 0.0) return; // starved state: keep previous params
  const double mean = swx / sw;
  const double mlog = swlx / sw;
  switch (p.family) {
    case StepFamily::exponential:
      p.a = 1.0 / mean;
      return;
    case StepFamily::gamma: {
      const double M = std::max(1e-9, std::log(mean) - mlog);
      double s = (3.0 - M + std::sqrt((M - 3.0) * (M - 3.0) + 24.0 * M)) / (12.0 * M);
      for (int it = 0; it < 40; ++it) {
        const double f = std::log(s) - digamma(s) - M;
        const double fp = 1.0 / s - trigamma(s);
        const double ns = s - f / fp;
        if (!(ns > 1e-6) || !std::isfinite(ns)) break;
        if (std::fabs(ns - s) < 1e-12 * (1.0 + s)) {
          s = ns;
          break;
        }
        s = ns;
      }
      p.a = std::clamp(s, 1e-4, 1e6);
      p.b = mean / p.a;
      return;
    }
    case StepFamily::weibull: {
      double var = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = std::log(x[i]) - mlog;
        var += w[i][std::size_t(state)] * d * d;
      }
      var = std::max(var / sw, 1e-8);
      double k = std::clamp(kPi / std::sqrt(6.0 * var), 0.05, 50.0);
      for (int it = 0; it < 60; ++it) {
        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double wi = w[i][std::size_t(state)];
          const double xk = std::pow(x[i], k);
          const double lx = std::log(x[i]);
          s0 += wi * xk;
          s1 += wi * xk * lx;
          s2 += wi * xk * lx * lx;
        }
        if (s0 <= 0.0) break;
        const double A = s1 / s0;
        const double g = A - 1.0 / k - mlog;
        const double gp = (s2 / s0 - A * A) + 1.0 / (k * k);
        const double nk = std::clamp(k - g / gp, 0.05, 50.0);
        if (std::fabs(nk - k) < 1e-10 * (1.0 + k)) {
          k = nk;
          break;
        }
        k = nk;
      }
      double s0 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i)
        s0 += w[i][std::size_t(state)] * std::pow(x[i], k);
      p.a = k;
      p.b = std::pow(s0 / sw, 1.0 / k);
      return;
    }
  }
}

inline double weighted_turn_loglik(const TurnParams& p, const std::vector<double>& x,
                                   const std::vector<std::array<double, 2>>& w,
                                   int state) {
  double q = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    q += w[i][std::size_t(state)] * turn_log_pdf(x[i], p);
  return q;
}

inline void fit_turn_weighted(TurnParams& p, const std::vector<double>& x,
                              const std::vector<std::array<double, 2>>& w, int state) {
  double sw = 0.0, C = 0.0, S = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double wi = w[i][std::size_t(state)];
    sw += wi;
    C += wi * std::cos(x[i]);
    S += wi * std::sin(x[i]);
  }
  if (sw < 1e-9) return;
  const double mu = std::atan2(S, C);
  const double rbar = std::clamp(std::sqrt(C * C + S * S) / sw, 0.0, 1.0 - 1e-12);
  if (p.family == TurnFamily::von_mises) {
    p.mu = mu;
    p.conc = std::clamp(von_mises_kappa_from_r(rbar), 1e-6, 700.0);
    return;
  }
  // wrapped Cauchy: resultant mean direction, golden-section search on rho,
  // guarded so the weighted objective never decreases.
  TurnParams trial = p;
  trial.mu = mu;
  double lo = 1e-6, hi = 0.9999;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  trial.conc = c;
  double fc = weighted_turn_loglik(trial, x, w, state);
  trial.conc = d;
  double fd = weighted_turn_loglik(trial, x, w, state);
  for (int it = 0; it < 40; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      trial.conc = c;
      fc = weighted_turn_loglik(trial, x, w, state);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      trial.conc = d;
      fd = weighted_turn_loglik(trial, x, w, state);
    }
  }
  trial.conc = 0.5 * (lo + hi);
  if (weighted_turn_loglik(trial, x, w, state) >=
      weighted_turn_loglik(p, x, w, state))
    p = trial;
}

inline void m_step(HmmModel& m, const EStats& st) {
  if (st.n_seq > 0.0) {
    m.init[0] = std::clamp(st.init_post[0] / st.n_seq, 1e-12, 1.0 - 1e-12);
    m.init[1] = 1.0 - m.init[0];
  }
  const double r0 = st.xi[0][0] + st.xi[0][1];
  const double r1 = st.xi[1][0] + st.xi[1][1];
  if (r0 > 0.0) m.p11 = std::clamp(st.xi[0][0] / r0, 1e-6, 1.0 - 1e-6);
  if (r1 > 0.0) m.p22 = std::clamp(st.xi[1][1] / r1, 1e-6, 1.0 - 1e-6);
  for (int s = 0; s < 2; ++s) {
    fit_step_weighted(m.step[std::size_t(s)], st.step_x, st.step_w, s);
    fit_turn_weighted(m.turn[std::size_t(s)], st.turn_x, st.turn_w, s);
  }
}

// 1-D two-means over the finite steps, for informed initialisation.
inline std::array<GammaMoments, 2> split_step_moments(const std::vector<HmmSequence>& data) {
  std::vector<double> xs;
  for (const HmmSequence& seq : data)
    for (double v : seq.steps)
      if (std::isfinite(v)) xs.push_back(v);
  if (xs.empty()) return {GammaMoments{0.01, 0.005}, GammaMoments{0.05, 0.02}};
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  double c0 = sorted[sorted.size() / 4];
  double c1 = sorted[(3 * sorted.size()) / 4];
  if (c1 <= c0) c1 = c0 * 2.0 + 1e-6;
  for (int it = 0; it < 50; ++it) {
    double s0 = 0.0, s1 = 0.0;
    std::size_t n0 = 0, n1 = 0;
    for (double v : xs) {
      if (std::fabs(v - c0) <= std::fabs(v - c1)) {
        s0 += v;
        ++n0;
      } else {
        s1 += v;
        ++n1;
      }
    }
    if (n0 == 0 || n1 == 0) break;
    const double nc0 = s0 / double(n0), nc1 = s1 / double(n1);
    if (nc0 == c0 && nc1 == c1) break;
    c0 = nc0;
    c1 = nc1;
  }
  std::array<double, 2> var{0.0, 0.0};
  std::array<std::size_t, 2> n{0, 0};
  for (double v : xs) {
    const int k = std::fabs(v - c0) <= std::fabs(v - c1) ? 0 : 1;
    const double d = v - (k == 0 ? c0 : c1);
    var[std::size_t(k)] += d * d;
    ++n[std::size_t(k)];
  }
  auto sd = [&](int k, double mean) {
    if (n[std::size_t(k)] < 2) return std::max(mean * 0.5, 1e-6);
    return std::max(std::sqrt(var[std::size_t(k)] / double(n[std::size_t(k)] - 1)),
                    std::max(1e-6, 0.05 * mean));
  };
  return {GammaMoments{c0, sd(0, c0)}, GammaMoments{c1, sd(1, c1)}};
}

inline StepParams initial_step_params(StepFamily f, GammaMoments m) {
  switch (f) {
    case StepFamily::gamma: return step_params_gamma(m.mean, m.sd);
    case StepFamily::exponential: return {StepFamily::exponential, 1.0 / m.mean, 0.0};
    case StepFamily::weibull: return {StepFamily::weibull, 1.2, m.mean};
  }
  return {};
}

} // namespace detail

inline double hmm_log_likelihood(const HmmModel& m, const std::vector<HmmSequence>& data) {
  double total = 0.0;
  for (const HmmSequence& seq : data)
    total += detail::forward_pass(m, seq, nullptr, nullptr);
  return total;
}

struct FitOptions {
  int n_starts = 5;
  int max_iters = 500;
  double tol = 1e-6; // absolute log-likelihood change
  std::uint64_t seed = 1;
};

struct FitResult {
  HmmModel model;
  StepFamily step_family = StepFamily::gamma;
  TurnFamily turn_family = TurnFamily::von_mises;
  double aic = std::numeric_limits<double>::infinity();
  int em_iterations = 0;
  std::vector<double> trace; // log-likelihood per EM iteration of the best start
};

// EM over the two-state HMM with multiple jittered starts. States are
// relabelled afterwards so index 1 carries the larger step mean
// (exploratory), index 0 the smaller (encamped).
inline FitResult fit_hmm(const std::vector<HmmSequence>& data, StepFamily sf,
                         TurnFamily tf, const FitOptions& opt = {}) {
  if (data.empty()) throw DataError("fit_hmm: no sequences");
  const auto clusters = detail::split_step_moments(data);

  FitResult best;
  for (int start = 0; start < std::max(1, opt.n_starts); ++start) {
    Rng rng = make_rng(opt.seed, static_cast<std::uint64_t>(start), Stream::calibration);
    std::normal_distribution<double> jn(0.0, 0.25);
    std::uniform_real_distribution<double> ju(-1.0, 1.0);
    const double jit = start == 0 ? 0.0 : 1.0;

    HmmModel m;
    for (int s = 0; s < 2; ++s) {
      GammaMoments mom = clusters[std::size_t(s)];
      mom.mean *= std::exp(jit * jn(rng));
      mom.sd *= std::exp(jit * jn(rng));
      m.step[std::size_t(s)] = detail::initial_step_params(sf, mom);
      m.turn[std::size_t(s)].family = tf;
      m.turn[std::size_t(s)].mu = wrap_angle((s == 0 ? kPi : 0.0) + jit * ju(rng));
      const double conc0 = s == 0 ? 0.5 : 1.0;
      m.turn[std::size_t(s)].conc = tf == TurnFamily::von_mises
                                        ? conc0 * std::exp(jit * jn(rng))
                                        : std::clamp(0.4 + 0.2 * jit * ju(rng), 0.05, 0.95);
    }
    m.p11 = std::clamp(0.85 + 0.1 * jit * ju(rng), 0.6, 0.98);
    m.p22 = std::clamp(0.88 + 0.1 * jit * ju(rng), 0.6, 0.98);
    m.init = {0.5, 0.5};

    std::vector<double> trace;
    double prev = -std::numeric_limits<double>::infinity();
    bool converged = false;
    int iters = 0;
    for (int it = 0; it < opt.max_iters; ++it) {
      detail::EStats st = detail::e_step(m, data);
      if (!std::isfinite(st.logL)) break;
      m.log_likelihood = st.logL;
      trace.push_back(st.logL);
      iters = it + 1;
      if (it > 0 && std::fabs(st.logL - prev) < opt.tol) {
        converged = true;
        break;
      }
      prev = st.logL;
      detail::m_step(m, st);
    }
    if (!converged && !trace.empty()) {
      // the last m-step moved the params past the last recorded likelihood
      const double ll = hmm_log_likelihood(m, data);
      if (std::isfinite(ll)) {
        m.log_likelihood = ll;
        trace.push_back(ll);
      }
    }
    if (trace.empty()) continue;
    if (m.log_likelihood > best.model.log_likelihood) {
      best.model = m;
      best.trace = std::move(trace);
      best.em_iterations = iters;
    }
  }
  if (best.trace.empty()) throw DataError("fit_hmm: every start diverged");

  HmmModel& m = best.model;
  const auto mean_of_state = [&](int s) {
    const StepParams& p = m.step[std::size_t(s)];
    switch (p.family) {
      case StepFamily::gamma: return p.a * p.b;
      case StepFamily::exponential: return 1.0 / p.a;
      case StepFamily::weibull: return p.b * std::tgamma(1.0 + 1.0 / p.a);
    }
    return 0.0;
  };
  if (mean_of_state(0) > mean_of_state(1)) {
    std::swap(m.step[0], m.step[1]);
    std::swap(m.turn[0], m.turn[1]);
    std::swap(m.p11, m.p22);
    std::swap(m.init[0], m.init[1]);
  }
  best.step_family = sf;
  best.turn_family = tf;
  best.aic = hmm_aic(m);
  return best;
}

// All six step/turn family combinations, ascending AIC.
inline std::vector<FitResult> fit_all_families(const std::vector<HmmSequence>& data,
                                               const FitOptions& opt = {}) {
  std::vector<FitResult> out;
  for (StepFamily sf : {StepFamily::gamma, StepFamily::exponential, StepFamily::weibull})
    for (TurnFamily tf : {TurnFamily::von_mises, TurnFamily::wrapped_cauchy})
      out.push_back(fit_hmm(data, sf, tf, opt));
  std::stable_sort(out.begin(), out.end(),
                   [](const FitResult& a, const FitResult& b) { return a.aic < b.aic; });
  return out;
}

// Log-space Viterbi decode; ties resolve to the lower state index.
inline std::vector<int> viterbi(const HmmModel& m, const HmmSequence& seq) {
  const std::size_t T = seq.steps.size();
  if (T == 0) return {};
  const double ltr[2][2] = {{std::log(m.p11), std::log(1.0 - m.p11)},
                            {std::log(1.0 - m.p22), std::log(m.p22)}};
  std::vector<std::array<int, 2>> arg(T);
  std::array<double, 2> score{std::log(m.init[0]), std::log(m.init[1])};
  for (std::size_t t = 0; t < T; ++t) {
    std::array<double, 2> next{};
    for (int j = 0; j < 2; ++j) {
      const double lb = detail::emission_logpdf(m, j, seq.steps[t], seq.turns[t]);
      if (t == 0) {
        next[std::size_t(j)] = score[std::size_t(j)] + lb;
        arg[t][std::size_t(j)] = j;
        continue;
      }
      const double from0 = score[0] + ltr[0][j];
      const double from1 = score[1] + ltr[1][j];
      if (from1 > from0) {
        next[std::size_t(j)] = from1 + lb;
        arg[t][std::size_t(j)] = 1;
      } else {
        next[std::size_t(j)] = from0 + lb;
        arg[t][std::size_t(j)] = 0;
      }
    }
    score = next;
  }
  std::vector<int> path(T);
  path[T - 1] = score[1] > score[0] ? 1 : 0;
  for (std::size_t t = T - 1; t-- > 0;)
    path[t] = arg[t + 1][std::size_t(path[t + 1])];
  return path;
}

// Draw a synthetic observation sequence from a model, for calibration
// self-checks against known ground truth.
inline HmmSequence sample_hmm_sequence(const HmmModel& m, int T, Rng& rng) {
  HmmSequence seq;
  seq.steps.reserve(std::size_t(T));
  seq.turns.reserve(std::size_t(T));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int s = unif(rng) < m.init[0] ? 0 : 1;
  for (int t = 0; t < T; ++t) {
    const StepParams& sp = m.step[std::size_t(s)];
    double x = 0.0;
    switch (sp.family) {
      case StepFamily::gamma: {
        std::gamma_distribution<double> d(sp.a, sp.b);
        x = d(rng);
        break;
      }
      case StepFamily::exponential: {
        std::exponential_distribution<double> d(sp.a);
        x = d(rng);
        break;
      }
      case StepFamily::weibull: {
        std::weibull_distribution<double> d(sp.a, sp.b);
        x = d(rng);
        break;
      }
    }
    seq.steps.push_back(x);
    const TurnParams& tp = m.turn[std::size_t(s)];
    seq.turns.push_back(tp.family == TurnFamily::von_mises
                            ? sample_von_mises(rng, {tp.mu, tp.conc})
                            : sample_wrapped_cauchy(rng, {tp.mu, tp.conc}));
    const double stay = s == 0 ? m.p11 : m.p22;
    if (unif(rng) >= stay) s = 1 - s;
  }
  return seq;
}

// Convert trajectory fixes into step/turn sequences. Runs split at replicate
// boundaries and wherever the sampling interval deviates more than 50% from
// the expected cadence; zero-length steps and their adjacent turns are
// treated as missing.
struct StepSeries {
  std::vector<HmmSequence> sequences;
  std::size_t n_steps = 0; // finite steps across all sequences
};

inline StepSeries extract_steps(const std::vector<TrackPoint>& points,
                                double expected_dt_minutes = 5.0) {
  if (points.size() < 3) throw DataError("extract_steps: need at least 3 fixes");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto minutes_of = [&](const TrackPoint& p) {
    return (p.day - 1) * 1440.0 + p.tick * expected_dt_minutes;
  };

  StepSeries out;
  std::vector<const TrackPoint*> seg;
  auto flush = [&] {
    if (seg.size() >= 3) {
      HmmSequence s;
      const std::size_t n = seg.size() - 1;
      s.steps.resize(n);
      s.turns.assign(n, nan);
      std::vector<double> bearing(n, nan);
      for (std::size_t k = 0; k < n; ++k) {
        const double dx = seg[k + 1]->x - seg[k]->x;
        const double dy = seg[k + 1]->y - seg[k]->y;
        const double d = std::hypot(dx, dy) / 1000.0;
        if (d < 1e-9) {
          s.steps[k] = nan;
        } else {
          s.steps[k] = d;
          bearing[k] = std::atan2(dx, dy);
          ++out.n_steps;
        }
      }
      for (std::size_t k = 1; k < n; ++k)
        if (std::isfinite(bearing[k]) && std::isfinite(bearing[k - 1]))
          s.turns[k] = wrap_angle(bearing[k] - bearing[k - 1]);
      out.sequences.push_back(std::move(s));
    }
    seg.clear();
  };

  seg.push_back(&points[0]);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double dt = minutes_of(points[i]) - minutes_of(points[i - 1]);
    const bool contiguous = points[i].replicate == points[i - 1].replicate &&
                            dt > 0.0 &&
                            std::fabs(dt - expected_dt_minutes) <= 0.5 * expected_dt_minutes;
    if (!contiguous) flush();
    seg.push_back(&points[i]);
  }
  flush();
  if (out.sequences.empty())
    throw DataError("extract_steps: no segment holds three or more usable fixes");
  return out;
}

} // namespace elesim
