#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "elesim/rng.hpp"

namespace elesim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a + kPi, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a - kPi == -kPi ? kPi : a - kPi;
}

struct GammaMoments {
  double mean = 0.0;
  double sd = 0.0;
};

struct GammaParams {
  double shape = 0.0;
  double scale = 0.0;
};

// Moment matching: shape = (mean/sd)^2, scale = sd^2/mean.
inline GammaParams gamma_from_mean_sd(double mean, double sd) {
  if (mean <= 0.0 || sd <= 0.0)
    throw std::invalid_argument("gamma_from_mean_sd: mean and sd must be positive");
  const double shape = (mean / sd) * (mean / sd);
  return {shape, sd * sd / mean};
}

inline GammaMoments gamma_moments(const GammaParams& p) {
  return {p.shape * p.scale, std::sqrt(p.shape) * p.scale};
}

inline double sample_gamma(Rng& rng, const GammaParams& p) {
  std::gamma_distribution<double> d(p.shape, p.scale);
  return d(rng);
}

// log I0(x), series for small arguments, asymptotic expansion beyond.
inline double log_bessel_i0(double x) {
  x = std::fabs(x);
  if (x < 15.0) {
    const double q = x * x / 4.0;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 80; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return std::log(sum);
  }
  const double ix = 1.0 / x;
  const double corr = 1.0 + ix * (0.125 + ix * (0.0703125 + ix * 0.0732421875));
  return x - 0.5 * std::log(kTwoPi * x) + std::log(corr);
}

// A(k) = I1(k)/I0(k), the mean resultant length of a von Mises distribution.
inline double bessel_i1_i0_ratio(double kappa) {
  if (kappa <= 0.0) return 0.0;
  if (kappa < 15.0) {
    const double q = kappa * kappa / 4.0;
    double t0 = 1.0, s0 = 1.0;
    double t1 = 0.5 * kappa, s1 = t1;
    for (int k = 1; k < 80; ++k) {
      t0 *= q / (static_cast<double>(k) * k);
      s0 += t0;
      t1 *= q / (static_cast<double>(k) * (k + 1));
      s1 += t1;
      if (t0 < s0 * 1e-17 && t1 < s1 * 1e-17) break;
    }
    return s1 / s0;
  }
  const double ix = 1.0 / kappa;
  return 1.0 - 0.5 * ix - 0.125 * ix * ix - 0.125 * ix * ix * ix;
}

// Invert A(kappa) = r, Banerjee initial guess plus Newton refinement.
inline double von_mises_kappa_from_r(double r) {
  if (r <= 1e-12) return 0.0;
  if (r >= 1.0 - 1e-12) r = 1.0 - 1e-12;
  double kappa = r * (2.0 - r * r) / (1.0 - r * r);
  for (int it = 0; it < 50; ++it) {
    const double a = bessel_i1_i0_ratio(kappa);
    const double da = 1.0 - a * a - (kappa > 0.0 ? a / kappa : 0.5);
    if (std::fabs(da) < 1e-14) break;
    const double step = (a - r) / da;
    kappa -= step;
    if (kappa < 1e-10) kappa = 1e-10;
    if (std::fabs(step) < 1e-12 * (1.0 + kappa)) break;
  }
  return kappa;
}

struct VonMisesParams {
  double mu = 0.0;
  double kappa = 1.0;
};

inline double von_mises_log_pdf(double theta, const VonMisesParams& p) {
  return p.kappa * std::cos(theta - p.mu) - std::log(kTwoPi) - log_bessel_i0(p.kappa);
}

// Best & Fisher (1979) rejection sampler.
inline double sample_von_mises(Rng& rng, const VonMisesParams& p) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (p.kappa < 1e-8) return wrap_angle(p.mu + kTwoPi * unif(rng) - kPi);
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * p.kappa * p.kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * p.kappa);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  double f = 0.0;
  for (;;) {
    const double z = std::cos(kPi * unif(rng));
    f = (1.0 + r * z) / (r + z);
    const double c = p.kappa * (r - f);
    const double u2 = unif(rng);
    if (c * (2.0 - c) - u2 > 0.0) break;
    if (std::log(c / u2) + 1.0 - c >= 0.0) break;
  }
  const double sign = unif(rng) < 0.5 ? -1.0 : 1.0;
  return wrap_angle(p.mu + sign * std::acos(f));
}

struct WrappedCauchyParams {
  double mu = 0.0;
  double rho = 0.5; // concentration in [0, 1)
};

inline double wrapped_cauchy_log_pdf(double theta, const WrappedCauchyParams& p) {
  const double denom = 1.0 + p.rho * p.rho - 2.0 * p.rho * std::cos(theta - p.mu);
  return std::log(1.0 - p.rho * p.rho) - std::log(kTwoPi * denom);
}

inline double sample_wrapped_cauchy(Rng& rng, const WrappedCauchyParams& p) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (p.rho < 1e-12) return wrap_angle(kTwoPi * unif(rng) - kPi);
  const double gamma = -std::log(p.rho);
  std::cauchy_distribution<double> d(p.mu, gamma);
  return wrap_angle(d(rng));
}

} // namespace elesim
