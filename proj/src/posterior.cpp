/*
 * Copyright 2026 The gofbayes Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gofbayes/posterior.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gofbayes/special_functions.hpp"
#include "gofbayes/statistics.hpp"

namespace gofbayes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSpanNats = 40.0;  // grid reaches mode density minus this
constexpr double kGolden = 0.6180339887498949;

}  // namespace

GammaSuffStats GammaSuffStats::from_sample(std::span<const double> sample) {
  if (sample.empty()) {
    throw std::domain_error("GammaSuffStats: empty sample");
  }
  double sum = 0.0;
  double sum_log = 0.0;
  for (double v : sample) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::domain_error("GammaSuffStats: values must be positive");
    }
    sum += v;
    sum_log += std::log(v);
  }
  return {sample.size(), sum, sum_log};
}

double gamma_alpha_ln_marginal(double alpha, const GammaSuffStats& ss) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) return -kInf;
  const double n = static_cast<double>(ss.n);
  const double na2 = n * alpha + 2.0;
  // Guard the extremes where lnGamma(n a + 2) would overflow its argument.
  if (na2 > 1e300) return -kInf;
  const double psi_a = digamma(alpha);
  return -(n + 1.0) * ln_gamma_fn(alpha) +
         alpha * (ss.sum_log_x + psi_a - 1.0) - psi_a + ln_gamma_fn(na2) -
         na2 * std::log(ss.sum_x);
}

GammaAlphaSampler::GammaAlphaSampler(const GammaSuffStats& ss,
                                     std::size_t grid_size) {
  if (grid_size < 16) {
    throw std::invalid_argument("GammaAlphaSampler: grid too small");
  }
  const auto ln_f = [&ss](double t) {
    return gamma_alpha_ln_marginal(std::exp(t), ss);
  };

  // Bracket the mode in t = log alpha. The Jensen gap
  // log(mean) - mean(log) puts the crude shape estimate near 1/(2 gap);
  // start there and slide the triplet downhill until the center wins.
  const double n = static_cast<double>(ss.n);
  const double mean = ss.sum_x / n;
  const double gap = std::log(mean) - ss.sum_log_x / n;
  double mid = (gap > 0.0 && std::isfinite(gap))
                   ? std::log(std::fmax(0.5 / gap, 1e-6))
                   : 0.0;
  double lo = mid - 1.0;
  double hi = mid + 1.0;
  double f_mid = ln_f(mid);
  double f_lo = ln_f(lo);
  double f_hi = ln_f(hi);
  int guard = 0;
  while (guard++ < 400 && !(f_mid >= f_lo && f_mid >= f_hi)) {
    if (f_lo > f_mid) {
      hi = mid; f_hi = f_mid;
      mid = lo; f_mid = f_lo;
      lo = mid - 2.0 * (hi - mid);
      f_lo = ln_f(lo);
    } else {
      lo = mid; f_lo = f_mid;
      mid = hi; f_mid = f_hi;
      hi = mid + 2.0 * (mid - lo);
      f_hi = ln_f(hi);
    }
  }
  if (guard >= 400 || !std::isfinite(f_mid)) {
    throw std::domain_error(
        "GammaAlphaSampler: shape marginal has no interior mode "
        "(degenerate sample?)");
  }

  // Golden-section refinement of the mode.
  double a = lo, b = hi;
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = ln_f(c), fd = ln_f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-10; ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - kGolden * (b - a);
      fc = ln_f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + kGolden * (b - a);
      fd = ln_f(d);
    }
  }
  const double t_mode = 0.5 * (a + b);
  const double f_mode = ln_f(t_mode);
  mode_ = std::exp(t_mode);

  // Expand outwards to the points where the log density has dropped
  // kSpanNats below the mode, then bisect onto them. The marginal is NOT
  // integrable at alpha -> 0: the prior's exp((alpha-1) psi(alpha)) factor
  // grows like exp(1/alpha), so on the left the density falls into a dip
  // and then rises again toward the boundary. The sampler draws from the
  // proper interior component; when the left tail never reaches the
  // kSpanNats drop, the grid is capped at the interior dip instead.
  const auto minimize_between = [&](double a, double b) {
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = ln_f(c), fd = ln_f(d);
    for (int it = 0; it < 160 && std::fabs(b - a) > 1e-10; ++it) {
      if (fc < fd) {
        b = d; d = c; fd = fc;
        c = b - kGolden * (b - a);
        fc = ln_f(c);
      } else {
        a = c; c = d; fc = fd;
        d = a + kGolden * (b - a);
        fd = ln_f(d);
      }
    }
    return 0.5 * (a + b);
  };
  const auto find_edge = [&](double direction) {
    double step = 0.5;
    double prev_inner = t_mode;
    double inner = t_mode;
    double f_inner = f_mode;
    double outer = t_mode + direction * step;
    double f_outer = ln_f(outer);
    int tries = 0;
    while (f_outer > f_mode - kSpanNats) {
      if (f_outer > f_inner && tries > 0) {
        // Rising again: boundary spike. Cap at the interior minimum.
        return minimize_between(std::fmin(outer, prev_inner),
                                std::fmax(outer, prev_inner));
      }
      prev_inner = inner;
      inner = outer;
      f_inner = f_outer;
      step *= 2.0;
      outer = t_mode + direction * step;
      f_outer = ln_f(outer);
      if (++tries > 200) {
        throw std::domain_error(
            "GammaAlphaSampler: shape marginal tail does not decay "
            "(degenerate sample?)");
      }
    }
    for (int it = 0; it < 80; ++it) {
      const double m = 0.5 * (inner + outer);
      if (ln_f(m) > f_mode - kSpanNats) inner = m; else outer = m;
    }
    return outer;
  };
  const double t_left = find_edge(-1.0);
  const double t_right = find_edge(+1.0);

  // Trapezoid CDF over the grid in t, with the log-alpha Jacobian folded in:
  // density in t is p(alpha) * alpha = exp(ln_f(t) + t).
  t_.resize(grid_size);
  cdf_.resize(grid_size);
  const double dt = (t_right - t_left) / static_cast<double>(grid_size - 1);
  std::vector<double> w(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    t_[i] = t_left + dt * static_cast<double>(i);
    w[i] = std::exp(ln_f(t_[i]) + t_[i] - (f_mode + t_mode));
  }
  double acc = 0.0;
  cdf_[0] = 0.0;
  for (std::size_t i = 1; i < grid_size; ++i) {
    acc += 0.5 * (w[i - 1] + w[i]) * dt;
    cdf_[i] = acc;
  }
  if (!(acc > 0.0) || !std::isfinite(acc)) {
    throw std::domain_error("GammaAlphaSampler: could not normalize marginal");
  }
  for (auto& v : cdf_) v /= acc;
}

double GammaAlphaSampler::quantile(double u) const {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw std::invalid_argument("GammaAlphaSampler::quantile: u in (0,1)");
  }
  // Binary search for the segment containing u, then linear interpolation.
  std::size_t lo = 0, hi = cdf_.size() - 1;
  while (hi - lo > 1) {
    const std::size_t m = (lo + hi) / 2;
    if (cdf_[m] < u) lo = m; else hi = m;
  }
  const double span = cdf_[hi] - cdf_[lo];
  const double frac = span > 0.0 ? (u - cdf_[lo]) / span : 0.5;
  return std::exp(t_[lo] + frac * (t_[hi] - t_[lo]));
}

std::vector<GammaParams> sample_gamma_posterior(std::span<const double> sample,
                                                std::size_t n_draws, Rng& rng,
                                                std::size_t grid_size) {
  if (n_draws < 1) {
    throw std::invalid_argument("sample_gamma_posterior: n_draws >= 1");
  }
  const GammaSuffStats ss = GammaSuffStats::from_sample(sample);
  // A zero-variance sample makes the shape marginal improper.
  const double mean = ss.sum_x / static_cast<double>(ss.n);
  const double gap = std::log(mean) - ss.sum_log_x / static_cast<double>(ss.n);
  if (!(gap > 0.0)) {
    throw std::domain_error("sample_gamma_posterior: degenerate sample");
  }
  const GammaAlphaSampler alpha_sampler(ss, grid_size);
  std::vector<GammaParams> draws;
  draws.reserve(n_draws);
  const double n = static_cast<double>(ss.n);
  for (std::size_t i = 0; i < n_draws; ++i) {
    const double alpha = alpha_sampler.quantile(rng.uniform());
    const double lambda = gamma_variate(n * alpha + 2.0, ss.sum_x, rng);
    draws.emplace_back(alpha, lambda);
  }
  return draws;
}

bool mh_accept(double log_target_current, double log_target_proposed,
               Rng& rng) {
  if (log_target_proposed == -kInf) return false;
  if (log_target_proposed >= log_target_current) return true;
  return std::log(rng.uniform()) < log_target_proposed - log_target_current;
}

std::vector<GpdParams> sample_gpd_posterior(std::span<const double> sample,
                                            std::size_t n_draws,
                                            const MhConfig& cfg, Rng& rng,
                                            MhDiagnostics* diag) {
  if (n_draws < 1) {
    throw std::invalid_argument("sample_gpd_posterior: n_draws >= 1");
  }
  if (!(cfg.sd_gamma > 0.0) || !(cfg.sd_log_sigma > 0.0) || cfg.thin < 1) {
    throw std::invalid_argument("sample_gpd_posterior: invalid MhConfig");
  }
  for (double v : sample) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::domain_error("sample_gpd_posterior: values must be positive");
    }
  }

  const auto log_target = [sample](double g, double log_s) {
    const double sigma = std::exp(log_s);
    const double lp = mdi_ln_prior_gpd(GpdParams(g, sigma));
    if (lp == -kInf) return -kInf;
    const double ll = gpd_ln_likelihood(sample, g, sigma);
    if (ll == -kInf) return -kInf;
    return ll + lp + log_s;  // + log sigma: Jacobian of the log-scale walk
  };

  // Start from the ML fit when it exists, otherwise from the exponential
  // moment start (gamma = 0, sigma = sample mean).
  double g = 0.0;
  double log_s;
  if (cfg.init.has_value()) {
    g = cfg.init->gamma;
    log_s = std::log(cfg.init->sigma);
  } else {
    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= static_cast<double>(sample.size());
    log_s = std::log(mean);
    if (sample.size() >= 2) {
      const auto fit = ml_gpd(sample);
      if (fit.ok() && fit.params().gamma > -1.0) {
        g = fit.params().gamma;
        log_s = std::log(fit.params().sigma);
      }
    }
  }
  double lp = log_target(g, log_s);
  if (!std::isfinite(lp)) {
    // Fall back to the always-supported exponential start.
    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= static_cast<double>(sample.size());
    g = 0.0;
    log_s = std::log(mean);
    lp = log_target(g, log_s);
    if (!std::isfinite(lp)) {
      throw std::domain_error(
          "sample_gpd_posterior: no finite-density starting point");
    }
  }

  std::vector<GpdParams> draws;
  draws.reserve(n_draws);
  const std::size_t total_steps = cfg.burn_in + n_draws * cfg.thin;
  std::size_t accepted = 0;
  for (std::size_t step = 1; step <= total_steps; ++step) {
    const double g_prop = g + cfg.sd_gamma * rng.normal();
    const double ls_prop = log_s + cfg.sd_log_sigma * rng.normal();
    const double lp_prop = log_target(g_prop, ls_prop);
    if (mh_accept(lp, lp_prop, rng)) {
      g = g_prop;
      log_s = ls_prop;
      lp = lp_prop;
      ++accepted;
    }
    if (step > cfg.burn_in && (step - cfg.burn_in) % cfg.thin == 0) {
      draws.emplace_back(g, std::exp(log_s));
    }
  }
  if (diag != nullptr) {
    diag->steps = total_steps;
    diag->accepted = accepted;
  }
  return draws;
}

}  // namespace gofbayes
