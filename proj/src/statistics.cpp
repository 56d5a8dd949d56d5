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

#include "gofbayes/statistics.hpp"

#include <array>
#include <cmath>

namespace gofbayes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Moments {
  double mean;
  double var;  // n-1 denominator
};

Moments sample_moments(std::span<const double> s) {
  const double n = static_cast<double>(s.size());
  double sum = 0.0;
  for (double v : s) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : s) {
    const double d = v - mean;
    ss += d * d;
  }
  return {mean, ss / (n - 1.0)};
}

void check_fit_preconditions(std::span<const double> s, const char* who) {
  if (s.size() < 2) {
    throw std::domain_error(std::string(who) + ": need at least 2 values");
  }
  for (double v : s) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::domain_error(std::string(who) +
                              ": values must be positive and finite");
    }
  }
}

// Minimal Nelder-Mead on R^2. Converges when the spread of simplex function
// values drops below ftol.
struct SimplexResult {
  std::array<double, 2> x;
  double f;
  bool converged;
};

template <class F>
SimplexResult nelder_mead_2d(F&& f, std::array<double, 2> start,
                             std::array<double, 2> step, int max_iter,
                             double ftol) {
  std::array<std::array<double, 2>, 3> px;
  std::array<double, 3> pf;
  px[0] = start;
  px[1] = {start[0] + step[0], start[1]};
  px[2] = {start[0], start[1] + step[1]};
  for (int i = 0; i < 3; ++i) pf[i] = f(px[i][0], px[i][1]);

  auto order = [&] {
    if (pf[0] > pf[1]) { std::swap(pf[0], pf[1]); std::swap(px[0], px[1]); }
    if (pf[1] > pf[2]) { std::swap(pf[1], pf[2]); std::swap(px[1], px[2]); }
    if (pf[0] > pf[1]) { std::swap(pf[0], pf[1]); std::swap(px[0], px[1]); }
  };

  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    order();
    if (std::isfinite(pf[2]) && pf[2] - pf[0] <= ftol) {
      converged = true;
      break;
    }
    const double cx = 0.5 * (px[0][0] + px[1][0]);
    const double cy = 0.5 * (px[0][1] + px[1][1]);
    const double rx = cx + (cx - px[2][0]);
    const double ry = cy + (cy - px[2][1]);
    const double fr = f(rx, ry);
    if (fr < pf[0]) {
      const double ex = cx + 2.0 * (cx - px[2][0]);
      const double ey = cy + 2.0 * (cy - px[2][1]);
      const double fe = f(ex, ey);
      if (fe < fr) {
        px[2] = {ex, ey};
        pf[2] = fe;
      } else {
        px[2] = {rx, ry};
        pf[2] = fr;
      }
    } else if (fr < pf[1]) {
      px[2] = {rx, ry};
      pf[2] = fr;
    } else {
      const double kx = cx + 0.5 * ((fr < pf[2] ? rx : px[2][0]) - cx);
      const double ky = cy + 0.5 * ((fr < pf[2] ? ry : px[2][1]) - cy);
      const double fk = f(kx, ky);
      if (fk < std::fmin(fr, pf[2])) {
        px[2] = {kx, ky};
        pf[2] = fk;
      } else {
        // shrink toward the best vertex
        for (int i = 1; i < 3; ++i) {
          px[i][0] = px[0][0] + 0.5 * (px[i][0] - px[0][0]);
          px[i][1] = px[0][1] + 0.5 * (px[i][1] - px[0][1]);
          pf[i] = f(px[i][0], px[i][1]);
        }
      }
    }
  }
  order();
  return {px[0], pf[0], converged};
}

}  // namespace

const char* to_string(FitFailure f) {
  switch (f) {
    case FitFailure::kNonConvergence: return "non-convergence";
    case FitFailure::kBoundary: return "boundary";
    case FitFailure::kNonFiniteObjective: return "non-finite-objective";
  }
  return "unknown";
}

FitOutcome<GammaParams> mom_gamma(std::span<const double> sample) {
  check_fit_preconditions(sample, "mom_gamma");
  const Moments m = sample_moments(sample);
  if (!(m.var > 0.0)) return FitOutcome<GammaParams>::failed(FitFailure::kBoundary);
  return FitOutcome<GammaParams>::fitted(
      GammaParams(m.mean * m.mean / m.var, m.mean / m.var));
}

double gpd_ln_likelihood(std::span<const double> sample, double gamma,
                         double sigma) {
  const double n = static_cast<double>(sample.size());
  if (gamma == 0.0) {
    double sum = 0.0;
    for (double x : sample) sum += x;
    return -n * std::log(sigma) - sum / sigma;
  }
  const double scale = gamma / sigma;
  double sum_log = 0.0;
  for (double x : sample) {
    const double z = scale * x;
    if (z <= -1.0) return -kInf;
    sum_log += std::log1p(z);
  }
  return -n * std::log(sigma) - (1.0 / gamma + 1.0) * sum_log;
}

FitOutcome<GpdParams> ml_gpd(std::span<const double> sample) {
  check_fit_preconditions(sample, "ml_gpd");
  constexpr int kMaxIterations = 500;
  constexpr int kRestarts = 3;
  constexpr double kFtol = 1e-8;

  const auto nll = [sample](double g, double log_s) {
    const double ll = gpd_ln_likelihood(sample, g, std::exp(log_s));
    return std::isfinite(ll) ? -ll : kInf;
  };

  // Moment-based start: mean = sigma/(1-gamma), var = mean^2/(1-2 gamma).
  const Moments m = sample_moments(sample);
  if (!(m.var > 0.0)) {
    // Constant sample: the likelihood is unbounded with no interior optimum.
    return FitOutcome<GpdParams>::failed(FitFailure::kBoundary);
  }
  double g0 = 0.0;
  double s0 = m.mean;
  if (m.var > 0.0) {
    const double r = m.mean * m.mean / m.var;
    g0 = std::clamp(0.5 * (1.0 - r), -0.9, 0.45);
    s0 = std::fmax(m.mean * (1.0 - g0), 1e-300);
  }
  std::array<double, 2> start = {g0, std::log(s0)};
  if (!std::isfinite(nll(start[0], start[1]))) {
    start = {0.0, std::log(m.mean)};  // exponential start is always finite
    if (!std::isfinite(nll(start[0], start[1]))) {
      return FitOutcome<GpdParams>::failed(FitFailure::kNonFiniteObjective);
    }
  }

  SimplexResult best{start, nll(start[0], start[1]), false};
  std::array<double, 2> step = {0.25, 0.5};
  for (int attempt = 0; attempt < kRestarts; ++attempt) {
    const SimplexResult r =
        nelder_mead_2d(nll, best.x, step, kMaxIterations, kFtol);
    if (r.f <= best.f || r.converged) best = r;
    if (best.converged) break;
    step = {step[0] * 0.5, step[1] * 0.5};
  }

  if (!std::isfinite(best.f)) {
    return FitOutcome<GpdParams>::failed(FitFailure::kNonFiniteObjective);
  }
  if (best.f < -1e12) {
    // Unbounded likelihood (shape <= -1 with the endpoint collapsing onto
    // the sample maximum); there is no optimum to report.
    return FitOutcome<GpdParams>::failed(FitFailure::kBoundary);
  }
  if (!best.converged) {
    return FitOutcome<GpdParams>::failed(FitFailure::kNonConvergence);
  }
  // Converged optima with shape <= -1 are legitimate fits of this
  // estimator and are returned as such; reference ML implementations do
  // not restrict the shape either.
  return FitOutcome<GpdParams>::fitted(
      GpdParams(best.x[0], std::exp(best.x[1])));
}

double ks_distance(std::span<const double> values) {
  if (values.empty()) throw std::domain_error("ks_distance: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double v = sorted[i];
    if (v < 0.0 || v > 1.0) {
      throw std::domain_error("ks_distance: values must lie in [0, 1]");
    }
    const double lo = v - static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n - v;
    d = std::fmax(d, std::fmax(lo, hi));
  }
  return d;
}

}  // namespace gofbayes
