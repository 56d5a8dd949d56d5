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

#ifndef GOFBAYES_STATISTICS_HPP_
#define GOFBAYES_STATISTICS_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "gofbayes/distributions.hpp"

namespace gofbayes {

// Why a parameter fit did not produce usable estimates.
enum class FitFailure {
  kNonConvergence,      // optimizer exhausted its budget
  kBoundary,            // optimum ran into a boundary (degenerate likelihood)
  kNonFiniteObjective,  // no starting point with a finite objective
};

const char* to_string(FitFailure f);

// Either fitted parameters or a failure reason.
template <class Params>
class FitOutcome {
 public:
  static FitOutcome fitted(Params p) { return FitOutcome(std::move(p)); }
  static FitOutcome failed(FitFailure f) { return FitOutcome(f); }

  bool ok() const { return params_.has_value(); }
  const Params& params() const { return *params_; }
  FitFailure failure() const { return failure_; }

 private:
  explicit FitOutcome(Params p)
      : params_(std::move(p)), failure_(FitFailure::kNonConvergence) {}
  explicit FitOutcome(FitFailure f) : failure_(f) {}

  std::optional<Params> params_;
  FitFailure failure_;
};

// Anderson-Darling discrepancy
//   A^2 = -n - sum_k (2k-1)/n [log F(x_(k)) + log(1 - F(x_(n+1-k)))]
// for the sorted sample under a model CDF. CDF values are clamped to
// [1e-12, 1 - 1e-12] before the logs; any value that is exactly 0 or 1
// before clamping marks the sample as out of support and the statistic is
// +inf. Throws std::domain_error on an empty sample.
template <class Cdf>
double anderson_darling_sorted(std::span<const double> sorted, Cdf&& cdf) {
  static constexpr double kClamp = 1e-12;
  const std::size_t n = sorted.size();
  if (n == 0) throw std::domain_error("anderson_darling: empty sample");
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted[i]);
    if (f == 0.0 || f == 1.0) {
      return std::numeric_limits<double>::infinity();
    }
    u[i] = std::clamp(f, kClamp, 1.0 - kClamp);
  }
  const double dn = static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double w = (2.0 * static_cast<double>(k) - 1.0) / dn;
    acc += w * (std::log(u[k - 1]) + std::log1p(-u[n - k]));
  }
  return -dn - acc;
}

template <class Cdf>
double anderson_darling(std::span<const double> sample, Cdf&& cdf) {
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  return anderson_darling_sorted(std::span<const double>(sorted),
                                 std::forward<Cdf>(cdf));
}

// Method-of-moments Gamma fit: alpha = mean^2 / var, lambda = mean / var,
// with the n-1 variance denominator. Fails with kBoundary on a constant
// sample. Throws std::domain_error for n < 2 or non-positive values.
FitOutcome<GammaParams> mom_gamma(std::span<const double> sample);

// GPD log likelihood at (gamma, sigma); -inf when any point is outside the
// support implied by the parameters.
double gpd_ln_likelihood(std::span<const double> sample, double gamma,
                         double sigma);

// Maximum-likelihood GPD fit by Nelder-Mead search in (gamma, log sigma)
// from a moment-based start, with restarts. Converged optima are returned
// whatever the shape (estimates below -1 occur for short-tailed samples,
// as in reference ML implementations). Failure reasons follow the enum:
// budget exhaustion, an unbounded-likelihood runaway, or no finite
// starting objective. Throws std::domain_error for n < 2 or non-positive
// values.
FitOutcome<GpdParams> ml_gpd(std::span<const double> sample);

// Sup-norm distance between the empirical CDF of `values` and the
// Uniform(0,1) CDF. Values must lie in [0, 1]; throws on empty input.
double ks_distance(std::span<const double> values);

}  // namespace gofbayes

#endif  // GOFBAYES_STATISTICS_HPP_
