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

#ifndef GOFBAYES_DISTRIBUTIONS_HPP_
#define GOFBAYES_DISTRIBUTIONS_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gofbayes/rng.hpp"

namespace gofbayes {

// Shape/rate parameters of the Gamma null model. Construction rejects
// non-positive values.
struct GammaParams {
  double alpha;   // shape
  double lambda;  // rate

  GammaParams(double shape, double rate);
};

// Shape/scale parameters of the Generalised Pareto null model (threshold
// already subtracted, so the support starts at zero). The shape may be any
// finite real; the scale must be positive. Support is (0, inf) for
// gamma >= 0 and (0, -sigma/gamma) for gamma < 0.
struct GpdParams {
  double gamma;  // shape
  double sigma;  // scale

  GpdParams(double shape, double scale);

  // Upper support endpoint: -sigma/gamma for gamma < 0, +inf otherwise.
  double upper_endpoint() const;
};

struct LogNormalParams {
  double mu;
  double sigma;
  LogNormalParams(double mu_in, double sigma_in);
};

struct FParams {
  double d1;
  double d2;
  FParams(double d1_in, double d2_in);
};

struct WeibullParams {
  double shape;
  double scale;
  WeibullParams(double shape_in, double scale_in);
};

// Any distribution the Monte Carlo study draws samples from, null or
// alternative.
using SamplingDistribution = std::variant<GammaParams, GpdParams,
                                          LogNormalParams, FParams,
                                          WeibullParams>;

// ---- Gamma model --------------------------------------------------------

// Log density. Returns -inf for x <= 0 so likelihood sums stay defined.
double gamma_ln_pdf(double x, const GammaParams& p);

// CDF = regularized lower incomplete gamma P(alpha, lambda * x).
double gamma_cdf(double x, const GammaParams& p);

// One draw from Gamma(shape, rate); Marsaglia-Tsang squeeze method.
double gamma_variate(double shape, double rate, Rng& rng);

std::vector<double> gamma_sample(const GammaParams& p, std::size_t n, Rng& rng);

// Unnormalized log of the maximal-data-information prior
// pi(alpha, lambda) = lambda / Gamma(alpha) * exp((alpha-1) psi(alpha) - alpha).
double mdi_ln_prior_gamma(const GammaParams& p);

// ---- Generalised Pareto model -------------------------------------------

// Log density; -inf outside the support; exponential limit at gamma == 0.
double gpd_ln_pdf(double x, const GpdParams& p);

// CDF, clamped to [0, 1]; exponential limit at gamma == 0.
double gpd_cdf(double x, const GpdParams& p);

// Inverse CDF: sigma * ((1-u)^(-gamma) - 1) / gamma, exponential limit at 0.
double gpd_quantile(double u, const GpdParams& p);

std::vector<double> gpd_sample(const GpdParams& p, std::size_t n, Rng& rng);

// Unnormalized log MDI prior, -log(sigma) - gamma on gamma > -1; -inf
// otherwise (the defining expectation diverges at gamma <= -1).
double mdi_ln_prior_gpd(const GpdParams& p);

// ---- Generic sampling-distribution operations ----------------------------

double sampling_ln_pdf(const SamplingDistribution& d, double x);
double sampling_cdf(const SamplingDistribution& d, double x);

// n independent draws from the tagged distribution.
std::vector<double> alt_sample(const SamplingDistribution& d, std::size_t n,
                               Rng& rng);

// (lower, upper) support endpoints.
std::pair<double, double> sampling_support(const SamplingDistribution& d);

// Short display form, e.g. "gamma(4,8)" or "lognormal(0,0.4)".
std::string sampling_name(const SamplingDistribution& d);

// Parses the display form back into a distribution; throws
// std::invalid_argument with the offending text on failure.
SamplingDistribution parse_sampling(const std::string& text);

}  // namespace gofbayes

#endif  // GOFBAYES_DISTRIBUTIONS_HPP_
