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

#include "gofbayes/distributions.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "gofbayes/special_functions.hpp"

namespace gofbayes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHalfLog2Pi = 0.918938533204672741780329736406;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

GammaParams::GammaParams(double shape, double rate)
    : alpha(shape), lambda(rate) {
  require(finite_positive(shape) && finite_positive(rate),
          "GammaParams: shape and rate must be positive and finite");
}

GpdParams::GpdParams(double shape, double scale) : gamma(shape), sigma(scale) {
  require(std::isfinite(shape) && finite_positive(scale),
          "GpdParams: shape must be finite and scale positive");
}

double GpdParams::upper_endpoint() const {
  return gamma < 0.0 ? -sigma / gamma : kInf;
}

LogNormalParams::LogNormalParams(double mu_in, double sigma_in)
    : mu(mu_in), sigma(sigma_in) {
  require(std::isfinite(mu_in) && finite_positive(sigma_in),
          "LogNormalParams: sigma must be positive");
}

FParams::FParams(double d1_in, double d2_in) : d1(d1_in), d2(d2_in) {
  require(finite_positive(d1_in) && finite_positive(d2_in),
          "FParams: degrees of freedom must be positive");
}

WeibullParams::WeibullParams(double shape_in, double scale_in)
    : shape(shape_in), scale(scale_in) {
  require(finite_positive(shape_in) && finite_positive(scale_in),
          "WeibullParams: shape and scale must be positive");
}

// ---- Gamma ---------------------------------------------------------------

double gamma_ln_pdf(double x, const GammaParams& p) {
  if (!(x > 0.0)) return -kInf;
  return p.alpha * std::log(p.lambda) - ln_gamma_fn(p.alpha) +
         (p.alpha - 1.0) * std::log(x) - p.lambda * x;
}

double gamma_cdf(double x, const GammaParams& p) {
  if (x <= 0.0) return 0.0;
  return reg_inc_gamma(p.alpha, p.lambda * x);
}

double gamma_variate(double shape, double rate, Rng& rng) {
  // Marsaglia-Tsang; shape < 1 boosted through the alpha+1 identity.
  double boost = 1.0;
  double a = shape;
  if (a < 1.0) {
    boost = std::pow(rng.uniform(), 1.0 / a);
    a += 1.0;
  }
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = rng.normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * z * z * z * z) return boost * d * v / rate;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) {
      return boost * d * v / rate;
    }
  }
}

std::vector<double> gamma_sample(const GammaParams& p, std::size_t n,
                                 Rng& rng) {
  require(n >= 1, "gamma_sample: n must be at least 1");
  std::vector<double> out(n);
  for (auto& v : out) v = gamma_variate(p.alpha, p.lambda, rng);
  return out;
}

double mdi_ln_prior_gamma(const GammaParams& p) {
  return std::log(p.lambda) - ln_gamma_fn(p.alpha) +
         (p.alpha - 1.0) * digamma(p.alpha) - p.alpha;
}

// ---- Generalised Pareto ---------------------------------------------------

double gpd_ln_pdf(double x, const GpdParams& p) {
  if (!(x > 0.0)) return -kInf;
  if (p.gamma == 0.0) return -std::log(p.sigma) - x / p.sigma;
  const double z = p.gamma * x / p.sigma;
  if (z <= -1.0) return -kInf;  // beyond the upper endpoint when gamma < 0
  return -std::log(p.sigma) - (1.0 / p.gamma + 1.0) * std::log1p(z);
}

double gpd_cdf(double x, const GpdParams& p) {
  if (x <= 0.0) return 0.0;
  if (p.gamma == 0.0) return -std::expm1(-x / p.sigma);
  const double z = p.gamma * x / p.sigma;
  if (z <= -1.0) return 1.0;
  const double f = -std::expm1(-std::log1p(z) / p.gamma);
  return std::fmin(std::fmax(f, 0.0), 1.0);
}

double gpd_quantile(double u, const GpdParams& p) {
  require(u >= 0.0 && u < 1.0, "gpd_quantile: u must lie in [0, 1)");
  if (u == 0.0) return 0.0;
  const double l = std::log1p(-u);
  if (p.gamma == 0.0) return -p.sigma * l;
  return p.sigma * std::expm1(-p.gamma * l) / p.gamma;
}

std::vector<double> gpd_sample(const GpdParams& p, std::size_t n, Rng& rng) {
  require(n >= 1, "gpd_sample: n must be at least 1");
  std::vector<double> out(n);
  for (auto& v : out) v = gpd_quantile(rng.uniform(), p);
  return out;
}

double mdi_ln_prior_gpd(const GpdParams& p) {
  if (p.gamma <= -1.0) return -kInf;
  return -std::log(p.sigma) - p.gamma;
}

// ---- SamplingDistribution --------------------------------------------------

namespace {

double lognormal_ln_pdf(double x, const LogNormalParams& p) {
  if (!(x > 0.0)) return -kInf;
  const double z = (std::log(x) - p.mu) / p.sigma;
  return -std::log(x * p.sigma) - kHalfLog2Pi - 0.5 * z * z;
}

double lognormal_cdf(double x, const LogNormalParams& p) {
  if (x <= 0.0) return 0.0;
  const double z = (std::log(x) - p.mu) / p.sigma;
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double f_ln_pdf(double x, const FParams& p) {
  if (!(x > 0.0)) return -kInf;
  const double a = 0.5 * p.d1;
  const double b = 0.5 * p.d2;
  const double ln_beta = ln_gamma_fn(a) + ln_gamma_fn(b) - ln_gamma_fn(a + b);
  return a * std::log(p.d1 / p.d2) + (a - 1.0) * std::log(x) -
         (a + b) * std::log1p(p.d1 * x / p.d2) - ln_beta;
}

double f_cdf(double x, const FParams& p) {
  if (x <= 0.0) return 0.0;
  const double w = p.d1 * x / (p.d1 * x + p.d2);
  return reg_inc_beta(0.5 * p.d1, 0.5 * p.d2, w);
}

double weibull_ln_pdf(double x, const WeibullParams& p) {
  if (!(x > 0.0)) return -kInf;
  const double z = x / p.scale;
  return std::log(p.shape / p.scale) + (p.shape - 1.0) * std::log(z) -
         std::pow(z, p.shape);
}

double weibull_cdf(double x, const WeibullParams& p) {
  if (x <= 0.0) return 0.0;
  return -std::expm1(-std::pow(x / p.scale, p.shape));
}

std::string format_pair(const char* name, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s(%.10g,%.10g)", name, a, b);
  return buf;
}

}  // namespace

double sampling_ln_pdf(const SamplingDistribution& d, double x) {
  return std::visit(
      [x](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GammaParams>) return gamma_ln_pdf(x, p);
        else if constexpr (std::is_same_v<T, GpdParams>) return gpd_ln_pdf(x, p);
        else if constexpr (std::is_same_v<T, LogNormalParams>)
          return lognormal_ln_pdf(x, p);
        else if constexpr (std::is_same_v<T, FParams>) return f_ln_pdf(x, p);
        else return weibull_ln_pdf(x, p);
      },
      d);
}

double sampling_cdf(const SamplingDistribution& d, double x) {
  return std::visit(
      [x](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GammaParams>) return gamma_cdf(x, p);
        else if constexpr (std::is_same_v<T, GpdParams>) return gpd_cdf(x, p);
        else if constexpr (std::is_same_v<T, LogNormalParams>)
          return lognormal_cdf(x, p);
        else if constexpr (std::is_same_v<T, FParams>) return f_cdf(x, p);
        else return weibull_cdf(x, p);
      },
      d);
}

std::vector<double> alt_sample(const SamplingDistribution& d, std::size_t n,
                               Rng& rng) {
  require(n >= 1, "alt_sample: n must be at least 1");
  std::vector<double> out(n);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GammaParams>) {
          for (auto& v : out) v = gamma_variate(p.alpha, p.lambda, rng);
        } else if constexpr (std::is_same_v<T, GpdParams>) {
          for (auto& v : out) v = gpd_quantile(rng.uniform(), p);
        } else if constexpr (std::is_same_v<T, LogNormalParams>) {
          for (auto& v : out) v = std::exp(p.mu + p.sigma * rng.normal());
        } else if constexpr (std::is_same_v<T, FParams>) {
          for (auto& v : out) {
            const double g1 = gamma_variate(0.5 * p.d1, 1.0, rng);
            const double g2 = gamma_variate(0.5 * p.d2, 1.0, rng);
            v = (g1 * p.d2) / (g2 * p.d1);
          }
        } else {
          for (auto& v : out) {
            v = p.scale * std::pow(-std::log1p(-rng.uniform()), 1.0 / p.shape);
          }
        }
      },
      d);
  return out;
}

std::pair<double, double> sampling_support(const SamplingDistribution& d) {
  if (const auto* g = std::get_if<GpdParams>(&d)) {
    return {0.0, g->upper_endpoint()};
  }
  return {0.0, kInf};
}

std::string sampling_name(const SamplingDistribution& d) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GammaParams>)
          return format_pair("gamma", p.alpha, p.lambda);
        else if constexpr (std::is_same_v<T, GpdParams>)
          return format_pair("gpd", p.gamma, p.sigma);
        else if constexpr (std::is_same_v<T, LogNormalParams>)
          return format_pair("lognormal", p.mu, p.sigma);
        else if constexpr (std::is_same_v<T, FParams>)
          return format_pair("f", p.d1, p.d2);
        else
          return format_pair("weibull", p.shape, p.scale);
      },
      d);
}

SamplingDistribution parse_sampling(const std::string& text) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos ||
      close < open) {
    throw std::invalid_argument("parse_sampling: expected name(a,b) in '" +
                                text + "'");
  }
  std::string name = text.substr(0, open);
  // Trim whitespace around the name.
  while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front())))
    name.erase(name.begin());
  while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back())))
    name.pop_back();
  const std::string args = text.substr(open + 1, close - open - 1);
  const auto comma = args.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("parse_sampling: expected two arguments in '" +
                                text + "'");
  }
  double a, b;
  try {
    a = std::stod(args.substr(0, comma));
    b = std::stod(args.substr(comma + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("parse_sampling: non-numeric argument in '" +
                                text + "'");
  }
  if (name == "gamma") return GammaParams(a, b);
  if (name == "gpd") return GpdParams(a, b);
  if (name == "lognormal") return LogNormalParams(a, b);
  if (name == "f") return FParams(a, b);
  if (name == "weibull") return WeibullParams(a, b);
  throw std::invalid_argument("parse_sampling: unknown distribution '" + name +
                              "'");
}

}  // namespace gofbayes
