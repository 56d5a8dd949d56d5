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

#include "gofbayes/gof.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "gofbayes/statistics.hpp"

namespace gofbayes {

namespace {

void check_family_params(ModelFamily family, const ModelParams& theta,
                         const char* who) {
  const bool ok = (family == ModelFamily::kGamma)
                      ? std::holds_alternative<GammaParams>(theta)
                      : std::holds_alternative<GpdParams>(theta);
  if (!ok) {
    throw std::invalid_argument(std::string(who) +
                                ": parameter type does not match the family");
  }
}

double model_cdf(ModelFamily family, const ModelParams& theta, double x) {
  if (family == ModelFamily::kGamma) {
    return gamma_cdf(x, std::get<GammaParams>(theta));
  }
  return gpd_cdf(x, std::get<GpdParams>(theta));
}

double ad_at(ModelFamily family, const ModelParams& theta,
             std::span<const double> sorted) {
  return anderson_darling_sorted(
      sorted, [&](double x) { return model_cdf(family, theta, x); });
}

std::vector<double> model_draw(ModelFamily family, const ModelParams& theta,
                               std::size_t n, Rng& rng) {
  if (family == ModelFamily::kGamma) {
    return gamma_sample(std::get<GammaParams>(theta), n, rng);
  }
  return gpd_sample(std::get<GpdParams>(theta), n, rng);
}

std::optional<ModelParams> model_fit(ModelFamily family,
                                     std::span<const double> sample,
                                     FitFailure* reason = nullptr) {
  if (family == ModelFamily::kGamma) {
    const auto fit = mom_gamma(sample);
    if (fit.ok()) return ModelParams(fit.params());
    if (reason != nullptr) *reason = fit.failure();
    return std::nullopt;
  }
  const auto fit = ml_gpd(sample);
  if (fit.ok()) return ModelParams(fit.params());
  if (reason != nullptr) *reason = fit.failure();
  return std::nullopt;
}

std::vector<ModelParams> model_posterior(ModelFamily family,
                                         std::span<const double> sample,
                                         std::size_t n_draws, Rng& rng,
                                         const MhConfig& mh) {
  std::vector<ModelParams> out;
  out.reserve(n_draws);
  try {
    if (family == ModelFamily::kGamma) {
      for (auto& p : sample_gamma_posterior(sample, n_draws, rng)) {
        out.emplace_back(p);
      }
    } else {
      for (auto& p : sample_gpd_posterior(sample, n_draws, mh, rng)) {
        out.emplace_back(p);
      }
    }
  } catch (const std::domain_error& e) {
    throw TestFailure(std::string("posterior sampler failed: ") + e.what());
  }
  return out;
}

ModelParams posterior_mean(ModelFamily family,
                           std::span<const ModelParams> draws) {
  double a = 0.0;
  double b = 0.0;
  for (const auto& d : draws) {
    if (family == ModelFamily::kGamma) {
      const auto& p = std::get<GammaParams>(d);
      a += p.alpha;
      b += p.lambda;
    } else {
      const auto& p = std::get<GpdParams>(d);
      a += p.gamma;
      b += p.sigma;
    }
  }
  const double n = static_cast<double>(draws.size());
  if (family == ModelFamily::kGamma) return GammaParams(a / n, b / n);
  return GpdParams(a / n, b / n);
}

std::vector<double> sorted_copy(std::span<const double> s) {
  std::vector<double> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::kExact: return "exact";
    case Method::kPlugin: return "plugin";
    case Method::kParBoot: return "parboot";
    case Method::kPpp: return "ppp";
    case Method::kBayes: return "bayes";
  }
  return "unknown";
}

const char* to_string(ModelFamily f) {
  return f == ModelFamily::kGamma ? "gamma" : "gpd";
}

Method method_from_string(const std::string& name) {
  if (name == "exact") return Method::kExact;
  if (name == "plugin") return Method::kPlugin;
  if (name == "parboot") return Method::kParBoot;
  if (name == "ppp") return Method::kPpp;
  if (name == "bayes") return Method::kBayes;
  throw std::invalid_argument("unknown method '" + name + "'");
}

ModelFamily family_from_string(const std::string& name) {
  if (name == "gamma") return ModelFamily::kGamma;
  if (name == "gpd") return ModelFamily::kGpd;
  throw std::invalid_argument("unknown model '" + name + "'");
}

double continuity_p_value(std::size_t count_exceeding, std::size_t n) {
  if (n < 1) throw std::invalid_argument("continuity_p_value: N >= 1");
  if (count_exceeding > n) {
    throw std::invalid_argument("continuity_p_value: count exceeds N");
  }
  return (static_cast<double>(count_exceeding) + 0.5) /
         (static_cast<double>(n) + 1.0);
}

std::size_t count_exceeding(std::span<const double> stats, double threshold) {
  std::size_t c = 0;
  for (double s : stats) {
    if (s > threshold) ++c;
  }
  return c;
}

double bootstrap_p_from_theta(std::span<const double> sample,
                              const ModelParams& theta, ModelFamily family,
                              std::size_t n_replicates, Rng& rng,
                              BootstrapTally* tally) {
  check_family_params(family, theta, "bootstrap_p_from_theta");
  if (n_replicates < 1) {
    throw std::invalid_argument("bootstrap_p_from_theta: N >= 1");
  }
  const auto sorted = sorted_copy(sample);
  const double base = ad_at(family, theta, sorted);
  std::size_t exceed = 0;
  std::size_t used = 0;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < n_replicates; ++i) {
    const auto replicate = model_draw(family, theta, sample.size(), rng);
    const auto fit = model_fit(family, replicate);
    if (!fit.has_value()) {
      ++failed;
      continue;
    }
    const auto rep_sorted = sorted_copy(replicate);
    const double stat = ad_at(family, *fit, rep_sorted);
    ++used;
    if (stat > base) ++exceed;
  }
  if (tally != nullptr) *tally = {base, used, failed};
  // With every replicate lost the exceedance count is empty; the continuity
  // adjustment still defines a (vacuous) p-value of 0.5.
  return continuity_p_value(exceed, std::max<std::size_t>(used, 1));
}

TestResult exact_test(std::span<const double> sample,
                      const ModelParams& theta0, ModelFamily family,
                      std::size_t n_replicates, Rng& rng) {
  check_family_params(family, theta0, "exact_test");
  if (n_replicates < 1) throw std::invalid_argument("exact_test: N >= 1");
  const auto sorted = sorted_copy(sample);
  const double observed = ad_at(family, theta0, sorted);
  std::size_t exceed = 0;
  for (std::size_t i = 0; i < n_replicates; ++i) {
    const auto replicate = model_draw(family, theta0, sample.size(), rng);
    const auto rep_sorted = sorted_copy(replicate);
    if (ad_at(family, theta0, rep_sorted) > observed) ++exceed;
  }
  return {continuity_p_value(exceed, n_replicates), observed, n_replicates, 0,
          Method::kExact};
}

TestResult plugin_naive_test(std::span<const double> sample,
                             ModelFamily family, std::size_t n_replicates,
                             Rng& rng) {
  FitFailure reason = FitFailure::kNonConvergence;
  const auto fit = model_fit(family, sample, &reason);
  if (!fit.has_value()) {
    throw TestFailure(std::string("plugin_naive_test: base estimation failed (") +
                      to_string(reason) + ")");
  }
  TestResult r = exact_test(sample, *fit, family, n_replicates, rng);
  r.method = Method::kPlugin;
  return r;
}

TestResult parametric_bootstrap_test(std::span<const double> sample,
                                     ModelFamily family,
                                     std::size_t n_replicates, Rng& rng) {
  FitFailure reason = FitFailure::kNonConvergence;
  const auto fit = model_fit(family, sample, &reason);
  if (!fit.has_value()) {
    throw TestFailure(
        std::string("parametric_bootstrap_test: base estimation failed (") +
        to_string(reason) + ")");
  }
  BootstrapTally tally;
  const double p =
      bootstrap_p_from_theta(sample, *fit, family, n_replicates, rng, &tally);
  return {p, tally.base_stat, tally.used, tally.failed, Method::kParBoot};
}

TestResult ppp_test(std::span<const double> sample, ModelFamily family,
                    std::size_t n_outer, std::size_t n_replicates, Rng& rng,
                    const MhConfig& mh) {
  if (n_outer < 1) throw std::invalid_argument("ppp_test: n_outer >= 1");
  if (n_replicates < 1) throw std::invalid_argument("ppp_test: N >= 1");
  const auto draws = model_posterior(family, sample, n_outer, rng, mh);
  const auto sorted = sorted_copy(sample);
  // Average of the parameter-conditional p-values: both the data statistic
  // and each replicate statistic condition on the same posterior draw, so
  // every inner pass is an exact test at that draw. Re-estimating the
  // replicates instead would destroy the hallmark concentration of these
  // p-values around one half.
  double p_sum = 0.0;
  double stat_sum = 0.0;
  std::size_t used = 0;
  for (const auto& theta : draws) {
    const double base = ad_at(family, theta, sorted);
    std::size_t exceed = 0;
    for (std::size_t i = 0; i < n_replicates; ++i) {
      const auto replicate = model_draw(family, theta, sample.size(), rng);
      const auto rep_sorted = sorted_copy(replicate);
      if (ad_at(family, theta, rep_sorted) > base) ++exceed;
    }
    p_sum += continuity_p_value(exceed, n_replicates);
    stat_sum += base;
    used += n_replicates;
  }
  const double n_outer_d = static_cast<double>(n_outer);
  return {p_sum / n_outer_d, stat_sum / n_outer_d, used, 0, Method::kPpp};
}

TestResult bayes_predictive_test(std::span<const double> sample,
                                 ModelFamily family, std::size_t n_replicates,
                                 BayesMode mode, Rng& rng,
                                 const MhConfig& mh) {
  if (n_replicates < 1) {
    throw std::invalid_argument("bayes_predictive_test: N >= 1");
  }
  const auto draws = model_posterior(family, sample, n_replicates, rng, mh);
  const auto sorted = sorted_copy(sample);

  // Observed statistic: posterior average of the parameter-conditional
  // statistic, or its point-estimate approximation. The exact-mode average
  // runs over inner_n draws, the same count every replicate statistic gets;
  // averaging the two sides over different counts would skew the exceedance
  // comparison. inner_n = N recovers the fully averaged statistic.
  double observed;
  if (mode.kind == BayesMode::Kind::kExact) {
    const std::size_t n_avg = std::min<std::size_t>(mode.inner_n, draws.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < n_avg; ++i) {
      acc += ad_at(family, draws[i], sorted);
    }
    observed = acc / static_cast<double>(n_avg);
  } else {
    const auto fit = model_fit(family, sample);
    if (fit.has_value()) {
      observed = ad_at(family, *fit, sorted);
    } else if (family == ModelFamily::kGpd) {
      // ML failed on the observed sample: evaluate at the posterior mean.
      observed = ad_at(family, posterior_mean(family, draws), sorted);
    } else {
      throw TestFailure(
          "bayes_predictive_test: base estimation failed for the Gamma "
          "family");
    }
  }

  std::size_t exceed = 0;
  std::size_t used = 0;
  std::size_t failed = 0;
  for (const auto& theta : draws) {
    const auto replicate = model_draw(family, theta, sample.size(), rng);
    const auto rep_sorted = sorted_copy(replicate);
    if (mode.kind == BayesMode::Kind::kExact) {
      // Average the statistic over fresh posterior draws for THIS replicate.
      std::vector<ModelParams> inner;
      try {
        inner = model_posterior(family, replicate, mode.inner_n, rng, mh);
      } catch (const TestFailure&) {
        ++failed;
        continue;
      }
      double acc = 0.0;
      for (const auto& t : inner) acc += ad_at(family, t, rep_sorted);
      const double stat = acc / static_cast<double>(inner.size());
      ++used;
      if (stat > observed) ++exceed;
    } else {
      const auto fit = model_fit(family, replicate);
      if (!fit.has_value()) {
        ++failed;
        continue;
      }
      const double stat = ad_at(family, *fit, rep_sorted);
      ++used;
      if (stat > observed) ++exceed;
    }
  }
  const double p = continuity_p_value(exceed, std::max<std::size_t>(used, 1));
  return {p, observed, used, failed, Method::kBayes};
}

}  // namespace gofbayes
