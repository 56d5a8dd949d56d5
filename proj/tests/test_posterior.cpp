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

#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "gofbayes/posterior.hpp"
#include "gofbayes/statistics.hpp"
#include "oracles.hpp"

using namespace gofbayes;

namespace {

// Eq-form shape marginal evaluated with the oracle special functions in
// long double, for ratio checks against the double implementation.
long double alpha_marginal_ld(long double alpha, const GammaSuffStats& ss) {
  const long double n = static_cast<long double>(ss.n);
  const long double psi = oracles::digamma_fd(alpha);
  return -(n + 1.0L) * oracles::ln_gamma(alpha) +
         alpha * (static_cast<long double>(ss.sum_log_x) + psi - 1.0L) - psi +
         oracles::ln_gamma(n * alpha + 2.0L) -
         (n * alpha + 2.0L) * std::log(static_cast<long double>(ss.sum_x));
}

}  // namespace

TEST_SUITE("posterior") {

TEST_CASE("shape marginal matches an extended-precision evaluation") {
  const GammaSuffStats ss{5, 10.0, 1.0};
  const double ratio =
      std::exp(gamma_alpha_ln_marginal(2.0, ss) -
               gamma_alpha_ln_marginal(1.0, ss));
  const double want = static_cast<double>(
      std::exp(alpha_marginal_ld(2.0L, ss) - alpha_marginal_ld(1.0L, ss)));
  CHECK(ratio == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("shape marginal decays in the far tail") {
  const GammaSuffStats ss{5, 10.0, 1.0};
  const double at_mode_region = gamma_alpha_ln_marginal(1.0, ss);
  double prev = at_mode_region;
  for (double alpha = 50.0; alpha <= 10000.0; alpha *= 1.5) {
    const double v = gamma_alpha_ln_marginal(alpha, ss);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < at_mode_region - 1000.0);
}

TEST_CASE("shape marginal is finite across many scales") {
  Rng rng(31);
  const auto sample = gamma_sample(GammaParams(4.0, 8.0), 12, rng);
  const auto ss = GammaSuffStats::from_sample(sample);
  CHECK(std::isfinite(gamma_alpha_ln_marginal(1e-3, ss)));
  CHECK(std::isfinite(gamma_alpha_ln_marginal(1e3, ss)));
}

TEST_CASE("posterior draws concentrate around the truth at large n") {
  Rng rng(32);
  const auto sample = gamma_sample(GammaParams(4.0, 8.0), 10000, rng);
  const auto draws = sample_gamma_posterior(sample, 2000, rng);
  double mean_alpha = 0.0, mean_lambda = 0.0;
  for (const auto& d : draws) {
    CHECK(d.alpha > 0.0);
    CHECK(d.lambda > 0.0);
    mean_alpha += d.alpha;
    mean_lambda += d.lambda;
  }
  mean_alpha /= static_cast<double>(draws.size());
  mean_lambda /= static_cast<double>(draws.size());
  CHECK(mean_alpha == doctest::Approx(4.0).epsilon(0.15 / 4.0));
  CHECK(mean_lambda == doctest::Approx(8.0).epsilon(0.3 / 8.0));
}

TEST_CASE("rate draws have the conditional Gamma(n a + 2, sum x) mean") {
  Rng rng(33);
  const auto sample = gamma_sample(GammaParams(4.0, 8.0), 12, rng);
  const auto ss = GammaSuffStats::from_sample(sample);
  const auto draws = sample_gamma_posterior(sample, 20000, rng);
  // lambda - E[lambda | alpha] should be zero-mean across draws.
  std::vector<double> diffs;
  for (const auto& d : draws) {
    diffs.push_back(d.lambda - (static_cast<double>(ss.n) * d.alpha + 2.0) /
                                   ss.sum_x);
  }
  const double m = oracles::mean(diffs);
  const double se =
      std::sqrt(oracles::variance(diffs) / static_cast<double>(diffs.size()));
  CHECK(std::fabs(m) <= 3.0 * se);
}

TEST_CASE("grid sampler agrees with an independent MH chain") {
  Rng rng(34);
  const auto sample = gamma_sample(GammaParams(4.0, 8.0), 12, rng);
  const auto ss = GammaSuffStats::from_sample(sample);

  const auto draws = sample_gamma_posterior(sample, 10000, rng);
  std::vector<double> grid_alphas;
  for (const auto& d : draws) grid_alphas.push_back(d.alpha);

  Rng oracle_rng(35);
  const auto mh_alphas = oracles::mh_alpha_draws(ss, 10000, oracle_rng);

  CHECK(oracles::two_sample_ks(grid_alphas, mh_alphas) <= 0.02);
}

TEST_CASE("doubling the grid moves the quantiles by less than 0.5%") {
  Rng rng(36);
  const auto sample = gamma_sample(GammaParams(4.0, 2.0), 24, rng);
  const auto ss = GammaSuffStats::from_sample(sample);
  const GammaAlphaSampler coarse(ss, 2048);
  const GammaAlphaSampler fine(ss, 4096);
  for (double u : {0.01, 0.5, 0.99}) {
    const double a = coarse.quantile(u);
    const double b = fine.quantile(u);
    CHECK(std::fabs(a - b) / b < 0.005);
  }
}

TEST_CASE("degenerate samples are rejected") {
  Rng rng(37);
  const std::vector<double> constant = {2.0, 2.0, 2.0, 2.0};
  CHECK_THROWS_AS(sample_gamma_posterior(constant, 10, rng),
                  std::domain_error);
  const std::vector<double> with_zero = {1.0, 0.0, 2.0};
  CHECK_THROWS_AS(sample_gamma_posterior(with_zero, 10, rng),
                  std::domain_error);
}

TEST_CASE("metropolis rule preserves a two-point target") {
  // Discrete toy: states 0/1 with probabilities 0.3/0.7, proposal flips the
  // state. Long-run frequencies must match the target.
  Rng rng(38);
  const double lp[2] = {std::log(0.3), std::log(0.7)};
  int state = 0;
  std::size_t visits1 = 0;
  const std::size_t steps = 1000000;
  for (std::size_t i = 0; i < steps; ++i) {
    const int prop = 1 - state;
    if (mh_accept(lp[state], lp[prop], rng)) state = prop;
    visits1 += static_cast<std::size_t>(state);
  }
  const double freq = static_cast<double>(visits1) / static_cast<double>(steps);
  CHECK(freq == doctest::Approx(0.7).epsilon(0.01 / 0.7));
}

TEST_CASE("GPD posterior concentrates around the truth at large n") {
  Rng rng(39);
  const auto sample = gpd_sample(GpdParams(0.25, 1.0), 10000, rng);
  const auto draws = sample_gpd_posterior(sample, 2000, MhConfig{}, rng);
  double mg = 0.0, ms = 0.0;
  for (const auto& d : draws) {
    mg += d.gamma;
    ms += d.sigma;
  }
  mg /= static_cast<double>(draws.size());
  ms /= static_cast<double>(draws.size());
  CHECK(mg == doctest::Approx(0.25).epsilon(0.05 / 0.25));
  CHECK(ms == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("GPD posterior draws keep the data inside the support") {
  Rng rng(40);
  const auto sample = gpd_sample(GpdParams(-0.1, 1.0), 24, rng);
  const double max_x = *std::max_element(sample.begin(), sample.end());
  const auto draws = sample_gpd_posterior(sample, 3000, MhConfig{}, rng);
  for (const auto& d : draws) {
    CHECK(d.gamma > -1.0);
    if (d.gamma < 0.0) REQUIRE(max_x < -d.sigma / d.gamma);
  }
}

TEST_CASE("GPD chain acceptance rate is sane at n = 24") {
  Rng rng(41);
  const auto sample = gpd_sample(GpdParams(0.25, 1.0), 24, rng);
  MhDiagnostics diag;
  sample_gpd_posterior(sample, 2000, MhConfig{}, rng, &diag);
  CHECK(diag.acceptance_rate() >= 0.1);
  CHECK(diag.acceptance_rate() <= 0.9);
}

TEST_CASE("GPD chain halves agree (stationarity)") {
  Rng rng(42);
  const auto sample = gpd_sample(GpdParams(0.25, 1.0), 24, rng);
  const auto draws = sample_gpd_posterior(sample, 4000, MhConfig{}, rng);
  // Batch means over each half; the halves must agree within 3 combined
  // batch-mean standard errors.
  const std::size_t half = draws.size() / 2;
  const std::size_t batches = 20;
  const std::size_t per = half / batches;
  auto batch_stats = [&](std::size_t offset) {
    std::vector<double> means;
    for (std::size_t b = 0; b < batches; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < per; ++i) {
        acc += draws[offset + b * per + i].gamma;
      }
      means.push_back(acc / static_cast<double>(per));
    }
    const double m = oracles::mean(means);
    const double se = std::sqrt(oracles::variance(means) /
                                static_cast<double>(means.size()));
    return std::make_pair(m, se);
  };
  const auto [m1, se1] = batch_stats(0);
  const auto [m2, se2] = batch_stats(half);
  CHECK(std::fabs(m1 - m2) <= 3.0 * std::sqrt(se1 * se1 + se2 * se2));
}

TEST_CASE("GPD posterior rejects unusable samples") {
  Rng rng(43);
  const std::vector<double> with_negative = {1.0, -0.5, 2.0};
  CHECK_THROWS_AS(sample_gpd_posterior(with_negative, 10, MhConfig{}, rng),
                  std::domain_error);
  Rng rng2(44);
  const std::vector<double> sample = {0.5, 1.5, 2.5};
  MhConfig bad;
  bad.sd_gamma = 0.0;
  CHECK_THROWS_AS(sample_gpd_posterior(sample, 10, bad, rng2),
                  std::invalid_argument);
}

}  // TEST_SUITE
