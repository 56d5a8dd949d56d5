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

#ifndef GOFBAYES_GOF_HPP_
#define GOFBAYES_GOF_HPP_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>

#include "gofbayes/distributions.hpp"
#include "gofbayes/posterior.hpp"
#include "gofbayes/rng.hpp"

namespace gofbayes {

// The two null-model families. The family fixes the estimator (method of
// moments / GPD maximum likelihood), the model sampler and CDF, and the
// posterior sampler used by the Bayesian procedures.
enum class ModelFamily { kGamma, kGpd };

enum class Method { kExact, kPlugin, kParBoot, kPpp, kBayes };

const char* to_string(Method m);
const char* to_string(ModelFamily f);
Method method_from_string(const std::string& name);
ModelFamily family_from_string(const std::string& name);

using ModelParams = std::variant<GammaParams, GpdParams>;

// How the predictive test evaluates statistics that depend on parameters:
// either through the point-estimate approximation, or by averaging the
// statistic over inner_n posterior draws — for the observed sample and for
// every replicate sample alike. inner_n equal to the replicate count gives
// the fully averaged statistic.
struct BayesMode {
  enum class Kind { kApproximate, kExact };
  Kind kind = Kind::kApproximate;
  std::size_t inner_n = 1;  // posterior draws per statistic in kExact

  static BayesMode approximate() { return {Kind::kApproximate, 1}; }
  static BayesMode exact(std::size_t inner_n) {
    if (inner_n < 1) throw std::invalid_argument("BayesMode: inner_n >= 1");
    return {Kind::kExact, inner_n};
  }
};

// Outcome of one test run. The continuity-adjusted p-value
// (count + 0.5) / (N + 1) is strictly inside (0, 1). For ParBoot and Bayes,
// n_replicates_used + n_failed equals the requested replicate count; Exact
// and Plugin never lose replicates. For Ppp the counts aggregate over all
// outer posterior draws.
struct TestResult {
  double p_value;
  double observed_stat;
  std::size_t n_replicates_used;
  std::size_t n_failed;
  Method method;
};

// A test could not produce a p-value (base estimation or posterior sampling
// failed); callers decide whether that is fatal or a missing entry.
class TestFailure : public std::runtime_error {
 public:
  explicit TestFailure(const std::string& what) : std::runtime_error(what) {}
};

// Continuity-adjusted Monte Carlo p-value (count + 0.5) / (N + 1).
double continuity_p_value(std::size_t count_exceeding, std::size_t n);

// Number of entries strictly greater than the threshold (ties do not count).
std::size_t count_exceeding(std::span<const double> stats, double threshold);

// Scratch output of one fixed-parameter bootstrap pass.
struct BootstrapTally {
  double base_stat = 0.0;
  std::size_t used = 0;
  std::size_t failed = 0;
};

// Steps 2-5 of the parametric bootstrap at a fixed parameter value: base
// statistic at theta, n_replicates samples from f(.|theta), each replicate
// statistic evaluated at its own re-estimated parameters, continuity
// p-value of the exceedance count. Replicates whose re-estimation fails are
// dropped and counted; the denominator shrinks accordingly.
double bootstrap_p_from_theta(std::span<const double> sample,
                              const ModelParams& theta, ModelFamily family,
                              std::size_t n_replicates, Rng& rng,
                              BootstrapTally* tally = nullptr);

// Exact test of a fully specified null: the observed Anderson-Darling
// statistic at theta0 against replicates drawn and evaluated at that same
// theta0.
TestResult exact_test(std::span<const double> sample,
                      const ModelParams& theta0, ModelFamily family,
                      std::size_t n_replicates, Rng& rng);

// The naive plug-in test: estimate theta once and hand it to exact_test.
// Replicates are deliberately NOT re-estimated; this reproduces the
// non-uniform p-values such tests are known for.
TestResult plugin_naive_test(std::span<const double> sample,
                             ModelFamily family, std::size_t n_replicates,
                             Rng& rng);

// Parametric bootstrap: estimate, then bootstrap_p_from_theta at the
// estimate. Base estimation failure raises TestFailure.
TestResult parametric_bootstrap_test(std::span<const double> sample,
                                     ModelFamily family,
                                     std::size_t n_replicates, Rng& rng);

// Posterior predictive check: the average over n_outer posterior draws of
// the parameter-conditional p-value, where the data statistic and each
// replicate statistic condition on the same draw (no re-estimation). These
// p-values concentrate near 0.5 rather than being uniform.
TestResult ppp_test(std::span<const double> sample, ModelFamily family,
                    std::size_t n_outer, std::size_t n_replicates, Rng& rng,
                    const MhConfig& mh = {});

// The predictive-posterior test: draws theta*_1..N from the posterior,
// forms the observed statistic (posterior-averaged in kExact mode, at the
// point estimate in kApproximate mode), draws one replicate sample per
// theta*_i from the model, evaluates each replicate the same way, and
// reports the continuity p-value of the exceedance count. In kApproximate
// mode a failed replicate estimate is dropped and counted; a failed base
// estimate falls back to the posterior mean for the GPD family and raises
// TestFailure for the Gamma family.
TestResult bayes_predictive_test(std::span<const double> sample,
                                 ModelFamily family, std::size_t n_replicates,
                                 BayesMode mode, Rng& rng,
                                 const MhConfig& mh = {});

}  // namespace gofbayes

#endif  // GOFBAYES_GOF_HPP_
