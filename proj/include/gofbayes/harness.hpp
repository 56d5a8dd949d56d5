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

#ifndef GOFBAYES_HARNESS_HPP_
#define GOFBAYES_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gofbayes/gof.hpp"

namespace gofbayes {

// One test method plus its settings, as configured for an experiment.
struct MethodSpec {
  Method method = Method::kBayes;
  std::size_t n_replicates = 999;
  BayesMode mode = BayesMode::approximate();  // Bayes only
  std::size_t n_outer = 100;                  // Ppp only
  MhConfig mh{};                              // GPD posterior settings
  std::optional<ModelParams> theta0;          // Exact only
};

// Declarative description of one Monte Carlo study: repeatedly draw a
// sample from `sampling`, run every configured method on that same sample,
// and aggregate the recorded p-values.
struct ExperimentConfig {
  ModelFamily model = ModelFamily::kGamma;
  SamplingDistribution sampling = GammaParams(1.0, 1.0);
  std::size_t sample_size = 24;
  std::size_t repetitions = 1;
  std::vector<MethodSpec> methods;
  std::uint64_t seed = 0;
  std::vector<double> levels = {0.01, 0.05, 0.10};
  std::string output_path = "result.csv";
};

// Raised for an invalid ExperimentConfig or config file; the message names
// the offending key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// One method on one repetition. A missing p-value records a test-level
// failure (base estimation or posterior sampling failed).
struct TestRecord {
  std::optional<double> p_value;
  std::optional<double> observed_stat;
  std::size_t n_failed = 0;
};

struct MethodSummary {
  std::string method;
  std::vector<double> rejection_rates;  // one per configured level
  double ks_from_uniform = 0.0;
  std::size_t n_missing = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::string> method_names;
  // records[rep][method_index]; one row per repetition, never dropped.
  std::vector<std::vector<TestRecord>> records;
  std::vector<MethodSummary> summaries;
  double wall_seconds = 0.0;

  // p-values of one method across repetitions (missing entries kept).
  std::vector<std::optional<double>> p_values(std::size_t method_index) const;
};

// Runs the experiment. Repetitions execute concurrently on `workers`
// threads (0 = all hardware threads); each (repetition, method) pair owns a
// random stream derived by counter from the experiment seed, so the output
// is bit-identical for every worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers = 0);

// Fraction of non-missing p-values <= level. Throws ConfigError when every
// entry is missing (the rate is undefined) or the level is outside (0,1).
double rejection_rate(std::span<const std::optional<double>> p_values,
                      double level);

// Empirical CDF of the non-missing p-values at each grid point.
std::vector<std::pair<double, double>> coverage_curve(
    std::span<const std::optional<double>> p_values,
    std::span<const double> grid);

struct UniformityCheck {
  double ks_distance;
  bool passes;  // below the asymptotic 1% critical value 1.628 / sqrt(m)
};

// Kolmogorov-Smirnov distance of the p-values from Uniform(0,1); requires
// at least 10 non-missing entries.
UniformityCheck uniformity_check(
    std::span<const std::optional<double>> p_values);

// Histogram of non-missing p-values over `bins` equal cells of [0,1].
std::vector<std::size_t> p_value_histogram(
    std::span<const std::optional<double>> p_values, std::size_t bins);

// Persistence. write_result writes three files:
//   <base>.csv          rep,method,p_value,observed_stat,n_failed
//   <base>.summary.csv  method,level,rejection_rate,ks_distance,n_missing
//   <base>.config.txt   key = value lines echoing the config
// where <base> is `path` minus a trailing ".csv" if present. Missing values
// are serialized as the literal NA. read_result restores the record table
// (and the config echo when the sibling file exists) and recomputes the
// summaries.
void write_result(const ExperimentResult& result, const std::string& path);
ExperimentResult read_result(const std::string& path);

// Config echo in `key = value` form, parseable by parse_config_text.
std::string config_echo(const ExperimentConfig& cfg);

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Validates invariants (repetitions >= 1, sample_size >= 2, levels in
// (0,1), at least one method, exact methods carry theta0); throws
// ConfigError naming the key.
void validate_config(const ExperimentConfig& cfg);

// Runs fn(0..count-1) on `workers` threads (0 = hardware concurrency).
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace gofbayes

#endif  // GOFBAYES_HARNESS_HPP_
