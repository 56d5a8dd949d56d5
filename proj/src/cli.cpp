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

#include "gofbayes/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gofbayes/harness.hpp"

namespace gofbayes {

namespace {

constexpr int kOk = 0;
constexpr int kComputationError = 1;
constexpr int kUsageError = 2;

struct TestOptions {
  std::string data_path;
  std::string model = "gamma";
  std::string method = "bayes";
  std::size_t n_replicates = 999;
  std::string mode = "approx";
  std::size_t inner_n = 1;
  std::size_t n_outer = 100;
  std::uint64_t seed = 0;
  std::string theta0;
  bool machine = false;
  double sd_gamma = 0.05;
  double sd_log_sigma = 0.1;
  std::size_t burn_in = 1000;
  std::size_t thin = 5;
};

struct ExperimentOptions {
  std::string config_path;
  int workers = 0;
  std::string output_dir = ".";
};

struct ReportOptions {
  std::string result_path;
  std::size_t bins = 20;
  std::size_t grid = 99;
};

std::string format_stat(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

ModelParams parse_theta0(const std::string& text, ModelFamily family) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw CLI::ValidationError("--theta0", "expected two comma-separated values");
  }
  double a, b;
  try {
    a = std::stod(text.substr(0, comma));
    b = std::stod(text.substr(comma + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--theta0", "non-numeric value in '" + text + "'");
  }
  try {
    if (family == ModelFamily::kGamma) return ModelParams(GammaParams(a, b));
    return ModelParams(GpdParams(a, b));
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("--theta0", e.what());
  }
}

int cmd_test(const TestOptions& opt, std::ostream& out, std::ostream& err) {
  const ModelFamily family = family_from_string(opt.model);
  const Method method = method_from_string(opt.method);
  if (method == Method::kExact && opt.theta0.empty()) {
    throw CLI::RequiredError("--theta0 (with --method exact)");
  }
  if (method != Method::kExact && !opt.theta0.empty()) {
    throw CLI::ValidationError("--theta0", "only valid with --method exact");
  }

  const auto data = read_data_file(opt.data_path);
  MhConfig mh;
  mh.sd_gamma = opt.sd_gamma;
  mh.sd_log_sigma = opt.sd_log_sigma;
  mh.burn_in = opt.burn_in;
  mh.thin = opt.thin;

  Rng rng(derive_stream_key(opt.seed, 0, 1));
  TestResult result{};
  try {
    switch (method) {
      case Method::kExact:
        result = exact_test(data, parse_theta0(opt.theta0, family), family,
                            opt.n_replicates, rng);
        break;
      case Method::kPlugin:
        result = plugin_naive_test(data, family, opt.n_replicates, rng);
        break;
      case Method::kParBoot:
        result =
            parametric_bootstrap_test(data, family, opt.n_replicates, rng);
        break;
      case Method::kPpp:
        result = ppp_test(data, family, opt.n_outer, opt.n_replicates, rng, mh);
        break;
      case Method::kBayes: {
        BayesMode mode = opt.mode == "exact" ? BayesMode::exact(opt.inner_n)
                                             : BayesMode::approximate();
        result = bayes_predictive_test(data, family, opt.n_replicates, mode,
                                       rng, mh);
        break;
      }
    }
  } catch (const TestFailure& e) {
    err << "test failed: " << e.what() << "\n";
    return kComputationError;
  } catch (const std::domain_error& e) {
    err << "test failed: " << e.what() << "\n";
    return kComputationError;
  }

  char p_buf[32];
  std::snprintf(p_buf, sizeof(p_buf), "%.6f", result.p_value);
  if (opt.machine) {
    out << "rep,method,p_value,observed_stat,n_failed\n";
    out << "0," << to_string(result.method) << ',' << p_buf << ','
        << format_stat(result.observed_stat) << ',' << result.n_failed << '\n';
  } else {
    out << "model = " << to_string(family) << "\n"
        << "method = " << to_string(result.method) << "\n"
        << "n = " << data.size() << "\n"
        << "p_value = " << p_buf << "\n"
        << "observed_stat = " << format_stat(result.observed_stat) << "\n"
        << "replicates_used = " << result.n_replicates_used << "\n"
        << "replicates_failed = " << result.n_failed << "\n";
  }
  return kOk;
}

int cmd_experiment(const ExperimentOptions& opt, std::ostream& out,
                   std::ostream& err) {
  ExperimentConfig cfg = parse_config_file(opt.config_path);
  const ExperimentResult result = run_experiment(cfg, opt.workers);

  std::filesystem::path out_path(cfg.output_path);
  if (out_path.is_relative()) {
    out_path = std::filesystem::path(opt.output_dir) / out_path;
  }
  write_result(result, out_path.string());

  // Table-style summary: one row per method at the 5% level (or the first
  // configured level when 0.05 is absent).
  std::size_t level_index = 0;
  for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
    if (std::fabs(cfg.levels[i] - 0.05) < 1e-12) {
      level_index = i;
      break;
    }
  }
  for (const auto& s : result.summaries) {
    char buf[32];
    const double rate = s.rejection_rates[level_index];
    if (std::isnan(rate)) {
      std::snprintf(buf, sizeof(buf), "NA");
    } else {
      std::snprintf(buf, sizeof(buf), "%.4f", rate);
    }
    out << sampling_name(cfg.sampling) << ' ' << s.method << ' ' << buf
        << '\n';
  }
  err << "wrote " << out_path.string() << " (" << result.records.size()
      << " repetitions, " << result.wall_seconds << " s)\n";
  return kOk;
}

int cmd_report(const ReportOptions& opt, std::ostream& out, std::ostream&) {
  const ExperimentResult result = read_result(opt.result_path);

  out << "method,bin_lo,bin_hi,count\n";
  const double width = 1.0 / static_cast<double>(opt.bins);
  for (std::size_t m = 0; m < result.method_names.size(); ++m) {
    const auto ps = result.p_values(m);
    const auto hist = p_value_histogram(ps, opt.bins);
    for (std::size_t b = 0; b < hist.size(); ++b) {
      char lo[32], hi[32];
      std::snprintf(lo, sizeof(lo), "%.6f", width * static_cast<double>(b));
      std::snprintf(hi, sizeof(hi), "%.6f", width * static_cast<double>(b + 1));
      out << result.method_names[m] << ',' << lo << ',' << hi << ','
          << hist[b] << '\n';
    }
  }

  out << "\nmethod,level,coverage\n";
  std::vector<double> grid;
  grid.reserve(opt.grid);
  for (std::size_t k = 1; k <= opt.grid; ++k) {
    grid.push_back(static_cast<double>(k) /
                   static_cast<double>(opt.grid + 1));
  }
  for (std::size_t m = 0; m < result.method_names.size(); ++m) {
    const auto ps = result.p_values(m);
    for (const auto& [level, cov] : coverage_curve(ps, grid)) {
      char lv[32], cv[32];
      std::snprintf(lv, sizeof(lv), "%.6f", level);
      std::snprintf(cv, sizeof(cv), "%.6f", cov);
      out << result.method_names[m] << ',' << lv << ',' << cv << '\n';
    }
  }
  return kOk;
}

}  // namespace

std::vector<double> read_data_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read data file '" + path + "'");
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::size_t b = 0, e = line.size();
    while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
    if (b == e) continue;
    const std::string tok = line.substr(b, e - b);
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
      values.push_back(v);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": not a number: '" + tok + "'");
    }
  }
  if (values.size() < 2) {
    throw std::runtime_error(path + ": need at least 2 observations");
  }
  return values;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Goodness-of-fit tests for Gamma and Generalised Pareto models"};
  app.require_subcommand(1);

  TestOptions topt;
  auto* test = app.add_subcommand(
      "test", "Run one goodness-of-fit test on a data file");
  test->add_option("--data", topt.data_path, "Data file, one value per line")
      ->required();
  test->add_option("--model", topt.model, "Null model family")
      ->check(CLI::IsMember({"gamma", "gpd"}));
  test->add_option("--method", topt.method, "Test procedure")
      ->check(CLI::IsMember({"exact", "plugin", "parboot", "ppp", "bayes"}));
  test->add_option("--N", topt.n_replicates, "Replicates per test");
  test->add_option("--mode", topt.mode, "Bayes statistic mode")
      ->check(CLI::IsMember({"approx", "exact"}));
  test->add_option("--inner-N", topt.inner_n,
                   "Posterior draws per replicate in exact mode");
  test->add_option("--n-outer", topt.n_outer, "Outer posterior draws for ppp");
  test->add_option("--seed", topt.seed, "Random seed");
  test->add_option("--theta0", topt.theta0,
                   "Null parameters a,b (exact method only)");
  test->add_flag("--machine", topt.machine, "Emit a harness-format CSV line");
  test->add_option("--sd-gamma", topt.sd_gamma, "MH proposal sd for shape");
  test->add_option("--sd-log-sigma", topt.sd_log_sigma,
                   "MH proposal sd for log scale");
  test->add_option("--burn-in", topt.burn_in, "MH burn-in steps");
  test->add_option("--thin", topt.thin, "MH thinning interval");

  ExperimentOptions eopt;
  auto* experiment = app.add_subcommand(
      "experiment", "Run a configured Monte Carlo experiment");
  experiment->add_option("config", eopt.config_path, "Experiment config file")
      ->required();
  experiment->add_option("--workers", eopt.workers,
                         "Worker threads (0 = all cores)");
  experiment->add_option("--output", eopt.output_dir,
                         "Directory for result files");

  ReportOptions ropt;
  auto* report = app.add_subcommand(
      "report", "Summarize a result CSV into plot-ready tables");
  report->add_option("result", ropt.result_path, "Result CSV path")
      ->required();
  report->add_option("--bins", ropt.bins, "Histogram bin count");
  report->add_option("--grid", ropt.grid, "Coverage grid size");

  std::vector<const char*> argv;
  argv.push_back("gofbayes");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (test->parsed()) return cmd_test(topt, out, err);
    if (experiment->parsed()) return cmd_experiment(eopt, out, err);
    return cmd_report(ropt, out, err);
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsageError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::runtime_error& e) {
    // Data-file and I/O problems land here.
    const std::string what = e.what();
    const bool parse_like = what.find("not a number") != std::string::npos ||
                            what.find("cannot read") != std::string::npos ||
                            what.find("observations") != std::string::npos;
    err << "error: " << what << "\n";
    return parse_like ? kUsageError : kComputationError;
  }
}

}  // namespace gofbayes
