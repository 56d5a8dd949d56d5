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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>
#include <vector>

#include "gofbayes/harness.hpp"
#include "gofbayes/special_functions.hpp"
#include "gofbayes/statistics.hpp"

namespace py = pybind11;
using namespace gofbayes;

namespace {

MhConfig make_mh(double sd_gamma, double sd_log_sigma, std::size_t burn_in,
                 std::size_t thin) {
  MhConfig mh;
  mh.sd_gamma = sd_gamma;
  mh.sd_log_sigma = sd_log_sigma;
  mh.burn_in = burn_in;
  mh.thin = thin;
  return mh;
}

TestResult run_named_test(const std::vector<double>& data,
                          const std::string& model, const std::string& method,
                          std::size_t n_replicates, std::uint64_t seed,
                          const std::string& mode, std::size_t inner_n,
                          std::size_t n_outer,
                          std::optional<std::pair<double, double>> theta0,
                          double sd_gamma, double sd_log_sigma,
                          std::size_t burn_in, std::size_t thin) {
  const ModelFamily family = family_from_string(model);
  const Method m = method_from_string(method);
  const MhConfig mh = make_mh(sd_gamma, sd_log_sigma, burn_in, thin);
  Rng rng(derive_stream_key(seed, 0, 1));
  switch (m) {
    case Method::kExact: {
      if (!theta0.has_value()) {
        throw std::invalid_argument("exact method requires theta0");
      }
      ModelParams params =
          family == ModelFamily::kGamma
              ? ModelParams(GammaParams(theta0->first, theta0->second))
              : ModelParams(GpdParams(theta0->first, theta0->second));
      return exact_test(data, params, family, n_replicates, rng);
    }
    case Method::kPlugin:
      return plugin_naive_test(data, family, n_replicates, rng);
    case Method::kParBoot:
      return parametric_bootstrap_test(data, family, n_replicates, rng);
    case Method::kPpp:
      return ppp_test(data, family, n_outer, n_replicates, rng, mh);
    case Method::kBayes: {
      const BayesMode bm = (mode == "exact") ? BayesMode::exact(inner_n)
                                             : BayesMode::approximate();
      return bayes_predictive_test(data, family, n_replicates, bm, rng, mh);
    }
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Goodness-of-fit tests for Gamma and Generalised Pareto models";

  py::register_exception<TestFailure>(m, "TestFailure");

  py::class_<TestResult>(m, "TestResult")
      .def_readonly("p_value", &TestResult::p_value)
      .def_readonly("observed_stat", &TestResult::observed_stat)
      .def_readonly("n_replicates_used", &TestResult::n_replicates_used)
      .def_readonly("n_failed", &TestResult::n_failed)
      .def_property_readonly(
          "method", [](const TestResult& r) { return to_string(r.method); })
      .def("__repr__", [](const TestResult& r) {
        return "TestResult(method=" + std::string(to_string(r.method)) +
               ", p_value=" + std::to_string(r.p_value) + ")";
      });

  m.def("ln_gamma", &ln_gamma_fn, py::arg("x"));
  m.def("digamma", &digamma, py::arg("x"));

  m.def(
      "gamma_cdf",
      [](double x, double alpha, double lam) {
        return gamma_cdf(x, GammaParams(alpha, lam));
      },
      py::arg("x"), py::arg("alpha"), py::arg("lam"));
  m.def(
      "gpd_cdf",
      [](double x, double gamma, double sigma) {
        return gpd_cdf(x, GpdParams(gamma, sigma));
      },
      py::arg("x"), py::arg("gamma"), py::arg("sigma"));

  m.def(
      "sample",
      [](const std::string& dist, std::size_t n, std::uint64_t seed) {
        Rng rng(derive_stream_key(seed, 0, 0));
        return alt_sample(parse_sampling(dist), n, rng);
      },
      py::arg("dist"), py::arg("n"), py::arg("seed") = 0,
      "Draw n values from a distribution spec such as 'gamma(4,8)'");

  m.def(
      "anderson_darling",
      [](const std::vector<double>& values,
         const std::function<double(double)>& cdf) {
        return anderson_darling(std::span<const double>(values), cdf);
      },
      py::arg("values"), py::arg("cdf"));

  m.def(
      "ks_distance",
      [](const std::vector<double>& values) {
        return ks_distance(std::span<const double>(values));
      },
      py::arg("values"));

  m.def(
      "fit_gamma_moments",
      [](const std::vector<double>& values) {
        const auto fit = mom_gamma(values);
        if (!fit.ok()) {
          throw std::runtime_error(std::string("fit failed: ") +
                                   to_string(fit.failure()));
        }
        return std::make_pair(fit.params().alpha, fit.params().lambda);
      },
      py::arg("values"));

  m.def(
      "fit_gpd_ml",
      [](const std::vector<double>& values) {
        const auto fit = ml_gpd(values);
        if (!fit.ok()) {
          throw std::runtime_error(std::string("fit failed: ") +
                                   to_string(fit.failure()));
        }
        return std::make_pair(fit.params().gamma, fit.params().sigma);
      },
      py::arg("values"));

  m.def(
      "gamma_posterior",
      [](const std::vector<double>& values, std::size_t n_draws,
         std::uint64_t seed) {
        Rng rng(derive_stream_key(seed, 0, 2));
        std::vector<std::pair<double, double>> out;
        for (const auto& p : sample_gamma_posterior(values, n_draws, rng)) {
          out.emplace_back(p.alpha, p.lambda);
        }
        return out;
      },
      py::arg("values"), py::arg("n_draws"), py::arg("seed") = 0);

  m.def(
      "gpd_posterior",
      [](const std::vector<double>& values, std::size_t n_draws,
         std::uint64_t seed, double sd_gamma, double sd_log_sigma,
         std::size_t burn_in, std::size_t thin) {
        Rng rng(derive_stream_key(seed, 0, 2));
        const MhConfig mh = make_mh(sd_gamma, sd_log_sigma, burn_in, thin);
        std::vector<std::pair<double, double>> out;
        for (const auto& p : sample_gpd_posterior(values, n_draws, mh, rng)) {
          out.emplace_back(p.gamma, p.sigma);
        }
        return out;
      },
      py::arg("values"), py::arg("n_draws"), py::arg("seed") = 0,
      py::arg("sd_gamma") = 0.05, py::arg("sd_log_sigma") = 0.1,
      py::arg("burn_in") = 1000, py::arg("thin") = 5);

  m.def("run_test", &run_named_test, py::arg("data"), py::arg("model"),
        py::arg("method"), py::arg("n_replicates") = 999, py::arg("seed") = 0,
        py::arg("mode") = "approx", py::arg("inner_n") = 1,
        py::arg("n_outer") = 100, py::arg("theta0") = py::none(),
        py::arg("sd_gamma") = 0.05, py::arg("sd_log_sigma") = 0.1,
        py::arg("burn_in") = 1000, py::arg("thin") = 5,
        py::call_guard<py::gil_scoped_release>(),
        "Run one goodness-of-fit test and return a TestResult");

  m.def(
      "run_experiment",
      [](const std::string& config_path, int workers,
         const std::string& output_dir) {
        const ExperimentConfig cfg = parse_config_file(config_path);
        ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = run_experiment(cfg, workers);
        }
        std::string out_path = cfg.output_path;
        if (!out_path.empty() && out_path.front() != '/') {
          out_path = output_dir + "/" + out_path;
        }
        write_result(result, out_path);
        py::list rows;
        for (const auto& s : result.summaries) {
          for (std::size_t li = 0; li < cfg.levels.size(); ++li) {
            rows.append(py::make_tuple(s.method, cfg.levels[li],
                                       s.rejection_rates[li],
                                       s.ks_from_uniform, s.n_missing));
          }
        }
        return rows;
      },
      py::arg("config_path"), py::arg("workers") = 0,
      py::arg("output_dir") = ".",
      "Run a configured experiment, write its CSVs, and return summary rows");

#ifdef GOFBAYES_VERSION
  m.attr("__version__") = GOFBAYES_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
