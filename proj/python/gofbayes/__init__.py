# Copyright 2026 The gofbayes Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Goodness-of-fit testing for Gamma and Generalised Pareto models.

The heavy lifting lives in the C++ extension; this package re-exports the
main operations: single tests (``run_test``), Monte Carlo experiments
(``run_experiment``), samplers, fitting, and the Anderson-Darling statistic.
"""

from gofbayes._core import (
    TestFailure,
    TestResult,
    __version__,
    anderson_darling,
    digamma,
    fit_gamma_moments,
    fit_gpd_ml,
    gamma_cdf,
    gamma_posterior,
    gpd_cdf,
    gpd_posterior,
    ks_distance,
    ln_gamma,
    run_experiment,
    run_test,
    sample,
)

__all__ = [
    "TestFailure",
    "TestResult",
    "__version__",
    "anderson_darling",
    "digamma",
    "fit_gamma_moments",
    "fit_gpd_ml",
    "gamma_cdf",
    "gamma_posterior",
    "gpd_cdf",
    "gpd_posterior",
    "ks_distance",
    "ln_gamma",
    "run_experiment",
    "run_test",
    "sample",
]
