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

import math

import pytest

import gofbayes


def test_special_functions():
    assert gofbayes.ln_gamma(5.0) == pytest.approx(math.log(24.0), abs=1e-12)
    assert gofbayes.digamma(1.0) == pytest.approx(-0.5772156649015329, abs=1e-10)


def test_anderson_darling_hand_value():
    got = gofbayes.anderson_darling([1.0 / 3.0, 2.0 / 3.0], lambda x: x)
    want = -2.0 + math.log(3.0) + 3.0 * math.log(1.5)
    assert got == pytest.approx(want, abs=1e-10)


def test_sampling_and_fitting_round_trip():
    data = gofbayes.sample("gamma(4,8)", 20000, seed=7)
    assert len(data) == 20000
    assert all(x > 0 for x in data[:100])
    alpha, lam = gofbayes.fit_gamma_moments(data)
    assert alpha == pytest.approx(4.0, rel=0.1)
    assert lam == pytest.approx(8.0, rel=0.1)

    gpd = gofbayes.sample("gpd(0.25,1)", 20000, seed=8)
    gamma, sigma = gofbayes.fit_gpd_ml(gpd)
    assert gamma == pytest.approx(0.25, abs=0.05)
    assert sigma == pytest.approx(1.0, abs=0.05)


def test_cdfs():
    assert gofbayes.gamma_cdf(1.0, 1.0, 1.0) == pytest.approx(1 - math.exp(-1))
    assert gofbayes.gpd_cdf(1.0, 1.0, 1.0) == pytest.approx(0.5)


def test_run_test_is_deterministic_and_in_range():
    data = gofbayes.sample("gamma(4,8)", 24, seed=11)
    r1 = gofbayes.run_test(data, "gamma", "bayes", n_replicates=199, seed=1)
    r2 = gofbayes.run_test(data, "gamma", "bayes", n_replicates=199, seed=1)
    assert 0.0 < r1.p_value < 1.0
    assert r1.p_value == r2.p_value
    assert r1.observed_stat == r2.observed_stat
    assert r1.method == "bayes"
    assert r1.n_replicates_used + r1.n_failed == 199


def test_exact_test_requires_theta0():
    data = gofbayes.sample("gamma(4,8)", 24, seed=12)
    with pytest.raises(ValueError):
        gofbayes.run_test(data, "gamma", "exact", n_replicates=49, seed=1)
    r = gofbayes.run_test(
        data, "gamma", "exact", n_replicates=49, seed=1, theta0=(4.0, 8.0)
    )
    assert 0.0 < r.p_value < 1.0


def test_posterior_draws():
    data = gofbayes.sample("gamma(4,8)", 200, seed=13)
    draws = gofbayes.gamma_posterior(data, 500, seed=2)
    assert len(draws) == 500
    mean_alpha = sum(a for a, _ in draws) / len(draws)
    assert mean_alpha == pytest.approx(4.0, rel=0.5)

    gpd = gofbayes.sample("gpd(0.25,1)", 200, seed=14)
    gdraws = gofbayes.gpd_posterior(gpd, 300, seed=3)
    assert len(gdraws) == 300
    assert all(s > 0 for _, s in gdraws)


def test_run_experiment(tmp_path):
    config = tmp_path / "study.cfg"
    config.write_text(
        "model = gamma\n"
        "sampling = gamma(4,8)\n"
        "sample_size = 12\n"
        "repetitions = 6\n"
        "seed = 4\n"
        "methods = parboot(N=49)\n"
        "output_path = study.csv\n"
    )
    rows = gofbayes.run_experiment(str(config), workers=1, output_dir=str(tmp_path))
    assert (tmp_path / "study.csv").exists()
    assert (tmp_path / "study.summary.csv").exists()
    methods = {row[0] for row in rows}
    assert methods == {"parboot"}
