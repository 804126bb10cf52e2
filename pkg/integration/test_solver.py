# Copyright 2026 The lacelab Authors
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

"""Acceptance runs for lacelab.sequence_core and lacelab.solver."""
import math

import numpy as np
import pytest

from lacelab import gamma_family
from lacelab import sequence_core
from lacelab import solver


CLT_STEPS = (16, 32, 64, 128)


def _power_law_solution(n_max):
    scalars = sequence_core.BScalars.from_family(gamma_family.power_law_family(2.5, 5), 0.02,
                                                 n_max)
    return scalars, sequence_core.solve(scalars)


class TestFreeWalk:

    @pytest.fixture(scope='class')
    def run(self):
        family = gamma_family.zero_family(5, majorant=gamma_family.PowerLaw(2.5, 5))
        return solver.run_recursion(solver.SolverConfig(5, 0.0, 64, family))

    def test_scalars(self, run):
        seq = run.sequence
        assert seq.mu == pytest.approx(1.0, abs=1e-14)
        assert seq.delta == pytest.approx(1.0, abs=1e-14)
        assert seq.alpha == pytest.approx(1.0, abs=1e-14)

    def test_profiles(self, run):
        for n in range(1, 65):
            assert np.max(solver.clt_error_profile(run, n)) < 1e-9


class TestConsistency:

    def test_transform_at_zero(self, power_law_run):
        c = power_law_run.sequence.c
        assert power_law_run.c_hat_values[:, 0] == pytest.approx(c, rel=1e-12)

    def test_normalization_identity(self):
        scalars, sol = _power_law_solution(256)
        residual = abs(1.0 / sol.mu - 1.0 + scalars.lam * np.dot(sol.a[1:], scalars.b))
        assert residual <= sol.tail_mu + 1e-10

    def test_fitted_constants_stable(self):
        constants = []
        for n_max in (128, 256):
            scalars, sol = _power_law_solution(n_max)
            gamma = np.arange(1, n_max + 1, dtype=float) ** -2.5
            constants.append((sequence_core.sequ3_constant(sol, scalars, gamma),
                              sequence_core.alpha_constant(sol, scalars, gamma)))
        for coarse, fine in zip(*constants):
            assert 0.0 < coarse < math.inf
            assert 0.25 < fine / coarse < 4.0


class TestCltRate:

    def test_l1_slope(self, power_law_run):
        steps = [n for n in CLT_STEPS if n <= power_law_run.config.n_max]
        errors = [solver.l1_error(power_law_run, n) for n in steps]
        slope = np.polyfit(np.log(steps), np.log(errors), 1)[0]
        assert abs(slope + 0.5) <= 0.3

    def test_ratio_band(self, power_law_run):
        steps = [n for n in CLT_STEPS if n <= power_law_run.config.n_max]
        ratios = list(solver.ratio_report(power_law_run, steps).values())
        assert all(0.0 < value < math.inf for value in ratios)
        assert max(ratios) / min(ratios) <= 10.0


class TestEnvelopeConstants:

    def test_envelope_constant(self, power_law_run):
        majorant = power_law_run.config.family.majorant
        delta = power_law_run.sequence.delta
        small = gamma_family.le_main_check(majorant, delta, 0.01, 16)
        large = gamma_family.le_main_check(majorant, delta, 0.01, 32)
        assert 0.0 < small <= large < 4.0 * small

    def test_delta_constant(self, power_law_run):
        small = solver.delta_kj_check(power_law_run, 16)
        large = solver.delta_kj_check(power_law_run, 32)
        assert 0.25 < large / small < 4.0
