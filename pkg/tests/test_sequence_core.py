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

"""Tests for lacelab.sequence_core."""
import numpy as np
import pytest

from lacelab import exceptions
from lacelab import gamma_family
from lacelab import sequence_core


BScalars = sequence_core.BScalars


def _single(lam=0.1, beta=0.5, beta_bar=0.25, n_max=8):
    b = np.zeros(n_max)
    b_bar = np.zeros(n_max)
    b[0] = beta
    b_bar[0] = beta_bar
    return BScalars(lam, b, b_bar)


@pytest.fixture(scope='module')
def power_law_scalars():
    return BScalars.from_family(gamma_family.power_law_family(2.5, 5), 0.02, 1024)


@pytest.fixture(scope='module')
def power_law_solution(power_law_scalars):
    return sequence_core.solve(power_law_scalars)


class TestBScalars:

    def test_from_family(self):
        scalars = BScalars.from_family(gamma_family.power_law_family(2.5, 5), 0.1, 4)
        assert scalars.n_max == 4
        assert scalars.b[1] == pytest.approx(-(2 ** -2.5))
        assert scalars.b_bar[1] == pytest.approx(-(2 ** -2.5))

    def test_copies_inputs(self):
        b = np.array([0.5, 0.1])
        scalars = BScalars(0.1, b, np.zeros(2))
        b[0] = 9.0
        assert scalars.b[0] == 0.5
        with pytest.raises(ValueError):
            scalars.b[0] = 1.0

    def test_truncated(self):
        scalars = BScalars(0.1, [0.5, 0.2, 0.1], [0.1, 0.1, 0.1]).truncated(2)
        assert list(scalars.b) == [0.5, 0.0, 0.0]
        assert list(scalars.b_bar) == [0.1, 0.0, 0.0]

    @pytest.mark.parametrize('lam, b, b_bar', [
        (1.0, [0.5], [0.0]),
        (-0.1, [0.5], [0.0]),
        (float('nan'), [0.5], [0.0]),
        (0.1, [0.5, 0.1], [0.0]),
        (0.1, [], []),
        (0.5, [2.0], [0.0]),
        (0.5, [0.1, -2.5], [0.0, 0.0]),
        (0.1, [float('inf')], [0.0]),
    ])
    def test_invalid(self, lam, b, b_bar):
        with pytest.raises(exceptions.InvalidArgumentError):
            BScalars(lam, b, b_bar)


class TestSolveC:

    def test_no_coupling(self):
        c = sequence_core.solve_c(BScalars(0.0, [0.7, -0.3, 0.2], [0.0, 0.0, 0.0]))
        assert list(c) == [1.0, 1.0, 1.0, 1.0]

    def test_single_mode(self):
        c = sequence_core.solve_c(_single())
        c1 = 1.0 / 0.95
        assert c[0] == 1.0
        assert c[1] == pytest.approx(1.052631578947368, rel=1e-15)
        assert c[2] == pytest.approx(c1 * (1.0 + 0.05 * c1), rel=1e-15)

    def test_single_mode_fixed_point(self):
        # c_1 = c_0 + lam b_1 c_1 c_0 by plain iteration
        c1 = 1.0
        for _ in range(50):
            c1 = 1.0 + 0.05 * c1
        assert sequence_core.solve_c(_single())[1] == pytest.approx(c1, rel=1e-14)

    def test_residual(self, power_law_scalars, power_law_solution):
        residuals = sequence_core.recursion_residual(power_law_solution.c, power_law_scalars)
        assert residuals.size == 1024
        assert np.max(residuals) < 1e-12

    def test_rejects_other_input(self):
        with pytest.raises(exceptions.InvalidArgumentError):
            sequence_core.solve_c([0.1, 0.2])


class TestNormalize:

    def test_no_coupling(self):
        scalars = BScalars(0.0, [0.7, -0.3], [0.1, 0.1])
        sol = sequence_core.normalize(sequence_core.solve_c(scalars), scalars)
        assert sol.mu == 1.0
        assert sol.alpha == 1.0
        assert list(sol.a) == [1.0, 1.0, 1.0]
        assert sol.smallness_ok

    def test_single_mode_closed_form(self):
        scalars = _single()
        c = sequence_core.solve_c(scalars)
        sol = sequence_core.normalize(c, scalars)
        # mu^{-1} (1 + 0.05 c_1) = 1
        assert sol.mu == pytest.approx(1.0 + 0.05 * c[1], rel=1e-13)
        assert sol.a == pytest.approx(np.ones(9), rel=1e-12)
        assert sol.alpha == pytest.approx(1.0, rel=1e-12)

    def test_a_is_scaled_c(self, power_law_solution):
        n = np.arange(power_law_solution.c.size)
        expected = power_law_solution.c * power_law_solution.mu ** -n
        assert power_law_solution.a == pytest.approx(expected, rel=1e-12)
        assert power_law_solution.a[0] == 1.0

    def test_read_only(self, power_law_solution):
        with pytest.raises(ValueError):
            power_law_solution.c[1] = 0.0

    def test_ratio_limit(self, power_law_solution):
        mu = sequence_core.ratio_limit_mu(power_law_solution.c)
        assert mu == pytest.approx(power_law_solution.mu, rel=1e-6)

    def test_smallness(self, power_law_solution):
        assert power_law_solution.smallness_ok
        assert power_law_solution.n_max == 1024

    def test_truncation_stability(self, power_law_solution):
        scalars = BScalars.from_family(gamma_family.power_law_family(2.5, 5), 0.02, 512)
        coarse = sequence_core.solve(scalars)
        assert abs(coarse.mu - power_law_solution.mu) <= coarse.residual_mu

    def test_non_convergence(self):
        scalars = BScalars(0.9, [0.5] * 20, [0.0] * 20)
        c = sequence_core.solve_c(scalars)
        with pytest.raises(exceptions.NonConvergenceError):
            sequence_core.normalize(c, scalars)

    def test_wrong_length(self):
        with pytest.raises(exceptions.InvalidArgumentError):
            sequence_core.normalize([1.0, 1.0], _single())

    def test_to_dict(self, power_law_solution):
        result = power_law_solution.to_dict()
        assert result['n_max'] == 1024
        assert result['mu'] == power_law_solution.mu
        assert result['delta'] == power_law_solution.delta


class TestDelta:

    def test_no_coupling(self):
        sol = sequence_core.solve(BScalars(0.0, [0.7, -0.3], [0.1, 0.1]))
        assert sol.delta == 1.0

    def test_single_mode_closed_form(self):
        scalars = _single()
        sol = sequence_core.solve(scalars)
        inv_mu = 1.0 / sol.mu
        expected = (inv_mu + 0.1 * sol.a[1] * 0.25) / (inv_mu + 0.1 * sol.a[1] * 0.5)
        assert sol.delta == pytest.approx(expected, rel=1e-13)
        assert sol.delta == pytest.approx(0.975, rel=1e-12)

    def test_power_law_window(self, power_law_solution):
        assert abs(power_law_solution.delta - 1.0) < 0.2
        assert abs(power_law_solution.mu - 1.0) < 0.2
        assert power_law_solution.delta_tail >= 0.0

    def _solution(self, mu, a):
        a = np.array(a, dtype=float)
        return sequence_core.SequenceSolution(
            c=a.copy(), a=a, mu=mu, alpha=float(a[-1]), residual_mu=0.0, tail_mu=0.0,
            iterations=1, smallness_ok=True)

    def test_degenerate_denominator(self):
        scalars = BScalars(0.5, [-0.9, -0.55], [0.0, 0.0])
        with pytest.raises(exceptions.FailedPreconditionError):
            sequence_core.compute_delta(self._solution(1.0, [1.0, 1.0, 1.0]), scalars)

    def test_non_positive(self):
        scalars = BScalars(0.5, [0.1], [-4.0])
        with pytest.raises(exceptions.FailedPreconditionError):
            sequence_core.compute_delta(self._solution(1.0, [1.0, 1.0]), scalars)


class TestDiagnostics:

    def test_a_equation(self, power_law_scalars, power_law_solution):
        residuals = sequence_core.a_equation_residual(power_law_solution, power_law_scalars)
        assert np.max(residuals) < 1e-10

    def test_fitted_constants(self, power_law_scalars, power_law_solution):
        gamma = np.arange(1, 1025, dtype=float) ** -2.5
        sequ3 = sequence_core.sequ3_constant(power_law_solution, power_law_scalars, gamma)
        alpha = sequence_core.alpha_constant(power_law_solution, power_law_scalars, gamma)
        assert 0.0 < sequ3 < 100.0
        assert 0.0 < alpha < 100.0

    def test_constants_vanish_without_coupling(self):
        scalars = BScalars(0.0, [0.5, 0.1], [0.0, 0.0])
        sol = sequence_core.solve(scalars)
        assert sequence_core.sequ3_constant(sol, scalars, [1.0, 0.5]) == 0.0
        assert sequence_core.alpha_constant(sol, scalars, [1.0, 0.5]) == 0.0

    def test_ratio_limit_needs_two_masses(self):
        with pytest.raises(exceptions.InvalidArgumentError):
            sequence_core.ratio_limit_mu([1.0])
