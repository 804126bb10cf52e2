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

"""Tests for lacelab.solver."""
import math

import numpy as np
import pytest

from lacelab import exceptions
from lacelab import gamma_family
from lacelab import sequence_core
from lacelab import solver
from lacelab import spectral


@pytest.fixture(scope='module')
def power_law_run():
    family = gamma_family.power_law_family(2.5, 5)
    return solver.run_recursion(solver.SolverConfig(5, 0.02, 32, family))


@pytest.fixture(scope='module')
def free_run():
    family = gamma_family.zero_family(5, majorant=gamma_family.PowerLaw(2.5, 5))
    return solver.run_recursion(solver.SolverConfig(5, 0.0, 8, family))


@pytest.fixture(scope='module')
def saw_majorant_run():
    family = gamma_family.saw_majorant_family(1.0, 5)
    cfg = solver.SolverConfig(5, 0.1, 16, family, radii=np.array([0.0, 1.0, 2.0]))
    return solver.run_recursion(cfg)


def _spectral_family(hats, b, b_bar, grid):
    hats = np.asarray(hats, dtype=float)
    return gamma_family.SpectralBFamily(grid.k_nodes, hats, b, b_bar, 5)


class TestSolverConfig:

    def test_defaults(self):
        cfg = solver.SolverConfig(5, 0.1, 4, gamma_family.zero_family(5))
        assert cfg.epsilon == 0.01
        assert cfg.grid == spectral.RadialGrid.uniform()
        assert cfg.radii is None
        assert cfg.check_decay

    def test_to_dict(self):
        cfg = solver.SolverConfig(5, 0.1, 4, gamma_family.power_law_family(2.5, 5))
        result = cfg.to_dict()
        assert result['family']['name'] == 'power-law'
        assert result['k_max'] == spectral.DEFAULT_K_MAX
        assert result['k_nodes'] == spectral.DEFAULT_NODES
        assert result['n_max'] == 4

    @pytest.mark.parametrize('kwargs', [
        {'dim': 4},
        {'lam': 1.0},
        {'lam': -0.01},
        {'n_max': 0},
        {'epsilon': 0.0},
        {'epsilon': 0.02},
        {'family': 'power-law'},
        {'family': gamma_family.zero_family(7)},
        {'grid': [0.0, 1.0]},
        {'radii': [1.0, -1.0]},
    ])
    def test_invalid(self, kwargs):
        args = {'dim': 5, 'lam': 0.1, 'n_max': 4, 'family': gamma_family.zero_family(5)}
        args.update(kwargs)
        with pytest.raises(exceptions.InvalidArgumentError):
            solver.SolverConfig(**args)


class TestRunRecursion:

    def test_free_walk(self, free_run):
        k = free_run.config.grid.k_nodes
        for n in range(free_run.config.n_max + 1):
            assert free_run.c_hat_values[n] == pytest.approx(np.exp(-0.5 * n * k * k),
                                                             rel=1e-12, abs=1e-300)

    def test_transform_at_zero_is_mass(self, power_law_run):
        c = power_law_run.sequence.c
        assert power_law_run.c_hat_values[:, 0] == pytest.approx(c, rel=1e-12)

    def test_normalized_masses(self, power_law_run):
        seq = power_law_run.sequence
        n = np.arange(seq.c.size)
        assert power_law_run.c_hat_values[:, 0] * seq.mu ** -n == pytest.approx(seq.a, rel=1e-12)

    def test_spectral_residual(self, power_law_run):
        assert solver.spectral_residual(power_law_run) < 1e-13

    def test_single_mode_unrolled(self):
        lam, beta, s = 0.1, -0.5, 0.5
        family = gamma_family.single_mode_family(beta, s, 5)
        run = solver.run_recursion(solver.SolverConfig(5, lam, 2, family))
        c = sequence_core.solve_c(sequence_core.BScalars.from_family(family, lam, 2))
        k = run.config.grid.k_nodes
        b1 = beta * np.exp(-0.5 * s * k * k)
        c_hat1 = np.exp(-0.5 * k * k) + lam * c[1] * b1
        c_hat2 = c_hat1 * np.exp(-0.5 * k * k) + lam * c[1] * b1 * c_hat1
        assert run.c_hat(1).values == pytest.approx(c_hat1, rel=1e-12, abs=1e-15)
        assert run.c_hat(2).values == pytest.approx(c_hat2, rel=1e-12, abs=1e-15)

    def test_read_only(self, power_law_run):
        with pytest.raises(ValueError):
            power_law_run.c_hat_values[1, 0] = 0.0

    def test_default_radii(self, power_law_run):
        delta = power_law_run.sequence.delta
        radii = power_law_run.radii
        assert radii.size == 64
        assert radii[0] == pytest.approx(1e-2)
        assert radii[-1] == pytest.approx(8.0 * math.sqrt(32 * delta * 1.01))

    def test_index_out_of_range(self, power_law_run):
        with pytest.raises(exceptions.InvalidArgumentError):
            power_law_run.c_hat(33)
        with pytest.raises(exceptions.InvalidArgumentError):
            solver.clt_error_profile(power_law_run, 0)

    def test_truncation(self):
        grid = spectral.RadialGrid.uniform(12.0, 65)
        family = _spectral_family(np.ones((1, 65)), [0.0], [0.0], grid)
        with pytest.raises(exceptions.TruncationError):
            solver.run_recursion(solver.SolverConfig(5, 0.5, 2, family, grid=grid))

    def test_restriction(self):
        grid = spectral.RadialGrid.uniform(12.0, 65)
        family = _spectral_family(np.zeros((1, 65)), [0.0], [-0.3], grid)
        run = solver.run_recursion(
            solver.SolverConfig(5, 0.9, 3, family, grid=grid, saw_type=True))
        assert run.sequence.delta == pytest.approx(0.73)
        assert not run.restriction_ok

    def test_restriction_holds(self, power_law_run):
        assert power_law_run.restriction_ok


class TestProfiles:

    def test_free_walk_error_vanishes(self, free_run):
        for n in range(1, 9):
            assert np.max(solver.clt_error_profile(free_run, n)) < 1e-10

    def test_free_walk_profile(self, free_run):
        radii = free_run.radii
        expected = (2.0 * math.pi * 4.0) ** -2.5 * np.exp(-radii * radii / 8.0)
        assert solver.normalized_profile(free_run, 4) == pytest.approx(expected, rel=1e-7,
                                                                     abs=1e-14)

    def test_error_is_finite(self, power_law_run):
        error = solver.clt_error_profile(power_law_run, 16)
        assert np.all(np.isfinite(error))
        assert error[-1] < 1e-3 * np.max(error)

    def test_l1_error_decreases(self, power_law_run):
        assert solver.l1_error(power_law_run, 32) < solver.l1_error(power_law_run, 8)

    def test_l1_error_free_walk(self, free_run):
        assert solver.l1_error(free_run, 8) < 1e-8


class TestBound:

    def test_positive(self, power_law_run):
        assert np.all(solver.bound_profile(power_law_run, 16) > 0.0)

    def test_mass(self, power_law_run):
        n = 16
        majorant = power_law_run.config.family.majorant
        expected = power_law_run.config.lam * (
            sum(s * gamma_family.gamma_moment(majorant, n - s, 0) for s in range(1, n // 2 + 1))
            + gamma_family.zeta_bar(majorant, n))
        assert solver.bound_mixture(power_law_run, n).mass() == pytest.approx(expected,
                                                                              rel=1e-12)

    def test_requires_majorant(self):
        family = gamma_family.single_mode_family(-0.5, 0.5, 5)
        run = solver.run_recursion(solver.SolverConfig(5, 0.1, 4, family))
        with pytest.raises(exceptions.FailedPreconditionError):
            solver.bound_profile(run, 4)

    def test_ratio_report_free_walk(self, free_run):
        assert solver.ratio_report(free_run, [2, 4, 8]) == {2: 0.0, 4: 0.0, 8: 0.0}

    def test_ratio_report(self, power_law_run):
        report = solver.ratio_report(power_law_run, [8, 16])
        assert set(report) == {8, 16}
        assert all(0.0 < value < math.inf for value in report.values())


class TestSawMajorantRun:

    def test_grid_covers_narrowest_term(self, saw_majorant_run):
        grid = saw_majorant_run.config.grid
        assert grid.k_max == pytest.approx(spectral.decay_k_max(0.4))
        assert grid.k_max > spectral.DEFAULT_K_MAX
        assert len(grid) == spectral.DEFAULT_NODES

    def test_consistency(self, saw_majorant_run):
        c = saw_majorant_run.sequence.c
        assert saw_majorant_run.c_hat_values[:, 0] == pytest.approx(c, rel=1e-12)
        assert solver.spectral_residual(saw_majorant_run) < 1e-13

    def test_error_profiles(self, saw_majorant_run):
        for n in (4, 16):
            assert np.all(np.isfinite(solver.clt_error_profile(saw_majorant_run, n)))

    def test_bound_at_origin(self, saw_majorant_run):
        lam = saw_majorant_run.config.lam
        delta = saw_majorant_run.sequence.delta
        scaled = {}
        relative = {}
        for n in (4, 16):
            bound = solver.bound_profile(saw_majorant_run, n)
            assert np.all(bound > 0.0)
            scaled[n] = bound[0] * n ** 2.5
            relative[n] = bound[0] / (lam * (2.0 * math.pi * n * delta) ** -2.5)
        # order n^{-d/2} at the origin, at most one extra factor of n
        assert 0.25 < scaled[16] / scaled[4] < 16.0
        # no local limit at the origin: the bound does not vanish against phi_{n delta}(0)
        assert relative[16] > 0.25 * relative[4]


class TestDelta:

    def test_free_walk_cancels(self, free_run):
        mix = solver.delta_mixture(free_run, 4, 2)
        assert len(mix) == 0
        assert solver.delta_kj_check(free_run, 4) == 0.0
        assert solver.delta_jj_check(free_run, 4) == 0.0

    def test_kj_constant_is_stable(self, power_law_run):
        small = solver.delta_kj_check(power_law_run, 16)
        large = solver.delta_kj_check(power_law_run, 32)
        assert 0.0 < small < math.inf
        assert large / small < 4.0
        assert small / large < 4.0

    def test_diagonal(self, power_law_run):
        assert 0.0 < solver.delta_jj_check(power_law_run, 8) < math.inf

    @pytest.mark.parametrize('k, j', [(4, 0), (4, 5)])
    def test_invalid_index(self, power_law_run, k, j):
        with pytest.raises(exceptions.InvalidArgumentError):
            solver.delta_mixture(power_law_run, k, j)

    def test_spectral_family_has_no_mixtures(self):
        grid = spectral.RadialGrid.uniform(12.0, 65)
        family = _spectral_family(np.zeros((1, 65)), [0.0], [0.0], grid)
        run = solver.run_recursion(solver.SolverConfig(5, 0.1, 2, family, grid=grid))
        with pytest.raises(exceptions.FailedPreconditionError):
            solver.delta_mixture(run, 2, 1)


class TestReports:

    def test_profile_rows(self, power_law_run):
        rows = solver.profile_rows(power_law_run, 8)
        assert len(rows) == power_law_run.radii.size
        assert all(len(row) == len(solver.PROFILE_COLUMNS) for row in rows)
        assert rows[0][0] == 8
        assert all(row[5] > 0.0 for row in rows)

    def test_profile_rows_without_majorant(self):
        family = gamma_family.single_mode_family(-0.5, 0.5, 5)
        run = solver.run_recursion(solver.SolverConfig(5, 0.1, 4, family))
        rows = solver.profile_rows(run, 4)
        assert all(math.isnan(row[5]) and math.isnan(row[6]) for row in rows)

    def test_summary(self, power_law_run):
        result = solver.summary(power_law_run, [8])
        assert set(result) == {'config', 'sequence', 'restriction_ok', 'spectral_residual',
                               'ratios'}
        assert set(result['ratios']) == {'8'}

    def test_summary_without_majorant(self):
        family = gamma_family.single_mode_family(-0.5, 0.5, 5)
        run = solver.run_recursion(solver.SolverConfig(5, 0.1, 4, family))
        assert 'ratios' not in solver.summary(run, [4])
