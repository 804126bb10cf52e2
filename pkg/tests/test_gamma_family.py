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

"""Tests for lacelab.gamma_family."""
import math

import numpy as np
import pytest
from scipy import integrate

from lacelab import _series
from lacelab import exceptions
from lacelab import gamma_family
from tests import testutils


@pytest.fixture(scope='module')
def power_law():
    return gamma_family.PowerLaw(2.5, 5)


@pytest.fixture(scope='module')
def saw_majorant():
    return gamma_family.SawMajorant(5)


class TestGammaMoment:

    def test_single_term(self, power_law):
        assert gamma_family.gamma_moment(power_law, 3, 1) == pytest.approx(
            3 ** -2.5 * 5 * 1.5)

    def test_unit_mass(self, power_law):
        assert gamma_family.gamma_moment(power_law, 1, 0) == pytest.approx(1.0)

    def test_fourth_moment(self, power_law):
        expected = integrate.quad(
            lambda r: 2 ** -2.5 * testutils.sphere_area(5) * r ** 8
            * testutils.gaussian_density(1.0, 5, r), 0.0, np.inf, epsabs=1e-12)[0]
        assert gamma_family.gamma_moment(power_law, 2, 2) == pytest.approx(35 / 2 ** 2.5)
        assert gamma_family.gamma_moment(power_law, 2, 2) == pytest.approx(expected, rel=1e-8)

    @pytest.mark.parametrize('k', [0, 1, 2])
    def test_saw_moments_match_mixtures(self, saw_majorant, k):
        for m in (1, 4, 9):
            assert gamma_family.gamma_moment(saw_majorant, m, k) == pytest.approx(
                saw_majorant.term(m).moment(k), rel=1e-12)

    @pytest.mark.parametrize('m, k', [(0, 0), (1, 3), (1, -1), (1.5, 0)])
    def test_invalid(self, power_law, m, k):
        with pytest.raises(exceptions.InvalidArgumentError):
            gamma_family.gamma_moment(power_law, m, k)


class TestMajorantFamilies:

    def test_power_law_term(self, power_law):
        term = power_law.term(4)
        assert list(term.variances) == [2.0]
        assert term.mass() == pytest.approx(4 ** -2.5)

    def test_saw_term(self, saw_majorant):
        term = saw_majorant.term(3)
        assert term.variances == pytest.approx([0.4, 0.8, 1.2])
        assert term.is_positive
        expected = 3 ** -2.5 * sum(k ** -1.5 for k in (1, 2, 3))
        assert term.mass() == pytest.approx(expected)

    def test_term_cache(self, power_law):
        assert power_law.term(5) is power_law.term(5)

    def test_equality(self):
        assert gamma_family.PowerLaw(2.5, 5) == gamma_family.PowerLaw(2.5, 5)
        assert gamma_family.PowerLaw(2.5, 5) != gamma_family.PowerLaw(3.0, 5)
        assert gamma_family.SawMajorant(5, 2.0) != gamma_family.SawMajorant(5)
        assert hash(gamma_family.SawMajorant(5)) == hash(gamma_family.SawMajorant(5))

    def test_to_dict(self, power_law, saw_majorant):
        assert power_law.to_dict() == {'kind': 'power-law', 'a': 2.5, 'dim': 5}
        assert saw_majorant.to_dict() == {'kind': 'saw-majorant', 'K': 1.0, 'dim': 5}

    @pytest.mark.parametrize('args', [(0.0, 5), (-1.0, 5), (2.5, 0)])
    def test_invalid_power_law(self, args):
        with pytest.raises(ValueError):
            gamma_family.PowerLaw(*args)

    def test_invalid_saw_majorant(self):
        with pytest.raises(ValueError):
            gamma_family.SawMajorant(5, K=0.0)

    def test_radius_grid(self):
        radii = gamma_family.radius_grid(16)
        assert radii.size == 64
        assert radii[0] == pytest.approx(1e-2)
        assert radii[-1] == pytest.approx(40.0)


class TestChi:

    @pytest.mark.parametrize('m', [1, 2, 7])
    def test_power_law_diagonal(self, power_law, m):
        assert gamma_family.chi(power_law, m, m) == pytest.approx((2.0 / m) ** 2.5)

    @pytest.mark.parametrize('family', ['power_law', 'saw_majorant'])
    def test_symmetric(self, request, family):
        family = request.getfixturevalue(family)
        assert gamma_family.chi(family, 3, 8) == gamma_family.chi(family, 8, 3)

    def test_saw_constant_scales_with_k(self):
        base = gamma_family.SawMajorant(5)
        scaled = gamma_family.SawMajorant(5, K=3.0)
        assert gamma_family.chi(scaled, 2, 5) == pytest.approx(3.0 * gamma_family.chi(base, 2, 5))

    def test_invalid(self, power_law):
        with pytest.raises(exceptions.InvalidArgumentError):
            gamma_family.chi(power_law, 0, 1)

    def test_power_law_convolution_is_exact(self, power_law):
        radii = gamma_family.radius_grid(16)
        assert gamma_family.b1_domination(power_law, 3, 5, radii) == pytest.approx(1.0,
                                                                                 rel=1e-12)

    def test_saw_pointwise_domination(self, saw_majorant):
        radii = gamma_family.radius_grid(32)
        worst = max(gamma_family.b1_domination(saw_majorant, m, n, radii)
                    for m in range(1, 17) for n in range(m, 17))
        assert worst <= 1.0 + 1e-9


class TestConditionReport:

    def test_power_law_passes(self, power_law):
        report = gamma_family.condition_report(power_law, 32)
        assert report.passed
        assert report.violations == ()
        assert math.isfinite(report.k1)
        assert report.k2 <= 2.0 ** 5 + 1e-9
        assert all(math.isfinite(value) for value in report.tails.values())

    def test_saw_majorant_passes(self, saw_majorant):
        report = gamma_family.condition_report(saw_majorant, 32)
        assert report.passed
        assert report.b1_pointwise <= 1.0 + 1e-9

    def test_slow_decay_flags_summability(self):
        report = gamma_family.condition_report(gamma_family.PowerLaw(1.5, 5), 32)
        assert 'B4' in report.violations
        assert not report.passed
        assert report.tails['k4'] == math.inf

    def test_to_dict(self, power_law):
        result = gamma_family.condition_report(power_law, 8).to_dict()
        assert set(result) == {'k1', 'k2', 'k3', 'k4', 'k5', 'k6', 'violations', 'tails',
                               'b1_pointwise'}

    @pytest.mark.parametrize('n_max', [3, 0, 'x'])
    def test_invalid_size(self, power_law, n_max):
        with pytest.raises(exceptions.InvalidArgumentError):
            gamma_family.condition_report(power_law, n_max)

    def test_invalid_family(self):
        with pytest.raises(exceptions.InvalidArgumentError):
            gamma_family.condition_report('power-law', 8)


class TestZeta:

    def test_zeta1_first_value(self, power_law):
        assert gamma_family.zeta1(power_law, 1) == pytest.approx(1.0 + 1.0 + 2.5 + 8.75)

    def test_zeta2_is_decreasing(self, power_law):
        values = [gamma_family.zeta2(power_law, n) for n in (1, 2, 4, 8)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_zeta_bar_decreases(self, power_law):
        values = np.array([gamma_family.zeta_bar(power_law, n) for n in range(16, 257)])
        assert np.all(np.diff(values) < 0)

    def test_zeta_bar_slope(self, power_law):
        n = np.array([16, 32, 64, 128, 256])
        values = [gamma_family.zeta_bar(power_law, int(m)) for m in n]
        assert _series.loglog_slope(n, values) == pytest.approx(2.0 - 2.5, abs=0.3)

    def test_comparability(self, power_law):
        ratio = gamma_family.zeta_bar_comparability(power_law, 128)
        assert 1.0 <= ratio < 2.0

    def test_table_cache(self, power_law):
        assert gamma_family.zeta_table(power_law, 10) is gamma_family.zeta_table(power_law, 64)
        assert gamma_family.zeta_table(power_law, 65).n_max == 128

    def test_invalid(self, power_law):
        with pytest.raises(exceptions.InvalidArgumentError):
            gamma_family.zeta_bar(power_law, 0)


class TestEnvelopes:

    @pytest.mark.parametrize('dim, n, expected', [
        (5, 4, 0.5),
        (7, 10, 0.1),
        (6, 10, math.log(10) / 10),
        (9, 4, 0.25),
    ])
    def test_r_n(self, dim, n, expected):
        assert gamma_family.r_n(dim, n) == pytest.approx(expected)

    @pytest.mark.parametrize('dim, n', [(4, 10), (3, 10), (5, 1)])
    def test_r_n_invalid(self, dim, n):
        with pytest.raises(exceptions.InvalidArgumentError):
            gamma_family.r_n(dim, n)

    def test_psi_n(self):
        assert list(gamma_family.psi_n(1.0, 0.0, 3, 5).variances) == [3.0]
        psi = gamma_family.psi_n(0.95, 0.01, 10, 5)
        assert psi.variances[0] == pytest.approx(9.595)
        assert psi.mass() == pytest.approx(1.0)

    @pytest.mark.parametrize('delta, epsilon, n', [(0.0, 0.01, 3), (1.0, -0.1, 3),
                                                   (1.0, 0.01, 0)])
    def test_psi_n_invalid(self, delta, epsilon, n):
        with pytest.raises(exceptions.InvalidArgumentError):
            gamma_family.psi_n(delta, epsilon, n, 5)

    def test_f_profile_two(self, power_law):
        f2 = gamma_family.f_profile(power_law, 1.0, 0.0, 2)
        assert len(f2) == 2
        assert f2.mass() == pytest.approx(1.0 + gamma_family.zeta_bar(power_law, 2))

    def test_f_profile_mass(self, power_law):
        n = 16
        expected = sum(s * gamma_family.gamma_moment(power_law, n - s, 0)
                       for s in range(1, n // 2 + 1)) + gamma_family.zeta_bar(power_law, n)
        f_n = gamma_family.f_profile(power_law, 0.95, 0.01, n)
        assert f_n.mass() == pytest.approx(expected, rel=1e-12)
        assert f_n.is_positive

    def test_f_profile_at_origin(self, power_law):
        n, delta, epsilon = 16, 0.95, 0.01
        widen = delta * (1.0 + epsilon)
        expected = sum(s * (n - s) ** -2.5
                       * testutils.gaussian_density(s * widen + 0.5 * (n - s), 5, 0.0)
                       for s in range(1, n // 2 + 1))
        expected += (gamma_family.zeta_bar(power_law, n)
                     * testutils.gaussian_density(n * widen, 5, 0.0))
        f_n = gamma_family.f_profile(power_law, delta, epsilon, n)
        assert f_n.density(0.0) == pytest.approx(expected, rel=1e-10)

    def test_kappa_profile(self, power_law):
        kappa = gamma_family.kappa_profile(power_law, 0.95, 0.01, 10)
        with_zero = gamma_family.kappa_profile(power_law, 0.95, 0.01, 10, include_zero=True)
        assert kappa.is_positive
        assert with_zero.mass() - kappa.mass() == pytest.approx(10 ** -2.5)

    def test_le_main_check_is_stable(self, power_law):
        small = gamma_family.le_main_check(power_law, 0.95, 0.01, 16)
        large = gamma_family.le_main_check(power_law, 0.95, 0.01, 32)
        assert math.isfinite(small) and math.isfinite(large)
        assert large / small < 4.0
        assert small / large < 4.0

    def test_saw_bound_profile(self):
        profile = gamma_family.saw_bound_profile(5, 1.0, 0.0, 4)
        expected = gamma_family.r_n(5, 4) + 4 ** -2.5 * (1 + 2)
        assert profile.mass() == pytest.approx(expected)

    @pytest.mark.parametrize('dim', [3, 5, 9])
    def test_phi1_check(self, dim):
        radii = gamma_family.radius_grid(64)
        assert gamma_family.phi1_check(dim, [0.5, 1.0, 7.0], radii) <= 1.0

    @pytest.mark.parametrize('dim', [3, 5])
    def test_gaussian_product(self, dim):
        fitted, analytic = gamma_family.gaussian_product_check(dim, n_samples=500, seed=3)
        assert analytic == pytest.approx((4.0 * math.pi) ** (-0.5 * dim))
        assert 0.0 < fitted <= analytic * (1.0 + 1e-12)


class TestBFamilies:

    def test_power_law_family(self):
        family = gamma_family.power_law_family(2.5, 5)
        n = np.arange(1, 5, dtype=float)
        assert family.b(4) == pytest.approx(-(n ** -2.5))
        assert family.b_bar(4) == pytest.approx(-(n ** -2.5) * n / 2.0)
        assert family.hat(2, 0.0) == pytest.approx(-(2 ** -2.5))
        assert family.has_mixtures
        assert family.dominated(8, gamma_family.radius_grid(8)) == pytest.approx(1.0)

    def test_saw_majorant_family(self):
        family = gamma_family.saw_majorant_family(2.0, 5)
        assert family.majorant == gamma_family.SawMajorant(5, 2.0)
        assert family.b(1)[0] == pytest.approx(-2.0)

    def test_single_mode(self):
        family = gamma_family.single_mode_family(-0.5, 0.8, 5)
        assert list(family.b(3)) == [-0.5, 0.0, 0.0]
        assert family.b_bar(3) == pytest.approx([-0.4, 0.0, 0.0])
        assert family.to_dict() == {'name': 'single-mode', 'dim': 5, 'beta': -0.5, 's': 0.8}

    def test_min_variance(self):
        family = gamma_family.single_mode_family(-0.5, 0.8, 5)
        assert family.min_variance(4) == pytest.approx(0.8)
        assert family.min_variance(0) is None
        assert gamma_family.zero_family(5).min_variance(4) is None
        majorant = gamma_family.saw_majorant_family(1.0, 5)
        assert majorant.min_variance(8) == pytest.approx(0.4)

    def test_zero_family(self):
        family = gamma_family.zero_family(5)
        assert list(family.b(3)) == [0.0, 0.0, 0.0]
        with pytest.raises(exceptions.FailedPreconditionError):
            family.require_majorant()

    def test_mixture_cache(self):
        family = gamma_family.power_law_family()
        assert family.mixture(3) is family.mixture(3)

    @pytest.mark.parametrize('name', gamma_family.PRESETS)
    def test_presets(self, name):
        family = gamma_family.family_from_preset(name, 5)
        assert family.name == name
        assert family.dim == 5

    def test_unknown_preset(self):
        with pytest.raises(exceptions.InvalidArgumentError):
            gamma_family.family_from_preset('lattice', 5)

    def test_majorant_dimension_mismatch(self):
        with pytest.raises(ValueError):
            gamma_family.zero_family(5, majorant=gamma_family.PowerLaw(2.5, 7))


class TestSpectralBFamily:

    def _family(self):
        k = np.array([0.0, 1.0, 2.0])
        hats = np.array([[-0.1, -0.05, -0.01], [0.02, 0.01, 0.0]])
        return gamma_family.SpectralBFamily(k, hats, [-0.1, 0.02], [-0.05, 0.01], 5), k

    def test_padding(self):
        family, k = self._family()
        assert list(family.b(4)) == [-0.1, 0.02, 0.0, 0.0]
        assert list(family.b_bar(1)) == [-0.05]
        assert list(family.hat(3, k)) == [0.0, 0.0, 0.0]
        assert family.size == 2
        assert not family.has_mixtures

    def test_hat(self):
        family, k = self._family()
        assert list(family.hat(1, k)) == [-0.1, -0.05, -0.01]

    def test_foreign_grid(self):
        family, _ = self._family()
        with pytest.raises(exceptions.InvalidArgumentError):
            family.hat(1, np.array([0.0, 0.5, 2.0]))

    def test_no_mixtures(self):
        family, _ = self._family()
        with pytest.raises(exceptions.FailedPreconditionError):
            family.mixture(1)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            gamma_family.SpectralBFamily([0.0, 1.0], [[1.0, 2.0]], [1.0, 2.0], [1.0, 2.0], 5)
