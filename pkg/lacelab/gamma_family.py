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

"""Majorant families, their moments and the bound envelopes built from them.

A majorant family is a sequence of positive rotationally invariant Gaussian mixtures
``Gamma_n`` dominating the interaction kernels ``|B_n|``. This module exposes the two families
used throughout lacelab (a pure power law and the weakly self-avoiding walk majorant), the
empirical report on the four domination and summability conditions, the decay rates
``zeta_1``, ``zeta_2`` and ``zeta_bar``, and the envelopes ``psi_n``, ``f_n`` and ``kappa(n)``.
It also defines the interaction families ``B_n`` fed to the solver.
"""

import dataclasses
import functools
import logging
import math

import numpy as np
from scipy import special

from lacelab import _encoder
from lacelab import _mixture
from lacelab import _sampling
from lacelab import _series
from lacelab import _utils
from lacelab import exceptions


_logger = logging.getLogger(__name__)
_Validators = _encoder._Validators

GaussianMixture = _mixture.GaussianMixture

RADIUS_POINTS = 64
RADIUS_MIN = 1e-2
CHI_HORIZON = 4096
ZETA_HORIZON = 4096
DOMINATION_TOLERANCE = 1e-9
B1_TEST_SIZE = 16
B3_TEST_SIZE = 16
B3_T_FACTORS = (1.0, 2.0, 4.0, 8.0)


def radius_grid(n_max, upper=None, points=RADIUS_POINTS):
    """Geometric radius grid on ``[1e-2, upper]``; ``upper`` defaults to ``10 sqrt(n_max)``."""
    n_max = _Validators.check_int('n_max', n_max, minimum=1)
    if upper is None:
        upper = 10.0 * math.sqrt(n_max)
    return np.geomspace(RADIUS_MIN, upper, points)


class MajorantFamily:
    """Base class for a sequence of positive Gaussian mixtures ``Gamma_n``, ``n >= 1``."""

    def __init__(self, dim):
        self._dim = _Validators.check_int('MajorantFamily.dim', dim, minimum=1)
        self._terms = {}

    @property
    def dim(self):
        return self._dim

    @property
    def kind(self):
        raise NotImplementedError

    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        if not isinstance(other, MajorantFamily):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def term(self, n):
        """Returns ``Gamma_n`` as a positive mixture."""
        n = _Validators.check_int('n', n, minimum=1)
        mix = self._terms.get(n)
        if mix is None:
            mix = self._build_term(n)
            self._terms[n] = mix
        return mix

    def _build_term(self, n):
        raise NotImplementedError

    def moments(self, n_max, k):
        """Returns ``gamma^{(k)}(m)`` for ``m = 1 .. n_max`` as an array."""
        raise NotImplementedError

    def chi(self, m, n):
        raise NotImplementedError

    def density(self, n, r):
        return self.term(n).density(r)

    def log_density(self, n, r):
        return self.term(n).log_density(r)

    def to_dict(self):
        raise NotImplementedError


class PowerLaw(MajorantFamily):
    """``Gamma_n = n^{-a} phi_{n/2}``."""

    def __init__(self, a, dim):
        super().__init__(dim)
        self._a = _Validators.check_positive_number('PowerLaw.a', a)

    @property
    def a(self):
        return self._a

    @property
    def kind(self):
        return 'power-law'

    def _key(self):
        return ('power-law', self._a, self._dim)

    def __repr__(self):
        return 'PowerLaw(a={0!r}, dim={1})'.format(self._a, self._dim)

    def _build_term(self, n):
        return GaussianMixture.phi(0.5 * n, self._dim, weight=float(n) ** -self._a)

    def moments(self, n_max, k):
        n = np.arange(1, n_max + 1, dtype=float)
        return n ** -self._a * _mixture.gaussian_moment(0.5 * n, k, self._dim)

    def chi(self, m, n):
        return ((m + n) / (m * n)) ** self._a

    def to_dict(self):
        return {'kind': self.kind, 'a': self._a, 'dim': self._dim}


class SawMajorant(MajorantFamily):
    """``Gamma_n = K n^{-d/2} sum_{k=1}^{n} k^{1-d/2} phi_{2k/5}``."""

    def __init__(self, dim, K=1.0):
        super().__init__(dim)
        self._scale = _Validators.check_positive_number('SawMajorant.K', K)
        self._chi_constant = None

    @property
    def K(self): # pylint: disable=invalid-name
        return self._scale

    @property
    def kind(self):
        return 'saw-majorant'

    def _key(self):
        return ('saw-majorant', self._scale, self._dim)

    def __repr__(self):
        return 'SawMajorant(K={0!r}, dim={1})'.format(self._scale, self._dim)

    def _build_term(self, n):
        k = np.arange(1, n + 1, dtype=float)
        weights = self._scale * float(n) ** (-0.5 * self._dim) * k ** (1.0 - 0.5 * self._dim)
        return GaussianMixture(weights, 0.4 * k, self._dim)

    def moments(self, n_max, k):
        j = np.arange(1, n_max + 1, dtype=float)
        inner = np.cumsum(j ** (1.0 - 0.5 * self._dim)
                          * _mixture.gaussian_moment(0.4 * j, k, self._dim))
        return self._scale * j ** (-0.5 * self._dim) * inner

    @property
    def chi_constant(self):
        """``sup_t t^{d/2-1} sum_{k=1}^{t-1} (k (t-k))^{1-d/2}`` over ``t <= 4096``."""
        if self._chi_constant is None:
            self._chi_constant = _pair_sum_constant(self._dim, CHI_HORIZON)
        return self._chi_constant

    def chi(self, m, n):
        constant = self.chi_constant
        if m + n > CHI_HORIZON:
            constant = max(constant, _pair_sum_constant(self._dim, m + n))
        return self._scale * constant * ((m + n) / (m * n)) ** (0.5 * self._dim)

    def to_dict(self):
        return {'kind': self.kind, 'K': self._scale, 'dim': self._dim}


@functools.lru_cache(maxsize=None)
def _pair_sum_constant(dim, horizon):
    k = np.arange(1, horizon + 1, dtype=float)
    powers = k ** (1.0 - 0.5 * dim)
    # sums[t - 2] = sum_{k=1}^{t-1} (k (t-k))^{1-d/2} for t = 2 .. horizon
    sums = np.convolve(powers, powers)[:horizon - 1]
    t = np.arange(2, horizon + 1, dtype=float)
    return float(np.max(sums * t ** (0.5 * dim - 1.0)))


def gamma_moment(family, m, k):
    """Returns ``gamma^{(k)}(m) = int |y|^{2k} Gamma_m(y) dy``.

    Raises:
        InvalidArgumentError: If ``m < 1`` or ``k`` is not 0, 1 or 2.
    """
    try:
        m = _Validators.check_int('m', m, minimum=1)
        k = _Validators.check_int('k', k, minimum=0, maximum=2)
    except ValueError as error:
        raise _utils.handle_value_error(error, 'gamma_moment')
    return float(family.moments(m, k)[-1])


def chi(family, m, n):
    """Returns the B1 coefficient ``chi_{m+n}(m)`` with ``Gamma_m Gamma_n <= chi Gamma_{m+n}``."""
    try:
        m = _Validators.check_int('m', m, minimum=1)
        n = _Validators.check_int('n', n, minimum=1)
    except ValueError as error:
        raise _utils.handle_value_error(error, 'chi')
    return float(family.chi(m, n))


def b1_domination(family, m, n, radii):
    """Returns ``sup_r (Gamma_m * Gamma_n)(r) / (chi Gamma_{m+n}(r))`` over ``radii``."""
    product = family.term(m).convolve(family.term(n))
    logs = (product.log_density(radii) - math.log(family.chi(m, n))
            - family.log_density(m + n, radii))
    return float(np.exp(np.max(logs)))


@dataclasses.dataclass(frozen=True)
class ConditionReport:
    """Empirical constants for the four majorant conditions.

    Attributes:
        k1: Max over ``n`` of ``sum_s (s ^ (n-s)) chi_n(s)``.
        k2: Max ratio ``Gamma_s / Gamma_{2t}`` for ``t <= s <= 2t``.
        k3: Max ratio of the smoothed moment bound.
        k4: Partial sum of ``n gamma^{(0)}(n)``.
        k5: Partial sum of ``gamma^{(1)}(n)``.
        k6: Partial sum of ``gamma^{(2)}(n) / n``.
        violations: Names of the conditions flagged as failing.
        tails: Tail estimates of the three series behind ``k4``, ``k5`` and ``k6``.
        b1_pointwise: Max ratio of the pointwise B1 domination test (at most 1 when it holds).
    """

    k1: float
    k2: float
    k3: float
    k4: float
    k5: float
    k6: float
    violations: tuple
    tails: dict
    b1_pointwise: float

    @property
    def passed(self):
        return not self.violations

    def to_dict(self):
        return {
            'k1': self.k1, 'k2': self.k2, 'k3': self.k3,
            'k4': self.k4, 'k5': self.k5, 'k6': self.k6,
            'violations': list(self.violations),
            'tails': dict(self.tails),
            'b1_pointwise': self.b1_pointwise,
        }


def _b1_sums(family, n_max):
    sums = []
    for n in range(2, n_max + 1):
        s = np.arange(1, n)
        sums.append(float(sum(min(si, n - si) * family.chi(si, n - si) for si in s)))
    return np.array(sums)


def _b2_ratios(family, n_max, radii):
    per_t = []
    for t in range(1, n_max // 2 + 1):
        target = family.log_density(2 * t, radii)
        best = max(float(np.max(family.log_density(s, radii) - target))
                   for s in range(t, 2 * t + 1))
        per_t.append(math.exp(best))
    return np.array(per_t)


def _b3_ratio(family, m, t, k, radii):
    mix = family.term(m)
    logs = (np.log(mix.weights)
            + _mixture.log_phi(t + mix.variances, radii[:, np.newaxis], family.dim)
            + np.log(_mixture.overlap_factor(t, mix.variances, radii[:, np.newaxis], k,
                                             family.dim)))
    lhs = special.logsumexp(logs, axis=1)
    rhs = math.log(gamma_moment(family, m, k)) + _mixture.log_phi(t + m, radii, family.dim)
    return float(np.exp(np.max(lhs - rhs)))


@_utils.validated('condition_report')
def condition_report(family, n_max, radii=None):
    """Evaluates the four majorant conditions empirically up to ``n_max``.

    Args:
        family: A ``MajorantFamily``.
        n_max: Largest index considered (at least 4).
        radii: Radius test grid (optional; defaults to ``radius_grid(n_max)``).

    Returns:
        ConditionReport: The fitted constants, tail diagnostics and flagged violations.
    """
    n_max = _Validators.check_int('n_max', n_max, minimum=4)
    if not isinstance(family, MajorantFamily):
        raise ValueError('family must be a MajorantFamily.')
    radii = radius_grid(n_max) if radii is None else np.asarray(radii, dtype=float)
    violations = []

    k1_seq = _b1_sums(family, n_max)
    size = min(B1_TEST_SIZE, n_max // 2)
    b1_pointwise = max(b1_domination(family, m, n, radii)
                       for m in range(1, size + 1) for n in range(m, size + 1))
    if _series.diverges(k1_seq) or b1_pointwise > 1.0 + DOMINATION_TOLERANCE:
        violations.append('B1')

    k2_seq = _b2_ratios(family, n_max, radii)
    if not np.all(np.isfinite(k2_seq)) or _series.diverges(np.maximum.accumulate(k2_seq)):
        violations.append('B2')

    k3 = 0.0
    for m in range(1, min(B3_TEST_SIZE, n_max) + 1):
        for factor in B3_T_FACTORS:
            for k in (0, 1, 2):
                k3 = max(k3, _b3_ratio(family, m, factor * m, k, radii))
    if not math.isfinite(k3):
        violations.append('B3')

    n = np.arange(1, n_max + 1, dtype=float)
    series = {
        'k4': n * family.moments(n_max, 0),
        'k5': family.moments(n_max, 1),
        'k6': family.moments(n_max, 2) / n,
    }
    sums = {}
    tails = {}
    b4_failed = False
    for name in sorted(series):
        terms = series[name]
        partial = np.cumsum(terms)
        sums[name] = float(partial[-1])
        tails[name] = _series.tail_estimate(terms)
        if _series.diverges(partial) or not math.isfinite(tails[name]):
            b4_failed = True
    if b4_failed:
        violations.append('B4')

    report = ConditionReport(
        k1=float(np.max(k1_seq)), k2=float(np.max(k2_seq)), k3=k3,
        k4=sums['k4'], k5=sums['k5'], k6=sums['k6'],
        violations=tuple(violations), tails=tails, b1_pointwise=b1_pointwise)
    if violations:
        _logger.warning('%r violates %s up to n=%d.', family, ', '.join(violations), n_max)
    else:
        _logger.info('%r satisfies B1-B4 up to n=%d.', family, n_max)
    return report


class ZetaTable:
    """Tabulated ``zeta_1``, ``zeta_2`` and ``zeta_bar`` of a majorant family for ``n <= n_max``.

    ``zeta_2`` is an infinite series; it is summed to a horizon of at least 4096 terms and the
    remainder is estimated by power-law extrapolation and reported as ``tail``.
    """

    def __init__(self, family, n_max):
        self._family = family
        self._n_max = n_max
        horizon = max(ZETA_HORIZON, 8 * n_max)
        m = np.arange(1, horizon + 1, dtype=float)
        g0 = family.moments(horizon, 0)
        g1 = family.moments(horizon, 1)
        g2 = family.moments(horizon, 2)
        increments = (m * m * g0 + m * g1 + g2)[:n_max]
        self._zeta1 = 1.0 + np.cumsum(increments)
        tail_terms = g1 + m * g0
        self._tail = _series.tail_estimate(tail_terms)
        self._zeta2 = _series.suffix_sums(tail_terms, self._tail)[:n_max]
        idx = np.arange(1, n_max + 1, dtype=float)
        self._zeta_bar = (np.cumsum(self._zeta1) / (idx * idx)
                          + np.cumsum(self._zeta2) / idx)

    @property
    def n_max(self):
        return self._n_max

    @property
    def tail(self):
        return self._tail

    def zeta1(self, n):
        return float(self._zeta1[n - 1])

    def zeta2(self, n):
        return float(self._zeta2[n - 1])

    def zeta_bar(self, n):
        return float(self._zeta_bar[n - 1])

    def zeta_bar_values(self):
        return self._zeta_bar.copy()


@functools.lru_cache(maxsize=64)
def _zeta_table(family, size):
    return ZetaTable(family, size)


def zeta_table(family, n):
    """Returns a cached ``ZetaTable`` covering at least ``1 .. n``."""
    size = 64
    while size < n:
        size *= 2
    return _zeta_table(family, size)


def _check_index(label, n, minimum=1):
    try:
        return _Validators.check_int(label, n, minimum=minimum)
    except ValueError as error:
        raise _utils.handle_value_error(error, label)


def zeta1(family, n):
    """``zeta_1(n) = 1 + sum_{i=0}^{2} sum_{m<=n} m^{2-i} gamma^{(i)}(m)``."""
    n = _check_index('n', n)
    return zeta_table(family, n).zeta1(n)


def zeta2(family, n):
    """``zeta_2(n) = sum_{m>=n} (gamma^{(1)}(m) + m gamma^{(0)}(m))``, with extrapolated tail."""
    n = _check_index('n', n)
    return zeta_table(family, n).zeta2(n)


def zeta_bar(family, n):
    """``zeta_bar(n) = n^{-2} sum_{j<=n} zeta_1(j) + n^{-1} sum_{j<=n} zeta_2(j)``."""
    n = _check_index('n', n)
    return zeta_table(family, n).zeta_bar(n)


def zeta_bar_comparability(family, n_max):
    """Returns ``sup zeta_bar(m) / zeta_bar(2n)`` over ``n <= m <= 2n``, ``2n <= n_max``."""
    n_max = _check_index('n_max', n_max, minimum=2)
    values = zeta_table(family, n_max).zeta_bar_values()
    worst = 0.0
    for n in range(1, n_max // 2 + 1):
        window = values[n - 1:2 * n]
        worst = max(worst, float(np.max(window) / values[2 * n - 1]))
    return worst


def r_n(dim, n):
    """Rate ``r_n`` of the weakly self-avoiding walk bound: ``n^{-1/2}`` for ``d = 5``,
    ``log(n) / n`` for ``d = 6`` and ``1 / n`` for ``d >= 7``.

    Raises:
        InvalidArgumentError: If ``d < 5`` or ``n < 2``.
    """
    try:
        dim = _Validators.check_int('d', dim, minimum=5)
        n = _Validators.check_int('n', n, minimum=2)
    except ValueError as error:
        raise _utils.handle_value_error(error, 'r_n')
    if dim == 5:
        return n ** -0.5
    if dim == 6:
        return math.log(n) / n
    return 1.0 / n


def _psi_variance(delta, epsilon, n):
    return n * delta * (1.0 + epsilon)


def _check_envelope_args(delta, epsilon, n, minimum=1):
    try:
        delta = _Validators.check_positive_number('delta', delta)
        epsilon = _Validators.check_non_negative_number('epsilon', epsilon)
        n = _Validators.check_int('n', n, minimum=minimum)
    except ValueError as error:
        raise _utils.handle_value_error(error, 'envelope')
    return delta, epsilon, n


def psi_n(delta, epsilon, n, dim):
    """``psi_n = phi_{n delta (1 + epsilon)}`` as a single-term mixture."""
    delta, epsilon, n = _check_envelope_args(delta, epsilon, n)
    return GaussianMixture.phi(_psi_variance(delta, epsilon, n), dim)


def f_profile(family, delta, epsilon, n):
    """``f_n = sum_{s=1}^{[n/2]} s psi_s * Gamma_{n-s} + zeta_bar(n) psi_n``.

    Juxtaposition is convolution; each ``psi_s * Gamma_{n-s}`` is the closed-form shift of the
    variances of ``Gamma_{n-s}``.
    """
    delta, epsilon, n = _check_envelope_args(delta, epsilon, n)
    parts = [family.term(n - s).shifted(_psi_variance(delta, epsilon, s)).scaled(s)
             for s in range(1, n // 2 + 1)]
    parts.append(psi_n(delta, epsilon, n, family.dim).scaled(zeta_bar(family, n)))
    return _mixture.mixture_sum(parts, family.dim)


def kappa_profile(family, delta, epsilon, n, include_zero=False):
    """``kappa(n) = sum_{s=1}^{[n/2]} psi_s * Gamma_{n-s} + (zeta_bar(n) / n) psi_n``.

    With ``include_zero`` the sum starts at ``s = 0`` (``psi_0`` is the point mass), which gives
    the envelope of the diagonal terms ``Delta(j, j)``.
    """
    delta, epsilon, n = _check_envelope_args(delta, epsilon, n)
    start = 0 if include_zero else 1
    parts = [family.term(n - s).shifted(_psi_variance(delta, epsilon, s))
             for s in range(start, n // 2 + 1)]
    parts.append(psi_n(delta, epsilon, n, family.dim).scaled(zeta_bar(family, n) / n))
    return _mixture.mixture_sum(parts, family.dim)


def le_main_check(family, delta, epsilon, n_max, radii=None):
    """Empirical constant of ``sum_{j=1}^{n} kappa(j) * f_{n-j} <= L f_n``.

    Returns the supremum of the ratio over ``2 <= n <= n_max`` and the radius grid, with
    ``f_0`` taken as the point mass at the origin.
    """
    delta, epsilon, n_max = _check_envelope_args(delta, epsilon, n_max, minimum=2)
    radii = radius_grid(n_max) if radii is None else np.asarray(radii, dtype=float)
    kappas = {j: kappa_profile(family, delta, epsilon, j) for j in range(1, n_max + 1)}
    fs = {j: f_profile(family, delta, epsilon, j) for j in range(1, n_max + 1)}
    worst = 0.0
    for n in range(2, n_max + 1):
        parts = [kappas[n]]
        parts.extend(kappas[j].convolve(fs[n - j]) for j in range(1, n))
        total = _mixture.mixture_sum(parts, family.dim)
        ratio = np.exp(np.max(total.log_density(radii) - fs[n].log_density(radii)))
        worst = max(worst, float(ratio))
    _logger.debug('Envelope constant for %r up to n=%d: %.6g', family, n_max, worst)
    return worst


def saw_bound_profile(dim, delta, epsilon, n):
    """Shape of the weakly self-avoiding walk bound, without its constant:
    ``r_n psi_n + n^{-d/2} sum_{j=1}^{ceil(n/2)} j psi_j``."""
    delta, epsilon, n = _check_envelope_args(delta, epsilon, n, minimum=2)
    parts = [psi_n(delta, epsilon, n, dim).scaled(r_n(dim, n))]
    scale = float(n) ** (-0.5 * dim)
    parts.extend(psi_n(delta, epsilon, j, dim).scaled(scale * j)
                 for j in range(1, (n + 1) // 2 + 1))
    return _mixture.mixture_sum(parts, dim)


def phi1_check(dim, t_values, radii):
    """Returns ``sup phi_t(r) / (2^{d/2} phi_s(r))`` over ``t`` in ``t_values``,
    ``t <= s <= 2t`` and the radii; at most 1 when the semigroup comparison holds."""
    radii = np.asarray(radii, dtype=float)
    worst = 0.0
    for t in t_values:
        for s in np.linspace(t, 2.0 * t, 9):
            logs = (_mixture.log_phi(t, radii, dim) - _mixture.log_phi(s, radii, dim)
                    - 0.5 * dim * math.log(2.0))
            worst = max(worst, float(np.exp(np.max(logs))))
    return worst


def gaussian_product_check(dim, n_samples=2000, seed=0):
    """Fits the constant of the four-Gaussian product bound on random parameters.

    The integral ``int phi_u(z) phi_v(x-z) phi_s(z) phi_t(y-z) dz`` equals
    ``phi_{u+v}(x) phi_{s+t}(y) phi_{p+q}(mu_x - mu_y)`` with ``p = uv/(u+v)``,
    ``q = st/(s+t)``, ``mu_x = u x/(u+v)`` and ``mu_y = s y/(s+t)``.

    Returns:
        tuple: ``(fitted, analytic)`` where ``fitted`` is the largest sampled ratio and
        ``analytic = (4 pi)^{-d/2}`` its supremum.
    """
    gen = _sampling.block_generator(seed, 0)
    u, v, s, t = np.exp(gen.uniform(-3.0, 3.0, size=(4, n_samples)))
    x = gen.standard_normal((n_samples, dim)) * np.sqrt(u + v)[:, np.newaxis]
    y = gen.standard_normal((n_samples, dim)) * np.sqrt(s + t)[:, np.newaxis]
    p = u * v / (u + v)
    q = s * t / (s + t)
    gap = (u / (u + v))[:, np.newaxis] * x - (s / (s + t))[:, np.newaxis] * y
    dist = np.linalg.norm(gap, axis=1)
    # integral / (phi_{u+v}(x) phi_{s+t}(y)) times the inverse of the bracket factors
    ratios = _mixture.phi(p + q, dist, dim) * (p * q) ** (0.25 * dim)
    return float(np.max(ratios)), (4.0 * math.pi) ** (-0.5 * dim)


class BFamily:
    """Interaction family ``B_n``: masses, second-moment coefficients and transforms."""

    def __init__(self, dim, majorant=None, name='custom'):
        self._dim = _Validators.check_int('BFamily.dim', dim, minimum=1)
        if majorant is not None and not isinstance(majorant, MajorantFamily):
            raise ValueError('BFamily.majorant must be a MajorantFamily.')
        if majorant is not None and majorant.dim != self._dim:
            raise ValueError('BFamily.majorant dimension does not match.')
        self._majorant = majorant
        self._name = name

    @property
    def dim(self):
        return self._dim

    @property
    def majorant(self):
        return self._majorant

    @property
    def name(self):
        return self._name

    @property
    def has_mixtures(self):
        return False

    def b(self, n_max):
        raise NotImplementedError

    def b_bar(self, n_max):
        raise NotImplementedError

    def hat(self, m, k):
        raise NotImplementedError

    def min_variance(self, n_max):
        """Smallest Gaussian variance among ``B_1 .. B_{n_max}``; ``None`` when unknown."""
        _Validators.check_int('n_max', n_max, minimum=0)
        return None

    def mixture(self, m):
        raise exceptions.FailedPreconditionError(
            'Family {0!r} has no real-space mixtures.'.format(self._name))

    def require_majorant(self):
        if self._majorant is None:
            raise exceptions.FailedPreconditionError(
                'Family {0!r} does not declare a majorant.'.format(self._name))
        return self._majorant

    def to_dict(self):
        result = {'name': self._name, 'dim': self._dim}
        if self._majorant is not None:
            result['majorant'] = self._majorant.to_dict()
        return result


class MixtureBFamily(BFamily):
    """A family whose members are signed Gaussian mixtures produced by ``generator(m)``."""

    def __init__(self, generator, dim, majorant=None, name='custom', params=None):
        super().__init__(dim, majorant, name)
        self._generator = generator
        self._cache = {}
        self._params = dict(params or {})

    @property
    def has_mixtures(self):
        return True

    def mixture(self, m):
        mix = self._cache.get(m)
        if mix is None:
            mix = self._generator(m)
            if mix.dim != self._dim:
                raise ValueError('Generated mixture has the wrong dimension.')
            self._cache[m] = mix
        return mix

    def b(self, n_max):
        return np.array([self.mixture(m).mass() for m in range(1, n_max + 1)])

    def b_bar(self, n_max):
        return np.array([self.mixture(m).second_moment_coefficient()
                         for m in range(1, n_max + 1)])

    def hat(self, m, k):
        return self.mixture(m).hat(k)

    def min_variance(self, n_max):
        n_max = _Validators.check_int('n_max', n_max, minimum=0)
        values = [self.mixture(m).min_variance() for m in range(1, n_max + 1)]
        values = [value for value in values if value is not None]
        return min(values) if values else None

    def dominated(self, n_max, radii):
        """Max of ``|B_m(r)| / Gamma_m(r)`` over ``m <= n_max`` and ``radii``."""
        majorant = self.require_majorant()
        worst = 0.0
        for m in range(1, n_max + 1):
            values = np.abs(self.mixture(m).density(radii))
            bound = majorant.density(m, radii)
            with np.errstate(divide='ignore', invalid='ignore'):
                ratios = np.where(bound > 0, values / bound, np.where(values > 0, np.inf, 0.0))
            worst = max(worst, float(np.max(ratios)))
        return worst

    def to_dict(self):
        result = super().to_dict()
        result.update(self._params)
        return result


class SpectralBFamily(BFamily):
    """A family known only through its transforms on a fixed frequency grid.

    Members beyond the tabulated range are zero.
    """

    def __init__(self, k_nodes, hats, b, b_bar, dim, majorant=None, name='spectral'):
        super().__init__(dim, majorant, name)
        self._k_nodes = np.array(k_nodes, dtype=float)
        self._hats = np.array(hats, dtype=float, ndmin=2)
        self._b = np.array(b, dtype=float)
        self._b_bar = np.array(b_bar, dtype=float)
        if self._hats.shape != (self._b.size, self._k_nodes.size):
            raise ValueError('SpectralBFamily.hats must have one row per member and one column '
                             'per node.')
        if self._b_bar.shape != self._b.shape:
            raise ValueError('SpectralBFamily.b and b_bar must have equal length.')

    @property
    def size(self):
        return self._b.size

    def _padded(self, values, n_max):
        out = np.zeros(n_max)
        count = min(n_max, values.size)
        out[:count] = values[:count]
        return out

    def b(self, n_max):
        return self._padded(self._b, n_max)

    def b_bar(self, n_max):
        return self._padded(self._b_bar, n_max)

    def hat(self, m, k):
        if not np.array_equal(np.asarray(k, dtype=float), self._k_nodes):
            raise exceptions.InvalidArgumentError(
                'SpectralBFamily transforms are only available on their own grid.')
        if m > self.size:
            return np.zeros_like(self._k_nodes)
        return self._hats[m - 1].copy()


def power_law_family(a=2.5, dim=5):
    """Preset ``B_n = -n^{-a} phi_{n/2}`` with majorant ``PowerLaw(a)``."""
    majorant = PowerLaw(a, dim)
    return MixtureBFamily(lambda m: -majorant.term(m), dim, majorant, 'power-law',
                          params={'a': majorant.a})


def saw_majorant_family(K=1.0, dim=5): # pylint: disable=invalid-name
    """Preset ``B_n = -Gamma_n`` with ``Gamma`` the weakly self-avoiding walk majorant."""
    majorant = SawMajorant(dim, K)
    return MixtureBFamily(lambda m: -majorant.term(m), dim, majorant, 'saw-majorant',
                          params={'K': majorant.K})


def single_mode_family(beta, s, dim=5, majorant=None):
    """Preset ``B_1 = beta phi_s`` and ``B_m = 0`` for ``m >= 2``."""
    beta = _Validators.check_number('beta', beta)
    s = _Validators.check_positive_number('s', s)

    def generator(m):
        if m == 1:
            return GaussianMixture.phi(s, dim, weight=beta)
        return GaussianMixture.zero(dim)

    return MixtureBFamily(generator, dim, majorant, 'single-mode', params={'beta': beta, 's': s})


def zero_family(dim=5, majorant=None):
    """Preset ``B_n = 0`` for every ``n``."""
    return MixtureBFamily(lambda m: GaussianMixture.zero(dim), dim, majorant, 'zero')


PRESETS = ('power-law', 'saw-majorant', 'single-mode', 'zero')


@_utils.validated('family_from_preset')
def family_from_preset(name, dim, a=2.5, K=1.0, beta=-0.5, s=0.5): # pylint: disable=invalid-name
    """Builds one of the named interaction presets."""
    if name == 'power-law':
        return power_law_family(a, dim)
    if name == 'saw-majorant':
        return saw_majorant_family(K, dim)
    if name == 'single-mode':
        return single_mode_family(beta, s, dim)
    if name == 'zero':
        return zero_family(dim)
    raise ValueError('Unknown family preset {0!r}; expected one of {1}.'.format(
        name, ', '.join(PRESETS)))
