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

"""Scalar recursion for the total masses ``c_n`` and its self-consistent normalization.

The masses of the convolution equation satisfy ``c_n = c_{n-1} + lam sum_{k=1}^{n} c_k b_k
c_{n-k}`` with ``c_0 = 1``. The only implicit term is ``k = n``, so every step is solved exactly
by moving it to the left side. The normalization then finds the growth rate ``mu`` with
``mu^{-1} = 1 - lam sum_k a_k b_k`` where ``a_n = mu^{-n} c_n``, and the diffusion constant
``delta``. All infinite series are truncated at ``n_max`` and the truncation is reported.
"""

import dataclasses
import logging
import math

import numpy as np

from lacelab import _encoder
from lacelab import _series
from lacelab import _utils
from lacelab import exceptions


_logger = logging.getLogger(__name__)
_Validators = _encoder._Validators

MU_TOLERANCE = 1e-14
MAX_ITERATIONS = 1000
DEGENERATE_DENOMINATOR = 1e-9
SMALLNESS_WINDOW = (0.5, 1.5)


@dataclasses.dataclass(frozen=True, eq=False)
class BScalars:
    """Coupling and the scalar data ``b_n``, ``b_bar_n`` of an interaction family.

    Attributes:
        lam: Coupling constant in ``[0, 1)``.
        b: Masses ``b_1 .. b_{n_max}``.
        b_bar: Second-moment coefficients ``b_bar_1 .. b_bar_{n_max}``, defined by
            ``int x^T x B_n(x) dx = b_bar_n I_d``.

    Raises:
        InvalidArgumentError: If the coupling is out of range, the sequences differ in length or
            ``lam |b_n| >= 1`` for some ``n``.
    """

    lam: float
    b: np.ndarray
    b_bar: np.ndarray

    def __post_init__(self):
        try:
            lam = _Validators.check_number_range(
                'BScalars.lam', self.lam, 0.0, 1.0, high_open=True)
            b = _Validators.check_number_list('BScalars.b', self.b).copy()
            b_bar = _Validators.check_number_list('BScalars.b_bar', self.b_bar, b.size).copy()
            if not b.size:
                raise ValueError('BScalars.b must not be empty.')
            _check_solvable(lam, b)
        except ValueError as error:
            raise _utils.handle_value_error(error, 'BScalars')
        b.flags.writeable = False
        b_bar.flags.writeable = False
        object.__setattr__(self, 'lam', lam)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'b_bar', b_bar)

    @classmethod
    def from_family(cls, family, lam, n_max):
        """Collects ``b`` and ``b_bar`` of an interaction family up to ``n_max``."""
        return cls(lam, family.b(n_max), family.b_bar(n_max))

    @property
    def n_max(self):
        return self.b.size

    def truncated(self, m):
        """Returns the family with ``b_k`` and ``b_bar_k`` set to zero for ``k >= m``."""
        m = _Validators.check_int('m', m, minimum=1)
        b = self.b.copy()
        b_bar = self.b_bar.copy()
        b[m - 1:] = 0.0
        b_bar[m - 1:] = 0.0
        return BScalars(self.lam, b, b_bar)


def _check_solvable(lam, b):
    products = lam * np.abs(b)
    if np.any(products >= 1.0):
        worst = int(np.argmax(products)) + 1
        raise ValueError('lam * |b_n| must be below 1; got {0!r} at n={1}.'.format(
            float(products[worst - 1]), worst))


@dataclasses.dataclass(frozen=True, eq=False)
class SequenceSolution:
    """Normalized solution of the scalar recursion.

    Attributes:
        c: Masses ``c_0 .. c_{n_max}`` with ``c_0 = 1``.
        a: Normalized masses ``a_n = mu^{-n} c_n``.
        mu: Growth rate.
        alpha: ``a_{n_max}``, the truncated limit of ``a_n``.
        residual_mu: Defect of the normalization equation plus its tail estimate.
        tail_mu: Tail estimate of the truncated series ``sum_k a_k b_k``.
        iterations: Number of ``mu`` iterations performed.
        smallness_ok: Whether the iteration contracted and every ``a_n`` lies in ``[1/2, 3/2]``.
        delta: Diffusion constant (``None`` until computed).
        delta_tail: Magnitude of the last retained terms of the ``delta`` series.
    """

    c: np.ndarray
    a: np.ndarray
    mu: float
    alpha: float
    residual_mu: float
    tail_mu: float
    iterations: int
    smallness_ok: bool
    delta: float = None
    delta_tail: float = None

    @property
    def n_max(self):
        return self.c.size - 1

    def to_dict(self):
        return {
            'mu': self.mu,
            'alpha': self.alpha,
            'delta': self.delta,
            'residual_mu': self.residual_mu,
            'tail_mu': self.tail_mu,
            'delta_tail': self.delta_tail,
            'iterations': self.iterations,
            'smallness_ok': self.smallness_ok,
            'n_max': self.n_max,
        }


def solve_c(scalars):
    """Solves ``c_n (1 - lam b_n) = c_{n-1} + lam sum_{k=1}^{n-1} c_k b_k c_{n-k}``.

    Args:
        scalars: A ``BScalars`` instance.

    Returns:
        numpy.ndarray: ``c_0 .. c_{n_max}``.

    Raises:
        InvalidArgumentError: If ``lam |b_n| >= 1`` for some ``n``.
    """
    if not isinstance(scalars, BScalars):
        raise exceptions.InvalidArgumentError('solve_c expects a BScalars instance.')
    try:
        _check_solvable(scalars.lam, scalars.b)
    except ValueError as error:
        raise _utils.handle_value_error(error, 'solve_c')
    lam = scalars.lam
    b = scalars.b
    c = np.empty(scalars.n_max + 1)
    c[0] = 1.0
    for n in range(1, c.size):
        inner = np.dot(c[1:n] * b[:n - 1], c[n - 1:0:-1])
        c[n] = (c[n - 1] + lam * inner) / (1.0 - lam * b[n - 1])
    return c


def recursion_residual(c, scalars):
    """Relative residual of the original (implicit) recursion at every ``n >= 1``."""
    c = np.asarray(c, dtype=float)
    b = scalars.b
    residuals = np.empty(c.size - 1)
    for n in range(1, c.size):
        rhs = c[n - 1] + scalars.lam * np.dot(c[1:n + 1] * b[:n], c[n - 1::-1])
        residuals[n - 1] = abs(c[n] - rhs) / max(1.0, abs(c[n]))
    return residuals


def _normalized(c, mu):
    n = np.arange(c.size, dtype=float)
    return c * np.exp(-n * math.log(mu))


def normalize(c, scalars, tol=MU_TOLERANCE, max_iter=MAX_ITERATIONS):
    """Finds ``mu`` with ``mu^{-1} = 1 - lam sum_k a_k b_k`` by self-consistent iteration.

    Starting from ``mu = 1``, each step sets ``a_n = mu^{-n} c_n`` and recomputes ``mu`` from the
    normalization equation, until two iterates differ by less than ``tol``.

    Args:
        c: Masses returned by ``solve_c``.
        scalars: The ``BScalars`` used to produce ``c``.
        tol: Convergence tolerance on ``mu`` (optional).
        max_iter: Iteration cap (optional).

    Returns:
        SequenceSolution: The solution, without ``delta``.

    Raises:
        NonConvergenceError: If ``mu^{-1}`` leaves the positive axis or the cap is reached.
    """
    c = np.array(c, dtype=float)
    if c.size != scalars.n_max + 1:
        raise exceptions.InvalidArgumentError(
            'normalize: expected {0} masses; got {1}.'.format(scalars.n_max + 1, c.size))
    lam = scalars.lam
    b = scalars.b
    mu = 1.0
    converged = False
    iterations = 0
    while iterations < max_iter:
        iterations += 1
        a = _normalized(c, mu)
        inv = 1.0 - lam * np.dot(a[1:], b)
        if not inv > 0.0:
            raise exceptions.NonConvergenceError(
                'mu iteration left the positive axis (mu^-1 = {0!r}) at lam={1!r}.'.format(
                    inv, lam))
        update = 1.0 / inv
        if not math.isfinite(update):
            break
        step = abs(update - mu)
        mu = update
        if step < tol:
            converged = True
            break
    if not converged:
        raise exceptions.NonConvergenceError(
            'mu iteration did not contract within {0} steps at lam={1!r}.'.format(
                max_iter, lam))

    a = _normalized(c, mu)
    defect = abs(1.0 / mu - 1.0 + lam * np.dot(a[1:], b))
    tail_mu = lam * abs(a[-1]) * _series.tail_estimate(b)
    low, high = SMALLNESS_WINDOW
    smallness_ok = bool(np.all((a >= low) & (a <= high)))
    if not smallness_ok:
        _logger.warning('a_n leaves [%.1f, %.1f] at lam=%r; lam may exceed the small-coupling '
                        'regime.', low, high, lam)
    _logger.debug('mu=%.17g after %d iterations (defect %.3e, tail %.3e).',
                  mu, iterations, defect, tail_mu)
    c.flags.writeable = False
    a.flags.writeable = False
    return SequenceSolution(
        c=c, a=a, mu=mu, alpha=float(a[-1]), residual_mu=float(defect + tail_mu),
        tail_mu=float(tail_mu), iterations=iterations, smallness_ok=smallness_ok)


def compute_delta(sol, scalars):
    """Computes ``delta = (mu^{-1} + lam sum a_m b_bar_m) / (mu^{-1} + lam sum m a_m b_m)``.

    Returns:
        tuple: ``(delta, tail)`` where ``tail`` is the magnitude of the last retained terms.

    Raises:
        FailedPreconditionError: If the denominator is below ``1e-9`` in magnitude or ``delta``
            is not positive.
    """
    lam = scalars.lam
    a = sol.a[1:]
    m = np.arange(1, a.size + 1, dtype=float)
    inv_mu = 1.0 / sol.mu
    numerator = inv_mu + lam * np.dot(a, scalars.b_bar)
    denominator = inv_mu + lam * np.dot(m * a, scalars.b)
    if abs(denominator) < DEGENERATE_DENOMINATOR:
        raise exceptions.FailedPreconditionError(
            'Degenerate delta denominator {0!r} at lam={1!r}.'.format(denominator, lam))
    delta = numerator / denominator
    if not delta > 0.0:
        raise exceptions.FailedPreconditionError(
            'Non-positive diffusion constant delta={0!r} at lam={1!r}.'.format(delta, lam))
    tail = lam * max(abs(a[-1] * scalars.b_bar[-1]), abs(m[-1] * a[-1] * scalars.b[-1]))
    return float(delta), float(tail)


def solve(scalars):
    """Runs ``solve_c``, ``normalize`` and ``compute_delta`` and returns the full solution."""
    c = solve_c(scalars)
    sol = normalize(c, scalars)
    delta, tail = compute_delta(sol, scalars)
    _logger.info('Solved n_max=%d at lam=%r: mu=%.12g delta=%.12g alpha=%.12g.',
                 scalars.n_max, scalars.lam, sol.mu, delta, sol.alpha)
    return dataclasses.replace(sol, delta=delta, delta_tail=tail)


def a_equation_residual(sol, scalars):
    """Residual of the normalized recursion at every ``1 <= n <= n_max``.

    Substituting the normalization equation into the recursion gives
    ``a_n = a_{n-1} - lam a_{n-1} sum_{k=n+1}^{N} a_k b_k + lam sum_{k<=n} a_k b_k (a_{n-k} -
    a_{n-1})``.
    """
    lam = scalars.lam
    a = sol.a
    weighted = a[1:] * scalars.b
    suffix = _series.suffix_sums(weighted)
    residuals = np.empty(a.size - 1)
    for n in range(1, a.size):
        later = suffix[n] if n < weighted.size else 0.0
        rhs = (a[n - 1] - lam * a[n - 1] * later
               + lam * np.dot(weighted[:n], a[n - 1::-1] - a[n - 1]))
        residuals[n - 1] = abs(a[n] - rhs) / max(1.0, abs(a[n]))
    return residuals


def _fit(numerators, denominators):
    mask = denominators > 0
    if not np.any(mask):
        return 0.0
    return float(np.max(numerators[mask] / denominators[mask]))


def sequ3_constant(sol, scalars, gamma):
    """Smallest ``C`` with ``|a_{n+1} - a_n| <= C lam sum_{j>=n} gamma_j`` for ``n < n_max``.

    Args:
        sol: A ``SequenceSolution``.
        scalars: The matching ``BScalars``.
        gamma: Majorant masses ``gamma_1 .. gamma_{n_max}``.
    """
    if scalars.lam == 0.0:
        return 0.0
    gamma = np.asarray(gamma, dtype=float)[:sol.n_max]
    gamma_bar = _series.suffix_sums(gamma, _series.tail_estimate(gamma))
    steps = np.abs(np.diff(sol.a[1:]))
    return _fit(steps, scalars.lam * gamma_bar[:-1])


def alpha_constant(sol, scalars, gamma):
    """Smallest ``C`` with ``|a_n - alpha| <= C lam sum_{k>=n} k gamma_k`` for ``n <= n_max``."""
    if scalars.lam == 0.0:
        return 0.0
    gamma = np.asarray(gamma, dtype=float)[:sol.n_max]
    k = np.arange(1, gamma.size + 1, dtype=float)
    weighted = k * gamma
    tails = _series.suffix_sums(weighted, _series.tail_estimate(weighted))
    return _fit(np.abs(sol.a[1:] - sol.alpha), scalars.lam * tails)


def ratio_limit_mu(c):
    """Estimates ``lim c_{n+1} / c_n`` by the last available ratio."""
    c = np.asarray(c, dtype=float)
    if c.size < 2:
        raise exceptions.InvalidArgumentError('ratio_limit_mu needs at least two masses.')
    return float(c[-1] / c[-2])
