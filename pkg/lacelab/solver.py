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

"""Frequency-space solver for the convolution equation and its error analysis.

The solver runs ``C_n = C_{n-1} * phi + lam sum_{m=1}^{n} c_m B_m * C_{n-m}`` on a radial
frequency grid, where every convolution is a pointwise product. The masses ``c_m`` are taken
from ``sequence_core``, which makes each step explicit. Real-space profiles are produced only for
reporting, through the inverse radial transform, and are compared against the Gaussian limit
``phi_{n delta}`` and the bound envelope ``lam f_n``.
"""

import dataclasses
import logging
import math

import numpy as np
from scipy import integrate

from lacelab import _encoder
from lacelab import _mixture
from lacelab import _utils
from lacelab import exceptions
from lacelab import gamma_family
from lacelab import sequence_core
from lacelab import spectral


_logger = logging.getLogger(__name__)
_Validators = _encoder._Validators

DEFAULT_EPSILON = 0.01
MAX_EPSILON = 0.01
RESTRICTION_THRESHOLD = 0.8
RADIUS_POINTS = 64
RADIUS_SPAN = 8.0
BOUND_FLOOR = 1e-10
L1_POINTS = 1024
L1_SPAN = 10.0


@dataclasses.dataclass(frozen=True, eq=False)
class SolverConfig:
    """Parameters of one solver run.

    Attributes:
        dim: Odd dimension in {3, 5, 7, 9}.
        lam: Coupling constant in ``[0, 1)``.
        n_max: Number of recursion steps.
        family: The interaction family (a ``gamma_family.BFamily``).
        epsilon: Envelope widening ``epsilon`` in ``(0, 0.01]``.
        grid: Frequency grid (optional; defaults to the uniform grid on which the smallest
            variance of ``B_1 .. B_{n_max}`` has decayed, see ``spectral.decay_k_max``).
        radii: Real-space radii for reports (optional; defaults to 64 geometric points on
            ``[1e-2, 8 sqrt(n_max delta (1 + epsilon))]``).
        check_decay: Whether to require every ``C_n`` transform to decay on the grid.
        saw_type: Whether the run models the weakly self-avoiding walk, which adds the
            ``delta (1 + epsilon) >= 4/5`` post-solve check.
    """

    dim: int
    lam: float
    n_max: int
    family: gamma_family.BFamily
    epsilon: float = DEFAULT_EPSILON
    grid: spectral.RadialGrid = None
    radii: np.ndarray = None
    check_decay: bool = True
    saw_type: bool = False

    def __post_init__(self):
        try:
            dim = spectral.check_dim(self.dim)
            lam = _Validators.check_number_range('lam', self.lam, 0.0, 1.0, high_open=True)
            n_max = _Validators.check_int('n_max', self.n_max, minimum=1)
            epsilon = _Validators.check_number_range(
                'epsilon', self.epsilon, 0.0, MAX_EPSILON, low_open=True)
            if not isinstance(self.family, gamma_family.BFamily):
                raise ValueError('family must be a BFamily.')
            if self.family.dim != dim:
                raise ValueError('family dimension {0} does not match dim={1}.'.format(
                    self.family.dim, dim))
            grid = self.grid
            if grid is None:
                grid = spectral.RadialGrid.for_variance(self.family.min_variance(n_max))
            if not isinstance(grid, spectral.RadialGrid):
                raise ValueError('grid must be a RadialGrid.')
            radii = self.radii
            if radii is not None:
                radii = _Validators.check_number_list('radii', radii)
                if np.any(radii < 0):
                    raise ValueError('radii must be non-negative.')
        except ValueError as error:
            raise _utils.handle_value_error(error, 'SolverConfig')
        object.__setattr__(self, 'dim', dim)
        object.__setattr__(self, 'lam', lam)
        object.__setattr__(self, 'n_max', n_max)
        object.__setattr__(self, 'epsilon', epsilon)
        object.__setattr__(self, 'grid', grid)
        object.__setattr__(self, 'radii', radii)

    def to_dict(self):
        return {
            'dim': self.dim,
            'lam': self.lam,
            'n_max': self.n_max,
            'epsilon': self.epsilon,
            'family': self.family.to_dict(),
            'k_max': self.grid.k_max,
            'k_nodes': len(self.grid),
            'check_decay': self.check_decay,
            'saw_type': self.saw_type,
        }


class SolverRun:
    """A completed solver run: the transforms ``C_n``, the scalar solution and report radii."""

    def __init__(self, config, sequence, c_hat_values, radii, restriction_ok=True):
        c_hat_values.flags.writeable = False
        self._config = config
        self._sequence = sequence
        self._c_hat = c_hat_values
        self._radii = radii
        self._restriction_ok = restriction_ok
        self._profiles = {}

    @property
    def config(self):
        return self._config

    @property
    def sequence(self):
        return self._sequence

    @property
    def radii(self):
        return self._radii

    @property
    def restriction_ok(self):
        return self._restriction_ok

    @property
    def c_hat_values(self):
        """All transforms as an ``(n_max + 1, nodes)`` array."""
        return self._c_hat

    def c_hat(self, n):
        """Returns ``C_n`` as a ``RadialFn``."""
        return spectral.RadialFn(self._config.grid, self._c_hat[self.check_index(n, 0)])

    def profile(self, n):
        """Real-space ``C_n`` on the report radii (computed on first use)."""
        n = self.check_index(n, 0)
        values = self._profiles.get(n)
        if values is None:
            values = spectral.inverse_radial_transform(
                self.c_hat(n), self._radii, self._config.dim,
                check_decay=self._config.check_decay)
            values.flags.writeable = False
            self._profiles[n] = values
        return values

    def check_index(self, n, minimum=1):
        try:
            return _Validators.check_int('n', n, minimum=minimum, maximum=self._config.n_max)
        except ValueError as error:
            raise _utils.handle_value_error(error, 'SolverRun')


def default_radii(n_max, delta, epsilon):
    upper = RADIUS_SPAN * math.sqrt(n_max * delta * (1.0 + epsilon))
    return np.geomspace(gamma_family.RADIUS_MIN, upper, RADIUS_POINTS)


def _family_hats(family, n_max, k):
    return np.array([family.hat(m, k) for m in range(1, n_max + 1)])


def run_recursion(cfg):
    """Runs the frequency-space recursion up to ``cfg.n_max``.

    ``C_0 = 1`` and ``C_n(k) = C_{n-1}(k) exp(-k^2 / 2) + lam sum_{m=1}^{n} c_m B_m(k)
    C_{n-m}(k)`` at every grid node.

    Args:
        cfg: A ``SolverConfig``.

    Returns:
        SolverRun: The completed run.

    Raises:
        InvalidArgumentError: If the scalar data of the family is not solvable at ``cfg.lam``.
        NonConvergenceError: If the normalization does not converge.
        FailedPreconditionError: If ``delta`` is degenerate.
        TruncationError: If ``cfg.check_decay`` is set and a transform has not decayed at the
            end of the grid.
    """
    scalars = sequence_core.BScalars.from_family(cfg.family, cfg.lam, cfg.n_max)
    sequence = sequence_core.solve(scalars)
    k = cfg.grid.k_nodes
    weighted = cfg.lam * sequence.c[1:, np.newaxis] * _family_hats(cfg.family, cfg.n_max, k)
    step = np.exp(-0.5 * k * k)
    c_hat = np.empty((cfg.n_max + 1, k.size))
    c_hat[0] = 1.0
    for n in range(1, cfg.n_max + 1):
        c_hat[n] = c_hat[n - 1] * step + np.sum(weighted[:n] * c_hat[n - 1::-1], axis=0)

    if cfg.check_decay:
        for n in range(1, cfg.n_max + 1):
            ratio = spectral.RadialFn(cfg.grid, c_hat[n]).tail_ratio()
            if ratio > spectral.DECAY_TOLERANCE:
                raise exceptions.TruncationError(
                    'C_{0} has not decayed at k_max={1}: tail ratio {2:.3e}.'.format(
                        n, cfg.grid.k_max, ratio))

    restriction_ok = True
    if cfg.saw_type:
        restriction_ok = sequence.delta * (1.0 + cfg.epsilon) >= RESTRICTION_THRESHOLD
        if not restriction_ok:
            _logger.warning('delta (1 + epsilon) = %.6g is below %.2f.',
                            sequence.delta * (1.0 + cfg.epsilon), RESTRICTION_THRESHOLD)

    radii = cfg.radii
    if radii is None:
        radii = default_radii(cfg.n_max, sequence.delta, cfg.epsilon)
    _logger.info('Recursion complete: n_max=%d, %d nodes, family=%s.',
                 cfg.n_max, k.size, cfg.family.name)
    return SolverRun(cfg, sequence, c_hat, radii, restriction_ok)


def spectral_residual(run):
    """Largest relative residual of the frequency-space recursion over all ``n`` and nodes."""
    cfg = run.config
    k = cfg.grid.k_nodes
    c_hat = run.c_hat_values
    weighted = cfg.lam * run.sequence.c[1:, np.newaxis] * _family_hats(cfg.family, cfg.n_max, k)
    step = np.exp(-0.5 * k * k)
    worst = 0.0
    for n in range(1, cfg.n_max + 1):
        rhs = c_hat[n - 1] * step + np.sum(weighted[:n] * c_hat[n - 1::-1], axis=0)
        scale = np.maximum(1.0, np.abs(c_hat[n]))
        worst = max(worst, float(np.max(np.abs(c_hat[n] - rhs) / scale)))
    return worst


def _gauss_ref(run, n, radii):
    return _mixture.phi(n * run.sequence.delta, radii, run.config.dim)


def normalized_profile(run, n):
    """Real-space ``C_n / c_n`` on the report radii."""
    return run.profile(n) / run.sequence.c[n]


def clt_error_profile(run, n):
    """Returns ``|C_n(x) / c_n - phi_{n delta}(x)|`` on the report radii.

    The difference is formed in frequency space and inverted once, so the Gaussian part cancels
    exactly instead of through two separate quadratures.
    """
    n = run.check_index(n)
    cfg = run.config
    k = cfg.grid.k_nodes
    diff = run.c_hat_values[n] / run.sequence.c[n] - np.exp(-0.5 * n * run.sequence.delta * k * k)
    values = spectral.inverse_radial_transform(
        spectral.RadialFn(cfg.grid, diff), run.radii, cfg.dim, check_decay=False)
    return np.abs(values)


def bound_mixture(run, n):
    """The bound envelope ``lam f_n`` as a mixture, without the constant ``L``.

    Raises:
        FailedPreconditionError: If the family declares no majorant.
    """
    n = run.check_index(n)
    majorant = run.config.family.require_majorant()
    f_n = gamma_family.f_profile(majorant, run.sequence.delta, run.config.epsilon, n)
    return f_n.scaled(run.config.lam)


def bound_profile(run, n):
    return bound_mixture(run, n).density(run.radii)


def _masked_sup(error, bound):
    if not np.any(bound > 0):
        return 0.0
    mask = bound >= BOUND_FLOOR * np.max(bound)
    return float(np.max(error[mask] / bound[mask]))


def ratio_report(run, n_list):
    """Returns ``{n: sup_r error(r) / bound(r)}`` for every ``n`` in ``n_list``.

    Radii where the bound is below ``1e-10`` of its maximum are ignored.
    """
    report = {}
    for n in n_list:
        if run.config.lam == 0.0:
            report[n] = 0.0
            continue
        report[n] = _masked_sup(clt_error_profile(run, n), bound_profile(run, n))
    _logger.debug('Ratio report: %s', report)
    return report


def _delta_mixture(run, k, j):
    seq = run.sequence
    cfg = run.config
    delta = seq.delta
    head = _mixture.GaussianMixture(
        [seq.a[j], -seq.a[j - 1] / seq.mu], [k * delta, (k - 1) * delta + 1.0], cfg.dim)
    parts = [head]
    for m in range(1, j + 1):
        weight = -cfg.lam * seq.a[m] * seq.a[j - m]
        parts.append(cfg.family.mixture(m).shifted((k - m) * delta).scaled(weight))
    return _mixture.mixture_sum(parts, cfg.dim)


def delta_mixture(run, k, j):
    """``Delta(k, j) = a_j phi_{k delta} - mu^{-1} a_{j-1} phi_{(k-1) delta + 1}
    - lam sum_{m=1}^{j} a_m a_{j-m} B_m * phi_{(k-m) delta}`` as a signed mixture.

    Raises:
        FailedPreconditionError: If the family has no real-space mixtures.
    """
    k = run.check_index(k)
    if not 1 <= j <= k:
        raise exceptions.InvalidArgumentError(
            'delta_mixture: j must lie in [1, {0}]; got {1}.'.format(k, j))
    return _delta_mixture(run, k, j)


def delta_kj_check(run, n):
    """Empirical constant of ``sum_{j<=n} |Delta(n, j)| <= L lam f_n`` on the report radii."""
    n = run.check_index(n)
    if run.config.lam == 0.0:
        return 0.0
    total = np.zeros_like(run.radii)
    for j in range(1, n + 1):
        total += np.abs(_delta_mixture(run, n, j).density(run.radii))
    return _masked_sup(total, bound_profile(run, n))


def delta_jj_check(run, j):
    """Empirical constant of ``|Delta(j, j)| <= L lam kappa_0(j)``, where ``kappa_0`` includes
    the ``s = 0`` term."""
    j = run.check_index(j)
    if run.config.lam == 0.0:
        return 0.0
    majorant = run.config.family.require_majorant()
    envelope = gamma_family.kappa_profile(
        majorant, run.sequence.delta, run.config.epsilon, j, include_zero=True)
    values = np.abs(_delta_mixture(run, j, j).density(run.radii))
    return _masked_sup(values, run.config.lam * envelope.density(run.radii))


def l1_error(run, n, points=L1_POINTS):
    """``int |C_n(x) / c_n - phi_{n delta}(x)| dx`` by radial quadrature with the surface
    measure ``S_{d-1} r^{d-1} dr`` on a uniform radius grid."""
    n = run.check_index(n)
    cfg = run.config
    upper = L1_SPAN * math.sqrt(n * run.sequence.delta * (1.0 + cfg.epsilon))
    radii = np.linspace(0.0, upper, points)
    k = cfg.grid.k_nodes
    diff = run.c_hat_values[n] / run.sequence.c[n] - np.exp(-0.5 * n * run.sequence.delta * k * k)
    values = np.abs(spectral.inverse_radial_transform(
        spectral.RadialFn(cfg.grid, diff), radii, cfg.dim, check_decay=False))
    integrand = spectral.sphere_area(cfg.dim) * radii ** (cfg.dim - 1) * values
    return float(integrate.trapezoid(integrand, radii))


PROFILE_COLUMNS = ('n', 'radius', 'c_density', 'gauss_ref', 'error', 'bound', 'ratio')


def profile_rows(run, n):
    """Rows ``(n, radius, c_density, gauss_ref, error, bound, ratio)`` for one ``n``.

    ``bound`` and ``ratio`` are NaN when the family declares no majorant.
    """
    n = run.check_index(n)
    density = normalized_profile(run, n)
    gauss = _gauss_ref(run, n, run.radii)
    error = clt_error_profile(run, n)
    if run.config.family.majorant is None:
        bound = np.full_like(error, np.nan)
        ratio = np.full_like(error, np.nan)
    else:
        bound = bound_profile(run, n)
        with np.errstate(divide='ignore', invalid='ignore'):
            ratio = np.where(bound > 0, error / np.where(bound > 0, bound, 1.0), 0.0)
    return [(n, float(r), float(c), float(g), float(e), float(b), float(q))
            for r, c, g, e, b, q in zip(run.radii, density, gauss, error, bound, ratio)]


def summary(run, n_list):
    """JSON-ready summary of a run: scalars, configuration and ratios for ``n_list``."""
    result = {
        'config': run.config.to_dict(),
        'sequence': run.sequence.to_dict(),
        'restriction_ok': run.restriction_ok,
        'spectral_residual': spectral_residual(run),
    }
    if run.config.family.majorant is not None:
        result['ratios'] = {str(n): value for n, value in ratio_report(run, n_list).items()}
    return result
