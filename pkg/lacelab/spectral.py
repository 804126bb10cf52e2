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

"""Radial Fourier analysis on R^d for odd dimensions.

This module provides the frequency-space representation used by the solver: radial grids with
trapezoid weights, closed-form transforms of Gaussian mixtures, half-integer order Bessel
functions, the inverse radial (Hankel-type) transform and the rotational average kernel
``Omega_d``.
"""

import logging
import math

import numpy as np
from scipy import special

from lacelab import _encoder
from lacelab import _utils
from lacelab import exceptions


_logger = logging.getLogger(__name__)
_Validators = _encoder._Validators

DEFAULT_K_MAX = 12.0
DEFAULT_NODES = 2048
DECAY_TOLERANCE = 1e-14
DECAY_TARGET = 1e-15
SERIES_CUTOFF = 1.0
SERIES_TERMS = 14
BESSEL_ORDERS = (0.5, 1.5, 2.5, 3.5)


class RadialGrid:
    """Increasing frequency nodes on ``[0, k_max]`` with quadrature weights for ``dk``."""

    def __init__(self, k_nodes, weights):
        k_nodes = _Validators.check_number_list('RadialGrid.k_nodes', k_nodes)
        weights = _Validators.check_number_list('RadialGrid.weights', weights, k_nodes.size)
        if k_nodes.size < 2 or k_nodes[0] != 0.0:
            raise ValueError('RadialGrid.k_nodes must start at 0 and contain at least 2 nodes.')
        if np.any(np.diff(k_nodes) <= 0):
            raise ValueError('RadialGrid.k_nodes must be strictly increasing.')
        if np.any(weights <= 0):
            raise ValueError('RadialGrid.weights must be positive.')
        k_nodes.flags.writeable = False
        weights.flags.writeable = False
        self._k_nodes = k_nodes
        self._weights = weights

    @classmethod
    def uniform(cls, k_max=DEFAULT_K_MAX, n_nodes=DEFAULT_NODES):
        """Uniform nodes with composite trapezoid weights."""
        k_max = _Validators.check_positive_number('k_max', k_max)
        n_nodes = _Validators.check_int('n_nodes', n_nodes, minimum=2)
        nodes = np.linspace(0.0, k_max, n_nodes)
        step = k_max / (n_nodes - 1)
        weights = np.full(n_nodes, step)
        weights[0] = weights[-1] = 0.5 * step
        return cls(nodes, weights)

    @classmethod
    def for_variance(cls, min_variance, n_nodes=DEFAULT_NODES):
        """Uniform grid on which Gaussians of variance ``min_variance`` or more have decayed.

        See ``decay_k_max``.
        """
        return cls.uniform(decay_k_max(min_variance), n_nodes)

    @property
    def k_nodes(self):
        return self._k_nodes

    @property
    def weights(self):
        return self._weights

    @property
    def k_max(self):
        return float(self._k_nodes[-1])

    def __len__(self):
        return self._k_nodes.size

    def refined(self):
        """Returns the uniform grid with twice the resolution on the same interval."""
        return RadialGrid.uniform(self.k_max, 2 * len(self) - 1)

    def __eq__(self, other):
        if not isinstance(other, RadialGrid):
            return NotImplemented
        return (np.array_equal(self._k_nodes, other.k_nodes)
                and np.array_equal(self._weights, other.weights))

    def __hash__(self):
        return hash((len(self), self.k_max, self._weights.tobytes()))


class RadialFn:
    """Radial profile of a rotationally invariant Fourier transform, sampled on a grid."""

    def __init__(self, grid, values):
        if not isinstance(grid, RadialGrid):
            raise ValueError('RadialFn.grid must be a RadialGrid.')
        values = np.array(values, dtype=float)
        if values.shape != grid.k_nodes.shape:
            raise ValueError('RadialFn.values must have one entry per grid node.')
        values.flags.writeable = False
        self._grid = grid
        self._values = values

    @property
    def grid(self):
        return self._grid

    @property
    def values(self):
        return self._values

    def at_zero(self):
        """Value at ``k = 0``, i.e. the total mass of the function."""
        return float(self._values[0])

    def tail_ratio(self):
        """``|f(k_max)| / max |f|``; zero for the identically vanishing profile."""
        peak = np.max(np.abs(self._values))
        if peak == 0.0:
            return 0.0
        return float(abs(self._values[-1]) / peak)


@_utils.validated('decay_k_max')
def decay_k_max(min_variance=None, target=DECAY_TARGET):
    """Returns the grid end at which ``exp(-t k^2 / 2)`` has fallen to ``target``.

    ``t`` is the smallest variance a transform on the grid carries. The result is never below
    ``DEFAULT_K_MAX``, and ``None`` (no Gaussian components) gives the default.
    """
    if min_variance is None:
        return DEFAULT_K_MAX
    min_variance = _Validators.check_positive_number('min_variance', min_variance)
    return max(DEFAULT_K_MAX, math.sqrt(-2.0 * math.log(target) / min_variance))


def mixture_hat(mix, grid):
    """Closed-form radial transform of a Gaussian mixture on ``grid``."""
    return RadialFn(grid, mix.hat(grid.k_nodes))


def _bessel_series(nu, u):
    u = np.asarray(u, dtype=float)
    half = 0.5 * u
    total = np.zeros_like(u)
    sq = half * half
    term = np.power(half, nu) / special.gamma(nu + 1.0)
    for k in range(SERIES_TERMS):
        total = total + term
        term = -term * sq / ((k + 1.0) * (k + 1.0 + nu))
    return total


def _bessel_closed(nu, u):
    u = np.asarray(u, dtype=float)
    root = np.sqrt(2.0 / (np.pi * u))
    sin = np.sin(u)
    cos = np.cos(u)
    previous = root * cos
    current = root * sin
    order = 0.5
    while order < nu:
        previous, current = current, (2.0 * order / u) * current - previous
        order += 1.0
    return current


def _check_order(nu_half):
    nu_half = _Validators.check_number('nu_half', nu_half)
    if nu_half not in BESSEL_ORDERS:
        raise ValueError('Unsupported Bessel order {0}; expected one of {1}.'.format(
            nu_half, ', '.join(str(order) for order in BESSEL_ORDERS)))
    return nu_half


@_utils.validated('bessel_j')
def bessel_j(nu_half, u):
    """Bessel function of the first kind for half-integer orders 1/2 .. 7/2.

    Uses the closed forms ``J_{1/2}(u) = sqrt(2 / (pi u)) sin u`` and ``J_{-1/2}(u) =
    sqrt(2 / (pi u)) cos u`` with upward recurrence ``J_{v+1} = (2v / u) J_v - J_{v-1}``. Below
    ``u = 1`` the ascending series is summed instead, which avoids the cancellation of the
    recurrence near the origin.

    Args:
        nu_half: Order, one of 0.5, 1.5, 2.5 or 3.5.
        u: Non-negative argument (scalar or array).

    Returns:
        The Bessel function values, with the shape of ``u``.

    Raises:
        InvalidArgumentError: If the order is unsupported or ``u`` is negative.
    """
    nu = _check_order(nu_half)
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr < 0) or not np.all(np.isfinite(u_arr)):
        raise ValueError('Bessel argument must be finite and non-negative.')
    small = u_arr < SERIES_CUTOFF
    result = np.empty_like(u_arr)
    result[small] = _bessel_series(nu, u_arr[small])
    result[~small] = _bessel_closed(nu, u_arr[~small])
    if np.ndim(u) == 0:
        return float(result)
    return result


def check_dim(dim):
    dim = _Validators.check_int('dimension', dim)
    if dim % 2 == 0:
        raise ValueError('Only odd dimensions are supported; got {0}.'.format(dim))
    return _Validators.check_odd_dim('dimension', dim)


def sphere_area(dim):
    """Surface area ``S_{d-1} = 2 pi^{d/2} / Gamma(d/2)`` of the unit sphere in ``R^d``."""
    return 2.0 * math.pi ** (0.5 * dim) / math.gamma(0.5 * dim)


def _check_decay(fhat, tolerance):
    ratio = fhat.tail_ratio()
    if ratio > tolerance:
        raise exceptions.TruncationError(
            'Radial transform does not decay before k_max={0}: |f(k_max)| / max|f| = {1:.3e} '
            'exceeds {2:.1e}.'.format(fhat.grid.k_max, ratio, tolerance))


def inverse_radial_transform(fhat, radius, dim, check_decay=True):
    """Inverts a radial Fourier profile at one or more radii.

    For ``r > 0`` the value is ``(2 pi)^{-d/2} r^{1 - d/2} int fhat(k) J_{d/2-1}(k r) k^{d/2} dk``;
    at ``r = 0`` the dedicated formula ``(2 pi)^{-d} S_{d-1} int k^{d-1} fhat(k) dk`` is used.
    Both integrals are evaluated with the grid quadrature.

    Args:
        fhat: A ``RadialFn``.
        radius: Non-negative radius or array of radii.
        dim: Odd dimension in {3, 5, 7, 9}.
        check_decay: Whether to verify that ``fhat`` has decayed at ``k_max`` (optional).

    Returns:
        The real-space values, a float for scalar ``radius`` and an array otherwise.

    Raises:
        InvalidArgumentError: If the dimension is unsupported or a radius is negative.
        TruncationError: If ``fhat`` has not decayed below the tolerance at ``k_max``.
    """
    try:
        dim = check_dim(dim)
        if not isinstance(fhat, RadialFn):
            raise ValueError('fhat must be a RadialFn.')
        radii = np.atleast_1d(np.asarray(radius, dtype=float))
        if np.any(radii < 0) or not np.all(np.isfinite(radii)):
            raise ValueError('Radii must be finite and non-negative.')
    except ValueError as error:
        raise _utils.handle_value_error(error, 'inverse_radial_transform')
    if check_decay:
        _check_decay(fhat, DECAY_TOLERANCE)

    k = fhat.grid.k_nodes
    weighted = fhat.grid.weights * fhat.values
    result = np.empty(radii.shape)
    at_origin = radii == 0.0
    if np.any(at_origin):
        integral = np.dot(weighted, k ** (dim - 1))
        result[at_origin] = (2.0 * math.pi) ** (-dim) * sphere_area(dim) * integral
    positive = radii[~at_origin]
    if positive.size:
        nu = 0.5 * dim - 1.0
        kernel = bessel_j(nu, np.outer(positive, k)) * k ** (0.5 * dim)
        prefactor = (2.0 * math.pi) ** (-0.5 * dim) * positive ** (1.0 - 0.5 * dim)
        result[~at_origin] = prefactor * (kernel @ weighted)
    if np.ndim(radius) == 0:
        return float(result[0])
    return result


def _omega_series(dim, u):
    nu = 0.5 * dim - 1.0
    sq = 0.25 * u * u
    total = np.zeros_like(u)
    term = np.ones_like(u)
    for k in range(SERIES_TERMS):
        total = total + term
        term = -term * sq / ((k + 1.0) * (k + 1.0 + nu))
    return total


@_utils.validated('omega_kernel')
def omega_kernel(dim, u):
    """Rotational average of the plane wave ``exp(i k.x)`` over the sphere ``|x| = const``.

    ``Omega_d(u) = Gamma(d/2) (2/u)^{d/2-1} J_{d/2-1}(u)`` with ``u = k |x|``. For ``d = 3`` this
    is ``sin(u) / u``; ``Omega_d(0) = 1``.
    """
    dim = check_dim(dim)
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr < 0) or not np.all(np.isfinite(u_arr)):
        raise ValueError('Omega kernel argument must be finite and non-negative.')
    nu = 0.5 * dim - 1.0
    small = u_arr < SERIES_CUTOFF
    result = np.empty_like(u_arr)
    result[small] = _omega_series(dim, u_arr[small])
    large = u_arr[~small]
    result[~small] = (math.gamma(0.5 * dim) * (2.0 / large) ** nu
                      * _bessel_closed(nu, large))
    if np.ndim(u) == 0:
        return float(result)
    return result
