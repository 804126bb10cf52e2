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

"""Signed mixtures of centered isotropic Gaussians.

A mixture ``sum_j w_j phi_{t_j}`` is stored as two parallel arrays of weights and variance
scales. The family is closed under convolution (variances add, weights multiply), which makes
every majorant, bound envelope and test kernel used by lacelab an exact, finite object.
"""

import numbers

import numpy as np
from scipy import special

from lacelab import _encoder


_Validators = _encoder._Validators

MERGE_TOLERANCE = 1e-12
PRUNE_TOLERANCE = 1e-15


def gaussian_moment(t, k, dim):
    """Returns ``int |y|^{2k} phi_t(y) dy`` for ``k`` in 0, 1, 2."""
    t = np.asarray(t, dtype=float)
    if k == 0:
        return np.ones_like(t)
    if k == 1:
        return dim * t
    if k == 2:
        return dim * (dim + 2) * t * t
    raise ValueError('Moment order must be 0, 1 or 2; got {0}.'.format(k))


def log_phi(t, r, dim):
    """Log-density of the centered Gaussian with covariance ``t * I_d`` at radius ``r``.

    Broadcasts ``t`` against ``r``.
    """
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=float)
    return -0.5 * dim * np.log(2.0 * np.pi * t) - r * r / (2.0 * t)


def phi(t, r, dim):
    return np.exp(log_phi(t, r, dim))


def overlap_factor(t, s, r, k, dim):
    """Returns ``int phi_t(x - y) |y|^{2k} phi_s(y) dy / phi_{t+s}(x)`` at ``|x| = r``.

    The product of the two Gaussians is ``phi_{t+s}(x)`` times a Gaussian in ``y`` with mean
    ``s x / (t + s)`` and variance ``ts / (t + s)``, so the ratio is a non-central moment of that
    Gaussian.
    """
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    r = np.asarray(r, dtype=float)
    tau = t * s / (t + s)
    shift = (s * r / (t + s)) ** 2
    second = shift + dim * tau
    if k == 0:
        return np.ones_like(second)
    if k == 1:
        return second
    if k == 2:
        return second * second + 2.0 * dim * tau * tau + 4.0 * tau * shift
    raise ValueError('Moment order must be 0, 1 or 2; got {0}.'.format(k))


class GaussianMixture:
    """A signed finite mixture of centered isotropic Gaussian densities on ``R^d``.

    Args:
        weights: Sequence of real weights ``w_j``.
        variances: Sequence of positive variance scales ``t_j`` (same length as ``weights``).
        dim: Dimension ``d`` of the ambient space.

    Raises:
        ValueError: If the arrays are malformed or a variance is not positive.
    """

    def __init__(self, weights, variances, dim):
        dim = _Validators.check_int('GaussianMixture.dim', dim, minimum=1)
        weights = np.array(weights, dtype=float, ndmin=1)
        variances = np.array(variances, dtype=float, ndmin=1)
        if weights.ndim != 1 or weights.shape != variances.shape:
            raise ValueError('GaussianMixture weights and variances must be 1-d arrays of equal '
                             'length.')
        if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(variances))):
            raise ValueError('GaussianMixture weights and variances must be finite.')
        if np.any(variances <= 0):
            raise ValueError('GaussianMixture variances must be positive.')
        weights.flags.writeable = False
        variances.flags.writeable = False
        self._weights = weights
        self._variances = variances
        self._dim = dim

    @classmethod
    def phi(cls, t, dim, weight=1.0):
        """Returns the single-term mixture ``weight * phi_t``."""
        return cls([weight], [t], dim)

    @classmethod
    def zero(cls, dim):
        return cls(np.empty(0), np.empty(0), dim)

    @property
    def weights(self):
        return self._weights

    @property
    def variances(self):
        return self._variances

    @property
    def dim(self):
        return self._dim

    @property
    def is_positive(self):
        """True if every weight is strictly positive."""
        return bool(np.all(self._weights > 0))

    def __len__(self):
        return self._weights.size

    def __repr__(self):
        return 'GaussianMixture(terms={0}, dim={1}, mass={2!r})'.format(
            len(self), self._dim, self.mass())

    def mass(self):
        """Total integral ``sum_j w_j``."""
        return float(np.sum(self._weights))

    def min_variance(self):
        """Smallest variance with a non-zero weight, or ``None`` for the zero mixture."""
        active = self._variances[self._weights != 0]
        return float(np.min(active)) if active.size else None

    def moment(self, k):
        """Returns ``int |y|^{2k} M(y) dy`` for ``k`` in 0, 1, 2."""
        return float(np.sum(self._weights * gaussian_moment(self._variances, k, self._dim)))

    def second_moment_coefficient(self):
        """Returns ``b`` such that ``int x^T x M(x) dx = b I_d``, i.e. ``sum_j w_j t_j``."""
        return float(np.sum(self._weights * self._variances))

    def merged(self, rel_tol=MERGE_TOLERANCE, prune=PRUNE_TOLERANCE):
        """Combines terms whose variances agree to ``rel_tol`` and drops negligible weights.

        Weights whose magnitude falls below ``prune`` times the absolute mass are removed.
        """
        if not len(self):
            return self
        order = np.argsort(self._variances, kind='stable')
        variances = self._variances[order]
        weights = self._weights[order]
        starts = np.concatenate(
            ([0], np.nonzero(variances[1:] > variances[:-1] * (1.0 + rel_tol))[0] + 1))
        weights = np.add.reduceat(weights, starts)
        variances = variances[starts]
        scale = np.sum(np.abs(weights))
        keep = np.abs(weights) > prune * scale
        return GaussianMixture(weights[keep], variances[keep], self._dim)

    def convolve(self, other):
        """Returns the convolution ``self * other`` as a merged mixture."""
        self._check_compatible(other)
        weights = np.outer(self._weights, other.weights).ravel()
        variances = np.add.outer(self._variances, other.variances).ravel()
        return GaussianMixture(weights, variances, self._dim).merged()

    def scaled(self, factor):
        factor = _Validators.check_number('factor', factor)
        return GaussianMixture(self._weights * factor, self._variances, self._dim)

    def shifted(self, t):
        """Returns ``self * phi_t``; ``t = 0`` is the identity (convolution with a point mass)."""
        if t == 0:
            return self
        return GaussianMixture(self._weights, self._variances + t, self._dim)

    def density(self, r):
        """Evaluates the mixture at radius (or radii) ``r``."""
        r = np.asarray(r, dtype=float)
        if not len(self):
            return np.zeros_like(r)
        values = phi(self._variances, r[..., np.newaxis], self._dim)
        return values @ self._weights

    def log_density(self, r):
        """Log of a positive mixture at radius (or radii) ``r``; stable far in the tails."""
        if not len(self) or not self.is_positive:
            raise ValueError('log_density is only defined for non-empty positive mixtures.')
        r = np.asarray(r, dtype=float)
        logs = np.log(self._weights) + log_phi(self._variances, r[..., np.newaxis], self._dim)
        return special.logsumexp(logs, axis=-1)

    def hat(self, k):
        """Radial Fourier transform ``sum_j w_j exp(-t_j k^2 / 2)`` at frequency (or frequencies)
        ``k``."""
        k = np.asarray(k, dtype=float)
        if not len(self):
            return np.zeros_like(k)
        return np.exp(-0.5 * np.multiply.outer(k * k, self._variances)) @ self._weights

    def __add__(self, other):
        if not isinstance(other, GaussianMixture):
            return NotImplemented
        self._check_compatible(other)
        return GaussianMixture(
            np.concatenate((self._weights, other.weights)),
            np.concatenate((self._variances, other.variances)), self._dim).merged()

    def __neg__(self):
        return GaussianMixture(-self._weights, self._variances, self._dim)

    def __sub__(self, other):
        if not isinstance(other, GaussianMixture):
            return NotImplemented
        return self + (-other)

    def __mul__(self, factor):
        if not isinstance(factor, numbers.Real):
            return NotImplemented
        return self.scaled(factor)

    __rmul__ = __mul__

    def _check_compatible(self, other):
        if not isinstance(other, GaussianMixture):
            raise ValueError('Expected a GaussianMixture; got {0}.'.format(type(other).__name__))
        if other.dim != self._dim:
            raise ValueError('Mixture dimensions differ: {0} != {1}.'.format(self._dim, other.dim))


def mixture_sum(mixtures, dim):
    """Adds a sequence of mixtures in order and merges once at the end."""
    mixtures = list(mixtures)
    if not mixtures:
        return GaussianMixture.zero(dim)
    weights = np.concatenate([mix.weights for mix in mixtures])
    variances = np.concatenate([mix.variances for mix in mixtures])
    return GaussianMixture(weights, variances, dim).merged()
