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

"""Monte Carlo estimation for the weakly self-avoiding Gaussian walk.

Paths start at the origin and have independent standard Gaussian increments. Each path carries
the weight ``K[0, n] = prod_{i<j} (1 - lam 1{|x_j - x_i| <= rho})``, and ``J[0, m]`` is evaluated
exactly per path through the lace resummation. All estimators draw from the counter-based
streams of ``lacelab._sampling``, so a result depends on the seed and the sample count but never
on the number of worker threads.
"""

import dataclasses
import logging
import math

import numpy as np
from scipy import integrate
from scipy import stats

from lacelab import _encoder
from lacelab import _sampling
from lacelab import _utils
from lacelab import exceptions
from lacelab import gamma_family
from lacelab import lace_engine
from lacelab import sequence_core
from lacelab import solver
from lacelab import spectral


_logger = logging.getLogger(__name__)
_Validators = _encoder._Validators

MAX_PI_INDEX = lace_engine.MAX_BRUTEFORCE_J
BANDWIDTH_SCALE = 0.5
BATCHES = 10
HARD_Z_THRESHOLD = 5.0
CROSSCHECK_K_MAX = 6.0
CROSSCHECK_NODES = 64
DOMINATION_STDERRS = 3.0


@dataclasses.dataclass(frozen=True)
class SawParams:
    """Parameters of a weakly self-avoiding walk simulation.

    Attributes:
        dim: Odd dimension in {3, 5, 7, 9}.
        lam: Interaction strength in ``[0, 1]``.
        rho: Interaction range in ``(0, 1]``.
        n: Number of steps.
        seed: Stream seed (unsigned 64-bit integer).
        n_samples: Number of sampled paths.
        threads: Worker threads; does not affect results.
    """

    dim: int
    lam: float
    rho: float
    n: int
    seed: int = 0
    n_samples: int = 100000
    threads: int = 1

    def __post_init__(self):
        try:
            _Validators.check_odd_dim('dim', self.dim)
            _Validators.check_number_range('lam', self.lam, 0.0, 1.0)
            _Validators.check_number_range('rho', self.rho, 0.0, 1.0, low_open=True)
            _Validators.check_int('n', self.n, minimum=1)
            _Validators.check_int('seed', self.seed, minimum=0, maximum=_sampling.MAX_SEED)
            _Validators.check_int('n_samples', self.n_samples, minimum=2)
            _Validators.check_int('threads', self.threads, minimum=1)
        except ValueError as error:
            raise _utils.handle_value_error(error, 'SawParams')

    def with_steps(self, n):
        return dataclasses.replace(self, n=n)

    def to_dict(self):
        return dataclasses.asdict(self)


def _block_paths(gen, count, n, dim):
    steps = gen.standard_normal((count, n, dim))
    paths = np.zeros((count, n + 1, dim))
    np.cumsum(steps, axis=1, out=paths[:, 1:])
    return paths


def sample_paths(params, block_size=_sampling.BLOCK_SIZE):
    """Yields ``(block, paths)`` with ``paths`` of shape ``(count, n + 1, d)`` and ``x_0 = 0``.

    Block ``j`` is a pure function of ``(seed, j)``.
    """
    for block, count in enumerate(_sampling.block_sizes(params.n_samples, block_size)):
        yield block, _block_paths(_sampling.block_generator(params.seed, block), count,
                                  params.n, params.dim)


def _k_weights(close, lam):
    return (1.0 - lam) ** np.count_nonzero(close, axis=1)


def _prefix_close(paths, rho, m):
    return lace_engine.close_pairs_batch(paths[:, :m + 1], rho, m)


def _run(params, func, block_size=_sampling.BLOCK_SIZE):
    def work(gen, count, block):
        return func(_block_paths(gen, count, params.n, params.dim), block)
    return _sampling.run_blocks(work, params.n_samples, params.seed, params.threads, block_size)


def _estimates(moments):
    mean = np.atleast_1d(moments.mean())
    stderr = np.atleast_1d(moments.stderr())
    return [_sampling.McEstimate(float(m), float(s), moments.count) for m, s in zip(mean, stderr)]


def estimate_cn_saw(params):
    """``c_n = E[K[0, n]]`` under Gaussian paths, with its standard error."""
    def block(paths, _):
        return _sampling.Moments.of(_k_weights(_prefix_close(paths, params.rho, params.n),
                                               params.lam))
    return _estimates(_sampling.Moments.merge_all(_run(params, block)))[0]


def estimate_cn_sequence(params):
    """``c_0 .. c_n`` from the same paths (common random numbers); ``c_0 = 1`` exactly."""
    def block(paths, _):
        columns = [np.ones(paths.shape[0])]
        columns.extend(_k_weights(_prefix_close(paths, params.rho, m), params.lam)
                       for m in range(1, params.n + 1))
        return _sampling.Moments.of(np.column_stack(columns))
    return _estimates(_sampling.Moments.merge_all(_run(params, block)))


def _check_pi_index(m):
    try:
        return _Validators.check_int('m', m, minimum=1, maximum=MAX_PI_INDEX)
    except ValueError as error:
        raise _utils.handle_value_error(error, 'saw_mc')


def _j_values(paths, params, m):
    return lace_engine.lace_table(m).j_values(_prefix_close(paths, params.rho, m), params.lam)


def estimate_pi_moments(params, m):
    """Estimates ``pi_m = E[J[0, m]]`` and ``E[J[0, m] |x_m|^2]``.

    Paths of ``m`` steps are drawn from the stream of ``params``.

    Returns:
        tuple: ``(pi_m, second_moment)`` as ``McEstimate`` instances.
    """
    m = _check_pi_index(m)
    local = params.with_steps(m)

    def block(paths, _):
        j_values = _j_values(paths, local, m)
        radius_sq = np.sum(paths[:, m] ** 2, axis=1)
        return _sampling.Moments.of(np.column_stack((j_values, j_values * radius_sq)))

    first, second = _estimates(_sampling.Moments.merge_all(_run(local, block)))
    return first, second


def _omega(dim, radius, k_nodes):
    return spectral.omega_kernel(dim, np.multiply.outer(radius, k_nodes))


def _profile(nodes, moments, bandwidth=None):
    return _sampling.McProfile(np.asarray(nodes, dtype=float), np.asarray(moments.mean()),
                               np.asarray(moments.stderr()), moments.count, bandwidth)


def estimate_pi_hat(params, m, k_nodes):
    """``Pi_m(k) = E[J[0, m] Omega_d(k |x_m|)]`` at every frequency node."""
    m = _check_pi_index(m)
    k_nodes = _check_nodes('k_nodes', k_nodes)
    local = params.with_steps(m)

    def block(paths, _):
        j_values = _j_values(paths, local, m)
        radius = np.linalg.norm(paths[:, m], axis=1)
        return _sampling.Moments.of(j_values[:, np.newaxis] * _omega(local.dim, radius, k_nodes))

    return _profile(k_nodes, _sampling.Moments.merge_all(_run(local, block)))


def _check_nodes(label, nodes):
    try:
        nodes = _Validators.check_number_list(label, nodes)
        if np.any(nodes < 0):
            raise ValueError('{0} must be non-negative.'.format(label))
    except ValueError as error:
        raise _utils.handle_value_error(error, 'saw_mc')
    return nodes


def _ratio(moments, size):
    """Ratio estimate ``E[Y] / E[Z]`` and delta-method error from moments of ``(Y, Z, YZ)``."""
    mean = moments.mean()
    count = moments.count
    y_mean, z_mean, yz_mean = mean[:size], mean[size], mean[size + 1:]
    y_var = (moments.total_sq[:size] - count * y_mean ** 2) / (count - 1)
    z_var = (moments.total_sq[size] - count * z_mean ** 2) / (count - 1)
    cov = (count * yz_mean - count * y_mean * z_mean) / (count - 1)
    ratio = y_mean / z_mean
    var = (y_var - 2.0 * ratio * cov + ratio * ratio * z_var) / (z_mean * z_mean * count)
    return ratio, np.sqrt(np.maximum(var, 0.0))


def _ratio_block(y_values, z_values):
    return _sampling.Moments.of(np.column_stack(
        (y_values, z_values, y_values * z_values[:, np.newaxis])))


def estimate_endpoint_hat(params, k_nodes):
    """Radial characteristic function of ``C_n / c_n``: ``E[K Omega_d(k |x_n|)] / E[K]``."""
    k_nodes = _check_nodes('k_nodes', k_nodes)

    def block(paths, _):
        weights = _k_weights(_prefix_close(paths, params.rho, params.n), params.lam)
        radius = np.linalg.norm(paths[:, params.n], axis=1)
        return _ratio_block(weights[:, np.newaxis] * _omega(params.dim, radius, k_nodes),
                            weights)

    moments = _sampling.Moments.merge_all(_run(params, block))
    mean, stderr = _ratio(moments, k_nodes.size)
    return _sampling.McProfile(k_nodes, mean, stderr, moments.count)


def default_bandwidth(params):
    """``h = 0.5 sqrt(n) N^{-1/7}`` for ``N`` samples."""
    return BANDWIDTH_SCALE * math.sqrt(params.n) * params.n_samples ** (-1.0 / 7.0)


def _epanechnikov(u):
    return np.where(np.abs(u) < 1.0, 0.75 * (1.0 - u * u), 0.0)


@_utils.validated('estimate_endpoint_density')
def estimate_endpoint_density(params, radii, bandwidth=None):
    """Kernel estimate of ``C_n(x) / c_n`` at ``|x| = r`` for every radius.

    Every path contributes through its end radius ``R = |x_n|`` with weight ``K[0, n]``; the
    radial density is smoothed with an Epanechnikov kernel of bandwidth ``h`` and divided by the
    sphere area ``S_{d-1} r^{d-1}``.

    Returns:
        McProfile: Estimates per radius, with the bandwidth used.
    """
    radii = _check_nodes('radii', radii)
    if np.any(radii <= 0):
        raise exceptions.InvalidArgumentError('estimate_endpoint_density: radii must be positive.')
    h = default_bandwidth(params) if bandwidth is None else _Validators.check_positive_number(
        'bandwidth', bandwidth)
    shell = spectral.sphere_area(params.dim) * radii ** (params.dim - 1)

    def block(paths, _):
        weights = _k_weights(_prefix_close(paths, params.rho, params.n), params.lam)
        radius = np.linalg.norm(paths[:, params.n], axis=1)
        kernel = _epanechnikov(np.subtract.outer(radius, radii) / h) / h
        return _ratio_block(weights[:, np.newaxis] * kernel / shell, weights)

    moments = _sampling.Moments.merge_all(_run(params, block))
    mean, stderr = _ratio(moments, radii.size)
    _logger.debug('Endpoint density with bandwidth %.4g from %d samples.', h, moments.count)
    return _sampling.McProfile(radii, mean, stderr, moments.count, bandwidth=h)


def _ball_probability(params):
    return float(stats.chi2.cdf(params.rho ** 2, params.dim))


def cn1_closed_form(params):
    """``c_1 = 1 - lam P(|X| <= rho)`` for a standard Gaussian ``X``."""
    return 1.0 - params.lam * _ball_probability(params)


def pi1_closed_form(params):
    """``pi_1 = -lam P(|X| <= rho)``, the mass of ``Pi_1 = -lam phi 1_rho``."""
    return -params.lam * _ball_probability(params)


def pi1_second_moment_closed_form(params):
    """``E[J[0, 1] |x_1|^2] = -lam d P(chi^2_{d+2} <= rho^2)``."""
    return -params.lam * params.dim * float(stats.chi2.cdf(params.rho ** 2, params.dim + 2))


def pi1_hat_closed_form(params, k_nodes):
    """``-lam int_{|x| <= rho} phi(x) Omega_d(k |x|) dx`` by radial quadrature."""
    k_nodes = _check_nodes('k_nodes', k_nodes)
    area = spectral.sphere_area(params.dim)
    norm = (2.0 * math.pi) ** (-0.5 * params.dim)

    def integrand(r, k):
        return (area * r ** (params.dim - 1) * norm * math.exp(-0.5 * r * r)
                * spectral.omega_kernel(params.dim, k * r))

    values = [integrate.quad(integrand, 0.0, params.rho, args=(k,), epsabs=1e-13,
                             epsrel=1e-12)[0] for k in k_nodes]
    return -params.lam * np.array(values)


@dataclasses.dataclass(frozen=True, eq=False)
class CrossCheckReport:
    """Agreement between the solver fed with estimated kernels and direct simulation.

    Attributes:
        n_max: Largest step count compared.
        k_nodes: Frequency nodes of the profile comparison.
        c_solver: Solver masses ``c_0 .. c_{n_max}``.
        c_mc: Simulated masses with standard errors.
        z_cn: z-scores of the mass differences, ``n = 1 .. n_max``.
        z_profile: z-scores of ``C_n(k) / c_n`` differences, shape ``(n_max, nodes)``.
        mu: Growth rate of the estimated family.
        delta: Diffusion constant of the estimated family.
        n_samples: Number of sampled paths.
        seed: Stream seed.
    """

    n_max: int
    k_nodes: np.ndarray
    c_solver: np.ndarray
    c_mc: list
    z_cn: np.ndarray
    z_profile: np.ndarray
    mu: float
    delta: float
    n_samples: int
    seed: int

    @property
    def max_abs_z(self):
        values = np.concatenate((np.abs(self.z_cn), np.abs(self.z_profile).ravel()))
        return float(np.max(values)) if values.size else 0.0

    def raise_for_failure(self, threshold=HARD_Z_THRESHOLD):
        """Raises ``StatisticalFailureError`` if any ``|z|`` exceeds ``threshold``."""
        if self.max_abs_z > threshold:
            raise exceptions.StatisticalFailureError(
                'Recursion cross-check failed: max |z| = {0:.3f} exceeds {1}.'.format(
                    self.max_abs_z, threshold))

    def to_dict(self):
        return {
            'n_max': self.n_max,
            'c_solver': self.c_solver,
            'c_mc': [estimate.to_dict() for estimate in self.c_mc],
            'z_cn': self.z_cn,
            'z_profile': self.z_profile,
            'max_abs_z': self.max_abs_z,
            'mu': self.mu,
            'delta': self.delta,
            'n_samples': self.n_samples,
            'seed': self.seed,
        }


def crosscheck_grid():
    return spectral.RadialGrid.uniform(CROSSCHECK_K_MAX, CROSSCHECK_NODES)


def _path_statistics(paths, params, n_max, k_nodes):
    """Per-path columns: ``K[0, m]``, ``J[0, m]``, ``J |x_m|^2``, ``J Omega``, ``K Omega``."""
    count = paths.shape[0]
    columns = []
    for m in range(1, n_max + 1):
        close = _prefix_close(paths, params.rho, m)
        weights = _k_weights(close, params.lam)
        j_values = lace_engine.lace_table(m).j_values(close, params.lam)
        radius = np.linalg.norm(paths[:, m], axis=1)
        omega = _omega(params.dim, radius, k_nodes)
        columns.append(np.column_stack((
            weights, j_values, j_values * radius * radius,
            j_values[:, np.newaxis] * omega, weights[:, np.newaxis] * omega)))
    return np.concatenate(columns, axis=1).reshape(count, n_max, -1)


def _spectral_family(params, n_max, k_nodes, means):
    c_mc = means[:, 0]
    scale = params.lam * c_mc
    hats = means[:, 3:3 + k_nodes.size] / scale[:, np.newaxis]
    b = means[:, 1] / scale
    b_bar = means[:, 2] / (params.dim * scale)
    return gamma_family.SpectralBFamily(k_nodes, hats, b, b_bar, params.dim,
                                        name='saw-estimate')


def _solve_estimated(params, n_max, grid, means):
    family = _spectral_family(params, n_max, grid.k_nodes, means)
    cfg = solver.SolverConfig(params.dim, params.lam, n_max, family, grid=grid,
                              radii=np.array([1.0]), check_decay=False, saw_type=True)
    run = solver.run_recursion(cfg)
    c = run.sequence.c
    profile = run.c_hat_values[1:] / c[1:, np.newaxis]
    return run, c, profile


def _endpoint_ratio(means, size):
    return means[:, 3 + size:] / means[:, :1]


@_utils.validated('cross_check_recursion')
def cross_check_recursion(params, n_max, grid=None):
    """Feeds estimated kernels to the solver and compares it against direct simulation.

    ``B_m(k) = Pi_m(k) / (lam c_m)``, ``b_m = pi_m / (lam c_m)`` and ``b_bar_m = E[J |x_m|^2] /
    (d lam c_m)`` are estimated from one set of paths of ``n_max`` steps and passed to
    ``solver.run_recursion``. The solver masses are compared with the simulated ``c_n``, and the
    solver profiles ``C_n(k) / c_n`` with the simulated radial characteristic function. The
    z-scores use the spread over 10 deterministic batches of sample blocks.

    Args:
        params: Simulation parameters with ``lam < 1``.
        n_max: Largest step count compared, at most 6.
        grid: Frequency grid of the comparison (optional).

    Returns:
        CrossCheckReport: The comparison.
    """
    n_max = _Validators.check_int('n_max', n_max, minimum=1, maximum=MAX_PI_INDEX)
    if params.lam >= 1.0:
        raise exceptions.InvalidArgumentError(
            'cross_check_recursion: lam must be below 1 for the convolution solver; got {0}.'
            .format(params.lam))
    grid = crosscheck_grid() if grid is None else grid
    k_nodes = grid.k_nodes
    local = params.with_steps(n_max)
    block_size = max(1, min(_sampling.BLOCK_SIZE, -(-local.n_samples // BATCHES)))

    def block(paths, index):
        flat = _path_statistics(paths, local, n_max, k_nodes).reshape(paths.shape[0], -1)
        return index % BATCHES, _sampling.Moments.of(flat)

    results = _run(local, block, block_size)
    full = _sampling.Moments.merge_all(moments for _, moments in results)
    shape = (n_max, -1)
    full_means = full.mean().reshape(shape)
    stderrs = full.stderr().reshape(shape)
    c_mc = [_sampling.McEstimate(float(mean), float(err), full.count)
            for mean, err in zip(full_means[:, 0], stderrs[:, 0])]

    if local.lam == 0.0:
        zeros = np.zeros(n_max)
        c_solver = np.ones(n_max + 1)
        _logger.info('Cross-check at lam=0 is exact.')
        return CrossCheckReport(n_max, k_nodes, c_solver, c_mc, zeros,
                                np.zeros((n_max, k_nodes.size)), 1.0, 1.0,
                                local.n_samples, local.seed)

    run, c_solver, profile = _solve_estimated(local, n_max, grid, full_means)
    full_cn = c_solver[1:] - full_means[:, 0]
    full_profile = profile - _endpoint_ratio(full_means, k_nodes.size)

    batch_cn = []
    batch_profile = []
    for batch in range(BATCHES):
        parts = [moments for index, moments in results if index == batch]
        if not parts:
            continue
        means = _sampling.Moments.merge_all(parts).mean().reshape(shape)
        _, c_batch, profile_batch = _solve_estimated(local, n_max, grid, means)
        batch_cn.append(c_batch[1:] - means[:, 0])
        batch_profile.append(profile_batch - _endpoint_ratio(means, k_nodes.size))
    if len(batch_cn) < 2:
        raise exceptions.InvalidArgumentError(
            'cross_check_recursion needs at least two sample batches.')
    z_cn, _ = _sampling.batch_z_score(full_cn, batch_cn)
    z_profile, _ = _sampling.batch_z_score(full_profile, batch_profile)
    report = CrossCheckReport(n_max, k_nodes, c_solver, c_mc, z_cn, z_profile,
                              run.sequence.mu, run.sequence.delta, local.n_samples, local.seed)
    _logger.info('Cross-check n_max=%d: max |z| = %.3f, delta = %.6f.',
                 n_max, report.max_abs_z, report.delta)
    return report


@_utils.validated('monotonicity_check')
def monotonicity_check(params):
    """Pathwise check of the lace bound on ``[0, n]``.

    For ``N >= 2`` every lace term ``prod_l U prod_{C(l)} (1 - lam U)`` is bounded by
    ``prod_l U prod_segments K[segment]``, which integrates to ``Xi_l(C, rho)``. For ``N = 1``
    the identity ``J^{(1)} = U_{0n} K[0, n] / (1 - lam)`` is checked instead.

    Returns:
        dict: ``max_excess`` (largest violation of the bound, at most 0 when it holds) and
        ``n1_residual`` (largest deviation in the ``N = 1`` identity, ``None`` at ``lam = 1``).
    """
    n = _Validators.check_int('n', params.n, minimum=1, maximum=MAX_PI_INDEX)
    table = lace_engine.lace_table(n)
    edges = lace_engine.interval_edges(0, n)
    positions = {edge: index for index, edge in enumerate(edges)}

    def segment_index(a, b):
        return np.array([positions[edge] for edge in lace_engine.interval_edges(a, b)],
                        dtype=int) if b > a else np.zeros(0, dtype=int)

    def block(paths, _):
        close = lace_engine.close_pairs_batch(paths, params.rho, n).astype(float)
        excess = -np.inf
        residual = 0.0
        for index, lace in enumerate(table.laces):
            lace_index = np.array([positions[edge] for edge in lace.edges], dtype=int)
            compat = table.compatible_index(index)
            indicator = np.prod(close[:, lace_index], axis=1)
            term = indicator * np.prod(1.0 - params.lam * close[:, compat], axis=1)
            if len(lace) == 1:
                if params.lam < 1.0:
                    full = _k_weights(close > 0, params.lam)
                    residual = max(residual, float(np.max(np.abs(
                        term - indicator * full / (1.0 - params.lam)))))
                continue
            bound = indicator.copy()
            for a, b in lace.segments():
                seg = segment_index(a, b)
                if seg.size:
                    bound *= _k_weights(close[:, seg] > 0, params.lam)
            excess = max(excess, float(np.max(term - bound)))
        return excess, residual

    results = _run(params, block)
    excess = max(result[0] for result in results)
    residual = max(result[1] for result in results)
    return {
        'max_excess': float(excess) if math.isfinite(excess) else 0.0,
        'n1_residual': residual if params.lam < 1.0 else None,
    }


def estimate_b_hat(params, m_max, k_nodes):
    """Estimates ``B_m(k) = Pi_m(k) / (lam c_m)`` for ``m = 1 .. m_max``.

    Returns:
        tuple: ``(b_hat, stderr)`` arrays of shape ``(m_max, nodes)``.

    Raises:
        FailedPreconditionError: If ``lam = 0`` (the kernels are undefined).
    """
    m_max = _check_pi_index(m_max)
    k_nodes = _check_nodes('k_nodes', k_nodes)
    if params.lam == 0.0:
        raise exceptions.FailedPreconditionError('B_m is undefined at lam = 0.')
    local = params.with_steps(m_max)

    def block(paths, _):
        flat = _path_statistics(paths, local, m_max, k_nodes)
        return _sampling.Moments.of(flat.reshape(paths.shape[0], -1))

    moments = _sampling.Moments.merge_all(_run(local, block))
    means = moments.mean().reshape(m_max, -1)
    errs = moments.stderr().reshape(m_max, -1)
    scale = local.lam * means[:, :1]
    size = k_nodes.size
    return means[:, 3:3 + size] / scale, errs[:, 3:3 + size] / np.abs(scale)


def _majorant_hats(dim, m_max, k_nodes):
    majorant = gamma_family.SawMajorant(dim)
    hats = np.array([majorant.term(m).hat(k_nodes) for m in range(1, m_max + 1)])
    if np.any(hats <= 0.0):
        raise exceptions.InvalidArgumentError(
            'k_nodes reach past the range where the majorant transform is representable.')
    return hats


def fit_majorant_constant(params, m_max, k_nodes):
    """Smallest ``K`` with ``|B_m(k)| <= K Gamma_m(k)`` at the upper end of every estimate.

    Every node and every ``m = 1 .. m_max`` enters the fit with ``|B_m(k)| + 3 stderr``;
    ``Gamma`` is the self-avoiding walk majorant with unit constant.
    """
    k_nodes = _check_nodes('k_nodes', k_nodes)
    b_hat, stderr = estimate_b_hat(params, m_max, k_nodes)
    upper = np.abs(b_hat) + DOMINATION_STDERRS * stderr
    constant = float(np.max(upper / _majorant_hats(params.dim, b_hat.shape[0], k_nodes)))
    _logger.info('Fitted majorant constant K=%.4g from m <= %d.', constant, b_hat.shape[0])
    return constant


def domination_excess(b_hat, stderr, bound):
    """Largest ``(|B_m(k)| - bound) / stderr`` over all ``m`` and nodes.

    Estimates without spread count as ``+inf`` when they exceed the bound and are ignored
    otherwise. Domination within 3 standard errors holds when the result is at most 3.
    """
    gap = np.abs(b_hat) - bound
    spread = stderr > 0
    with np.errstate(divide='ignore', invalid='ignore'):
        scores = np.where(spread, gap / np.where(spread, stderr, 1.0),
                          np.where(gap > 0, np.inf, -np.inf))
    return float(np.max(scores))


@dataclasses.dataclass(frozen=True, eq=False)
class DominationReport:
    """A majorant constant fitted on one seed and checked on an independent one.

    Attributes:
        constant: Fitted ``K``.
        holdout_seed: Seed of the independent estimate.
        k_nodes: Frequency nodes.
        b_hat: Independent estimates of ``B_m(k)``, shape ``(m_max, nodes)``.
        stderr: Their standard errors.
        max_excess: ``domination_excess`` of the independent estimates against ``K Gamma_m``.
    """

    constant: float
    holdout_seed: int
    k_nodes: np.ndarray
    b_hat: np.ndarray
    stderr: np.ndarray
    max_excess: float

    def raise_for_failure(self, threshold=DOMINATION_STDERRS):
        """Raises ``StatisticalFailureError`` if the domination fails by more than ``threshold``
        standard errors."""
        if self.max_excess > threshold:
            raise exceptions.StatisticalFailureError(
                'Majorant domination failed: excess of {0:.3f} stderr exceeds {1}.'.format(
                    self.max_excess, threshold))

    def to_dict(self):
        return {
            'constant': self.constant,
            'holdout_seed': self.holdout_seed,
            'm_max': self.b_hat.shape[0],
            'max_excess': self.max_excess,
        }


def _holdout_seed(seed):
    return seed + 1 if seed < _sampling.MAX_SEED else seed - 1


def check_majorant_domination(params, m_max, k_nodes):
    """Fits ``K`` on ``params.seed`` and checks ``|B_m| <= K Gamma_m`` on the next seed.

    Returns:
        DominationReport: The fitted constant and the independent check.
    """
    k_nodes = _check_nodes('k_nodes', k_nodes)
    constant = fit_majorant_constant(params, m_max, k_nodes)
    holdout = dataclasses.replace(params, seed=_holdout_seed(params.seed))
    b_hat, stderr = estimate_b_hat(holdout, m_max, k_nodes)
    bound = constant * _majorant_hats(params.dim, b_hat.shape[0], k_nodes)
    report = DominationReport(constant, holdout.seed, k_nodes, b_hat, stderr,
                              domination_excess(b_hat, stderr, bound))
    _logger.info('Majorant domination on seed %d: max excess %.3f stderr.',
                 holdout.seed, report.max_excess)
    return report


@_utils.validated('scalars_from_estimates')
def scalars_from_estimates(params, n_max):
    """``BScalars`` with ``b_m = pi_m / (lam c_m)`` and ``b_bar_m = E[J |x_m|^2] / (d lam c_m)``.

    Raises:
        FailedPreconditionError: If ``lam = 0``.
    """
    n_max = _check_pi_index(n_max)
    if params.lam == 0.0:
        raise exceptions.FailedPreconditionError('b_m is undefined at lam = 0.')
    local = params.with_steps(n_max)

    def block(paths, _):
        flat = _path_statistics(paths, local, n_max, np.zeros(1))
        return _sampling.Moments.of(flat.reshape(paths.shape[0], -1))

    means = _sampling.Moments.merge_all(_run(local, block)).mean().reshape(n_max, -1)
    scale = local.lam * means[:, 0]
    return sequence_core.BScalars(local.lam, means[:, 1] / scale,
                                  means[:, 2] / (local.dim * scale))
