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

"""Graphs on integer intervals, laces and the exact resummation identities of the lace expansion.

A graph on ``[a, b]`` is a set of edges ``st`` with ``a <= s < t <= b``. It is *connected* in the
lace-expansion sense when ``a`` and ``b`` are edge endpoints and every integer strictly between
them lies strictly inside some edge; this is not graph-theoretic connectivity. A lace is a
minimally connected graph. Given a path ``x_0 .. x_n`` in ``R^d``, the close-pair indicators
``U_st = 1{|x_t - x_s| <= rho}`` turn these objects into the weights ``K[a, b]`` and ``J[a, b]``.
"""

import collections
import functools
import itertools
import logging
import math

import numpy as np

from lacelab import _encoder
from lacelab import _mixture
from lacelab import _sampling
from lacelab import _utils
from lacelab import exceptions
from lacelab import gamma_family


_logger = logging.getLogger(__name__)
_Validators = _encoder._Validators

MAX_BRUTEFORCE_J = 6
MAX_BRUTEFORCE_K = 4
MAX_XI_EDGES = 3


class Edge(collections.namedtuple('Edge', ['s', 't'])):
    """An edge ``st`` with ``0 <= s < t``."""

    __slots__ = ()

    def __new__(cls, s, t):
        s = _Validators.check_int('Edge.s', s, minimum=0)
        t = _Validators.check_int('Edge.t', t, minimum=0)
        if not s < t:
            raise ValueError('Edge requires s < t; got ({0}, {1}).'.format(s, t))
        return super().__new__(cls, s, t)


@functools.lru_cache(maxsize=None)
def interval_edges(a, b):
    """All edges on ``[a, b]`` in canonical order; bit ``i`` of a mask refers to entry ``i``."""
    return tuple(Edge(s, t) for s, t in itertools.combinations(range(a, b + 1), 2))


@functools.lru_cache(maxsize=None)
def _edge_positions(a, b):
    return {edge: index for index, edge in enumerate(interval_edges(a, b))}


class Graph:
    """A set of edges on the integer interval ``[a, b]``.

    Args:
        a: Left end of the interval.
        b: Right end of the interval (greater than ``a``).
        edges: Iterable of ``Edge`` instances or ``(s, t)`` pairs inside ``[a, b]``.
    """

    def __init__(self, a, b, edges=()):
        a = _Validators.check_int('Graph.a', a, minimum=0)
        b = _Validators.check_int('Graph.b', b, minimum=a + 1)
        edges = sorted({Edge(*edge) for edge in edges})
        for edge in edges:
            if edge.s < a or edge.t > b:
                raise ValueError('Edge {0} lies outside [{1}, {2}].'.format(tuple(edge), a, b))
        self._a = a
        self._b = b
        self._edges = tuple(edges)

    @classmethod
    def from_mask(cls, a, b, mask):
        edges = interval_edges(a, b)
        return cls(a, b, [edge for index, edge in enumerate(edges) if mask >> index & 1])

    @property
    def a(self):
        return self._a

    @property
    def b(self):
        return self._b

    @property
    def edges(self):
        return self._edges

    @property
    def mask(self):
        positions = _edge_positions(self._a, self._b)
        return sum(1 << positions[edge] for edge in self._edges)

    def __len__(self):
        return len(self._edges)

    def __iter__(self):
        return iter(self._edges)

    def __contains__(self, edge):
        return tuple(edge) in self._edges

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self._a, self._b, self._edges) == (other.a, other.b, other.edges)

    def __hash__(self):
        return hash((self._a, self._b, self._edges))

    def __repr__(self):
        return 'Graph([{0}, {1}], {2})'.format(
            self._a, self._b, [tuple(edge) for edge in self._edges])

    def with_edge(self, edge):
        return Graph(self._a, self._b, self._edges + (Edge(*edge),))

    def without_edge(self, edge):
        edge = Edge(*edge)
        return Graph(self._a, self._b, [other for other in self._edges if other != edge])


def lower(i, n_edges):
    """Index of the sorted endpoint holding ``s_i`` in an ``n_edges``-lace."""
    del n_edges
    return 0 if i == 1 else 2 * i - 3


def upper(i, n_edges):
    """Index of the sorted endpoint holding ``t_i`` in an ``n_edges``-lace."""
    return 2 * i if i < n_edges else 2 * n_edges - 1


def beta(i, n_edges):
    """The lace edge that owns sorted endpoint ``i`` (``0 <= i <= 2N - 1``)."""
    if i == 0:
        return 1
    if i == 2 * n_edges - 1:
        return n_edges
    return (i + 3) // 2 if i % 2 else i // 2


def lower_bounds(n_edges):
    """Smallest admissible interdistances ``r = (1, 1, 0, 1, 0, ..., 1)`` of an ``N``-lace."""
    size = 2 * n_edges - 1
    return tuple(1 if i in (1, size) or i % 2 == 0 else 0 for i in range(1, size + 1))


class Lace:
    """A lace on ``[a, b]`` stored both as ordered edges and as interdistances ``m``.

    Args:
        edges: Ordered edges ``s_1 t_1 .. s_N t_N``.

    Raises:
        ValueError: If the edges do not form a lace.
    """

    def __init__(self, edges):
        edges = tuple(Edge(*edge) for edge in edges)
        if not edges:
            raise ValueError('A lace needs at least one edge.')
        size = len(edges)
        points = [0] * (2 * size)
        for i, edge in enumerate(edges, start=1):
            points[lower(i, size)] = edge.s
            points[upper(i, size)] = edge.t
        m_vector = tuple(right - left for left, right in zip(points, points[1:]))
        bounds = lower_bounds(size)
        if any(value < bound for value, bound in zip(m_vector, bounds)):
            raise ValueError('Edges {0} do not form a lace.'.format(
                [tuple(edge) for edge in edges]))
        self._edges = edges
        self._points = tuple(points)
        self._m = m_vector

    @classmethod
    def from_m(cls, m_vector, a=0):
        """Builds the lace with interdistances ``m`` starting at ``a``."""
        m_vector = [_Validators.check_int('m', value, minimum=0) for value in m_vector]
        if len(m_vector) % 2 == 0:
            raise ValueError('An m-vector has odd length 2N - 1; got {0}.'.format(len(m_vector)))
        size = (len(m_vector) + 1) // 2
        points = np.concatenate(([a], a + np.cumsum(m_vector))).tolist()
        return cls([(points[lower(i, size)], points[upper(i, size)])
                    for i in range(1, size + 1)])

    @classmethod
    def basic(cls, n_edges):
        """The basic lace ``{(0, 2), (1, 4), (3, 6), .., (2N - 3, 2N - 1)}``."""
        n_edges = _Validators.check_int('N', n_edges, minimum=1)
        return cls.from_m([1] * (2 * n_edges - 1))

    @property
    def edges(self):
        return self._edges

    @property
    def m(self):
        return self._m

    @property
    def points(self):
        """Sorted endpoints ``s_1 < s_2 < t_1 <= s_3 < t_2 <= ... < t_N``."""
        return self._points

    @property
    def a(self):
        return self._points[0]

    @property
    def b(self):
        return self._points[-1]

    def __len__(self):
        return len(self._edges)

    def __eq__(self, other):
        if not isinstance(other, Lace):
            return NotImplemented
        return self._edges == other.edges

    def __hash__(self):
        return hash(self._edges)

    def __repr__(self):
        return 'Lace({0})'.format([tuple(edge) for edge in self._edges])

    def graph(self):
        return Graph(self.a, self.b, self._edges)

    def segments(self):
        """Consecutive endpoint pairs ``(p_{i-1}, p_i)`` of the sorted endpoints."""
        return list(zip(self._points, self._points[1:]))

    def to_dict(self):
        return {'N': len(self), 'm': list(self._m), 'edges': [list(edge) for edge in self._edges]}


def is_connected(graph):
    """Lace-expansion connectivity of a graph on ``[a, b]``.

    True when ``a`` and ``b`` are edge endpoints and every integer ``c`` with ``a < c < b`` has
    an edge ``st`` with ``s < c < t``.
    """
    a, b = graph.a, graph.b
    if not any(edge.s == a for edge in graph) or not any(edge.t == b for edge in graph):
        return False
    return all(any(edge.s < c < edge.t for edge in graph) for c in range(a + 1, b))


def lace_of(graph):
    """Extracts the lace of a connected graph.

    ``t_1 = max{t: at in G}`` and ``s_1 = a``; then ``t_{i+1} = max{t: st in G for some
    s < t_i}`` and ``s_{i+1} = min{s: s t_{i+1} in G}`` until ``t_N = b``.

    Raises:
        InvalidArgumentError: If the graph is not connected.
    """
    if not is_connected(graph):
        raise exceptions.InvalidArgumentError('lace_of: {0!r} is not connected.'.format(graph))
    edges = graph.edges
    t_cur = max(edge.t for edge in edges if edge.s == graph.a)
    lace = [(graph.a, t_cur)]
    while t_cur < graph.b:
        t_next = max(edge.t for edge in edges if edge.s < t_cur)
        s_next = min(edge.s for edge in edges if edge.t == t_next)
        lace.append((s_next, t_next))
        t_cur = t_next
    return Lace(lace)


def compatible_edges(lace):
    """All edges ``st`` on the lace interval, outside the lace, with ``lace_of(lace + st) ==
    lace``."""
    graph = lace.graph()
    return tuple(edge for edge in interval_edges(lace.a, lace.b)
                 if edge not in graph and lace_of(graph.with_edge(edge)) == lace)


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_laces(n_edges, n):
    """All laces with ``N`` edges on ``[0, n]``, ordered lexicographically by m-vector.

    Returns an empty list when no such lace exists.
    """
    try:
        n_edges = _Validators.check_int('N', n_edges, minimum=1)
        n = _Validators.check_int('n', n, minimum=1)
    except ValueError as error:
        raise _utils.handle_value_error(error, 'enumerate_laces')
    bounds = lower_bounds(n_edges)
    spare = n - sum(bounds)
    if spare < 0:
        return []
    return [Lace.from_m([bound + extra for bound, extra in zip(bounds, extras)])
            for extras in _compositions(spare, len(bounds))]


def all_laces(n):
    """Every lace on ``[0, n]``, grouped by increasing number of edges."""
    laces = []
    for n_edges in range(1, n + 1):
        laces.extend(enumerate_laces(n_edges, n))
    return laces


def _as_path(path):
    path = np.asarray(path, dtype=float)
    if path.ndim == 1:
        path = path[:, np.newaxis]
    return path


def close_pairs(path, rho, a=0, b=None):
    """Boolean ``U_st`` for every edge of ``[a, b]`` (canonical order) along one path."""
    path = _as_path(path)
    b = path.shape[0] - 1 if b is None else b
    edges = interval_edges(a, b)
    s_index = np.array([edge.s for edge in edges], dtype=int)
    t_index = np.array([edge.t for edge in edges], dtype=int)
    return np.linalg.norm(path[t_index] - path[s_index], axis=-1) <= rho


def close_pairs_batch(paths, rho, n):
    """``U`` for a stack of paths of shape ``(P, n + 1, d)``; returns a ``(P, E)`` array."""
    edges = interval_edges(0, n)
    s_index = np.array([edge.s for edge in edges], dtype=int)
    t_index = np.array([edge.t for edge in edges], dtype=int)
    return np.linalg.norm(paths[:, t_index] - paths[:, s_index], axis=-1) <= rho


def k_weight(path, a, b, lam, rho):
    """``K[a, b] = prod_{a <= i < j <= b} (1 - lam 1{|x_j - x_i| <= rho})``.

    ``K[a, a] = 1``.
    """
    if b <= a:
        return 1.0
    count = int(np.count_nonzero(close_pairs(path, rho, a, b)))
    return (1.0 - lam) ** count


def _mask_values(mask, count):
    return np.array([mask >> index & 1 for index in range(count)], dtype=bool)


@functools.lru_cache(maxsize=None)
def _popcounts(n_edges):
    masks = np.arange(1 << n_edges, dtype=np.int64)
    counts = np.zeros(masks.size, dtype=np.int64)
    for index in range(n_edges):
        counts += (masks >> index) & 1
    return counts


@functools.lru_cache(maxsize=None)
def _connected_masks(n):
    """Masks of all connected graphs on ``[0, n]``."""
    edges = interval_edges(0, n)
    masks = np.arange(1 << len(edges), dtype=np.int64)

    def cover(predicate):
        return sum(1 << index for index, edge in enumerate(edges) if predicate(edge))

    keep = (masks & cover(lambda edge: edge.s == 0)) != 0
    keep &= (masks & cover(lambda edge: edge.t == n)) != 0
    for c in range(1, n):
        keep &= (masks & cover(lambda edge, c=c: edge.s < c < edge.t)) != 0
    return masks[keep]


def _graph_sum(masks, counts, close_mask, lam):
    inside = masks[(masks & ~close_mask) == 0]
    histogram = np.bincount(counts[inside], minlength=1)
    powers = (-lam) ** np.arange(histogram.size)
    return float(np.dot(histogram, powers))


def _close_mask(path, rho, n):
    flags = close_pairs(path, rho, 0, n)
    return int(sum(1 << index for index, flag in enumerate(flags) if flag))


@_utils.validated('j_weight_bruteforce')
def j_weight_bruteforce(path, n, lam, rho):
    """``J[0, n]`` as the sum of ``prod (-lam U_st)`` over every connected graph on ``[0, n]``.

    Raises:
        InvalidArgumentError: If ``n > 6``.
    """
    n = _Validators.check_int('n', n, minimum=1, maximum=MAX_BRUTEFORCE_J)
    masks = _connected_masks(n)
    counts = _popcounts(len(interval_edges(0, n)))
    return _graph_sum(masks, counts, _close_mask(path, rho, n), lam)


@_utils.validated('k_weight_bruteforce')
def k_weight_bruteforce(path, n, lam, rho):
    """``K[0, n]`` expanded over all graphs on ``[0, n]``; limited to ``n <= 4``."""
    n = _Validators.check_int('n', n, minimum=1, maximum=MAX_BRUTEFORCE_K)
    n_edges = len(interval_edges(0, n))
    masks = np.arange(1 << n_edges, dtype=np.int64)
    return _graph_sum(masks, _popcounts(n_edges), _close_mask(path, rho, n), lam)


class LaceTable:
    """Laces on ``[0, n]`` with their edges and compatible edges as index arrays.

    The index arrays refer to ``interval_edges(0, n)``, so ``J`` and its lace split can be
    evaluated for many paths at once from a close-pair matrix.
    """

    def __init__(self, n):
        self._n = _Validators.check_int('n', n, minimum=1)
        positions = _edge_positions(0, self._n)
        self._laces = all_laces(self._n)
        self._lace_index = []
        self._compatible_index = []
        for lace in self._laces:
            self._lace_index.append(np.array([positions[e] for e in lace.edges], dtype=int))
            self._compatible_index.append(
                np.array([positions[e] for e in compatible_edges(lace)], dtype=int))
        _logger.debug('Lace table for n=%d: %d laces.', self._n, len(self._laces))

    @property
    def n(self):
        return self._n

    @property
    def laces(self):
        return self._laces

    def compatible_index(self, index):
        return self._compatible_index[index]

    def max_edges(self):
        return max(len(lace) for lace in self._laces)

    def j_by_lace_count(self, close, lam):
        """``J^{(N)}[0, n]`` for ``N = 1 .. max_edges`` as a ``(P, N_max)`` array.

        Args:
            close: Boolean close-pair matrix of shape ``(P, E)`` (or ``(E,)`` for one path).
            lam: Coupling constant.
        """
        close = np.atleast_2d(np.asarray(close, dtype=float))
        result = np.zeros((close.shape[0], self.max_edges()))
        for lace, lace_index, compat in zip(self._laces, self._lace_index,
                                            self._compatible_index):
            term = np.prod(close[:, lace_index], axis=1)
            if compat.size:
                term = term * np.prod(1.0 - lam * close[:, compat], axis=1)
            result[:, len(lace) - 1] += term
        return result

    def j_values(self, close, lam, max_edges=None):
        """``J[0, n] = sum_N (-lam)^N J^{(N)}[0, n]`` for every row of ``close``."""
        split = self.j_by_lace_count(close, lam)
        if max_edges is not None:
            split = split[:, :max_edges]
        powers = (-lam) ** np.arange(1, split.shape[1] + 1)
        return split @ powers


@functools.lru_cache(maxsize=16)
def lace_table(n):
    """Returns the cached ``LaceTable`` for ``[0, n]``."""
    return LaceTable(n)


def j_weight_lace(path, n, lam, rho, max_edges=None, by_lace_count=False):
    """``J[0, n]`` resummed over laces: ``sum_N (-lam)^N sum_l prod_{l} U prod_{C(l)} (1 - lam
    U)``.

    Args:
        path: Points ``x_0 .. x_n`` (at least ``n + 1`` rows).
        n: Interval length.
        lam: Coupling constant.
        rho: Interaction range.
        max_edges: Largest number of lace edges to include (optional; all by default).
        by_lace_count: Return the split ``J^{(N)}`` for ``N = 1, 2, ...`` instead of ``J``.
    """
    path = _as_path(path)[:n + 1]
    table = lace_table(n)
    close = close_pairs(path, rho, 0, n)
    if by_lace_count:
        return table.j_by_lace_count(close, lam)[0]
    return float(table.j_values(close, lam, max_edges)[0])


def check_recursion_identity(path, n, lam, rho):
    """Relative residual of ``K[0, n] = K[1, n] + sum_{m=1}^{n} J[0, m] K[m, n]`` on one path."""
    path = _as_path(path)
    total = k_weight(path, 0, n, lam, rho)
    rhs = k_weight(path, 1, n, lam, rho)
    for m in range(1, n + 1):
        rhs += j_weight_bruteforce(path[:m + 1], m, lam, rho) * k_weight(path, m, n, lam, rho)
    return abs(total - rhs) / max(1.0, abs(total))


@_utils.validated('connected_graph_census')
def connected_graph_census(n):
    """Counts connected graphs on ``[0, n]`` and the lace partition ``sum_l 2^{|C(l)|}``."""
    n = _Validators.check_int('n', n, minimum=1, maximum=MAX_BRUTEFORCE_J)
    table = lace_table(n)
    by_edges = collections.Counter(len(lace) for lace in table.laces)
    partition = sum(2 ** table.compatible_index(index).size
                    for index in range(len(table.laces)))
    return {
        'n': n,
        'connected_graphs': int(_connected_masks(n).size),
        'lace_partition': int(partition),
        'laces': len(table.laces),
        'laces_by_edges': {str(key): value for key, value in sorted(by_edges.items())},
    }


def phi_semigroup(dim):
    """The Gaussian family ``t -> phi_t`` as a mixture-valued callable."""
    return lambda t: _mixture.GaussianMixture.phi(t, dim)


def _resolve_family(G):
    if isinstance(G, gamma_family.MajorantFamily):
        def term(time):
            if time != int(time):
                raise ValueError('A majorant family is only defined at integer times.')
            return G.term(int(time))
        return term, G.dim
    if callable(G):
        return G, None
    raise ValueError('G must be a MajorantFamily or a callable returning mixtures.')


def _sample_mixture(gen, mix, count, dim):
    weights = mix.weights / np.sum(mix.weights)
    if weights.size == 1:
        scales = np.full(count, math.sqrt(mix.variances[0]))
    else:
        picks = gen.choice(weights.size, size=count, p=weights)
        scales = np.sqrt(mix.variances[picks])
    return gen.standard_normal((count, dim)) * scales[:, np.newaxis]


@_utils.validated('xi_mc')
def xi_mc(lace, G, rho, t_shift=None, n_samples=100000, seed=0, threads=1, dim=None):
    """Monte Carlo estimate of ``int Xi_l(G, rho)(x) dx``.

    The chain ``x_0 = 0``, ``x_i = x_{i-1} + xi_i`` is sampled with ``xi_i`` drawn from the
    normalized ``G_{m_i + t_i}`` (``G_0`` is the point mass, which collapses the step). The
    estimate is the product of the masses of the ``G`` factors times the mean of
    ``prod_i 1{|x_{upper(i)} - x_{lower(i)}| <= rho}``.

    Args:
        lace: A ``Lace`` with at most 3 edges.
        G: A positive ``MajorantFamily`` or a callable ``t -> GaussianMixture``.
        rho: Interaction range.
        t_shift: Shifts ``t_1 .. t_{2N-1}`` added to the interdistances (optional).
        n_samples: Number of samples.
        seed: Stream seed.
        threads: Worker threads (does not change the result).
        dim: Dimension, required when ``G`` is a callable.

    Returns:
        McEstimate: The estimate.
    """
    if not isinstance(lace, Lace):
        raise ValueError('xi_mc expects a Lace.')
    size = len(lace)
    if size > MAX_XI_EDGES:
        raise ValueError('xi_mc supports laces with at most {0} edges; got {1}.'.format(
            MAX_XI_EDGES, size))
    rho = _Validators.check_positive_number('rho', rho)
    n_samples = _Validators.check_int('n_samples', n_samples, minimum=2)
    seed = _Validators.check_int('seed', seed, minimum=0, maximum=_sampling.MAX_SEED)
    family, family_dim = _resolve_family(G)
    dim = family_dim if family_dim is not None else _Validators.check_int('dim', dim, minimum=1)
    steps = len(lace.m)
    shifts = np.zeros(steps) if t_shift is None else _Validators.check_number_list(
        't_shift', t_shift, steps)
    if np.any(shifts < 0):
        raise ValueError('t_shift entries must be non-negative.')
    times = np.asarray(lace.m, dtype=float) + shifts
    mixtures = [family(time) if time > 0 else None for time in times]
    for mix in mixtures:
        if mix is not None and not mix.is_positive:
            raise ValueError('xi_mc requires positive mixtures.')
    mass = math.prod(mix.mass() for mix in mixtures if mix is not None)
    pairs = [(lower(i, size), upper(i, size)) for i in range(1, size + 1)]

    def sample(gen, count, block):
        del block
        positions = [np.zeros((count, dim))]
        for mix in mixtures:
            if mix is None:
                positions.append(positions[-1])
            else:
                positions.append(positions[-1] + _sample_mixture(gen, mix, count, dim))
        inside = np.ones(count, dtype=bool)
        for low, high in pairs:
            inside &= np.linalg.norm(positions[high] - positions[low], axis=1) <= rho
        return _sampling.Moments.of(inside.astype(float))

    moments = _sampling.Moments.merge_all(_sampling.run_blocks(sample, n_samples, seed, threads))
    return _sampling.McEstimate(float(mass * moments.mean()), float(mass * moments.stderr()),
                                n_samples)
