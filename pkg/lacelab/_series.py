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

"""Helpers for truncated series: tail estimates, growth detection and log-log slopes."""

import math

import numpy as np


DIVERGENCE_SLOPE = 0.25


def tail_estimate(terms):
    """Estimates ``sum_{j > M} a_j`` from the first ``M`` terms of a series.

    The magnitudes are modeled as ``C j^{-p}`` using the terms at ``M`` and ``M // 2``. When
    ``p > 1`` the tail is approximately ``|a_M| M / (p - 1)``; otherwise the series is treated as
    divergent and ``inf`` is returned. Short or degenerate inputs fall back to the magnitude of
    the last term.

    Args:
        terms: Sequence of the series terms ``a_1 .. a_M``.

    Returns:
        float: A non-negative tail estimate.
    """
    mags = np.abs(np.asarray(terms, dtype=float))
    size = mags.size
    if size == 0:
        return 0.0
    last = mags[-1]
    if last == 0.0:
        return 0.0
    half = mags[size // 2 - 1] if size >= 4 else 0.0
    if half <= 0.0:
        return float(last)
    power = math.log(half / last) / math.log(size / (size // 2))
    if power <= 1.0:
        return math.inf
    return float(last * size / (power - 1.0))


def suffix_sums(terms, tail=0.0):
    """Returns ``s_n = sum_{j >= n} a_j + tail`` for every index ``n`` of ``terms``."""
    terms = np.asarray(terms, dtype=float)
    return np.cumsum(terms[::-1])[::-1] + tail


def growth_exponent(partial_sums):
    """Log-log growth rate of a positive sequence over the last halving of its index range."""
    values = np.asarray(partial_sums, dtype=float)
    size = values.size
    if size < 2:
        return 0.0
    first = values[size // 2 - 1]
    last = values[-1]
    if first <= 0.0 or last <= 0.0:
        return math.inf if last > first else 0.0
    return math.log(last / first) / math.log(size / (size // 2))


def diverges(partial_sums, threshold=DIVERGENCE_SLOPE):
    """Flags a sequence of partial sums that still grows like a power of ``n``."""
    return growth_exponent(partial_sums) > threshold


def loglog_slope(x, y):
    """Least-squares slope of ``log y`` against ``log x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slope, _ = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope)
