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

"""Counter-based random streams and mergeable Monte Carlo accumulators.

Samples are grouped in fixed-size blocks. Block ``j`` of a run with seed ``s`` always draws from
a Philox generator keyed by ``(j, s)``, so the values of every sample depend only on the seed and
the sample index. Blocks may be evaluated by any number of worker threads; their partial sums are
merged in block order, which keeps results bit-identical across thread counts.
"""

from concurrent import futures
import dataclasses
import logging
import math

import numpy as np


_logger = logging.getLogger(__name__)

BLOCK_SIZE = 8192
MAX_SEED = 2 ** 64 - 1


def block_generator(seed, block):
    """Returns the generator that owns sample block ``block`` of the stream ``seed``."""
    return np.random.Generator(np.random.Philox(key=(int(block) << 64) | int(seed)))


def block_sizes(n_samples, block_size=BLOCK_SIZE):
    """Lists the sample count of every block needed to cover ``n_samples``."""
    full, rest = divmod(n_samples, block_size)
    return [block_size] * full + ([rest] if rest else [])


def run_blocks(func, n_samples, seed, threads=1, block_size=BLOCK_SIZE):
    """Evaluates ``func(generator, count, block)`` on every block and returns results in order.

    Args:
        func: Callable evaluated once per block.
        n_samples: Total number of samples.
        seed: Stream seed (unsigned 64-bit integer).
        threads: Maximum number of worker threads. Does not affect the results.
        block_size: Number of samples per block.

    Returns:
        list: The per-block results, in block order.
    """
    sizes = block_sizes(n_samples, block_size)

    def work(block):
        return func(block_generator(seed, block), sizes[block], block)

    if threads <= 1 or len(sizes) <= 1:
        results = [work(block) for block in range(len(sizes))]
    else:
        with futures.ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(work, range(len(sizes))))
    _logger.debug('Evaluated %d sample blocks (seed=%d, threads=%d).', len(sizes), seed, threads)
    return results


class Moments:
    """Running first and second moments of a batch of vector-valued observations."""

    def __init__(self, total, total_sq, count):
        self._total = np.asarray(total, dtype=float)
        self._total_sq = np.asarray(total_sq, dtype=float)
        self._count = int(count)

    @classmethod
    def of(cls, values):
        """Accumulates observations stacked along axis 0."""
        values = np.asarray(values, dtype=float)
        return cls(values.sum(axis=0), (values * values).sum(axis=0), values.shape[0])

    @classmethod
    def merge_all(cls, parts):
        parts = list(parts)
        total = parts[0].total.copy()
        total_sq = parts[0].total_sq.copy()
        count = parts[0].count
        for part in parts[1:]:
            total = total + part.total
            total_sq = total_sq + part.total_sq
            count += part.count
        return cls(total, total_sq, count)

    @property
    def total(self):
        return self._total

    @property
    def total_sq(self):
        return self._total_sq

    @property
    def count(self):
        return self._count

    def mean(self):
        return self._total / self._count

    def stderr(self):
        """Standard error of the mean, using the unbiased sample variance."""
        mean = self.mean()
        if self._count < 2:
            return np.zeros_like(mean)
        var = (self._total_sq - self._count * mean * mean) / (self._count - 1)
        return np.sqrt(np.maximum(var, 0.0) / self._count)


@dataclasses.dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo estimate: mean, standard error and sample count."""

    mean: float
    stderr: float
    n_samples: int

    def z_score(self, reference):
        """Standardized distance to ``reference``; zero when both the gap and the error vanish."""
        gap = self.mean - reference
        if self.stderr == 0.0:
            return 0.0 if gap == 0.0 else math.copysign(math.inf, gap)
        return gap / self.stderr

    def to_dict(self):
        return {'mean': self.mean, 'stderr': self.stderr, 'n_samples': self.n_samples}


@dataclasses.dataclass(frozen=True, eq=False)
class McProfile:
    """Monte Carlo estimates of an observable over a grid of nodes (radii or frequencies)."""

    nodes: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    n_samples: int
    bandwidth: float = None

    def __len__(self):
        return len(self.nodes)

    def __getitem__(self, index):
        return McEstimate(float(self.mean[index]), float(self.stderr[index]), self.n_samples)

    def to_dict(self):
        result = {
            'nodes': self.nodes,
            'mean': self.mean,
            'stderr': self.stderr,
            'n_samples': self.n_samples,
        }
        if self.bandwidth is not None:
            result['bandwidth'] = self.bandwidth
        return result


def batch_z_score(full, batches):
    """z-score of ``full`` against zero from the spread of independent batch values.

    Args:
        full: The statistic evaluated on all samples (scalar or array).
        batches: The same statistic evaluated on each batch, stacked along axis 0.

    Returns:
        The z-score(s); zero where both the statistic and the batch spread vanish.
    """
    full = np.asarray(full, dtype=float)
    batches = np.asarray(batches, dtype=float)
    count = batches.shape[0]
    spread = np.std(batches, axis=0, ddof=1) / math.sqrt(count)
    with np.errstate(divide='ignore', invalid='ignore'):
        z = np.where(spread > 0, full / np.where(spread > 0, spread, 1.0),
                     np.where(full == 0, 0.0, np.copysign(np.inf, full)))
    return z, spread
