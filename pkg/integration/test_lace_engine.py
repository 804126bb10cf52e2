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

"""Acceptance runs for lacelab.lace_engine on sampled walks."""
import pytest

from lacelab import lace_engine
from lacelab import saw_mc


def _paths(count, n, dim, seed):
    params = saw_mc.SawParams(dim, 0.0, 1.0, n, seed=seed, n_samples=count)
    return [path for _, block in saw_mc.sample_paths(params) for path in block]


@pytest.fixture(scope='module')
def paths():
    return _paths(100, 5, 3, seed=2024)


class TestIdentities:

    @pytest.mark.parametrize('lam', [0.3, 1.0])
    def test_recursion(self, paths, lam):
        worst = max(lace_engine.check_recursion_identity(path, 5, lam, 1.0) for path in paths)
        assert worst < 1e-12

    @pytest.mark.parametrize('lam', [0.3, 1.0])
    def test_lace_resummation(self, paths, lam):
        for path in paths:
            brute = lace_engine.j_weight_bruteforce(path, 5, lam, 1.0)
            assert lace_engine.j_weight_lace(path, 5, lam, 1.0) == pytest.approx(
                brute, rel=1e-12, abs=1e-12)

    def test_census(self):
        census = lace_engine.connected_graph_census(4)
        assert census['connected_graphs'] == census['lace_partition']
