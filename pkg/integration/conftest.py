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

"""pytest configuration and global fixtures for the acceptance runs."""
import pytest

from lacelab import gamma_family
from lacelab import solver


def pytest_addoption(parser):
    parser.addoption(
        '--samples', action='store', type=int, default=1000000,
        help='Number of Monte Carlo paths per estimate.')
    parser.addoption(
        '--n-max-clt', action='store', type=int, default=128,
        help='Largest step count of the convolution solver runs.')


@pytest.fixture(scope='session')
def samples(request):
    value = request.config.getoption('--samples')
    if value < 1000:
        raise ValueError('At least 1000 samples are needed; got "--samples {0}".'.format(value))
    return value


@pytest.fixture(scope='session')
def n_max_clt(request):
    value = request.config.getoption('--n-max-clt')
    if value < 32:
        raise ValueError('"--n-max-clt" must be at least 32; got {0}.'.format(value))
    return value


@pytest.fixture(scope='session')
def power_law_run(n_max_clt):
    """Solver run for the power-law preset (a = 2.5, d = 5, lam = 0.02), shared by the module
    tests that only read from it."""
    family = gamma_family.power_law_family(2.5, 5)
    return solver.run_recursion(solver.SolverConfig(5, 0.02, n_max_clt, family))
