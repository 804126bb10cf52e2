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

from lacelab import exceptions
from lacelab import gamma_family
from lacelab import sequence_core
from lacelab import solver


def solve_scalar_recursion():
    # [START solve_scalar_recursion]
    # Power-law interaction B_n = -n^{-2.5} phi_{n/2} in five dimensions.
    family = gamma_family.family_from_preset('power-law', 5, a=2.5)
    scalars = sequence_core.BScalars.from_family(family, 0.02, 256)

    sol = sequence_core.solve(scalars)
    print('mu = {0:.12f}, delta = {1:.12f}'.format(sol.mu, sol.delta))
    print('alpha = {0:.12f} after {1} iterations'.format(sol.alpha, sol.iterations))
    # [END solve_scalar_recursion]


def check_majorant():
    # [START check_majorant]
    report = gamma_family.condition_report(gamma_family.PowerLaw(2.5, 5), 64)
    if report.passed:
        print('Fitted constants:', report.to_dict())
    else:
        print('Violated conditions:', ', '.join(report.violations))
    # [END check_majorant]


def verify_clt():
    # [START verify_clt]
    family = gamma_family.power_law_family(2.5, 5)
    cfg = solver.SolverConfig(5, 0.02, 64, family)
    run = solver.run_recursion(cfg)

    for n, ratio in solver.ratio_report(run, [8, 16, 32, 64]).items():
        print('n = {0:3d}: sup error / bound = {1:.4e}'.format(n, ratio))
    # [END verify_clt]


def handle_errors():
    # [START handle_errors]
    # lam |b_1| >= 1 has no solution.
    try:
        sequence_core.BScalars(0.5, [2.0], [0.0])
    except exceptions.InvalidArgumentError as error:
        print('Rejected ({0}): {1}'.format(error.code, error))
    # [END handle_errors]
