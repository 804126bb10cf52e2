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

import numpy as np

from lacelab import lace_engine
from lacelab import saw_mc


def estimate_masses():
    # [START estimate_masses]
    params = saw_mc.SawParams(dim=5, lam=0.1, rho=1.0, n=6, seed=42, n_samples=200000,
                              threads=4)

    # All c_n come from the same paths; the thread count never changes the result.
    for n, estimate in enumerate(saw_mc.estimate_cn_sequence(params)):
        print('c_{0} = {1:.6f} +/- {2:.1e}'.format(n, estimate.mean, estimate.stderr))
    # [END estimate_masses]


def endpoint_density():
    # [START endpoint_density]
    params = saw_mc.SawParams(dim=5, lam=0.1, rho=1.0, n=8, seed=1, n_samples=200000)
    profile = saw_mc.estimate_endpoint_density(params, np.linspace(0.5, 8.0, 16))
    print('bandwidth = {0:.4f}'.format(profile.bandwidth))
    for radius, estimate in zip(profile.nodes, profile):
        print('{0:5.2f}  {1:.4e} +/- {2:.1e}'.format(radius, estimate.mean, estimate.stderr))
    # [END endpoint_density]


def cross_check():
    # [START cross_check]
    params = saw_mc.SawParams(dim=5, lam=0.1, rho=1.0, n=5, seed=7, n_samples=100000)
    report = saw_mc.cross_check_recursion(params, 5)
    print('max |z| = {0:.3f}, delta = {1:.6f}'.format(report.max_abs_z, report.delta))
    report.raise_for_failure()
    # [END cross_check]


def laces():
    # [START laces]
    for lace in lace_engine.enumerate_laces(2, 4):
        print(lace.edges, 'compatible:', lace_engine.compatible_edges(lace))
    # [END laces]
