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

"""Numerical laboratory for convolution equations and weakly self-avoiding Gaussian walks.

The package solves the scalar renewal recursion ``c_n`` and its normalization
(:mod:`lacelab.sequence_core`), houses Gaussian-mixture majorant families and their
B1-B4 diagnostics (:mod:`lacelab.gamma_family`), runs the convolution recursion in radial
frequency space (:mod:`lacelab.spectral`, :mod:`lacelab.solver`), implements the exact
lace-expansion combinatorics (:mod:`lacelab.lace_engine`) and estimates the walk
quantities by Monte Carlo (:mod:`lacelab.saw_mc`). :mod:`lacelab.cli` drives all of them.
"""
import logging

from lacelab.__about__ import __version__


logging.getLogger(__name__).addHandler(logging.NullHandler())
