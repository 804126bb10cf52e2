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

"""Setup file for distribution artifacts."""
from os import path
import sys

from setuptools import setup


(major, minor) = (sys.version_info.major, sys.version_info.minor)
if major != 3 or minor < 8:
    print('lacelab requires python >= 3.8', file=sys.stderr)
    sys.exit(1)

# Read in the package metadata per recommendations from:
# https://packaging.python.org/guides/single-sourcing-package-version/
about_path = path.join(path.dirname(path.abspath(__file__)), 'lacelab', '__about__.py')
about = {}
with open(about_path) as fp:
    exec(fp.read(), about)  # pylint: disable=exec-used


long_description = ('lacelab solves convolution recursions of the lace-expansion type in '
                    'radial frequency space, checks the lace combinatorics exactly and '
                    'estimates weakly self-avoiding Gaussian walk quantities by Monte Carlo.')
install_requires = [
    'numpy >= 1.22',
    'scipy >= 1.8',
]

setup(
    name=about['__title__'],
    version=about['__version__'],
    description='Convolution recursions and weakly self-avoiding walks',
    long_description=long_description,
    author=about['__author__'],
    license=about['__license__'],
    keywords='lace expansion self-avoiding walk central limit theorem',
    install_requires=install_requires,
    packages=['lacelab'],
    entry_points={
        'console_scripts': ['lacelab = lacelab.cli:main'],
    },
    python_requires='>=3.8',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'License :: OSI Approved :: Apache Software License',
    ],
)
