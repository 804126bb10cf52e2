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

"""Encoding and validation utils shared by the lacelab modules."""

import dataclasses
import json
import math
import numbers

import numpy as np


SUPPORTED_DIMS = (3, 5, 7, 9)


class _Validators:
    """A collection of data validation utilities.

    Methods provided in this class raise ``ValueErrors`` if any validations fail.
    """

    @classmethod
    def check_number(cls, label, value):
        """Checks if the given value is a finite real number."""
        if isinstance(value, bool) or not isinstance(value, numbers.Real):
            raise ValueError('{0} must be a number.'.format(label))
        if not math.isfinite(value):
            raise ValueError('{0} must be finite.'.format(label))
        return float(value)

    @classmethod
    def check_positive_number(cls, label, value):
        value = cls.check_number(label, value)
        if value <= 0:
            raise ValueError('{0} must be positive.'.format(label))
        return value

    @classmethod
    def check_non_negative_number(cls, label, value):
        value = cls.check_number(label, value)
        if value < 0:
            raise ValueError('{0} must be non-negative.'.format(label))
        return value

    @classmethod
    def check_number_range(cls, label, value, low, high, low_open=False, high_open=False):
        """Checks if the given value is a number in the interval between low and high."""
        value = cls.check_number(label, value)
        below = value <= low if low_open else value < low
        above = value >= high if high_open else value > high
        if below or above:
            raise ValueError('{0} must be in the range {1}{2}, {3}{4}.'.format(
                label, '(' if low_open else '[', low, high, ')' if high_open else ']'))
        return value

    @classmethod
    def check_int(cls, label, value, minimum=None, maximum=None):
        """Checks if the given value is an integer within the optional bounds."""
        if isinstance(value, bool) or not isinstance(value, numbers.Integral):
            raise ValueError('{0} must be an integer.'.format(label))
        value = int(value)
        if minimum is not None and value < minimum:
            raise ValueError('{0} must be at least {1}.'.format(label, minimum))
        if maximum is not None and value > maximum:
            raise ValueError('{0} must be at most {1}.'.format(label, maximum))
        return value

    @classmethod
    def check_odd_dim(cls, label, value):
        """Checks if the given value is one of the supported odd dimensions."""
        value = cls.check_int(label, value)
        if value not in SUPPORTED_DIMS:
            raise ValueError('{0} must be one of {1}; got {2}.'.format(
                label, ', '.join(str(dim) for dim in SUPPORTED_DIMS), value))
        return value

    @classmethod
    def check_number_list(cls, label, value, length=None):
        """Checks if the given value is a one-dimensional sequence of finite numbers."""
        try:
            arr = np.asarray(value, dtype=float)
        except (TypeError, ValueError):
            raise ValueError('{0} must be a sequence of numbers.'.format(label))
        if arr.ndim != 1:
            raise ValueError('{0} must be a one-dimensional sequence.'.format(label))
        if not np.all(np.isfinite(arr)):
            raise ValueError('{0} must contain only finite numbers.'.format(label))
        if length is not None and arr.size != length:
            raise ValueError('{0} must have length {1}; got {2}.'.format(label, length, arr.size))
        return arr

    @classmethod
    def check_keys(cls, label, value, valid_keys):
        """Checks that a configuration dictionary only contains known keys."""
        if not isinstance(value, dict):
            raise ValueError('{0} must be a dictionary.'.format(label))
        unknown = sorted(set(value) - set(valid_keys))
        if unknown:
            raise ValueError('{0} contains unknown keys: {1}.'.format(label, ', '.join(unknown)))
        return value


class ResultEncoder(json.JSONEncoder):
    """JSON encoder for lacelab result objects.

    Handles numpy scalars and arrays, dataclasses and any object exposing a ``to_dict()``
    method.
    """

    def default(self, o): # pylint: disable=method-hidden
        if hasattr(o, 'to_dict'):
            return o.to_dict()
        if dataclasses.is_dataclass(o) and not isinstance(o, type):
            return {f.name: getattr(o, f.name) for f in dataclasses.fields(o)}
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.bool_):
            return bool(o)
        return json.JSONEncoder.default(self, o)


def dumps(value):
    """Serializes a result object into a deterministic JSON string."""
    return json.dumps(value, cls=ResultEncoder, sort_keys=True, indent=2)


def format_float(value):
    """Formats a float losslessly in scientific notation (17 significant digits)."""
    return '{0:.16e}'.format(float(value))
