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

"""Tests for lacelab._encoder."""
import dataclasses
import json

import numpy as np
import pytest

from lacelab import _encoder


_Validators = _encoder._Validators


class TestValidators:

    @pytest.mark.parametrize('value', [None, '1', True, float('nan'), float('inf'), [1.0]])
    def test_check_number_rejects(self, value):
        with pytest.raises(ValueError):
            _Validators.check_number('x', value)

    @pytest.mark.parametrize('value', [1, 1.5, np.float64(2.0), np.int32(3)])
    def test_check_number_accepts(self, value):
        assert _Validators.check_number('x', value) == float(value)

    @pytest.mark.parametrize('value, low_open, high_open', [
        (0.0, True, False),
        (1.0, False, True),
        (-0.1, False, False),
        (1.1, False, False),
    ])
    def test_check_number_range_rejects(self, value, low_open, high_open):
        with pytest.raises(ValueError) as excinfo:
            _Validators.check_number_range('lam', value, 0.0, 1.0, low_open, high_open)
        assert str(excinfo.value).startswith('lam must be in the range')

    def test_check_number_range_accepts_bounds(self):
        assert _Validators.check_number_range('lam', 0.0, 0.0, 1.0) == 0.0
        assert _Validators.check_number_range('lam', 1.0, 0.0, 1.0) == 1.0

    @pytest.mark.parametrize('value', [1.0, '2', True, None])
    def test_check_int_rejects(self, value):
        with pytest.raises(ValueError):
            _Validators.check_int('n', value)

    def test_check_int_bounds(self):
        assert _Validators.check_int('n', np.int64(4), minimum=1, maximum=4) == 4
        with pytest.raises(ValueError):
            _Validators.check_int('n', 0, minimum=1)
        with pytest.raises(ValueError):
            _Validators.check_int('n', 5, maximum=4)

    @pytest.mark.parametrize('dim', [3, 5, 7, 9])
    def test_check_odd_dim(self, dim):
        assert _Validators.check_odd_dim('dim', dim) == dim

    @pytest.mark.parametrize('dim', [1, 2, 4, 11])
    def test_check_odd_dim_rejects(self, dim):
        with pytest.raises(ValueError):
            _Validators.check_odd_dim('dim', dim)

    def test_check_number_list(self):
        assert list(_Validators.check_number_list('k', [0, 1.5])) == [0.0, 1.5]

    @pytest.mark.parametrize('value', [[[1.0]], ['a'], [float('nan')], 3.0])
    def test_check_number_list_rejects(self, value):
        with pytest.raises(ValueError):
            _Validators.check_number_list('k', value)

    def test_check_number_list_length(self):
        with pytest.raises(ValueError):
            _Validators.check_number_list('k', [1.0, 2.0], length=3)

    def test_check_keys(self):
        assert _Validators.check_keys('config', {'a': 1}, ['a', 'b']) == {'a': 1}

    def test_check_keys_rejects_unknown(self):
        with pytest.raises(ValueError) as excinfo:
            _Validators.check_keys('config', {'a': 1, 'z': 2, 'y': 3}, ['a'])
        assert str(excinfo.value) == 'config contains unknown keys: y, z.'

    def test_check_keys_rejects_non_dict(self):
        with pytest.raises(ValueError):
            _Validators.check_keys('config', [1], ['a'])


@dataclasses.dataclass
class _Record:
    name: str
    values: np.ndarray


class _WithDict:

    def to_dict(self):
        return {'kind': 'custom'}


class TestEncoding:

    def test_numpy_values(self):
        text = _encoder.dumps({'b': np.arange(3), 'a': np.float64(0.5), 'c': np.int64(2),
                               'd': np.bool_(True)})
        assert json.loads(text) == {'a': 0.5, 'b': [0, 1, 2], 'c': 2, 'd': True}
        assert text.index('"a"') < text.index('"b"')

    def test_dataclass_and_to_dict(self):
        text = _encoder.dumps([_Record('x', np.array([1.0])), _WithDict()])
        assert json.loads(text) == [{'name': 'x', 'values': [1.0]}, {'kind': 'custom'}]

    def test_unsupported(self):
        with pytest.raises(TypeError):
            _encoder.dumps(object())

    def test_deterministic(self):
        value = {'z': np.linspace(0.0, 1.0, 5), 'a': 1}
        assert _encoder.dumps(value) == _encoder.dumps(dict(reversed(list(value.items()))))

    @pytest.mark.parametrize('value', [0.1, 1.0 / 3.0, -2.5e-300, 12345.678])
    def test_format_float_is_lossless(self, value):
        text = _encoder.format_float(value)
        assert float(text) == value
        assert 'e' in text
