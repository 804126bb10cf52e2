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

"""Internal utilities common to all modules."""

import functools

from lacelab import exceptions


EXIT_OK = 0
EXIT_UNKNOWN = 1

_ERROR_CODE_TO_EXIT_CODE = {
    exceptions.INVALID_ARGUMENT: 2,
    exceptions.FAILED_PRECONDITION: 2,
    exceptions.TRUNCATION: 2,
    exceptions.NON_CONVERGENCE: 3,
    exceptions.STATISTICAL_FAILURE: 4,
}


def exit_code_for(error):
    """Maps a ``LabError`` to the process exit status used by the command-line front end.

    Args:
        error: An exception raised by a lacelab operation.

    Returns:
        int: The exit status. Errors that are not ``LabError`` instances map to 1.
    """
    if not isinstance(error, exceptions.LabError):
        return EXIT_UNKNOWN
    return _ERROR_CODE_TO_EXIT_CODE.get(error.code, EXIT_UNKNOWN)


def handle_value_error(error, label=None):
    """Constructs an ``InvalidArgumentError`` from a validator ``ValueError``.

    Args:
        error: The ``ValueError`` raised by a validator.
        label: Name of the operation that rejected its input (optional).

    Returns:
        InvalidArgumentError: An error that can be raised to the caller.
    """
    message = str(error)
    if label:
        message = '{0}: {1}'.format(label, message)
    return exceptions.InvalidArgumentError(message, cause=error)


def validated(label):
    """Decorator that turns validator ``ValueErrors`` into ``InvalidArgumentErrors``."""
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except exceptions.LabError:
                raise
            except ValueError as error:
                raise handle_value_error(error, label)
        return wrapper
    return decorator
