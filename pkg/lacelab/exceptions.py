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

"""lacelab exceptions module.

This module defines the base type for exceptions and the error codes used across the
package.

:class:`LabError` is the parent class of all exceptions raised by lacelab operations. It
contains the ``code`` and ``cause`` properties common to all exception types. Each exception
also carries a message that outlines what went wrong.

Callers can catch the parent ``LabError`` and inspect its ``code`` to implement fine-grained
handling (the command-line front end maps codes to exit statuses). Alternatively, catch one or
more subtypes of ``LabError``.
"""


#: Error code for ``InvalidArgumentError`` type.
INVALID_ARGUMENT = 'INVALID_ARGUMENT'

#: Error code for ``FailedPreconditionError`` type.
FAILED_PRECONDITION = 'FAILED_PRECONDITION'

#: Error code for ``NonConvergenceError`` type.
NON_CONVERGENCE = 'NON_CONVERGENCE'

#: Error code for ``TruncationError`` type.
TRUNCATION = 'TRUNCATION'

#: Error code for ``StatisticalFailureError`` type.
STATISTICAL_FAILURE = 'STATISTICAL_FAILURE'

#: Error code for ``UnknownError`` type.
UNKNOWN = 'UNKNOWN'


class LabError(Exception):
    """Base class for all errors raised by lacelab.

    Args:
        code: A string error code that represents the type of the exception.
        message: A human-readable error message string.
        cause: The exception that caused this error (optional).
    """

    def __init__(self, code, message, cause=None):
        Exception.__init__(self, message)
        self._code = code
        self._cause = cause

    @property
    def code(self):
        return self._code

    @property
    def cause(self):
        return self._cause


class InvalidArgumentError(LabError):
    """Caller specified an invalid argument or violated an operation precondition."""

    def __init__(self, message, cause=None):
        LabError.__init__(self, INVALID_ARGUMENT, message, cause)


class FailedPreconditionError(LabError):
    """Operation cannot be executed for the given state, such as a degenerate normalization
    or a family without the data the operation needs."""

    def __init__(self, message, cause=None):
        LabError.__init__(self, FAILED_PRECONDITION, message, cause)


class NonConvergenceError(LabError):
    """A self-consistent iteration failed to contract."""

    def __init__(self, message, cause=None):
        LabError.__init__(self, NON_CONVERGENCE, message, cause)


class TruncationError(LabError):
    """A truncated series or quadrature is not safe at the configured cutoff."""

    def __init__(self, message, cause=None):
        LabError.__init__(self, TRUNCATION, message, cause)


class StatisticalFailureError(LabError):
    """A Monte Carlo cross-check disagrees beyond the hard statistical threshold."""

    def __init__(self, message, cause=None):
        LabError.__init__(self, STATISTICAL_FAILURE, message, cause)


class UnknownError(LabError):
    """Unknown error."""

    def __init__(self, message, cause=None):
        LabError.__init__(self, UNKNOWN, message, cause)
