#  Copyright 2026-     GenericBellLibrary Developers
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.


class GenericBellException(RuntimeError):
    """Base class for errors raised by GenericBellLibrary."""
    exit_code = 1


class ValidationError(GenericBellException, ValueError):
    """Raised when an argument violates an operation's precondition."""
    exit_code = 2


class CapacityError(GenericBellException):
    """Raised when a computation would exceed a fixed capacity.

    Examples are phase orders beyond the 64-bit range and congruence
    systems with more constraints than subset enumeration allows.
    """
    exit_code = 2


class DenseSizeError(CapacityError):
    """Raised when a dense Hilbert-space object would exceed the dense cap."""


class BudgetExceeded(GenericBellException):
    """Raised when exhaustive search would exceed the assignment budget."""
    exit_code = 4


class OracleDisagreement(GenericBellException):
    """Raised when two exact methods return different answers.

    This always indicates a bug.
    """
    exit_code = 3
