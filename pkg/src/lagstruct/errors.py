"""Exception classes raised by lagstruct.

The three broad families map onto the command-line exit codes: problems
with the supplied data, numerical failures, and configuration problems.
"""

# Copyright 2026, lagstruct developers.
#
# SPDX-License-Identifier: Apache-2.0
#
# Reuse is permitted under the terms of the license.
# The AUTHORS file and the LICENSE file are at the
# top level of this library.


class LagStructError(Exception):
    """Base class for lagstruct errors."""


class DataError(LagStructError, ValueError):
    """The supplied data cannot be used as given."""


class NumericalError(LagStructError, ArithmeticError):
    """A numerical procedure failed or produced an inconsistent result."""


class ConfigError(LagStructError, ValueError):
    """A configuration file or flag is invalid."""


class DegenerateWindowError(DataError):
    """A window has zero variance and cannot be standardized."""


class InsufficientOverlapError(DataError):
    """Too few points remain after shifting one series against another."""


class InsufficientDataError(DataError):
    """The panel is too short for the requested window."""


class ColumnNotFoundError(DataError, KeyError):
    """A requested column is not in the panel."""

    def __str__(self):
        # KeyError would otherwise wrap the message in quotes.
        return str(self.args[0]) if self.args else ""


class ParseError(DataError):
    def __init__(self, message: str, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class OrderError(DataError):
    """Timestamps are not increasing."""


class DuplicateTimestampError(DataError):
    """A timestamp appears more than once."""


class MissingValueError(DataError):
    """A selected column has a missing value and the policy forbids it."""


class IntegrationError(NumericalError):
    """The Painleve II integration diverged or failed."""


class ConsistencyError(NumericalError):
    """A computed table violates one of its own invariants."""


class SamplingError(NumericalError):
    """Too many Monte-Carlo replications failed."""


class SingularDesignError(NumericalError):
    """A regression design matrix is rank deficient."""


class DegenerateModelError(NumericalError):
    """A fitted model has no residual variance."""
