"""Time series panel container.

A panel is T observations of M named series on a strictly increasing time
index.  Panels are validated on construction: the values are finite, and
the names and timestamps are unique, so the analysis modules never have to
deal with missing data.
"""

# Copyright 2026, lagstruct developers.
#
# SPDX-License-Identifier: Apache-2.0
#
# Reuse is permitted under the terms of the license.
# The AUTHORS file and the LICENSE file are at the
# top level of this library.

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from lagstruct.errors import (
    ColumnNotFoundError,
    DataError,
    DuplicateTimestampError,
    OrderError,
)


@dataclass(frozen=True)
class LoadReport:
    rows_read: int
    rows_dropped: int
    dropped_timestamps: Tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class TimeSeriesPanel:
    """
    A T by M matrix of *values*, with columns labelled by *names* and rows
    labelled by *timestamps*.

    The optional *report* records what happened when the panel was read
    from a file.
    """

    timestamps: pd.DatetimeIndex
    names: Tuple[str, ...]
    values: np.ndarray
    report: Optional[LoadReport] = field(default=None, compare=False)

    def __post_init__(self):
        timestamps = pd.DatetimeIndex(self.timestamps)
        names = tuple(str(n) for n in self.names)
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values.reshape(-1, 1)

        if values.shape != (len(timestamps), len(names)):
            raise ValueError(
                f"values has shape {values.shape}, but there are "
                f"{len(timestamps)} timestamps and {len(names)} names."
            )
        if len(set(names)) != len(names):
            raise DataError(f"Column names are not unique: {names}")
        if not timestamps.is_unique:
            dupes = timestamps[timestamps.duplicated()]
            raise DuplicateTimestampError(
                f"Duplicate timestamps, first is {dupes[0].isoformat()}."
            )
        if not timestamps.is_monotonic_increasing:
            raise OrderError("Timestamps are not in increasing order.")
        if not np.all(np.isfinite(values)):
            raise DataError("Panel values must be finite.")

        values.setflags(write=False)
        object.__setattr__(self, "timestamps", timestamps)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "values", values)

    @property
    def length(self) -> int:
        return self.values.shape[0]

    def column(self, name: str) -> np.ndarray:
        """Returns the values of the column *name*."""
        try:
            j = self.names.index(name)
        except ValueError:
            raise ColumnNotFoundError(
                f"Column {name!r} is not in the panel, which has {list(self.names)}."
            ) from None
        return self.values[:, j]

    def select(self, names: Sequence[str]) -> "TimeSeriesPanel":
        """Returns a panel with only the columns in *names*, in that order."""
        cols = [self.column(n) for n in names]
        return TimeSeriesPanel(
            self.timestamps, tuple(names), np.column_stack(cols), self.report
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            np.array(self.values), index=self.timestamps, columns=list(self.names)
        )

    @classmethod
    def from_frame(
        cls, frame: pd.DataFrame, report: Optional[LoadReport] = None
    ) -> "TimeSeriesPanel":
        """Returns a panel built from a DataFrame with a datetime-like index."""
        return cls(
            pd.DatetimeIndex(frame.index),
            tuple(frame.columns),
            frame.to_numpy(dtype=float),
            report,
        )
