"""Reads time series panels from CSV files and writes result files.

Input panels are CSV files with a header row.  The timestamp column is the
first column unless another is named, and every other column is numeric.
Lines beginning with "#" are comments, so files written by write_panel()
can be read back directly.

Results are written as CSV or JSON.  Numbers carry 12 significant digits,
timestamps are ISO 8601, and gaps are empty CSV fields or JSON nulls.  The
resolved run configuration is echoed at the top of every file: as
"# key: value" comment lines in CSV and as a "config" object in JSON.
"""

# Copyright 2026, lagstruct developers.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
# SPDX-License-Identifier: Apache-2.0
#
# Reuse is permitted under the terms of the license.
# The AUTHORS file and the LICENSE file are at the
# top level of this library.

import csv
import datetime
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from lagstruct.errors import (
    ColumnNotFoundError,
    DataError,
    DuplicateTimestampError,
    MissingValueError,
    OrderError,
    ParseError,
)
from lagstruct.granger import GrangerResult
from lagstruct.indicator import IndicatorSeries
from lagstruct.panel import LoadReport, TimeSeriesPanel
from lagstruct.rmt import TWTable
from lagstruct.util import format_number

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")
MISSING_POLICIES = ("drop_row", "error")
SIGMA_PREFIX = "sigma_lambda_"

Results = Union[IndicatorSeries, Sequence[GrangerResult], TWTable, pd.DataFrame]


@dataclass(frozen=True)
class PanelSchema:
    """
    Describes how to read a panel.  If *time_column* is None, the first
    column holds the timestamps; if *value_columns* is None, every other
    column is read.  A *date_format* is a strftime() pattern; without one
    the timestamps are parsed as ISO 8601.
    """

    time_column: Optional[str] = None
    value_columns: Optional[Tuple[str, ...]] = None
    date_format: Optional[str] = None
    missing_policy: str = "drop_row"

    def __post_init__(self):
        if self.missing_policy not in MISSING_POLICIES:
            raise ValueError(
                f"missing_policy must be one of {MISSING_POLICIES}, "
                f"got {self.missing_policy!r}."
            )
        if self.value_columns is not None:
            object.__setattr__(self, "value_columns", tuple(self.value_columns))
            if self.time_column is not None and self.time_column in self.value_columns:
                raise ValueError(
                    f"The time column {self.time_column!r} may not also be a "
                    "value column."
                )


def read_panel(path: Path, schema: Optional[PanelSchema] = None) -> TimeSeriesPanel:
    """
    Returns the TimeSeriesPanel read from the CSV file at *path* according
    to *schema*.

    Rows with a missing value in a selected column are dropped or raise a
    MissingValueError, according to the schema's missing_policy.  The
    panel's report records how many rows were read and dropped.
    """
    if schema is None:
        schema = PanelSchema()

    try:
        df = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            comment="#",
            skipinitialspace=True,
        )
    except pd.errors.EmptyDataError as err:
        raise ParseError(f"{path} has no header row: {err}") from err
    except pd.errors.ParserError as err:
        raise ParseError(f"{path} could not be parsed as CSV: {err}") from err

    if len(df.columns) < 2:
        raise ParseError(f"{path} needs a timestamp column and a value column.")

    time_column = df.columns[0] if schema.time_column is None else schema.time_column
    if schema.value_columns is None:
        value_columns = [c for c in df.columns if c != time_column]
    else:
        value_columns = list(schema.value_columns)
    for col in [time_column] + value_columns:
        if col not in df.columns:
            raise ColumnNotFoundError(
                f"Column {col!r} is not in {path}, which has {list(df.columns)}."
            )

    # Data row numbers are 1-based and do not count the header or comments.
    timestamps = _parse_timestamps(df[time_column], time_column, schema.date_format)
    values, missing = _parse_values(df[value_columns])

    rows_read = len(df)
    if np.any(missing):
        row, col = np.argwhere(missing)[0]
        if schema.missing_policy == "error":
            err = MissingValueError(
                f"Data row {row + 1} of {path} has no value in column "
                f"{value_columns[col]!r}."
            )
            err.row = int(row) + 1
            err.column = value_columns[col]
            raise err

    keep = ~np.any(missing, axis=1)
    dropped = tuple(_iso(t) for t in timestamps[~keep])
    if dropped:
        logger.info(f"Dropped {len(dropped)} of {rows_read} rows with missing values.")

    timestamps = timestamps[keep]
    values = values[keep]

    if not timestamps.is_unique:
        first = timestamps[timestamps.duplicated()][0]
        raise DuplicateTimestampError(
            f"{path} has the timestamp {_iso(first)} more than once."
        )
    if not timestamps.is_monotonic_increasing:
        bad = int(np.flatnonzero(np.diff(timestamps.asi8) < 0)[0]) + 1
        raise OrderError(
            f"The timestamps in {path} are not increasing: {_iso(timestamps[bad])} "
            f"follows {_iso(timestamps[bad - 1])}."
        )

    report = LoadReport(
        rows_read=rows_read, rows_dropped=len(dropped), dropped_timestamps=dropped
    )
    logger.debug(f"Read {len(timestamps)} rows of {len(value_columns)} columns.")
    return TimeSeriesPanel(timestamps, tuple(value_columns), values, report)


def _parse_timestamps(
    column: pd.Series, name: str, date_format: Optional[str]
) -> pd.DatetimeIndex:
    text = column.str.strip()
    parsed = pd.to_datetime(text, format=date_format, errors="coerce")
    bad = np.flatnonzero(parsed.isna().to_numpy())
    if bad.size:
        row = int(bad[0])
        raise ParseError(
            f"Data row {row + 1}: {text.iloc[row]!r} in column {name!r} is "
            "not a timestamp.",
            row=row + 1,
            column=name,
        )
    return pd.DatetimeIndex(parsed)


def _parse_values(frame: pd.DataFrame) -> Tuple[np.ndarray, np.ndarray]:
    # Returns the parsed values and a mask of the empty cells.
    text = frame.apply(lambda col: col.str.strip())
    missing = (text == "").to_numpy()
    values = np.full(text.shape, np.nan)
    for j, name in enumerate(text.columns):
        parsed = pd.to_numeric(text[name].where(~missing[:, j]), errors="coerce")
        arr = parsed.to_numpy(dtype=float)
        bad = np.flatnonzero(~missing[:, j] & ~np.isfinite(arr))
        if bad.size:
            row = int(bad[0])
            raise ParseError(
                f"Data row {row + 1}: {text[name].iloc[row]!r} in column "
                f"{name!r} is not a finite number.",
                row=row + 1,
                column=name,
            )
        values[:, j] = arr
    return values, missing


def _iso(ts) -> str:
    ts = pd.Timestamp(ts)
    if ts == ts.normalize():
        return ts.date().isoformat()
    return ts.isoformat()


def _echo(value) -> str:
    # Text for one configuration value in a CSV comment line.
    if isinstance(value, str):
        return value
    return json.dumps(value, sort_keys=True)


def _cell(value, for_json: bool = False):
    if value is None:
        return None if for_json else ""
    if isinstance(value, Mapping):
        return {str(k): _cell(v, for_json=True) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_cell(v, for_json=True) for v in value]
    if isinstance(value, (pd.Timestamp, datetime.date, np.datetime64)):
        return _iso(value)
    if isinstance(value, (bool, np.bool_)):
        if for_json:
            return bool(value)
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return None if for_json else ""
        text = format_number(float(value))
        return float(text) if for_json else text
    return str(value)


def _tabulate(results: Results) -> Tuple[str, Dict[str, Any], List[str], List[list]]:
    # Returns (kind, metadata, column names, rows) for a result object.
    if isinstance(results, IndicatorSeries):
        columns = ["timestamp"] + [SIGMA_PREFIX + c for c in results.cause_names]
        rows = [
            [ts] + list(vals)
            for ts, vals in zip(results.timestamps, results.sigma_lambda)
        ]
        return "indicator_series", {"effect_name": results.effect_name}, columns, rows

    if isinstance(results, TWTable):
        rows = [list(r) for r in zip(results.grid, results.q, results.F1)]
        return "tw_table", {}, ["s", "q", "F1"], rows

    if isinstance(results, pd.DataFrame):
        frame = results
        if not isinstance(frame.index, pd.RangeIndex):
            frame = frame.rename_axis(frame.index.name or "timestamp").reset_index()
        columns = [str(c) for c in frame.columns]
        rows = [list(r) for r in frame.itertuples(index=False, name=None)]
        return "table", {}, columns, rows

    results = list(results)
    if all(isinstance(r, GrangerResult) for r in results):
        columns = [
            "cause",
            "effect",
            "lag_order",
            "variant",
            "f_stat",
            "p_value",
            "log_inv_p",
            "error",
        ]
        rows = [
            [
                r.cause_name,
                r.effect_name,
                r.lag_order,
                r.variant,
                r.f_statistic,
                r.p_value,
                r.log_inv_p,
                r.error,
            ]
            for r in results
        ]
        return "granger_results", {}, columns, rows

    raise TypeError(f"Cannot write results of type {type(results).__name__}.")


def write_results(
    results: Results,
    path: Path,
    fmt: str = "csv",
    config: Optional[Mapping[str, Any]] = None,
    notes: Optional[Mapping[str, Any]] = None,
) -> None:
    """
    Writes *results* to *path* in the format *fmt*, which is "csv" or
    "json".

    *results* may be an IndicatorSeries, a sequence of GrangerResults, a
    TWTable, or a DataFrame (comparison tables, validation reports, and
    monitor series).  The *config* mapping is echoed into the file, and
    *notes* are written as additional metadata (for example summary
    statistics).
    """
    if fmt not in FORMATS:
        raise ValueError(f"Unknown format {fmt!r}, expected one of {FORMATS}.")

    kind, meta, columns, rows = _tabulate(results)
    meta = {"result": kind, **meta, **(notes or {})}
    config = {} if config is None else dict(sorted(config.items()))

    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            if fmt == "csv":
                for k, v in list(meta.items()) + list(config.items()):
                    f.write(f"# {k}: {_echo(_cell(v, for_json=True))}\n")
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(columns)
                for row in rows:
                    writer.writerow([_cell(v) for v in row])
            else:
                d = {k: _cell(v, for_json=True) for k, v in meta.items()}
                d["config"] = config
                d["columns"] = columns
                d["rows"] = [[_cell(v, for_json=True) for v in row] for row in rows]
                json.dump(d, f, indent=2)
                f.write("\n")
    except OSError as err:
        raise OSError(f"Could not write {kind} to {path}: {err}") from err

    logger.info(f"Wrote {len(rows)} rows of {kind} to {path}")


def write_panel(
    panel: TimeSeriesPanel, path: Path, config: Optional[Mapping[str, Any]] = None
) -> None:
    """
    Writes *panel* to *path* as a CSV file that read_panel() can read, with
    the timestamps in a first column named "timestamp".
    """
    write_results(panel.to_frame(), path, fmt="csv", config=config)


def _csv_metadata(path: Path) -> Dict[str, str]:
    meta = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition(": ")
            meta[key] = value
    return meta


def read_indicator_series(path: Path) -> IndicatorSeries:
    """
    Returns the IndicatorSeries written by write_results() to *path*, in
    either format.  Gaps come back as NaN; the lag profiles are not
    stored, so the returned series carries none.
    """
    path = Path(path)
    if path.suffix.lower() == ".json":
        with open(path, encoding="utf-8") as f:
            d = json.load(f)
        meta = d
        columns = d["columns"]
        frame = pd.DataFrame(d["rows"], columns=columns)
    else:
        meta = _csv_metadata(path)
        frame = pd.read_csv(path, comment="#", dtype={"timestamp": str})
        columns = list(frame.columns)

    if meta.get("result") != "indicator_series":
        raise DataError(f"{path} does not hold an indicator series.")
    if not columns or columns[0] != "timestamp":
        raise DataError(f"{path} has no timestamp column.")

    causes = []
    for c in columns[1:]:
        if not c.startswith(SIGMA_PREFIX):
            raise DataError(f"Unexpected column {c!r} in {path}.")
        causes.append(c[len(SIGMA_PREFIX) :])

    values = frame[columns[1:]].astype(float).to_numpy()
    return IndicatorSeries(
        effect_name=meta["effect_name"],
        cause_names=tuple(causes),
        timestamps=pd.DatetimeIndex(pd.to_datetime(frame["timestamp"])),
        sigma_lambda=values,
    )
