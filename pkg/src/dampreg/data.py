"""Market observations, derived ratios, the lag-aligned panel and summary moments."""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import DataIntegrityError, DomainError, InsufficientDataError, SchemaError

FREQUENCIES = ("quarterly", "monthly")
ROLES = ("date", "price", "dividends", "earnings", "bm", "cay")
REQUIRED_ROLES = ("date", "price", "dividends", "earnings", "bm")
DEFAULT_MAX_LAG = 4

_QUARTER_RE = re.compile(r"^\s*(\d{4})\s*[-_ ]?\s*[Qq]([1-4])\s*$")
_MONTH_RE = re.compile(r"^\s*(\d{4})-(\d{1,2})(?:-(\d{1,2}))?\s*$")


def default_schema(frequency: str = "quarterly") -> dict:
    schema = {role: role for role in REQUIRED_ROLES}
    schema["frequency"] = frequency
    return schema


def read_schema(path) -> dict:
    """Read a JSON column mapping ``{"date": ..., "price": ..., "frequency": ...}``."""
    try:
        schema = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read schema file {path}: {exc}", "data") from exc
    if not isinstance(schema, dict):
        raise SchemaError("schema file must hold a JSON object", "data")
    return schema


def parse_period(text: str, frequency: str) -> int:
    """Map an ISO year-quarter or year-month label to a monotone ordinal."""
    if frequency == "quarterly":
        m = _QUARTER_RE.match(text)
        if m:
            return int(m.group(1)) * 4 + int(m.group(2)) - 1
        m = _MONTH_RE.match(text)
        if m and 1 <= int(m.group(2)) <= 12:
            return int(m.group(1)) * 4 + (int(m.group(2)) - 1) // 3
    elif frequency == "monthly":
        m = _MONTH_RE.match(text)
        if m and 1 <= int(m.group(2)) <= 12:
            return int(m.group(1)) * 12 + int(m.group(2)) - 1
    else:
        raise SchemaError(f"unknown frequency '{frequency}'; expected one of {FREQUENCIES}", "data")
    raise DataIntegrityError(f"cannot parse date '{text}' as a {frequency} period", "data")


def format_period(index: int, frequency: str) -> str:
    if frequency == "quarterly":
        return f"{index // 4:04d}-Q{index % 4 + 1}"
    return f"{index // 12:04d}-{index % 12 + 1:02d}"


@dataclass(frozen=True)
class ObservationTable:
    """Date-indexed market inputs.

    ``cay`` is either a full column or ``None``.
    """

    period_index: np.ndarray
    price: np.ndarray
    dividends: np.ndarray
    earnings: np.ndarray
    book_to_market: np.ndarray
    frequency: str
    cay: np.ndarray | None = None

    def __post_init__(self):
        if self.frequency not in FREQUENCIES:
            raise SchemaError(f"unknown frequency '{self.frequency}'", "data")
        cols = {
            "period_index": self.period_index,
            "price": self.price,
            "dividends": self.dividends,
            "earnings": self.earnings,
            "book_to_market": self.book_to_market,
        }
        if self.cay is not None:
            cols["cay"] = self.cay
        n = len(self.period_index)
        for name, col in cols.items():
            arr = np.array(col, dtype=np.int64 if name == "period_index" else float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
            if len(arr) != n:
                raise DataIntegrityError(f"column '{name}' has {len(arr)} rows, expected {n}", "data")
            if name != "period_index":
                bad = np.flatnonzero(~np.isfinite(arr))
                if bad.size:
                    raise DataIntegrityError(f"non-finite value in '{name}' at row {bad[0]}", "data")
        if n == 0:
            raise DataIntegrityError("table has no rows", "data")
        steps = np.diff(self.period_index)
        if np.any(steps <= 0):
            i = int(np.flatnonzero(steps <= 0)[0]) + 1
            what = "duplicated" if steps[i - 1] == 0 else "out-of-order"
            raise DataIntegrityError(
                f"{what} date {format_period(int(self.period_index[i]), self.frequency)} at row {i}", "data")
        if np.any(self.price <= 0):
            i = int(np.flatnonzero(self.price <= 0)[0])
            raise DomainError(f"price must be positive; row {i} has {self.price[i]}", "data")

    def __len__(self) -> int:
        return len(self.period_index)

    @property
    def has_cay(self) -> bool:
        return self.cay is not None

    def labels(self) -> list[str]:
        return [format_period(int(i), self.frequency) for i in self.period_index]


def load_observations(path, schema: Mapping[str, str] | None = None,
                      frequency: str | None = None) -> ObservationTable:
    """Read a comma-separated file with a header row into a validated table.

    ``schema`` maps roles (date, price, dividends, earnings, bm, optional cay)
    to column names and may carry a ``frequency`` entry.  An explicit
    ``frequency`` argument overrides the schema.  Rows are sorted by period;
    a duplicated period is an error.
    """
    schema = dict(schema) if schema is not None else default_schema()
    freq = frequency or schema.get("frequency")
    if freq is None:
        raise SchemaError("frequency must be declared (quarterly or monthly)", "data")
    if freq not in FREQUENCIES:
        raise SchemaError(f"unknown frequency '{freq}'; expected one of {FREQUENCIES}", "data")
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file not found: {path}", "data")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataIntegrityError(f"{path} is empty", "data")
        header = [h.strip() for h in header]
        rows = [r for r in reader if any(c.strip() for c in r)]

    positions = {}
    for role in ROLES:
        col = schema.get(role, role)
        if col is None and role not in REQUIRED_ROLES:
            continue
        if col in header:
            positions[role] = header.index(col)
        elif role in REQUIRED_ROLES or role in schema:
            raise SchemaError(f"missing column '{col}' (role {role})", "data")
    if not rows:
        raise DataIntegrityError(f"{path} has a header but no data rows", "data")

    periods, values = [], {r: [] for r in positions if r != "date"}
    for i, row in enumerate(rows):
        if len(row) < len(header):
            raise DataIntegrityError(f"row {i} has {len(row)} fields, expected {len(header)}", "data")
        periods.append(parse_period(row[positions["date"]], freq))
        for role in values:
            text = row[positions[role]].strip()
            try:
                v = float(text)
            except ValueError:
                raise DataIntegrityError(f"row {i}: '{text}' in column '{header[positions[role]]}' "
                                         f"is not a number", "data") from None
            if not math.isfinite(v):
                raise DataIntegrityError(f"row {i}: non-finite value in column "
                                         f"'{header[positions[role]]}'", "data")
            values[role].append(v)

    periods = np.asarray(periods, dtype=np.int64)
    order = np.argsort(periods, kind="stable")
    periods = periods[order]
    dup = np.flatnonzero(np.diff(periods) == 0)
    if dup.size:
        raise DataIntegrityError(f"duplicated date {format_period(int(periods[dup[0]]), freq)}", "data")
    cols = {k: np.asarray(v)[order] for k, v in values.items()}
    return ObservationTable(
        period_index=periods,
        price=cols["price"],
        dividends=cols["dividends"],
        earnings=cols["earnings"],
        book_to_market=cols["bm"],
        cay=cols.get("cay"),
        frequency=freq,
    )


def observations_csv(table: ObservationTable) -> str:
    """``table`` as text in the layout :func:`load_observations` reads with the default schema."""
    header = ["date", "price", "dividends", "earnings", "bm"] + (["cay"] if table.has_cay else [])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for i, label in enumerate(table.labels()):
        row = [table.price[i], table.dividends[i], table.earnings[i], table.book_to_market[i]]
        if table.has_cay:
            row.append(table.cay[i])
        # repr round-trips float64 exactly
        w.writerow([label] + [repr(float(v)) for v in row])
    return buf.getvalue()


def write_observations(table: ObservationTable, path) -> None:
    Path(path).write_text(observations_csv(table))


def _check_prices(p: np.ndarray) -> None:
    bad = np.flatnonzero(p <= 0)
    if bad.size:
        raise DomainError(f"nonpositive price {p[bad[0]]} at row {bad[0]}", "data")


def dividend_yield(table: ObservationTable) -> np.ndarray:
    """D_t / P_{t-1}; one element shorter than the table."""
    if len(table) < 2:
        raise InsufficientDataError("dividend yield needs at least 2 rows", "data")
    _check_prices(table.price[:-1])
    return table.dividends[1:] / table.price[:-1]


def earnings_price(table: ObservationTable) -> np.ndarray:
    """E_t / P_t, same length as the table."""
    _check_prices(table.price)
    return table.earnings / table.price


def stock_return(table: ObservationTable) -> np.ndarray:
    """Simple return including dividends, (P_t - P_{t-1} + D_t) / P_{t-1}."""
    if len(table) < 2:
        raise InsufficientDataError("stock return needs at least 2 rows", "data")
    p = table.price
    _check_prices(p[:-1])
    return (p[1:] - p[:-1] + table.dividends[1:]) / p[:-1]


@dataclass(frozen=True)
class PredictorPanel:
    """Returns and one-period-lagged predictors on a common time axis.

    Row ``t`` holds the return over table period ``t+1`` and the predictors
    observed at the end of table period ``t``.  Every array has the same
    length; ``start`` is the first row at which ``max_lag`` return lags and
    every predictor exist, so the usable rows are ``start:len(y)``.  Rows
    before ``start`` only feed lagged returns.
    """

    y: np.ndarray
    x_dy: np.ndarray
    x_ep: np.ndarray
    x_bm: np.ndarray
    x_cay: np.ndarray | None
    start: int
    max_lag: int
    frequency: str
    period_index: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("y", "x_dy", "x_ep", "x_bm", "x_cay", "period_index"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.array(arr)
                arr.setflags(write=False)
                object.__setattr__(self, name, arr)

    @property
    def usable_range(self) -> range:
        return range(self.start, len(self.y))

    @property
    def n_usable(self) -> int:
        return len(self.y) - self.start

    @property
    def has_cay(self) -> bool:
        return self.x_cay is not None

    def ratios(self) -> dict[str, np.ndarray]:
        return {"dy": self.x_dy, "ep": self.x_ep, "bm": self.x_bm}


def build_panel(table: ObservationTable, max_lag: int = DEFAULT_MAX_LAG) -> PredictorPanel:
    """Align returns with lagged ratios.

    With ``T`` table rows the return series has ``T - 1`` entries and the
    usable response length is ``T - 1 - max_lag``.
    """
    if max_lag < 0:
        raise InsufficientDataError("max_lag must be nonnegative", "data")
    need = max_lag + 2
    if len(table) < need:
        raise InsufficientDataError(
            f"panel with {max_lag} return lags needs at least {need} rows, got {len(table)}", "data")
    y = stock_return(table)
    dy = dividend_yield(table)
    ep = earnings_price(table)
    n = len(y)
    # predictor for return row t is the ratio of table period t
    x_dy = np.concatenate([[np.nan], dy[:-1]])
    x_ep = ep[:-1].copy()
    x_bm = table.book_to_market[:-1].copy()
    x_cay = table.cay[:-1].copy() if table.has_cay else None
    start = max(max_lag, 1)
    if start >= n:
        raise InsufficientDataError(
            f"no usable rows: {len(table)} rows with {max_lag} lags", "data")
    return PredictorPanel(y=y, x_dy=x_dy, x_ep=x_ep, x_bm=x_bm, x_cay=x_cay, start=start,
                          max_lag=max_lag, frequency=table.frequency,
                          period_index=table.period_index[1:])


@dataclass(frozen=True)
class SummaryStats:
    """Population moments; higher moments are ``None`` for a constant series."""

    n: int
    mean: float
    std_dev: float
    skewness: float | None
    kurtosis: float | None
    lag1_autocorr: float | None

    def as_row(self) -> list:
        return [self.mean, self.std_dev, self.skewness, self.kurtosis, self.lag1_autocorr]


def summarize(s) -> SummaryStats:
    s = np.asarray(s, dtype=float)
    if s.ndim != 1 or len(s) < 2:
        raise InsufficientDataError("summary needs a 1-d series of length >= 2", "data")
    if not np.all(np.isfinite(s)):
        raise DataIntegrityError("series contains non-finite values", "data")
    n = len(s)
    mean = float(s.mean())
    d = s - mean
    scale = float(np.abs(d).max())
    if scale == 0.0 or np.all(s == s[0]):
        return SummaryStats(n, mean, 0.0, None, None, None)
    # standardize first so tiny spreads do not underflow in the higher moments
    z = d / scale
    m2 = float(np.dot(z, z) / n)
    z = z / math.sqrt(m2)
    r1 = float(np.dot(z[:-1], z[1:]) / n)
    return SummaryStats(n, mean, scale * math.sqrt(m2), float(np.mean(z**3)),
                        float(np.mean(z**4)), r1)
