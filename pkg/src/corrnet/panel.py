"""Price panels, log returns, correlation and distance matrices."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from datetime import date
from typing import IO, Iterable, Mapping

import numpy as np

from .errors import (
    DuplicateSymbol,
    InputError,
    InvalidLag,
    MissingCell,
    NonNumericPrice,
    NonPositivePrice,
    TooFewRows,
    ZeroVarianceColumn,
)


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PricePanel:
    """Aligned closing prices: ``prices[t, i]`` is the close of ``symbols[i]`` on ``dates[t]``."""

    dates: tuple[date, ...]
    symbols: tuple[str, ...]
    prices: np.ndarray
    sector_labels: Mapping[str, str] | None = None

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "prices", _frozen(self.prices))
        if self.sector_labels is not None:
            object.__setattr__(self, "sector_labels", dict(self.sector_labels))
        T, N = self.prices.shape if self.prices.ndim == 2 else (0, 0)
        if self.prices.ndim != 2 or T != len(self.dates) or N != len(self.symbols):
            raise InputError("price matrix shape does not match dates x symbols")
        if len(set(self.symbols)) != N:
            raise DuplicateSymbol("duplicate symbols in panel")
        if N < 2:
            raise InputError(f"need at least 2 symbols, got {N}")
        if T < 3:
            raise TooFewRows(f"need at least 3 rows, got {T}")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise InputError("dates must be strictly increasing")
        bad = ~np.isfinite(self.prices) | (self.prices <= 0)
        if bad.any():
            t, i = map(int, np.argwhere(bad)[0])
            raise NonPositivePrice(t, self.symbols[i], float(self.prices[t, i]))

    @property
    def n_symbols(self) -> int:
        return len(self.symbols)

    @property
    def n_rows(self) -> int:
        return len(self.dates)

    def subset_rows(self, start: int, stop: int) -> "PricePanel":
        return PricePanel(self.dates[start:stop], self.symbols, self.prices[start:stop],
                          self.sector_labels)


@dataclass(frozen=True, eq=False)
class ReturnMatrix:
    symbols: tuple[str, ...]
    returns: np.ndarray
    lag: int = 1
    dates: tuple[date, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "returns", _frozen(self.returns))
        object.__setattr__(self, "dates", tuple(self.dates))
        if self.returns.ndim != 2 or self.returns.shape[1] != len(self.symbols):
            raise InputError("returns shape does not match symbols")
        if not np.isfinite(self.returns).all():
            raise InputError("returns contain non-finite values")


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    symbols: tuple[str, ...]
    rho: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "rho", _frozen(self.rho))
        n = len(self.symbols)
        if self.rho.shape != (n, n):
            raise InputError("correlation matrix shape does not match symbols")


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    symbols: tuple[str, ...]
    d: np.ndarray
    corr: CorrelationMatrix | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "d", _frozen(self.d))
        n = len(self.symbols)
        if self.d.shape != (n, n):
            raise InputError("distance matrix shape does not match symbols")

    def index(self, symbol: str) -> int:
        return self.symbols.index(symbol)


# -- ingestion ---------------------------------------------------------------

def _data_lines(source: IO[str] | str) -> Iterable[str]:
    if isinstance(source, str):
        source = io.StringIO(source)
    for line in source:
        if line.startswith("#") or not line.strip():
            continue
        yield line


def load_panel(source: IO[str] | str, *, drop_incomplete_rows: bool = False,
               sector_labels: Mapping[str, str] | None = None) -> PricePanel:
    """Read a wide CSV (``date,SYM1,SYM2,...``) into a validated panel.

    ``source`` is an open text stream or the CSV content itself. Lines starting
    with ``#`` are ignored. Row numbers in error messages count data rows from 0.
    """
    reader = csv.reader(_data_lines(source))
    try:
        header = next(reader)
    except StopIteration:
        raise TooFewRows("empty input") from None
    symbols = [s.strip() for s in header[1:]]
    seen = set()
    for s in symbols:
        if s in seen:
            raise DuplicateSymbol(f"duplicate symbol {s!r}")
        seen.add(s)

    dates, rows = [], []
    for r, rec in enumerate(reader):
        if len(rec) != len(header):
            raise InputError(f"row {r}: expected {len(header)} fields, got {len(rec)}")
        try:
            day = date.fromisoformat(rec[0].strip())
        except ValueError:
            raise InputError(f"row {r}: bad date {rec[0]!r}") from None
        values, incomplete = [], False
        for sym, cell in zip(symbols, rec[1:]):
            cell = cell.strip()
            if cell == "" or cell.lower() in ("na", "nan"):
                if not drop_incomplete_rows:
                    raise MissingCell(r, sym)
                incomplete = True
                values.append(math.nan)
                continue
            try:
                v = float(cell)
            except ValueError:
                raise NonNumericPrice(r, sym, cell) from None
            if not (v > 0) or not math.isfinite(v):
                raise NonPositivePrice(r, sym, cell)
            values.append(v)
        if not incomplete:
            dates.append(day)
            rows.append(values)

    if len(rows) < 3:
        raise TooFewRows(f"need at least 3 complete rows, got {len(rows)}")
    return PricePanel(dates, symbols, np.array(rows, dtype=float), sector_labels)


def load_labels(source: IO[str] | str) -> dict[str, str]:
    """Read a ``symbol,label`` CSV. A header row naming ``symbol`` is skipped."""
    labels = {}
    for rec in csv.reader(_data_lines(source)):
        if len(rec) < 2:
            continue
        sym, lab = rec[0].strip(), rec[1].strip()
        if sym.lower() == "symbol" and not labels:
            continue
        labels[sym] = lab
    return labels


# -- transforms --------------------------------------------------------------

def log_returns(panel: PricePanel, lag: int = 1) -> ReturnMatrix:
    """``r_i(t) = ln P_i(t + lag) - ln P_i(t)``; row ``t`` is dated ``dates[t + lag]``."""
    if not isinstance(lag, (int, np.integer)) or lag < 1:
        raise InvalidLag(f"lag must be a positive integer, got {lag!r}")
    if lag >= panel.n_rows:
        raise InvalidLag(f"lag {lag} >= number of rows {panel.n_rows}")
    logp = np.log(panel.prices)
    return ReturnMatrix(panel.symbols, logp[lag:] - logp[:-lag], int(lag), panel.dates[lag:])


def correlation(returns: ReturnMatrix) -> CorrelationMatrix:
    """Pearson correlation from time averages over the full return window.

    ``<r_i r_j> - <r_i><r_j>`` is evaluated as the time average of the product
    of deviations from the mean, which is the same quantity without the
    cancellation the raw-moment form suffers when means dominate. Only the
    upper triangle is kept; the lower triangle mirrors it and the diagonal is
    exactly 1.
    """
    r = returns.returns
    T = r.shape[0]
    flat = np.ptp(r, axis=0) == 0
    if flat.any():
        raise ZeroVarianceColumn([returns.symbols[i] for i in np.flatnonzero(flat)])
    dev = r - r.sum(axis=0) / T
    cov = (dev.T @ dev) / T
    var = np.diag(cov).copy()
    rho = cov / np.sqrt(np.outer(var, var))
    upper = np.triu(rho, 1)
    rho = upper + upper.T
    np.fill_diagonal(rho, 1.0)
    return CorrelationMatrix(returns.symbols, rho)


def to_distance(corr: CorrelationMatrix) -> DistanceMatrix:
    """``d = sqrt(2 (1 - rho))`` with rho clamped to [-1, 1]; zero diagonal."""
    rho = np.clip(corr.rho, -1.0, 1.0)
    d = np.sqrt(2.0 * (1.0 - rho))
    np.fill_diagonal(d, 0.0)
    return DistanceMatrix(corr.symbols, d, corr)


def distance_matrix(panel: PricePanel, lag: int = 1) -> DistanceMatrix:
    """Panel -> returns -> correlation -> distance in one call."""
    return to_distance(correlation(log_returns(panel, lag)))
