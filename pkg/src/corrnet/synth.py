"""Seeded factor-model markets with planted sector structure.

Each stock's daily log return is

    r_i(t) = beta * m(t) + gamma * s_g(i)(t) + sigma * e_i(t)

with independent standard normal market, sector and idiosyncratic draws.
Stocks are assigned to sectors round-robin. A hub stock loads ``gamma/sqrt(2)``
on each of two sectors instead of ``gamma`` on one. Prices start at 100 and
compound the returns, so the panel has ``days + 1`` rows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date

import numpy as np

from .errors import InputError
from .panel import PricePanel


@dataclass(frozen=True)
class MarketSpec:
    n_stocks: int = 200
    n_sectors: int = 10
    days: int = 500
    beta: float = 0.25
    gamma: float = 0.6
    sigma: float = 1.0
    hub_stocks: tuple[tuple[str, tuple[int, int]], ...] = ()
    seed: int = 0
    start: date = field(default=date(2000, 1, 3))

    def __post_init__(self):
        object.__setattr__(self, "hub_stocks",
                           tuple((s, tuple(pair)) for s, pair in self.hub_stocks))
        if self.n_stocks < 2:
            raise InputError("n_stocks must be >= 2")
        if not 1 <= self.n_sectors <= self.n_stocks:
            raise InputError("n_sectors must be in [1, n_stocks]")
        if self.days < 3:
            raise InputError("days must be >= 3")
        for name in ("beta", "gamma", "sigma"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise InputError(f"{name} must be finite")
        if self.beta < 0 or self.gamma < 0:
            raise InputError("beta and gamma must be >= 0")
        if not self.sigma > 0:
            raise InputError("sigma must be > 0")
        if not 0 <= int(self.seed) < 2**64:
            raise InputError("seed must fit in 64 bits")
        symbols = set(self.symbols)
        for sym, (a, b) in self.hub_stocks:
            if sym not in symbols:
                raise InputError(f"hub {sym!r} is not one of the generated symbols")
            if a == b or not (0 <= a < self.n_sectors and 0 <= b < self.n_sectors):
                raise InputError(f"hub {sym!r} needs two distinct sector ids")

    @property
    def symbols(self) -> list[str]:
        width = max(3, len(str(self.n_stocks - 1)))
        return [f"S{i:0{width}d}" for i in range(self.n_stocks)]

    def sector_of(self, i: int) -> int:
        return i % self.n_sectors

    def sector_label(self, g: int) -> str:
        return f"SEC{g:02d}"

    def expected_correlation(self, same_sector: bool) -> float:
        total = self.beta**2 + self.gamma**2 + self.sigma**2
        shared = self.beta**2 + (self.gamma**2 if same_sector else 0.0)
        return shared / total


def default_hub(spec: MarketSpec | None = None) -> tuple[str, tuple[int, int]]:
    """First stock of sector 0, rewired into sectors 0 and 1."""
    spec = spec or MarketSpec()
    return (spec.symbols[0], (0, 1))


def business_days(start: date, count: int) -> list[date]:
    days = np.busday_offset(np.datetime64(start, "D"), np.arange(count), roll="forward")
    return [d.astype(object) for d in days]


def generate_returns(spec: MarketSpec) -> np.ndarray:
    """``days x n_stocks`` matrix of factor-model log returns."""
    rng = np.random.Generator(np.random.PCG64(int(spec.seed)))
    market = rng.standard_normal(spec.days)
    sectors = rng.standard_normal((spec.days, spec.n_sectors))
    noise = rng.standard_normal((spec.days, spec.n_stocks))
    load = np.zeros((spec.n_sectors, spec.n_stocks))
    load[np.arange(spec.n_stocks) % spec.n_sectors, np.arange(spec.n_stocks)] = spec.gamma
    index = {s: i for i, s in enumerate(spec.symbols)}
    for sym, (a, b) in spec.hub_stocks:
        i = index[sym]
        load[:, i] = 0.0
        load[a, i] = load[b, i] = spec.gamma / math.sqrt(2.0)
    return spec.beta * market[:, None] + sectors @ load + spec.sigma * noise


def generate_panel(spec: MarketSpec) -> PricePanel:
    r = generate_returns(spec)
    logp = np.vstack([np.zeros(spec.n_stocks), np.cumsum(r, axis=0)])
    prices = 100.0 * np.exp(logp)
    return PricePanel(business_days(spec.start, spec.days + 1), spec.symbols, prices,
                      sector_labels(spec))


def sector_labels(spec: MarketSpec) -> dict[str, str]:
    """Round-robin sector label per symbol; hubs keep the label of their slot."""
    return {s: spec.sector_label(spec.sector_of(i)) for i, s in enumerate(spec.symbols)}
