"""Time-varying complete networks from closing prices."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.spatial.distance import pdist, squareform

from .exceptions import GraphFormatError
from .graph import GraphDataset, WeightedGraph

logger = logging.getLogger(__name__)

__all__ = [
    "PriceTable",
    "load_prices",
    "log_returns",
    "window_weights",
    "sliding_networks",
    "synthetic_prices",
    "WEIGHT_MODES",
    "WEIGHT_FLOOR",
]

WEIGHT_MODES = ("euclidean", "correlation")
# Identical series would give zero weight and split the graph.
WEIGHT_FLOOR = 1e-12


@dataclass
class PriceTable:
    """Closing prices, one column per ticker, fully observed."""

    tickers: list
    dates: list
    closes: np.ndarray
    dropped: list = field(default_factory=list)

    def __post_init__(self):
        self.closes = np.asarray(self.closes, dtype=np.float64)
        if self.closes.shape != (len(self.dates), len(self.tickers)):
            raise GraphFormatError(
                f"price matrix shape {self.closes.shape} does not match "
                f"{len(self.dates)} dates x {len(self.tickers)} tickers"
            )
        if len(set(self.tickers)) != len(self.tickers):
            raise GraphFormatError("duplicate tickers")
        if any(not a < b for a, b in zip(self.dates, self.dates[1:])):
            raise GraphFormatError("dates must be strictly increasing")


def load_prices(path, start=None, end=None) -> PriceTable:
    """Read a ``date,TICK1,TICK2,...`` CSV.

    Tickers with any missing price between ``start`` and ``end``
    (inclusive, ISO dates) are dropped and listed in ``dropped``.
    """
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False)
    except FileNotFoundError:
        raise GraphFormatError(f"{path}: no such file") from None
    except pd.errors.EmptyDataError:
        raise GraphFormatError(f"{path}: empty file") from None
    if "date" not in df.columns:
        raise GraphFormatError(f"{path}: missing 'date' column")
    if df.empty:
        raise GraphFormatError(f"{path}: no price rows")

    dates = []
    for i, raw in enumerate(df["date"], start=2):
        try:
            dates.append(pd.Timestamp(raw.strip()).date().isoformat())
        except ValueError:
            raise GraphFormatError(f"{path}:{i}: unparseable date {raw!r}") from None
    if len(set(dates)) != len(dates):
        raise GraphFormatError(f"{path}: duplicate dates")

    tickers = [c for c in df.columns if c != "date"]
    values = np.full((len(df), len(tickers)), np.nan)
    for j, t in enumerate(tickers):
        for i, raw in enumerate(df[t]):
            raw = raw.strip()
            if raw in ("", "NA", "NaN", "nan", "null"):
                continue
            try:
                x = float(raw)
            except ValueError:
                raise GraphFormatError(
                    f"{path}:{i + 2}: non-numeric price {raw!r} for {t}"
                ) from None
            if not x > 0:
                raise GraphFormatError(f"{path}:{i + 2}: non-positive price {raw!r} for {t}")
            values[i, j] = x

    order = np.argsort(dates, kind="stable")
    dates = [dates[i] for i in order]
    values = values[order]
    lo = start or dates[0]
    hi = end or dates[-1]
    rows = [i for i, d in enumerate(dates) if lo <= d <= hi]
    if not rows:
        raise GraphFormatError(f"{path}: no dates between {lo} and {hi}")
    values = values[rows]
    dates = [dates[i] for i in rows]

    complete = ~np.isnan(values).any(axis=0)
    dropped = [t for t, ok in zip(tickers, complete) if not ok]
    if dropped:
        logger.warning("dropping %d tickers with missing prices: %s", len(dropped), dropped)
    kept = [t for t, ok in zip(tickers, complete) if ok]
    return PriceTable(tickers=kept, dates=dates, closes=values[:, complete], dropped=dropped)


def log_returns(closes: np.ndarray) -> np.ndarray:
    return np.diff(np.log(closes), axis=0)


def window_weights(returns: np.ndarray, mode: str = "euclidean") -> np.ndarray:
    """Complete weight matrix from a ``(time, ticker)`` block of returns."""
    if mode == "euclidean":
        W = squareform(pdist(returns.T, metric="euclidean"))
    elif mode == "correlation":
        # sqrt(2 (1 - rho)) is the distance between standardised series
        # scaled by 1/sqrt(T); identical series then give exactly zero.
        std = returns.std(axis=0)
        flat = std == 0
        z = np.zeros_like(returns)
        z[:, ~flat] = (returns[:, ~flat] - returns[:, ~flat].mean(axis=0)) / std[~flat]
        W = squareform(pdist(z.T, metric="euclidean")) / np.sqrt(returns.shape[0])
        W = np.minimum(W, 2.0)
        # a constant series has undefined correlation, taken as zero
        W[flat, :] = np.sqrt(2.0)
        W[:, flat] = np.sqrt(2.0)
    else:
        raise ValueError(f"weight mode must be one of {WEIGHT_MODES}, got {mode!r}")
    W = np.maximum(W, WEIGHT_FLOOR)
    np.fill_diagonal(W, 0.0)
    return W


def sliding_networks(pt: PriceTable, window: int = 28, weight_mode: str = "euclidean") -> GraphDataset:
    """One complete network per window end date.

    Each window spans ``window`` consecutive dates (``window - 1`` daily log
    returns); windows advance by one date, giving ``len(dates) - window + 1``
    networks. Vertex labels are the ticker symbols and graph ids the window
    end dates.
    """
    if weight_mode not in WEIGHT_MODES:
        raise ValueError(f"weight mode must be one of {WEIGHT_MODES}, got {weight_mode!r}")
    if window < 2:
        raise ValueError(f"window must be >= 2, got {window}")
    if len(pt.dates) < window:
        raise ValueError(f"{len(pt.dates)} dates is shorter than the window of {window}")
    if len(pt.tickers) < 2:
        raise ValueError("need at least two tickers")
    R = log_returns(pt.closes)
    graphs = []
    for end in range(window - 1, len(pt.dates)):
        block = R[end - window + 1: end]
        graphs.append(WeightedGraph(
            window_weights(block, weight_mode),
            vertex_labels=pt.tickers,
            graph_id=pt.dates[end],
        ))
    return GraphDataset(graphs, name="prices", meta={"window": window, "weight_mode": weight_mode})


def synthetic_prices(
    n_tickers: int = 50,
    n_days: int = 600,
    shift_day: int = 300,
    sector_corr: float = 0.9,
    crisis_vol: float = 10.0,
    seed: int = 0,
    start: str = "2000-01-03",
) -> PriceTable:
    """Random-walk prices with a covariance regime change at ``shift_day``.

    Before the shift daily log returns are independent with 1% volatility.
    From ``shift_day`` on the tickers form two sectors (even and odd
    index) with within-sector correlation ``sector_corr``; the odd sector's
    volatility is multiplied by ``crisis_vol``.
    """
    rng = np.random.default_rng(seed)
    sector = np.arange(n_tickers) % 2
    calm = rng.normal(size=(n_days, n_tickers))

    common = rng.normal(size=(n_days, 2))[:, sector]
    own = rng.normal(size=(n_days, n_tickers))
    vol = np.where(sector == 1, crisis_vol, 1.0)[None, :]
    stressed = vol * (np.sqrt(sector_corr) * common + np.sqrt(1.0 - sector_corr) * own)

    returns = 0.01 * np.where(np.arange(n_days)[:, None] < shift_day, calm, stressed)
    closes = 100.0 * np.exp(np.cumsum(returns, axis=0))
    dates = pd.bdate_range(start, periods=n_days).date
    tickers = [f"T{i:03d}" for i in range(n_tickers)]
    return PriceTable(tickers=tickers, dates=[d.isoformat() for d in dates], closes=closes)
