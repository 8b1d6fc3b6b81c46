import numpy as np
import pandas as pd
import pytest

from dtqwk.exceptions import GraphFormatError
from dtqwk.finance import (
    WEIGHT_FLOOR,
    PriceTable,
    load_prices,
    log_returns,
    sliding_networks,
    synthetic_prices,
    window_weights,
)


def write_prices(path, n_days=100, tickers=("AAA", "BBB", "CCC"), seed=0):
    rng = np.random.default_rng(seed)
    closes = 50 * np.exp(np.cumsum(0.01 * rng.normal(size=(n_days, len(tickers))), axis=0))
    dates = [d.date().isoformat() for d in pd.bdate_range("2001-01-01", periods=n_days)]
    lines = ["date," + ",".join(tickers)]
    lines += [d + "," + ",".join(repr(float(x)) for x in row) for d, row in zip(dates, closes)]
    path.write_text("\n".join(lines) + "\n")
    return closes


def test_load_and_window_count(tmp_path):
    closes = write_prices(tmp_path / "p.csv")
    pt = load_prices(tmp_path / "p.csv")
    assert pt.tickers == ["AAA", "BBB", "CCC"]
    assert np.array_equal(pt.closes, closes)
    nets = sliding_networks(pt, window=28)
    assert len(nets) == 100 - 28 + 1
    g = nets[0]
    assert g.graph_id == pt.dates[27]
    assert g.vertex_labels == ("AAA", "BBB", "CCC")
    assert g.n_edges == 3


def test_window_uses_its_own_returns(tmp_path):
    write_prices(tmp_path / "p.csv", n_days=40)
    pt = load_prices(tmp_path / "p.csv")
    nets = sliding_networks(pt, window=10)
    R = log_returns(pt.closes)[0:9]
    expected = np.sqrt(((R[:, 0] - R[:, 1]) ** 2).sum())
    assert nets[0].weights[0, 1] == pytest.approx(expected, rel=1e-14)


def test_date_filter_and_missing_tickers(tmp_path):
    (tmp_path / "p.csv").write_text(
        "date,A,B,C\n2020-01-02,1,2,3\n2020-01-03,1.1,,3.1\n2020-01-06,1.2,2.2,3.2\n"
    )
    pt = load_prices(tmp_path / "p.csv")
    assert pt.tickers == ["A", "C"] and pt.dropped == ["B"]
    pt = load_prices(tmp_path / "p.csv", start="2020-01-03")
    assert pt.dates == ["2020-01-03", "2020-01-06"]


@pytest.mark.parametrize("text, match", [
    ("date,A\n2020-01-02,abc\n", ":2: non-numeric"),
    ("date,A\nnot-a-date,1\n", "unparseable date"),
    ("A,B\n1,2\n", "missing 'date'"),
    ("date,A\n2020-01-02,-1\n", "non-positive"),
])
def test_format_errors(tmp_path, text, match):
    (tmp_path / "p.csv").write_text(text)
    with pytest.raises(GraphFormatError, match=match):
        load_prices(tmp_path / "p.csv")


def test_missing_file():
    with pytest.raises(GraphFormatError):
        load_prices("/nonexistent/prices.csv")


def test_correlation_weights():
    rng = np.random.default_rng(0)
    x = rng.normal(size=50)
    R = np.column_stack([x, x, -x, np.zeros(50)])
    W = window_weights(R, "correlation")
    assert W[0, 1] == WEIGHT_FLOOR
    assert W[0, 2] == pytest.approx(2.0)
    assert W[0, 3] == pytest.approx(np.sqrt(2.0))
    y = rng.normal(size=50)
    R2 = np.column_stack([x, y])
    rho = np.corrcoef(x, y)[0, 1]
    assert window_weights(R2, "correlation")[0, 1] == pytest.approx(np.sqrt(2 * (1 - rho)), rel=1e-12)
    assert np.all(np.diag(W) == 0)
    with pytest.raises(ValueError):
        window_weights(R, "granger")


def test_identical_series_stay_connected():
    R = np.ones((5, 3)) * 0.01
    W = window_weights(R)
    assert np.all(W[~np.eye(3, dtype=bool)] == WEIGHT_FLOOR)


def test_preconditions():
    pt = PriceTable(tickers=["A", "B"], dates=["2020-01-01", "2020-01-02"],
                    closes=[[1.0, 2.0], [1.1, 2.1]])
    with pytest.raises(ValueError):
        sliding_networks(pt, window=1)
    with pytest.raises(ValueError):
        sliding_networks(pt, window=3)
    with pytest.raises(GraphFormatError):
        PriceTable(tickers=["A"], dates=["2020-01-02", "2020-01-01"], closes=[[1.0], [1.0]])


def test_synthetic_generator_is_seeded():
    a = synthetic_prices(n_tickers=6, n_days=40, shift_day=20, seed=3)
    b = synthetic_prices(n_tickers=6, n_days=40, shift_day=20, seed=3)
    assert np.array_equal(a.closes, b.closes)
    R = log_returns(a.closes)
    # crisis sector volatility is ten times the calm level after the shift
    assert R[20:, 1::2].std() > 5 * R[:19, 1::2].std()
