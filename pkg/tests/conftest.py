import numpy as np
import pytest

from dampreg.data import ObservationTable

_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.skipped):
        title = dict(report.user_properties).get("criterion")
        if title:
            _acceptance.append((title, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for title, outcome in _acceptance:
        tag = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[outcome]
        terminalreporter.write_line(f"[{tag}] {title}")


@pytest.fixture
def criterion(record_property):
    def mark(title):
        record_property("criterion", title)
    return mark


def make_table(prices, dividends=None, earnings=None, bm=None, cay=None, frequency="quarterly"):
    prices = np.asarray(prices, dtype=float)
    n = len(prices)
    return ObservationTable(
        period_index=np.arange(n) + 1952 * 4,
        price=prices,
        dividends=np.zeros(n) if dividends is None else dividends,
        earnings=np.ones(n) if earnings is None else earnings,
        book_to_market=np.full(n, 0.5) if bm is None else bm,
        cay=cay,
        frequency=frequency,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def make_panel(y, dy=None, ep=None, bm=None, cay=None, max_lag=4, seed=0):
    """Panel built directly from arrays; unspecified ratios are seeded noise."""
    from dampreg.data import PredictorPanel

    y = np.asarray(y, dtype=float)
    n = len(y)
    g = np.random.default_rng(seed)

    def fill(x):
        return g.normal(0.0, 1.0, n) if x is None else np.asarray(x, dtype=float)

    return PredictorPanel(y=y, x_dy=fill(dy), x_ep=fill(ep), x_bm=fill(bm), x_cay=cay,
                          start=max(max_lag, 1), max_lag=max_lag, frequency="quarterly",
                          period_index=np.arange(n))
