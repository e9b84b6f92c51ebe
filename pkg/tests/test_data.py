import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dampreg.data import (build_panel, dividend_yield, earnings_price, load_observations,
                          parse_period, stock_return, summarize, write_observations)
from dampreg.errors import (DataIntegrityError, DomainError, InsufficientDataError,
                            SchemaError)
from dampreg.synthetic import GeneratorSpec, generate

from conftest import make_table


def write(path, text):
    path.write_text(text)
    return path


def test_load_quarterly_with_cay(tmp_path):
    table = generate(GeneratorSpec("exact_linear_model", 271, noise_std=0.05, seed=1))
    write_observations(table, tmp_path / "q.csv")
    back = load_observations(tmp_path / "q.csv", {"frequency": "quarterly"})
    assert len(back) == 271
    assert back.frequency == "quarterly"
    assert back.has_cay
    np.testing.assert_array_equal(back.price, table.price)
    np.testing.assert_array_equal(back.cay, table.cay)


def test_load_sorts_rows_and_maps_columns(tmp_path):
    f = write(tmp_path / "m.csv",
              "Month,P,Div,Earn,BM\n2000-03,12,0.1,1,0.4\n2000-01,10,0.1,1,0.5\n2000-02,11,0.1,1,0.45\n")
    schema = {"date": "Month", "price": "P", "dividends": "Div", "earnings": "Earn",
              "bm": "BM", "frequency": "monthly"}
    t = load_observations(f, schema)
    np.testing.assert_array_equal(t.price, [10, 11, 12])
    assert not t.has_cay
    assert list(np.diff(t.period_index)) == [1, 1]


def test_empty_file_is_integrity_error(tmp_path):
    f = write(tmp_path / "e.csv", "")
    with pytest.raises(DataIntegrityError):
        load_observations(f, {"frequency": "quarterly"})


def test_duplicated_date_is_named(tmp_path):
    f = write(tmp_path / "d.csv",
              "date,price,dividends,earnings,bm\n1990-Q1,1,0,1,1\n1990-Q2,1,0,1,1\n1990-Q2,2,0,1,1\n")
    with pytest.raises(DataIntegrityError, match="1990-Q2"):
        load_observations(f, {"frequency": "quarterly"})


def test_missing_column_is_named(tmp_path):
    f = write(tmp_path / "c.csv", "date,price,dividends,earnings\n1990-Q1,1,0,1\n")
    with pytest.raises(SchemaError, match="'bm'"):
        load_observations(f, {"frequency": "quarterly"})


def test_non_finite_value_reports_row(tmp_path):
    f = write(tmp_path / "n.csv",
              "date,price,dividends,earnings,bm\n1990-Q1,1,0,1,1\n1990-Q2,nan,0,1,1\n")
    with pytest.raises(DataIntegrityError, match="row 1"):
        load_observations(f, {"frequency": "quarterly"})


def test_frequency_must_be_declared(tmp_path):
    f = write(tmp_path / "x.csv", "date,price,dividends,earnings,bm\n1990-Q1,1,0,1,1\n")
    with pytest.raises(SchemaError):
        load_observations(f, {"date": "date"})


@pytest.mark.parametrize("text,freq,expected", [
    ("1952-Q1", "quarterly", 1952 * 4),
    ("2019Q4", "quarterly", 2019 * 4 + 3),
    ("1952-04", "quarterly", 1952 * 4 + 1),
    ("1920-12", "monthly", 1920 * 12 + 11),
    ("1920-12-31", "monthly", 1920 * 12 + 11),
])
def test_parse_period(text, freq, expected):
    assert parse_period(text, freq) == expected


def test_dividend_yield_last_element():
    t = make_table([100.0, 101.0], dividends=[0.0, 2.0])
    dy = dividend_yield(t)
    assert len(dy) == 1
    assert dy[-1] == pytest.approx(0.02)


def test_dividend_yield_constant_case():
    t = make_table(np.full(6, 50.0), dividends=np.ones(6))
    np.testing.assert_allclose(dividend_yield(t), 0.02)


def test_earnings_price():
    t = make_table([100.0, 100.0], earnings=[5.0, 0.0])
    np.testing.assert_allclose(earnings_price(t), [0.05, 0.0])


def test_stock_return_direct_and_identity():
    t = make_table([100.0, 105.0], dividends=[0.0, 2.0])
    assert stock_return(t)[0] == pytest.approx(0.07)
    flat = make_table(np.full(4, 30.0))
    np.testing.assert_array_equal(stock_return(flat), 0.0)


def test_nonpositive_price_is_domain_error():
    with pytest.raises(DomainError):
        make_table([1.0, 0.0, 2.0])


def test_single_row_ratios_need_two_rows():
    t = make_table([1.0])
    with pytest.raises(InsufficientDataError):
        stock_return(t)


@settings(max_examples=50, deadline=None)
@given(arrays(float, 8, elements=st.floats(1.0, 1e4)),
       arrays(float, 8, elements=st.floats(0.0, 100.0)),
       st.floats(1e-3, 1e3))
def test_stock_return_homogeneous_degree_zero(p, d, c):
    base = stock_return(make_table(p, dividends=d))
    scaled = stock_return(make_table(p * c, dividends=d * c))
    np.testing.assert_allclose(scaled, base, rtol=1e-9, atol=1e-12)


# panel row counts, verified by enumerating index sets by hand
def _hand_count(rows, lags):
    returns = list(range(1, rows))          # table rows with a return
    return len([t for t in returns if t - lags >= 1])


@pytest.mark.parametrize("rows", [271, 6, 40])
def test_panel_usable_length(rows):
    t = make_table(np.linspace(10, 20, rows), dividends=np.full(rows, 0.1),
                   cay=np.zeros(rows))
    panel = build_panel(t, max_lag=4)
    assert panel.n_usable == _hand_count(rows, 4)
    assert _hand_count(271, 4) == 266
    assert _hand_count(6, 4) == 1


def test_panel_too_short():
    t = make_table(np.linspace(10, 20, 5))
    with pytest.raises(InsufficientDataError):
        build_panel(t, max_lag=4)


def test_panel_shift_consistency():
    table = generate(GeneratorSpec("exact_linear_model", 60, noise_std=0.05, seed=3))
    panel = build_panel(table)
    dy, ep = dividend_yield(table), earnings_price(table)
    sr = stock_return(table)
    for t in panel.usable_range:
        assert panel.x_dy[t] == dy[t - 1]
        assert panel.x_ep[t] == ep[t]            # EP at the period before the return
        assert panel.x_bm[t] == table.book_to_market[t]
        assert panel.x_cay[t] == table.cay[t]
        assert panel.y[t] == sr[t]
        # the return in row t accrues over table period t+1, the ratios over period t
        assert panel.period_index[t] == table.period_index[t + 1]


def test_summarize_hand_values():
    s = summarize([1, 2, 3, 4, 5])
    assert s.mean == 3
    assert s.std_dev == pytest.approx(math.sqrt(2.0))
    assert s.skewness == pytest.approx(0.0, abs=1e-15)
    # population kurtosis: m4 = (16+1+0+1+16)/5 = 6.8, m2 = 2
    assert s.kurtosis == pytest.approx(6.8 / 4)
    assert s.lag1_autocorr == pytest.approx(0.4)


def test_summarize_normal_kurtosis():
    x = np.random.default_rng(11).standard_normal(100_000)
    assert abs(summarize(x).kurtosis - 3.0) < 0.1


def test_summarize_constant_series_flags_undefined():
    s = summarize(np.full(10, 2.5))
    assert s.std_dev == 0.0
    assert s.skewness is None and s.kurtosis is None and s.lag1_autocorr is None


finite_series = arrays(float, st.integers(5, 40), elements=st.floats(-100, 100))


@settings(max_examples=80, deadline=None)
@given(finite_series, st.floats(-50, 50), st.floats(0.01, 100))
def test_summarize_shift_and_scale(s, c, k):
    base = summarize(s)
    if base.kurtosis is None or base.std_dev < 1e-6 * (1 + np.abs(s).max()):
        return
    shifted = summarize(s + c)
    assert shifted.mean == pytest.approx(base.mean + c, abs=1e-9)
    scaled = summarize(k * s)
    for other in (shifted, scaled):
        assert other.skewness == pytest.approx(base.skewness, rel=1e-6, abs=1e-6)
        assert other.kurtosis == pytest.approx(base.kurtosis, rel=1e-6)
        assert other.lag1_autocorr == pytest.approx(base.lag1_autocorr, rel=1e-6, abs=1e-6)
    assert shifted.std_dev == pytest.approx(base.std_dev, rel=1e-6)


@settings(max_examples=80, deadline=None)
@given(finite_series)
def test_summary_invariants(s):
    st_ = summarize(s)
    assert st_.std_dev >= 0
    if st_.kurtosis is not None:
        assert st_.kurtosis >= 1 - 1e-9
        assert abs(st_.lag1_autocorr) <= 1 + 1e-12
