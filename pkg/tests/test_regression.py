import numpy as np
import pytest
import statsmodels.api as sm
from hypothesis import given, settings
from hypothesis import strategies as st

from dampreg.errors import (InsufficientDataError, NotNestedError, SingularDesignError,
                            UnknownLabelError, ConfigurationError)
from dampreg.models import autoregressive, damped, make_spec
from dampreg.regression import DesignMatrix, build_design, f_test, ols_fit, t_test
from dampreg.synthetic import normal_equation_oracle

from conftest import make_panel


def design(X, y, labels=None, intercept=False):
    X = np.asarray(X, dtype=float)
    labels = labels or tuple(f"x{i}" for i in range(X.shape[1]))
    return DesignMatrix(X=X, y=np.asarray(y, dtype=float), labels=tuple(labels),
                        rows=np.arange(len(y)), has_intercept=intercept)


def random_design(rng, n=50, m=5):
    X = rng.standard_normal((n, m))
    y = rng.standard_normal(n)
    return design(X, y)


def test_matches_normal_equations(rng):
    d = random_design(rng)
    np.testing.assert_allclose(ols_fit(d).xi_hat, normal_equation_oracle(d), rtol=1e-6)


def test_exact_recovery(rng):
    X = rng.standard_normal((40, 6))
    xi = rng.uniform(-2, 2, 6)
    fit = ols_fit(design(X, X @ xi))
    np.testing.assert_allclose(fit.xi_hat, xi, rtol=1e-8)


def test_inference_matches_statsmodels(rng):
    X = rng.standard_normal((80, 4))
    y = X @ [0.5, -0.2, 0.0, 0.1] + rng.standard_normal(80)
    fit = ols_fit(design(X, y))
    ref = sm.OLS(y, X).fit()
    np.testing.assert_allclose(fit.xi_hat, ref.params, rtol=1e-10)
    np.testing.assert_allclose(fit.std_errors, ref.bse, rtol=1e-10)
    np.testing.assert_allclose(fit.t_stats, ref.tvalues, rtol=1e-10)
    np.testing.assert_allclose(fit.p_values, ref.pvalues, rtol=1e-8)
    # without a constant the overall F tests every coefficient against y = 0
    assert fit.f_stat == pytest.approx(ref.fvalue, rel=1e-10)
    assert fit.f_p_value == pytest.approx(ref.f_pvalue, rel=1e-8)
    assert fit.dof == 76


def test_intercept_f_matches_statsmodels(rng):
    X = sm.add_constant(rng.standard_normal((60, 3)))
    y = X @ [1.0, 0.3, 0.0, -0.2] + rng.standard_normal(60)
    fit = ols_fit(design(X, y, ("const", "a", "b", "c"), intercept=True))
    ref = sm.OLS(y, X).fit()
    assert fit.f_q == 3
    assert fit.f_stat == pytest.approx(ref.fvalue, rel=1e-10)
    assert fit.adj_r2 == pytest.approx(ref.rsquared_adj, rel=1e-10)


def test_adjusted_r2_uses_centered_tss(rng):
    X = rng.standard_normal((50, 3))
    y = 2.0 + X @ [0.4, 0.0, 0.1] + rng.standard_normal(50)
    fit = ols_fit(design(X, y))
    tss = np.sum((y - y.mean()) ** 2)
    assert fit.adj_r2 == pytest.approx(1 - (fit.ssr / 47) / (tss / 49), rel=1e-12)


def test_perfect_fit_adjusted_r2(rng):
    X = rng.standard_normal((30, 3))
    fit = ols_fit(design(X, X @ [1.0, 2.0, 3.0]))
    assert fit.adj_r2 == pytest.approx(1.0, abs=1e-12)


def test_constant_response_has_undefined_adjusted_r2(rng):
    fit = ols_fit(design(rng.standard_normal((20, 2)), np.full(20, 3.0)))
    assert fit.adj_r2 is None


def test_ssr_and_orthogonality(rng):
    d = random_design(rng, 70, 6)
    fit = ols_fit(d)
    resid = d.y - d.X @ fit.xi_hat
    assert fit.ssr == pytest.approx(float(resid @ resid), rel=1e-10)
    for col in d.X.T:
        assert abs(col @ fit.residuals) <= 1e-10 * np.linalg.norm(col) * np.linalg.norm(resid)
    np.testing.assert_allclose(fit.cov, fit.cov.T)
    assert np.all(np.linalg.eigvalsh(fit.cov) >= -1e-15)
    np.testing.assert_allclose(fit.t_stats, fit.xi_hat / np.sqrt(np.diag(fit.cov)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.01, 100.0))
def test_scale_equivariance(seed, c):
    rng = np.random.default_rng(seed)
    d = random_design(rng, 40, 4)
    a = ols_fit(d)
    b = ols_fit(design(d.X, c * d.y))
    np.testing.assert_allclose(b.xi_hat, c * a.xi_hat, rtol=1e-8, atol=1e-12)
    np.testing.assert_allclose(b.t_stats, a.t_stats, rtol=1e-7, atol=1e-9)
    assert b.f_stat == pytest.approx(a.f_stat, rel=1e-7)
    assert b.adj_r2 == pytest.approx(a.adj_r2, rel=1e-7, abs=1e-12)


def test_point_on_hyperplane_leaves_fit_unchanged(rng):
    d = random_design(rng, 40, 4)
    fit = ols_fit(d)
    x_new = rng.standard_normal(4)
    grown = design(np.vstack([d.X, x_new]), np.append(d.y, x_new @ fit.xi_hat))
    np.testing.assert_allclose(ols_fit(grown).xi_hat, fit.xi_hat, atol=1e-9)


def test_singular_design_names_column(rng):
    X = rng.standard_normal((30, 3))
    X = np.column_stack([X, X[:, 0] + X[:, 1]])
    with pytest.raises(SingularDesignError, match="x"):
        ols_fit(design(X, rng.standard_normal(30)))


def test_too_few_observations(rng):
    with pytest.raises(InsufficientDataError):
        ols_fit(design(rng.standard_normal((3, 3)), rng.standard_normal(3)))


def test_t_test_zero_coefficient():
    # orthogonal columns: y has no component along the second one
    X = np.column_stack([np.ones(6), [1, -1, 1, -1, 1, -1]])
    y = np.array([1.0, 2.0, 0.0, 1.0, 2.0, 0.0])
    y = y - (y @ X[:, 1]) / 6 * X[:, 1]
    fit = ols_fit(design(X, y, ("a", "b")))
    dec = t_test(fit, "b")
    assert dec.statistic == pytest.approx(0.0, abs=1e-12)
    assert dec.p_value == pytest.approx(1.0)
    assert not dec.reject
    with pytest.raises(UnknownLabelError):
        t_test(fit, "missing")


def test_t_test_rule(rng):
    X = rng.standard_normal((200, 2))
    y = X @ [1.0, 0.0] + 0.1 * rng.standard_normal(200)
    dec = t_test(ols_fit(design(X, y, ("a", "b"))), "a", level=0.01)
    assert dec.reject and dec.p_value < 0.01 and abs(dec.statistic) > dec.critical_value


def test_f_test_identity_and_nested(rng):
    X = rng.standard_normal((60, 4))
    y = X @ [0.3, 0.2, 0.0, 0.0] + rng.standard_normal(60)
    full = ols_fit(design(X, y))
    same = f_test(full, full, q=2)
    assert same.statistic == 0.0 and same.p_value == 1.0
    small = ols_fit(design(X[:, :2], y))
    dec = f_test(full, small, q=2)
    hand = ((small.ssr - full.ssr) / 2) / (full.ssr / 56)
    assert dec.statistic == pytest.approx(hand, rel=1e-12)
    assert dec.df == (2, 56)
    with pytest.raises(NotNestedError):
        f_test(small, full, q=2)


def test_overall_f_equals_f_test_against_zero_model(rng):
    X = rng.standard_normal((50, 3))
    y = X @ [0.3, 0.0, 0.1] + rng.standard_normal(50)
    fit = ols_fit(design(X, y))
    # the restricted model y = 0 has SSR = y'y
    hand = ((y @ y - fit.ssr) / 3) / (fit.ssr / 47)
    assert fit.f_stat == pytest.approx(hand, rel=1e-12)


def test_column_counts():
    y = np.random.default_rng(1).standard_normal(60)
    panel = make_panel(y, cay=np.random.default_rng(2).standard_normal(60))
    assert build_design(panel, make_spec("model-1-1")).m == 11
    assert build_design(panel, make_spec("model-2-1")).m == 10
    assert build_design(panel, make_spec("model-1-3")).m == 4
    assert build_design(panel, make_spec("model-1-2")).labels == ("const",)
    assert build_design(panel, make_spec("model-1-1")).labels == (
        "y_lag1", "y_lag2", "y_lag3", "y_lag4", "cay",
        "mu_dy", "nu_dy", "mu_ep", "nu_ep", "mu_bm", "nu_bm")


def test_design_rows_use_lagged_returns_and_damped_ratios():
    rng = np.random.default_rng(3)
    y = rng.standard_normal(30)
    dy = rng.standard_normal(30)
    panel = make_panel(y, dy=dy)
    d = build_design(panel, damped(2, ("dy",), include_cay=False))
    t = 10
    row = d.X[list(d.rows).index(t)]
    mu = np.exp(-dy[t] ** 2 / 2)
    np.testing.assert_allclose(row, [y[t - 1], y[t - 2], mu, dy[t] * mu])
    assert d.y[list(d.rows).index(t)] == y[t]


def test_cay_spec_on_cayless_panel():
    panel = make_panel(np.zeros(20))
    with pytest.raises(ConfigurationError):
        build_design(panel, make_spec("model-1-1"))


def test_ar_design_byte_identical():
    y = np.random.default_rng(4).standard_normal(40)
    a = build_design(make_panel(y, seed=1), autoregressive(4))
    b = build_design(make_panel(y, seed=2), autoregressive(4))
    assert a.X.tobytes() == b.X.tobytes()
