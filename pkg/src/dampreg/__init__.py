"""Damped multivariate predictive regressions for stock returns.

Ratio construction, unit-root diagnostics, OLS with t/F inference,
expanding-window iterated forecasts and RMSE comparison.
"""

__version__ = "0.1.0"

from .data import (ObservationTable, PredictorPanel, SummaryStats, build_panel,
                   dividend_yield, earnings_price, load_observations, stock_return,
                   summarize, write_observations)
from .errors import DampregError
from .evaluation import RmseReport, compare_models, rmse_per_horizon, rmse_pooled
from .forecast import ForecastRecord, ForecastRun, recursive_forecast, window_counts
from .models import ModelSpec, fit_model, make_spec
from .regression import (DesignMatrix, OlsFit, adjusted_r2, build_design, f_test, ols_fit,
                         t_test)
from .stationarity import (AdfResult, DampedSeries, MomentCheckReport, adf_test,
                           appendix_moment_check, damping_transform, rolling_first_diff_std,
                           simulate_random_walk)
from .synthetic import GeneratorSpec, generate, normal_equation_oracle
