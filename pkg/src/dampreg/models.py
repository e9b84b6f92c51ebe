"""The seven named models: damped multivariate variants and the two benchmarks."""

from __future__ import annotations

from dataclasses import dataclass

from .data import PredictorPanel
from .errors import ConfigurationError
from .regression import OlsFit, build_design, ols_fit

KINDS = ("damped_multivariate", "historical_mean", "autoregressive")
RATIOS = ("dy", "ep", "bm")


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    p: int = 0
    ratios: tuple = ()
    include_cay: bool = False
    intercept: bool = False
    name: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown model kind '{self.kind}'", "models")
        if self.kind == "historical_mean":
            if self.p or self.ratios or self.include_cay:
                raise ConfigurationError("historical mean takes no lags or predictors", "models")
        elif self.kind == "autoregressive":
            if self.p < 1:
                raise ConfigurationError("autoregressive model needs p >= 1", "models")
            if self.ratios or self.include_cay:
                raise ConfigurationError("autoregressive model takes no predictors", "models")
        else:
            if self.p < 0 or not self.ratios:
                raise ConfigurationError("damped model needs p >= 0 and at least one ratio",
                                         "models")
            unknown = set(self.ratios) - set(RATIOS)
            if unknown:
                raise ConfigurationError(f"unknown ratios {sorted(unknown)}", "models")

    @property
    def q(self) -> int:
        return len(self.ratios)

    @property
    def n_params(self) -> int:
        if self.kind == "historical_mean":
            return 1
        return self.p + int(self.include_cay) + 2 * self.q + int(self.intercept)


def damped(p: int = 4, ratios=RATIOS, include_cay: bool = True, name: str = "") -> ModelSpec:
    return ModelSpec("damped_multivariate", p=p, ratios=tuple(ratios),
                     include_cay=include_cay, name=name)


def historical_mean(name: str = "") -> ModelSpec:
    return ModelSpec("historical_mean", name=name)


def autoregressive(p: int = 4, name: str = "") -> ModelSpec:
    return ModelSpec("autoregressive", p=p, name=name)


_NAMED = {
    "model-1-1": lambda: damped(4, include_cay=True, name="model-1-1"),
    "model-1-2": lambda: historical_mean("model-1-2"),
    "model-1-3": lambda: autoregressive(4, "model-1-3"),
    "model-1-4": lambda: damped(4, include_cay=False, name="model-1-4"),
    "model-2-1": lambda: damped(4, include_cay=False, name="model-2-1"),
    "model-2-2": lambda: historical_mean("model-2-2"),
    "model-2-3": lambda: autoregressive(4, "model-2-3"),
}
MODEL_NAMES = tuple(_NAMED)
QUARTERLY_MODELS = ("model-1-1", "model-1-2", "model-1-3", "model-1-4")
MONTHLY_MODELS = ("model-2-1", "model-2-2", "model-2-3")


def make_spec(name: str) -> ModelSpec:
    try:
        return _NAMED[name]()
    except KeyError:
        raise ConfigurationError(f"unknown model '{name}'; valid models: "
                                 f"{', '.join(MODEL_NAMES)}", "models") from None


def fit_model(panel: PredictorPanel, spec: ModelSpec) -> OlsFit:
    return ols_fit(build_design(panel, spec))
