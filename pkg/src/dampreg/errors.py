"""Exception hierarchy.

Every error carries the tag of the module that raised it and a stable code so
the command line can print a single machine-parsable line.
"""


class DampregError(Exception):
    code = "E_GENERIC"

    def __init__(self, message: str, module: str = "dampreg"):
        super().__init__(message)
        self.module = module

    def one_line(self) -> str:
        msg = " ".join(str(self).split())
        return f"error[{self.module}:{self.code}] {msg}"


class SchemaError(DampregError):
    code = "E_SCHEMA"


class DataIntegrityError(DampregError):
    code = "E_INTEGRITY"


class DomainError(DampregError):
    code = "E_DOMAIN"


class InsufficientDataError(DampregError):
    code = "E_INSUFFICIENT_DATA"


class DegenerateRegressionError(DampregError):
    code = "E_DEGENERATE"


class SingularDesignError(DampregError):
    code = "E_SINGULAR"


class ConfigurationError(DampregError):
    code = "E_CONFIG"


class UnknownLabelError(DampregError):
    code = "E_UNKNOWN_LABEL"


class NotNestedError(DampregError):
    code = "E_NOT_NESTED"


class ForecastError(DampregError):
    code = "E_FORECAST"

    def __init__(self, message: str, module: str = "forecast", window: int | None = None):
        super().__init__(message, module)
        self.window = window


class EvaluationError(DampregError):
    code = "E_EVALUATION"
