"""Command-line entry point: ``dampreg <command> [options]``.

Commands: summarize, adf, fit, forecast, evaluate, moment-check, simulate.
Settings come from flags, then a JSON ``--config`` file, then defaults that
follow the quarterly (n=200, h=4) and monthly (n=948, h=12) setups.  Every
command prints an aligned table; with ``--out`` (or ``DAMPREG_OUT``) it also
writes delimited files and ``run-manifest.json`` into that directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .data import (build_panel, default_schema, dividend_yield, earnings_price,
                   load_observations, observations_csv, read_schema, stock_return,
                   summarize, write_observations)
from .errors import ConfigurationError, DampregError
from .evaluation import compare_models
from .forecast import recursive_forecast
from .models import MONTHLY_MODELS, QUARTERLY_MODELS, make_spec
from .regression import build_design, ols_fit
from .stationarity import DEFAULT_LEVELS, adf_test, appendix_moment_check
from .synthetic import DEFAULT_COEFFICIENTS, GeneratorSpec, generate
from .tables import (GRID_HEADER, aligned, grid_rows, read_forecast_grid, to_csv,
                     write_csv, write_forecast_grid)

OUT_ENV = "DAMPREG_OUT"
FREQ_DEFAULTS = {
    "quarterly": {"insample_size": 200, "horizon": 4, "models": list(QUARTERLY_MODELS)},
    "monthly": {"insample_size": 948, "horizon": 12, "models": list(MONTHLY_MODELS)},
}
DEFAULTS = {
    "frequency": None,
    "level": 0.01,
    "seed": 0,
    "jobs": 1,
    "adf_mode": "constant",
    "adf_lags": None,
    "t": [1, 5, 10, 50],
    "paths": 100_000,
    "kind": "exact_linear_model",
    "length": 276,
    "noise_std": 0.05,
    "phi": 0.5,
    "no_cay": False,
    "models": None,
    "insample_size": None,
    "horizon": None,
    "out": None,
    "columns": [],
    "forecasts": [],
}


def _parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=S, help="JSON file of settings")
    common.add_argument("--input", default=S, help="comma-separated observations file")
    common.add_argument("--schema", default=S, help="JSON file mapping roles to column names")
    common.add_argument("--column", dest="columns", action="append", default=S,
                        metavar="ROLE=NAME", help="map a role to a column (repeatable)")
    common.add_argument("--frequency", choices=("quarterly", "monthly"), default=S)
    common.add_argument("--model", dest="models", action="append", default=S,
                        help="model name, e.g. model-1-1 (repeatable)")
    common.add_argument("--insample-size", dest="insample_size", type=int, default=S)
    common.add_argument("--horizon", type=int, default=S)
    common.add_argument("--level", type=float, default=S, help="significance level")
    common.add_argument("--seed", type=int, default=S)
    common.add_argument("--out", default=S, help=f"output directory (default ${OUT_ENV})")
    common.add_argument("--jobs", type=int, default=S, help="worker threads")

    p = argparse.ArgumentParser(prog="dampreg", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"dampreg {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("summarize", parents=[common], help="moments of the ratios and returns")
    a = sub.add_parser("adf", parents=[common], help="unit-root tests")
    a.add_argument("--adf-mode", dest="adf_mode", default=S,
                   choices=("none", "constant", "constant+trend"))
    a.add_argument("--adf-lags", dest="adf_lags", type=int, default=S)
    sub.add_parser("fit", parents=[common], help="in-sample OLS fit with t and F tests")
    sub.add_parser("forecast", parents=[common], help="recursive multi-step forecast grid")
    e = sub.add_parser("evaluate", parents=[common], help="RMSE comparison across models")
    e.add_argument("--forecasts", action="append", default=S,
                   help="evaluate an existing forecast grid file instead of --input")
    m = sub.add_parser("moment-check", parents=[common],
                       help="Monte Carlo check of E[exp(-X_t^2)] = 1/sqrt(2t+1)")
    m.add_argument("--t", type=int, action="append", default=S, help="horizon (repeatable)")
    m.add_argument("--paths", type=int, default=S)
    s = sub.add_parser("simulate", parents=[common], help="write a synthetic data file")
    s.add_argument("--kind", default=S,
                   choices=("exact_linear_model", "random_walk", "ar1", "iid_normal"))
    s.add_argument("--length", type=int, default=S)
    s.add_argument("--noise-std", dest="noise_std", type=float, default=S)
    s.add_argument("--phi", type=float, default=S)
    s.add_argument("--no-cay", dest="no_cay", action="store_true", default=S)
    return p


def resolve_config(ns: argparse.Namespace) -> dict:
    flags = {k: v for k, v in vars(ns).items() if k != "command"}
    cfg = dict(DEFAULTS)
    if "config" in flags:
        try:
            from_file = json.loads(Path(flags["config"]).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {flags['config']}: {exc}", "cli")
        cfg.update({k.replace("-", "_"): v for k, v in from_file.items()})
    cfg.update(flags)
    cfg.pop("config", None)
    cfg["_models_given"] = cfg.get("models") is not None
    if cfg.get("out") is None and os.environ.get(OUT_ENV):
        cfg["out"] = os.environ[OUT_ENV]

    schema = read_schema(cfg["schema"]) if cfg.get("schema") else default_schema(None)
    for item in cfg.get("columns") or []:
        role, sep, name = item.partition("=")
        if not sep:
            raise ConfigurationError(f"--column expects ROLE=NAME, got '{item}'", "cli")
        schema[role.strip()] = name.strip()
    freq = cfg.get("frequency") or schema.get("frequency") or "quarterly"
    schema["frequency"] = freq
    cfg["frequency"] = freq
    cfg["schema_map"] = schema
    for key, value in FREQ_DEFAULTS[freq].items():
        if cfg.get(key) is None:
            cfg[key] = value
    for name in cfg["models"]:
        make_spec(name)
    return cfg


def _table(cfg):
    if not cfg.get("input"):
        raise ConfigurationError("--input is required for this command", "cli")
    return load_observations(cfg["input"], cfg["schema_map"], cfg["frequency"])


def _series(table):
    out = {"DY": dividend_yield(table), "EP": earnings_price(table), "Bm": table.book_to_market}
    if table.has_cay:
        out["cay"] = table.cay
    out["SR"] = stock_return(table)
    return out


def cmd_summarize(cfg):
    table = _table(cfg)
    header = ["variable", "mean", "std_dev", "skewness", "kurtosis", "lag1_autocorr"]
    rows = [[name] + summarize(s).as_row() for name, s in _series(table).items()]
    title = f"Summary statistics ({cfg['frequency']}, {len(table)} rows)"
    return {"summary.csv": (header, rows)}, aligned(header, rows, 4, title)


def cmd_adf(cfg):
    table = _table(cfg)
    level = cfg["level"]
    levels = tuple(sorted(set(DEFAULT_LEVELS) | {level}))
    header = ["variable", "adf_statistic", "p_value", "lag_order", "nobs", f"reject_{level:g}"]
    rows = []
    for name, s in _series(table).items():
        if name == "cay":
            continue
        res = adf_test(s, cfg["adf_mode"], cfg["adf_lags"], levels)
        rows.append([name, res.t_stat, res.p_value, res.lag_order, res.nobs, res.reject_at[level]])
    title = f"ADF tests (mode={cfg['adf_mode']})"
    return {"adf.csv": (header, rows)}, aligned(header, rows, 6, title)


def cmd_fit(cfg):
    panel = build_panel(_table(cfg))
    names = cfg["models"] if cfg["_models_given"] else cfg["models"][:1]
    coef_header = ["model", "term", "estimate", "std_error", "t_value", "p_value"]
    sum_header = ["model", "n", "dof", "adj_r2", "f_stat", "f_df1", "f_df2", "f_p_value"]
    coef_rows, sum_rows, text = [], [], []
    for name in names:
        fit = ols_fit(build_design(panel, make_spec(name)))
        rows = [[name, lab, fit.xi_hat[i], fit.std_errors[i], fit.t_stats[i], fit.p_values[i]]
                for i, lab in enumerate(fit.labels)]
        coef_rows += rows
        sum_rows.append([name, fit.n, fit.dof, fit.adj_r2, fit.f_stat, fit.f_q, fit.dof,
                         fit.f_p_value])
        text.append(aligned(coef_header[1:], [r[1:] for r in rows], 6, f"{name} coefficients"))
        f = "NA" if fit.f_stat is None else f"{fit.f_stat:.4f} on {fit.f_q} and {fit.dof} DF"
        fp = "NA" if fit.f_p_value is None else f"{fit.f_p_value:.6g}"
        adj = "NA" if fit.adj_r2 is None else f"{fit.adj_r2:.5f}"
        text.append(f"Adjusted R-squared: {adj}\nF-statistic: {f} (p-value: {fp})\n")
    return {"fit.csv": (coef_header, coef_rows), "fit_summary.csv": (sum_header, sum_rows)}, \
        "\n".join(text)


def _runs(cfg):
    panel = build_panel(_table(cfg))
    return [recursive_forecast(panel, make_spec(name), cfg["insample_size"], cfg["horizon"],
                               workers=cfg["jobs"], name=name) for name in cfg["models"]]


def cmd_forecast(cfg):
    runs = _runs(cfg)
    lines = [f"{r.model}: R={r.R} windows x h_max={r.h_max} = {len(r.records)} forecasts"
             for r in runs]
    return {"forecasts.grid": runs}, "\n".join(lines) + "\n"


def cmd_evaluate(cfg):
    if cfg.get("forecasts"):
        runs = [run for path in cfg["forecasts"]
                for run in read_forecast_grid(path, cfg["frequency"])]
    else:
        runs = _runs(cfg)
    report = compare_models(runs)
    header, rows = report.header(), report.table_rows()
    mins = [report.column_minimum(j) for j in report.horizons] + [report.column_minimum()]
    text = aligned(header, rows, 6, f"RMSE ({report.frequency}, n={report.n}, "
                                    f"h_max={report.h_max})")
    text += "minimum: " + ", ".join(f"{h}={m}" for h, m in zip(header[1:], mins)) + "\n"
    return {"rmse.csv": (header, rows)}, text


def cmd_moment_check(cfg):
    rep = appendix_moment_check(cfg["t"], cfg["paths"], cfg["seed"], workers=cfg["jobs"])
    header = ["t", "mc_estimate", "mc_std_error", "theory", "z_score"]
    rows = [[r.t, r.mc_estimate, r.mc_std_error, r.theory, r.z_score] for r in rep.rows]
    title = f"E[exp(-X_t^2)] vs 1/sqrt(2t+1), {rep.paths} paths, seed {rep.seed}"
    return {"moment_check.csv": (header, rows)}, aligned(header, rows, 6, title)


def cmd_simulate(cfg):
    spec = GeneratorSpec(kind=cfg["kind"], length=cfg["length"], noise_std=cfg["noise_std"],
                         seed=cfg["seed"], phi=cfg["phi"], include_cay=not cfg["no_cay"],
                         frequency=cfg["frequency"],
                         coefficients=_default_coefficients(not cfg["no_cay"]))
    result = generate(spec)
    if spec.kind == "exact_linear_model":
        return {"simulated.csv": result}, f"{len(result)} {spec.frequency} rows\n"
    rows = [[i, float(v)] for i, v in enumerate(result)]
    return {"simulated.csv": (["index", "value"], rows)}, f"{len(rows)} values\n"


def _default_coefficients(with_cay: bool):
    return DEFAULT_COEFFICIENTS if with_cay else DEFAULT_COEFFICIENTS[:4] + DEFAULT_COEFFICIENTS[5:]


COMMANDS = {
    "summarize": cmd_summarize,
    "adf": cmd_adf,
    "fit": cmd_fit,
    "forecast": cmd_forecast,
    "evaluate": cmd_evaluate,
    "moment-check": cmd_moment_check,
    "simulate": cmd_simulate,
}


# where and how fast a run executes never changes its results
EXECUTION_KEYS = ("out", "jobs")


def _write_outputs(out_dir: Path, command: str, cfg: dict, artifacts: dict) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, payload in artifacts.items():
        if name.endswith(".grid"):
            write_forecast_grid(out_dir / "forecasts.csv", payload)
        elif hasattr(payload, "price"):
            write_observations(payload, out_dir / name)
        else:
            write_csv(out_dir / name, *payload)
    manifest = {
        "command": command,
        "version": __version__,
        "config": {k: v for k, v in sorted(cfg.items())
                   if not k.startswith("_") and k not in EXECUTION_KEYS},
        "seed": cfg.get("seed"),
        "artifacts": sorted("forecasts.csv" if n.endswith(".grid") else n for n in artifacts),
    }
    (out_dir / "run-manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True)
                                               + "\n")


def _stream_text(artifacts: dict) -> str:
    """The data file of ``forecast``/``simulate`` when no output directory is set."""
    (name, payload), = artifacts.items()
    if name.endswith(".grid"):
        return to_csv(GRID_HEADER, [row for run in payload for row in grid_rows(run)])
    if hasattr(payload, "price"):
        return observations_csv(payload)
    return to_csv(*payload)


def main(argv=None) -> int:
    ns = _parser().parse_args(argv)
    try:
        cfg = resolve_config(ns)
        artifacts, text = COMMANDS[ns.command](cfg)
        if cfg.get("out"):
            _write_outputs(Path(cfg["out"]), ns.command, cfg, artifacts)
        elif ns.command in ("forecast", "simulate"):
            text = _stream_text(artifacts)
        sys.stdout.write(text)
        return 0
    except DampregError as exc:
        print(exc.one_line(), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
