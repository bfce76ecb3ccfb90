# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Command-line front end.

Each command reads a model file, runs one notebooklet (or Monte Carlo
estimator) silently and writes CSV or JSON to stdout or `--out`.

Exit status is 0 on success, 2 if the model or the arguments are
invalid (violations on stderr) and 3 on a numerical failure (JSON
error object on the output).
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import attr
import numpy as np
import pandas as pd

from ._version import VERSION
from .common import (
    OccnbError,
    OccnbNumericalError,
    OccnbValidationError,
    UnsampleableDensityError,
)
from .nb.fluctuation.exit_laws import ExitLaws
from .nb.fluctuation.root_finder import RootFinder
from .nb.fluctuation.wiener_hopf import WienerHopf
from .nb.model.model_check import ModelCheck
from .nb.occupation.identity_check import IdentityCheck
from .nb.occupation.occupation_expectation import OccupationExpectation
from .nb.occupation.occupation_laplace import OccupationLaplace
from .nb.timedomain.fee_expectation import FeeExpectation
from .nb.timedomain.occupation_inversion import OccupationInversion
from .nblib.firstpassage import ExitDirection
from .nblib.inversion import GAVER_STEHFEST, TALBOT
from .nblib.model import RefractedModel, validate
from .nblib.modelfile import load_model, model_to_dict, parse_grid
from .nblib.montecarlo import (
    SimConfig,
    estimate_distribution,
    estimate_exit,
    estimate_expectation,
    estimate_fixed_horizon,
    estimate_V,
)
from .notebooklet_result import jsonable
from .options import get_opt, set_opt

__version__ = VERSION
__author__ = "occnb developers"

COMMANDS = (
    "validate",
    "roots",
    "wh",
    "exit",
    "occ-lt",
    "occ-exp",
    "identity-check",
    "invert",
    "fee",
    "mc",
)
FORMATS = ("csv", "json")
MC_QUANTITIES = ("laplace", "expectation", "distribution", "fixed", "exit")
EXIT_DIRECTIONS = tuple(direction.value for direction in ExitDirection)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

Payload = Union[pd.DataFrame, Dict[str, Any], str]


def _optional(conv: Callable) -> Callable:
    return attr.converters.optional(conv)


_GRID = _optional(parse_grid)


@attr.s(auto_attribs=True, frozen=True)
class RunSpec:
    """
    One CLI invocation.

    Attributes
    ----------
    command : str
        One of `COMMANDS`.
    model_path : Path
        YAML model file.
    q, p, x : float, optional
        Discount rate, occupation penalty and starting point.
    x_grid, phi_grid, t_grid : np.ndarray, optional
        Starting points, transform arguments and times.
    phi_imag : bool
        Read `phi_grid` as points on the imaginary axis.
    alpha, b : float, optional
        Refraction overrides.
    seed, paths, dt : optional
        Monte Carlo settings.
    fmt : str
        "csv" or "json".
    out : Path, optional
        Output file, stdout if None.
    method : str, optional
        Occupation assembly ("auto", "general", "simple") or
        inversion method ("gaver_stehfest", "talbot").
    fee_rate, horizon : float, optional
        Fee rate and fixed horizon.
    quantity : str
        Monte Carlo quantity, one of `MC_QUANTITIES`.
    direction : str
        Passage of the Monte Carlo "exit" quantity: "up_Y" (default,
        `x` >= 0) or "down_X" (`x` <= 0).
    emit_canonical : bool
        `validate` writes the canonical model YAML.

    """

    command: str = attr.ib(validator=attr.validators.in_(COMMANDS))
    model_path: Path = attr.ib(converter=Path)
    q: Optional[float] = attr.ib(default=None, converter=_optional(float))
    p: Optional[float] = attr.ib(default=None, converter=_optional(float))
    x: Optional[float] = attr.ib(default=None, converter=_optional(float))
    x_grid: Optional[np.ndarray] = attr.ib(default=None, converter=_GRID)
    phi_grid: Optional[np.ndarray] = attr.ib(default=None, converter=_GRID)
    phi_imag: bool = False
    t_grid: Optional[np.ndarray] = attr.ib(default=None, converter=_GRID)
    alpha: Optional[float] = attr.ib(default=None, converter=_optional(float))
    b: Optional[float] = attr.ib(default=None, converter=_optional(float))
    seed: Optional[int] = attr.ib(default=None, converter=_optional(int))
    paths: Optional[int] = attr.ib(default=None, converter=_optional(int))
    dt: Optional[float] = attr.ib(default=None, converter=_optional(float))
    fmt: str = attr.ib(default="json", validator=attr.validators.in_(FORMATS))
    out: Optional[Path] = attr.ib(default=None, converter=_optional(Path))
    method: Optional[str] = None
    fee_rate: Optional[float] = attr.ib(default=None, converter=_optional(float))
    horizon: Optional[float] = attr.ib(default=None, converter=_optional(float))
    quantity: str = attr.ib(
        default="expectation", validator=attr.validators.in_(MC_QUANTITIES)
    )
    direction: str = attr.ib(
        default=ExitDirection.UP_Y.value,
        validator=attr.validators.in_(EXIT_DIRECTIONS),
    )
    emit_canonical: bool = False

    def require(self, *names: str):
        """Raise ValueError if any named parameter is missing."""
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            flags = ", ".join(f"--{name.replace('_', '-')}" for name in missing)
            raise ValueError(f"{self.command} requires {flags}.")

    @property
    def overrides(self) -> Dict[str, float]:
        """Return the refraction overrides passed to the notebooklets."""
        return {
            name: getattr(self, name)
            for name in ("alpha", "b")
            if getattr(self, name) is not None
        }


def _parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="occnb",
        description="Occupation times of refracted jump diffusions in closed form.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("model_path", type=Path, help="YAML model file.")
    parser.add_argument("--q", type=float, help="Rate of the exponential time.")
    parser.add_argument("--p", type=float, help="Occupation penalty.")
    parser.add_argument("--x", type=float, help="Starting point or passage distance.")
    parser.add_argument("--x-grid", dest="x_grid", help="Starting points a:b:n.")
    parser.add_argument("--phi-grid", dest="phi_grid", help="Arguments phi a:b:n.")
    parser.add_argument(
        "--phi-imag",
        dest="phi_imag",
        action="store_true",
        help="Read --phi-grid as imaginary parts.",
    )
    parser.add_argument("--t-grid", dest="t_grid", help="Times a:b:n.")
    parser.add_argument("--alpha", type=float, help="Override the refraction drift.")
    parser.add_argument("--b", type=float, help="Override the refraction level.")
    parser.add_argument("--seed", type=int, help="Monte Carlo root seed.")
    parser.add_argument("--paths", type=int, help="Monte Carlo path count.")
    parser.add_argument("--dt", type=float, help="Monte Carlo Euler step.")
    parser.add_argument("--format", dest="fmt", choices=FORMATS, default="json")
    parser.add_argument("--out", type=Path, help="Output file (default stdout).")
    parser.add_argument(
        "--method",
        choices=("auto", "general", "simple", GAVER_STEHFEST, TALBOT),
        help="Occupation assembly or inversion method.",
    )
    parser.add_argument("--fee-rate", dest="fee_rate", type=float)
    parser.add_argument("--horizon", type=float, help="Fixed time horizon.")
    parser.add_argument("--quantity", choices=MC_QUANTITIES, default="expectation")
    parser.add_argument(
        "--direction",
        choices=EXIT_DIRECTIONS,
        default=ExitDirection.UP_Y.value,
        help="mc exit: passage of Y above x >= 0 or of X below x <= 0.",
    )
    parser.add_argument(
        "--emit-canonical",
        dest="emit_canonical",
        action="store_true",
        help="validate: write the canonical model YAML.",
    )
    return parser.parse_args(argv)


def _load(spec: RunSpec) -> RefractedModel:
    model = load_model(spec.model_path)
    return validate(model.with_refraction(alpha=spec.alpha, b=spec.b))


def _run_kwargs(spec: RunSpec, **kwargs) -> Dict[str, Any]:
    return {"silent": True, **spec.overrides, **kwargs}


def _cmd_validate(spec: RunSpec) -> Payload:
    result = ModelCheck().run(
        value=spec.model_path, options=["regime", "canonical"], **_run_kwargs(spec)
    )
    if not result.valid:
        raise OccnbValidationError(_violations_from_frame(result.violations))
    if spec.emit_canonical:
        return result.canonical
    return {
        "valid": True,
        "regime": result.regime,
        "model": model_to_dict(result.model),
    }


def _violations_from_frame(frame: pd.DataFrame) -> List[str]:
    return [f"{row.code}: {row.message}" for row in frame.itertuples()]


def _cmd_roots(spec: RunSpec) -> Payload:
    spec.require("q")
    result = RootFinder().run(value=spec.model_path, q=spec.q, **_run_kwargs(spec))
    if spec.fmt == "csv":
        return pd.concat(
            [
                result.beta_roots.assign(set="beta"),
                result.gamma_roots.assign(set="gamma"),
            ],
            ignore_index=True,
        )[["set", "root_re", "root_im", "multiplicity", "residual"]]
    return {
        "q": spec.q,
        "beta": result.beta_roots,
        "gamma": result.gamma_roots,
        "counts": result.counts,
    }


def _cmd_wh(spec: RunSpec) -> Payload:
    spec.require("q")
    kwargs = _run_kwargs(spec, q=spec.q)
    if spec.x_grid is not None:
        kwargs["y_grid"] = spec.x_grid
    result = WienerHopf().run(value=spec.model_path, options=["+densities"], **kwargs)
    if spec.fmt == "csv":
        return result.densities
    return {
        "q": spec.q,
        "sup": {
            "atom": result.atoms["sup_atom"],
            "mass": result.masses["sup_mass"],
            "terms": result.sup_terms,
        },
        "inf": {
            "atom": result.atoms["inf_atom"],
            "mass": result.masses["inf_mass"],
            "terms": result.inf_terms,
        },
    }


def _cmd_exit(spec: RunSpec) -> Payload:
    spec.require("q")
    if spec.x_grid is None:
        spec.require("x")
    levels = spec.x_grid if spec.x_grid is not None else [spec.x]
    summaries, laws = [], []
    for level in levels:
        result = ExitLaws().run(
            value=spec.model_path, q=spec.q, x=level, **_run_kwargs(spec)
        )
        summaries.append(result.summary)
        laws.append(
            {
                "x": result.x,
                "summary": result.summary,
                "up_terms": result.up_terms,
                "down_terms": result.down_terms,
            }
        )
    if spec.fmt == "csv":
        return pd.concat(summaries, ignore_index=True)
    return {"q": spec.q, "levels": laws}


def _cmd_occ_lt(spec: RunSpec) -> Payload:
    spec.require("p", "q")
    kwargs = _run_kwargs(spec, p=spec.p, q=spec.q, method=spec.method or "auto")
    if spec.x_grid is not None:
        kwargs["x_grid"] = spec.x_grid
    result = OccupationLaplace().run(value=spec.model_path, **kwargs)
    if spec.fmt == "csv":
        return result.values
    return {
        "p": spec.p,
        "q": spec.q,
        "coefficients": result.coefficients,
        "values": result.values,
        "smoothness": result.smoothness,
    }


def _cmd_occ_exp(spec: RunSpec) -> Payload:
    spec.require("q")
    kwargs = _run_kwargs(spec, q=spec.q, method=spec.method or "auto")
    if spec.x_grid is not None:
        kwargs["x_grid"] = spec.x_grid
    result = OccupationExpectation().run(value=spec.model_path, **kwargs)
    if spec.fmt == "csv":
        return result.expectation.grid_frame(result.values["x"])
    return {
        "q": spec.q,
        "coefficients": result.expectation.to_frame(),
        "values": result.values,
        "atom": result.atom,
    }


def _cmd_identity(spec: RunSpec) -> Payload:
    spec.require("q")
    kwargs = _run_kwargs(spec, q=spec.q)
    if spec.phi_grid is not None:
        kwargs["phi_grid"] = 1j * spec.phi_grid if spec.phi_imag else spec.phi_grid
    result = IdentityCheck().run(value=spec.model_path, **kwargs)
    if spec.fmt == "csv":
        return result.identity
    return {
        "q": spec.q,
        "max_abs_diff": result.max_abs_diff,
        "identity": result.identity,
    }


def _cmd_invert(spec: RunSpec) -> Payload:
    spec.require("x")
    t_grid = spec.t_grid if spec.t_grid is not None else np.array([1.0])
    result = OccupationInversion().run(
        value=spec.model_path,
        options=["-plot"],
        x=spec.x,
        t_grid=tuple(t_grid),
        method=spec.method or GAVER_STEHFEST,
        **_run_kwargs(spec),
    )
    if spec.fmt == "csv":
        _diagnostics_to_stderr(result.diagnostics)
        return result.values
    return {"x": spec.x, "values": result.values, "diagnostics": result.diagnostics}


def _cmd_fee(spec: RunSpec) -> Payload:
    spec.require("x", "fee_rate", "horizon")
    result = FeeExpectation().run(
        value=spec.model_path,
        x=spec.x,
        fee_rate=spec.fee_rate,
        horizon=spec.horizon,
        method=spec.method or GAVER_STEHFEST,
        **_run_kwargs(spec),
    )
    if spec.fmt == "csv":
        _diagnostics_to_stderr(result.diagnostics)
        return pd.DataFrame([result.fee])
    return {"fee": result.fee, "diagnostics": result.diagnostics}


def _cmd_mc(spec: RunSpec) -> Payload:
    spec.require("x")
    model = _load(spec)
    sim_args = {
        name: val
        for name, val in (("seed", spec.seed), ("n_paths", spec.paths), ("dt", spec.dt))
        if val is not None
    }
    cfg = SimConfig(**sim_args)
    alpha, level_b = model.alpha, model.b
    if spec.quantity == "fixed":
        spec.require("horizon")
        estimate = estimate_fixed_horizon(
            model, alpha, level_b, spec.x, spec.horizon, cfg
        )
    else:
        spec.require("q")
        if spec.quantity == "laplace":
            spec.require("p")
            estimate = estimate_V(model, alpha, level_b, spec.x, spec.p, spec.q, cfg)
        elif spec.quantity == "distribution":
            estimate = estimate_distribution(model, alpha, level_b, spec.x, spec.q, cfg)
        elif spec.quantity == "exit":
            estimate = estimate_exit(
                model, alpha, spec.q, spec.x, ExitDirection(spec.direction), cfg
            )
        else:
            estimate = estimate_expectation(model, alpha, level_b, spec.x, spec.q, cfg)
    payload = estimate.to_dict()
    if spec.fmt == "csv":
        return pd.DataFrame([payload])
    return payload


_DISPATCH: Dict[str, Callable[[RunSpec], Payload]] = {
    "validate": _cmd_validate,
    "roots": _cmd_roots,
    "wh": _cmd_wh,
    "exit": _cmd_exit,
    "occ-lt": _cmd_occ_lt,
    "occ-exp": _cmd_occ_exp,
    "identity-check": _cmd_identity,
    "invert": _cmd_invert,
    "fee": _cmd_fee,
    "mc": _cmd_mc,
}


def _diagnostics_to_stderr(diagnostics: Dict[str, Any]):
    print(json.dumps(jsonable(diagnostics), sort_keys=True), file=sys.stderr)


def _tables_to_records(payload: Any) -> Any:
    if isinstance(payload, pd.DataFrame):
        return payload.to_dict(orient="records")
    if isinstance(payload, dict):
        return {key: _tables_to_records(val) for key, val in payload.items()}
    if isinstance(payload, list):
        return [_tables_to_records(val) for val in payload]
    return payload


def render(payload: Payload, fmt: str) -> str:
    """
    Return the text written for a command result.

    DataFrames become CSV with 17 significant digits, dictionaries
    become JSON, strings are passed through.
    """
    if isinstance(payload, str):
        return payload
    if fmt == "csv" and isinstance(payload, pd.DataFrame):
        return payload.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    records = jsonable(_tables_to_records(payload))
    return json.dumps(records, indent=2, sort_keys=True) + "\n"


def _write(text: str, out: Optional[Path]):
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="\n") as out_file:
        out_file.write(text)


def run(spec: RunSpec) -> int:
    """
    Execute one command and return the exit status.

    Parameters
    ----------
    spec : RunSpec
        Parsed invocation.

    Returns
    -------
    int
        0 on success, 2 on invalid model or arguments,
        3 on numerical failure or a model Monte Carlo cannot sample.

    """
    verbose = get_opt("verbose")
    set_opt("verbose", False)
    try:
        payload = _DISPATCH[spec.command](spec)
    except OccnbValidationError as err:
        for violation in err.violations:
            print(str(violation), file=sys.stderr)
        return EXIT_INVALID
    except (OccnbNumericalError, UnsampleableDensityError) as err:
        error = {
            "error": type(err).__name__,
            "message": " ".join(str(arg) for arg in err.args),
        }
        _write(json.dumps(error, indent=2, sort_keys=True) + "\n", spec.out)
        return EXIT_NUMERICAL
    except (OccnbError, ValueError, FileNotFoundError) as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INVALID
    finally:
        set_opt("verbose", verbose)
    _write(render(payload, spec.fmt), spec.out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Console entry point."""
    args = _parse_args(argv)
    try:
        spec = RunSpec(**vars(args))
    except (TypeError, ValueError) as err:
        print(f"Invalid arguments: {err}", file=sys.stderr)
        return EXIT_INVALID
    return run(spec)


if __name__ == "__main__":
    raise SystemExit(main())
